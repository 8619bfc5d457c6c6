from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlab.arith import Parameter
from tentlab.errors import EnteredGamma, InGrandOrbit, TypeMismatch
from tentlab.glue import (H_embed, cantor_approx, chart_patch, fiber_arc, identify_partner, psi_of, spike_arc,
                          trace_streamline)
from tentlab.ilim import fiber, reconstruct
from tentlab.outside import classify, upper
from tentlab.tent import TentMap
from tentlab.verify import irrational_fixture

FIB = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765]


def test_H_embed_values():
    assert H_embed((0, 0, 0)) == (0, Fraction(1, 27))
    assert H_embed((1, 0, 0)) == (Fraction(26, 27), 1)
    assert H_embed((1, 1)) == (Fraction(2, 3), Fraction(7, 9))
    assert H_embed(()) == (0, 1)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
@settings(max_examples=100, deadline=None)
def test_H_embed_nested(word):
    lo, hi = H_embed(word)
    plo, phi = H_embed(word[:-1])
    assert plo <= lo < hi <= phi
    assert hi - lo == Fraction(1, 3 ** len(word))


def test_H_embed_order_preserving(golden):
    fib = fiber(golden, Fraction(61, 100), 10)
    his = [H_embed(t.word) for t in fib.threads]
    assert all(u[1] <= v[0] for u, v in zip(his, his[1:]))


def test_fiber_arc_golden(golden, golden_density):
    arc = fiber_arc(golden, golden_density, Fraction(61, 100), 12)
    assert len(arc.threads) == 377
    assert len(arc.identified_pairs) == 7
    assert arc.total == arc.phi_x == golden_density.value(golden.num(Fraction(61, 100)))
    assert arc.t_collapsed[0] == 0 and arc.t_collapsed[-1] == arc.total
    assert arc.t_unit[-1] == 1.0
    for i, j in arc.identified_pairs:
        assert arc.t_collapsed[i] == arc.t_collapsed[j]


def test_fiber_arc_decimal(dec162, dec162_density):
    arc = fiber_arc(dec162, dec162_density, Fraction(61, 100), 12)
    assert abs(float(arc.total) - arc.phi_x) < 1e-8


def test_fiber_arc_grand_orbit(golden, golden_density):
    with pytest.raises(InGrandOrbit):
        fiber_arc(golden, golden_density, golden.b, 6)


def test_psi_monotone_and_chart(golden, golden_density):
    x = Fraction(64, 100)
    fib = fiber(golden, x, 8)
    vals = [psi_of(golden, golden_density, x, t.word) for t in fib.threads]
    assert all(u < v for u, v in zip(vals, vals[1:]))
    assert abs(vals[-1] - float(golden_density.value(golden.num(x)))) < 1e-12
    patch = chart_patch(golden, golden_density, (Fraction(62, 100), Fraction(66, 100)), 8, samples=4)
    assert patch.spread() < 1e-12


def test_streamline_golden(golden):
    seed = reconstruct(golden, Fraction(61, 100), (0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1))
    arcs = trace_streamline(golden, seed, 4)
    assert [a.word for a in arcs][:2] == [(0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1), (1, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1)]
    # consecutive arcs share an end
    for u, v in zip(arcs, arcs[1:]):
        assert set(u.J) & set(v.J)


def test_spike_halving(golden):
    s = spike_arc(golden, 12)
    assert s.one_arc and s.ends_match
    assert s.nu_u == s.lebesgue / 2
    assert abs(float(s.nu_u) - (3 - 5 ** 0.5) / 4) < 1e-15  # (a_hat - a) / 2 = c - a


def test_identify_partner_general(dec162):
    cls = classify(dec162)
    assert identify_partner(dec162, cls, upper(dec162, Fraction(7, 10)), 0, 6).kind == "EI"
    assert identify_partner(dec162, cls, upper(dec162, Fraction(1, 2)), 0, 6).kind == "Trivial"


def test_identify_partner_type_mismatch(golden):
    with pytest.raises(TypeMismatch):
        identify_partner(golden, classify(golden), upper(golden, Fraction(6, 10)), 0, 6)


@pytest.mark.parametrize("spec,where", [('poly:"-1,-1,1":interval:"1.6,1.7"', "boundary"), ("1.62", "interior")])
def test_cantor_enters_plateau(spec, where):
    with pytest.raises(EnteredGamma) as info:
        cantor_approx(TentMap.from_spec(spec), 100)
    assert info.value.step == 3 and info.value.where == where


def test_cantor_irrational_fixture():
    """Closest returns of a golden-mean rotation happen at Fibonacci times."""
    ca = cantor_approx(TentMap(Parameter.decimal(irrational_fixture())), 10_000)
    steps_a = [s for s, _ in ca.records_a]
    steps_ah = [s for s, _ in ca.records_ahat]
    assert steps_a == [1, 3, 8, 21, 55, 144, 377, 987, 2584, 6765]
    assert steps_ah == [2, 5, 13, 34, 89, 233, 610, 1597, 4181]
    assert set(steps_a + steps_ah) <= set(FIB)
    assert ca.log10_min_to_a < -800 and ca.log10_min_to_ahat < -1300
