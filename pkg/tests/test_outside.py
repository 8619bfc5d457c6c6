from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlab.arith import Parameter
from tentlab.errors import DomainError
from tentlab.outside import (B_step, B_tilde_inverse_step, B_tilde_step, Copy, CirclePoint, chart_t, classify, grid,
                             height, height_or_undecided, heights_monotone, in_gamma, landing_tol, lower,
                             lower_extreme, sweep, upper, upper_extreme)
from tentlab.tent import TentMap

from conftest import GOLDEN

# frozen heights (m, n, type) of decimal slopes
HEIGHTS = {
    "1.45": (4, 9, "General"),
    "1.5": (3, 7, "General"),
    "1.55": (2, 5, "General"),
    "1.6": (3, 8, "General"),
    "1.62": (1, 3, "General"),
    "1.7": (1, 3, "General"),
    "1.8": (1, 3, "General"),
    "1.9": (1, 4, "General"),
    "1.99": (1, 7, "General"),
}

# frozen classification of the algebraic Markov slopes
CLASSES = [
    (GOLDEN, "RationalEndpointMinus", 1, 3),
    ('poly:"-1,-1,-1,1":interval:"1.8,1.9"', "RationalEndpointMinus", 1, 4),
    ('poly:"2,-2,-1,-1,1":interval:"1.8,1.85"', "RationalEndpointPlus", 1, 3),
    ('poly:"1,-1,-1,-1,1":interval:"1.7,1.75"', "RationalNBT", 1, 3),
    ('poly:"-1,1,-1,-1,1":interval:"1.5,1.52"', "RationalEndpointMinus", 2, 5),
]


def float_rotation(lam, n=100_000):
    """Average winding of the outside map, iterated in plain floats (second route)."""
    a, b = lam - lam * lam / 2, lam / 2
    ahat, fa = 1 - a, lam * a
    x, up, w = fa, False, 0
    for _ in range(n):
        if up:
            x, up = (fa if x <= ahat else lam * (1 - x)), False
            w += 1
        elif x <= 0.5:
            x = lam * x
        else:
            x, up = lam * (1 - x), True
    t = 0.5 + (b - x) / (2 * (b - a)) if up else (x - a) / (2 * (b - a))
    return (w + t) / n


@pytest.mark.parametrize("lam", sorted(HEIGHTS))
def test_height_frozen(lam):
    h = height(TentMap(Parameter.decimal(lam)))
    assert (h.m, h.n, h.type) == HEIGHTS[lam]
    assert h.confidence == "certified"


@pytest.mark.parametrize("lam", sorted(HEIGHTS))
def test_height_float_route(lam):
    m, n, _ = HEIGHTS[lam]
    assert abs(float_rotation(float(lam)) - m / n) < 1e-3


@pytest.mark.parametrize("spec,kind,m,n", CLASSES)
def test_classify_markov(spec, kind, m, n):
    c = classify(TentMap.from_spec(spec))
    assert c.kind == kind
    assert (c.height.m, c.height.n) == (m, n)
    assert c.height.confidence == "exact"


def test_irrational_probe_parameter():
    h = height_or_undecided(TentMap(Parameter.decimal("1.7548776662")))
    assert h.rational and (h.m, h.n) == (1, 3)
    assert h.bracket[1] - h.bracket[0] == 0


def test_landing_tol_long_decimal():
    short = TentMap(Parameter.decimal("1.62"))
    long_ = TentMap(Parameter.decimal("1." + "6" * 40))
    assert landing_tol(short) == 2.0 ** -48
    assert landing_tol(long_) < 1e-30


def test_chart_coordinates(golden):
    assert chart_t(golden, lower(golden, golden.a)) == 0
    assert chart_t(golden, lower(golden, golden.b)) == Fraction(1, 2)
    assert upper(golden, golden.b).copy is Copy.LOWER
    assert in_gamma(golden, lower(golden, golden.a))
    assert in_gamma(golden, upper(golden, golden.c))


def test_plateau_is_flat(golden):
    for x in (golden.c, (golden.a + golden.c) / 2 + Fraction(1, 50)):
        img, _ = B_step(golden, upper(golden, x))
        assert img.x == golden.fa and not img.upper


@given(st.integers(1, 999))
@settings(max_examples=60, deadline=None)
def test_inverse_step_roundtrip(k):
    tm = TentMap.from_spec(GOLDEN)
    x = tm.a + (tm.b - tm.a) * Fraction(k, 1000)
    for y in (lower(tm, x), upper(tm, x)):
        pre, _ = B_tilde_inverse_step(tm, y)
        back, _ = B_tilde_step(tm, pre)
        assert back.x == y.x and back.upper == y.upper


def test_extremes_are_fiber_ends(golden):
    from tentlab.ilim import fiber
    x = Fraction(61, 100)
    fib = fiber(golden, x, 10)
    assert fib.threads[0].agrees(lower_extreme(golden, x, 10))
    assert fib.threads[-1].agrees(upper_extreme(golden, x, 10))


def test_grid_and_sweep_worker_independent():
    values = grid(Fraction(145, 100), Fraction(199, 100), 25)
    assert values[0] == "1.4500000000" and values[-1] == "1.9900000000"
    one = sweep(values, workers=1)
    many = sweep(values, workers=4)
    assert [(v, h.as_dict()) for v, h in one] == [(v, h.as_dict()) for v, h in many]
    assert heights_monotone(one)


def test_plateau_step_domain(golden):
    with pytest.raises(DomainError):
        B_tilde_step(golden, CirclePoint(golden.c, Copy.UPPER))
