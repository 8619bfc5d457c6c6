from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tentlab.errors import DomainError
from tentlab.ilim import fhat, fiber, flat_arc_through, zero_box
from tentlab.measure import (alpha_cylinder, alpha_of_box, birkhoff_histogram, density_grid, density_markov,
                             density_series, disintegration_check, l1_distance, pf_residual, pf_residual_exact,
                             unstable_measure)
from tentlab.tent import TentMap

from conftest import GOLDEN


def golden_markov_oracle():
    """Two-cell balance solved symbolically: [a, c] is covered once by the right branch over [c, b]."""
    L = (1 + sympy.sqrt(5)) / 2
    a, b, c = (L - 1) / 2, L / 2, sympy.Rational(1, 2)
    p1, p2 = sympy.symbols("p1 p2")
    sol = sympy.solve([p1 - p2 / L, p1 * (c - a) + p2 * (b - c) - 1], [p1, p2])
    return float(sol[p1]), float(sol[p2])


def test_golden_markov_values(golden_density):
    L = golden_density.tm.param.lam()
    assert golden_density.values == [Fraction(4, 5) + Fraction(2, 5) * L, Fraction(2, 5) + Fraction(6, 5) * L]
    lo, hi = golden_markov_oracle()
    assert abs(float(golden_density.values[0]) - lo) < 1e-14
    assert abs(float(golden_density.values[1]) - hi) < 1e-14
    assert golden_density.exact_mass() == 1


@pytest.mark.parametrize("spec", [GOLDEN, 'poly:"-1,-1,-1,1":interval:"1.8,1.9"',
                                  'poly:"2,-2,-1,-1,1":interval:"1.8,1.85"'])
def test_markov_pf_exact(spec):
    tm = TentMap.from_spec(spec)
    d = density_markov(tm)
    assert d.exact_mass() == 1
    for k in range(1, 40):
        x = tm.a + (tm.b - tm.a) * Fraction(k, 41)
        if not tm.in_pc(x):
            assert pf_residual_exact(d, x).is_zero()


def test_grid_converges_at_1_9():
    d = density_grid(TentMap.from_spec("1.9"), N=1 << 14, tol=1e-10)
    assert d.iterations < 500
    assert d.residual <= 1e-8
    assert d.minimum() > 0


def test_grid_vs_markov_golden(golden, golden_density):
    assert l1_distance(density_grid(golden, N=1 << 12), golden_density) < 0.02


def test_series_vs_grid(dec162):
    s = density_series(dec162)
    g = density_grid(dec162, N=1 << 12)
    assert l1_distance(s, g) < 0.02
    assert abs(s.integral(s.a, s.b) - 1) < 1e-12
    xs = np.linspace(s.a + 1e-3, s.b - 1e-3, 200)
    assert pf_residual(s, xs) < 1e-9


def test_birkhoff_short_run():
    vals, edges = birkhoff_histogram(1.9, steps=200_000, bins=64, seed=3)
    width = edges[1] - edges[0]
    assert abs(vals.sum() * width - 1) < 1e-12


def test_alpha_depth_zero_is_phi(golden, golden_density):
    x = golden.num(Fraction(61, 100))
    t = fiber(golden, x, 0).threads[0]
    assert alpha_cylinder(golden_density, t, golden).value == golden_density.value(x)


@given(st.integers(1, 999), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_alpha_child_sum_and_scaling(k, pick):
    tm = TentMap.from_spec(GOLDEN)
    d = density_markov(tm)
    x = tm.a + (tm.b - tm.a) * Fraction(k, 1000)
    if tm.in_pc(x):
        return
    fib = fiber(tm, x, 5)
    parent = fib.threads[pick % len(fib)]
    kids = fiber(tm, x, 6).threads
    total = sum((alpha_cylinder(d, c, tm).value for c in kids if c.word[:5] == parent.word), tm.num(0))
    assert total == alpha_cylinder(d, parent, tm).value
    assert alpha_cylinder(d, fhat(tm, parent), tm).value == alpha_cylinder(d, parent, tm).value * tm.inv_lam


def test_holonomy_on_a_box(golden, golden_density):
    box = zero_box(golden, (Fraction(62, 100), Fraction(66, 100)), 6)
    u = alpha_of_box(golden_density, box, Fraction(63, 100), golden).value
    v = alpha_of_box(golden_density, box, Fraction(65, 100), golden).value
    assert u == v
    with pytest.raises(DomainError):
        alpha_of_box(golden_density, box, Fraction(7, 10), golden)


def test_disintegration_identities(golden_density):
    d = golden_density
    full = disintegration_check(d, 3, (d.a, d.b), 1 << 12)
    assert abs(full.lhs - 1) < 1e-3 and abs(full.rhs - 1) < 1e-12
    assert disintegration_check(d, 0, (0.4, 0.6), 1 << 12).gap < 1e-3
    half = disintegration_check(d, 3, (d.a, 0.5), 1 << 12)
    assert half.gap < 1e-3 and half.gap <= half.error_bound + 1e-12


def test_unstable_measure(golden):
    t = fiber(golden, Fraction(61, 100), 4).threads[2]
    arc = flat_arc_through(golden, t)
    assert unstable_measure(arc, arc.J) == arc.J[1] - arc.J[0]
    assert unstable_measure(arc, None) == 0.0
    with pytest.raises(DomainError):
        unstable_measure(arc, (arc.J[0] - 1, arc.J[1]))
