from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlab.errors import DomainError, NotInY, NotRealizable
from tentlab.ilim import (check_in_Y, consecutive_pairs, fhat, fhat_inverse, fiber, flat_arc_through, reconstruct,
                          zero_box)
from tentlab.tent import parity_key


def float_fiber_size(lam, x, r):
    """Count backward branches of the core tent map in floats."""
    a, b = lam - lam * lam / 2, lam / 2
    level = [x]
    for _ in range(r):
        nxt = []
        for y in level:
            for z in (y / lam, 1 - y / lam):
                if a <= z <= b:
                    nxt.append(z)
        level = nxt
    return len(level)


@pytest.mark.parametrize("r,count", [(4, 8), (8, 55), (12, 377)])
def test_golden_fiber_sizes(golden, r, count):
    # Fibonacci growth; the float count is an independent route
    fib = fiber(golden, Fraction(61, 100), r)
    assert len(fib) == count == float_fiber_size((1 + 5 ** 0.5) / 2, 0.61, r)


def test_decimal_fiber_size(dec162):
    assert len(fiber(dec162, Fraction(61, 100), 10)) == float_fiber_size(1.62, 0.61, 10)


def test_fiber_sorted_and_consistent(golden):
    fib = fiber(golden, Fraction(61, 100), 8)
    keys = [parity_key(t.word) for t in fib.threads]
    assert keys == sorted(keys)
    for t in fib.threads:
        for i in range(t.depth):
            assert golden.eval(t.coords[i + 1]) == t.coords[i]


def test_reconstruct_roundtrip(golden):
    fib = fiber(golden, Fraction(2, 3), 7)
    for t in fib.threads:
        assert reconstruct(golden, Fraction(2, 3), t.word).agrees(t)


def test_reconstruct_unrealizable(golden):
    with pytest.raises(NotRealizable):
        reconstruct(golden, Fraction(61, 100), (0, 1, 0, 0, 1, 0))


def test_fhat_shift(golden):
    t = fiber(golden, Fraction(61, 100), 5).threads[3]
    s = fhat(golden, t)
    assert s.coords[1:] == t.coords and s.coords[0] == golden.eval(t.x0)
    assert fhat_inverse(s).coords == t.coords
    with pytest.raises(DomainError):
        fhat_inverse(fiber(golden, Fraction(61, 100), 0).threads[0])


def test_consecutive_pairs_need_depth(golden):
    # the tail test needs more levels than the guard
    assert consecutive_pairs(golden, fiber(golden, Fraction(61, 100), 6)) == []
    pairs = consecutive_pairs(golden, fiber(golden, Fraction(61, 100), 12))
    assert len(pairs) == 7 and all(j == i + 1 for i, j in pairs)


@given(st.integers(1, 999), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_flat_arc_contains_base(k, pick):
    from tentlab.tent import TentMap
    from conftest import GOLDEN
    tm = TentMap.from_spec(GOLDEN)
    x = tm.a + (tm.b - tm.a) * Fraction(k, 1000)
    fib = fiber(tm, x, 6)
    t = fib.threads[pick % len(fib)]
    try:
        arc = flat_arc_through(tm, t)
    except DomainError:
        return
    assert arc.J[0] <= x <= arc.J[1]
    assert arc.endpoints[0].word == t.word


def test_zero_box(golden):
    K = (Fraction(62, 100), Fraction(66, 100))
    box = zero_box(golden, K, 6)
    assert len(box.arcs) == len(fiber(golden, Fraction(64, 100), 6))
    with pytest.raises(NotInY):
        check_in_Y(golden, (golden.a, golden.b))
    with pytest.raises(DomainError):
        zero_box(golden, (Fraction(66, 100), Fraction(62, 100)), 6)
