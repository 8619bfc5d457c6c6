from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlab.errors import DomainError
from tentlab.tent import Cmp, TentMap, Word, parity_key, unimodal_cmp

from conftest import GOLDEN

SQ5 = 5 ** 0.5
PHI = (1 + SQ5) / 2

# frozen: critical profiles and epsilon of the Markov parameters
PROFILES = [
    (GOLDEN, "PeriodicC", 3, 1, "1011011011"),
    ('poly:"-1,-1,-1,1":interval:"1.8,1.9"', "PeriodicC", 4, 1, "1001100110"),
    ('poly:"2,-2,-1,-1,1":interval:"1.8,1.85"', "PreperiodicC", 3, None, "1001101101"),
    ('poly:"1,-1,-1,-1,1":interval:"1.7,1.75"', "PeriodicC", 5, 0, "1001010010"),
    ('poly:"-1,1,-1,-1,1":interval:"1.5,1.52"', "PeriodicC", 5, 1, "1011110111"),
]


def float_itinerary(lam, x, n):
    out = []
    for _ in range(n):
        out.append(0 if x < 0.5 else 1)
        x = lam * min(x, 1 - x)
    return "".join(map(str, out))


def test_golden_core(golden):
    assert abs(float(golden.a) - (PHI - 1) / 2) < 1e-15
    assert abs(float(golden.b) - PHI / 2) < 1e-15
    assert golden.fa == golden.c
    assert golden.eval(golden.b) == golden.a
    assert golden.eval(golden.a) == golden.c


@pytest.mark.parametrize("spec,kind,period,eps,kneading", PROFILES)
def test_markov_profiles(spec, kind, period, eps, kneading):
    tm = TentMap.from_spec(spec)
    prof = tm.postcritical_profile()
    assert prof.kind == kind and prof.period == period
    assert tm.epsilon() == eps
    assert str(tm.kneading(10)) == kneading


def test_kneading_matches_float_orbit(dec162):
    assert str(dec162.kneading(24)) == float_itinerary(1.62, 0.81, 24)


def test_preimages_exact(golden):
    x = Fraction(3, 5)
    pre = golden.preimages(x)
    assert [s for _, s in pre] == [0, 1]
    for y, s in pre:
        assert golden.eval(y) == golden.num(x)
        assert golden.symbol(y) == s


def test_outside_core_rejected(golden):
    with pytest.raises(DomainError):
        golden.check_in_I(golden.num(Fraction(1, 10)))


def test_parity_key_and_order():
    assert parity_key((1, 0, 1)) == (1, 1, 0)
    assert unimodal_cmp((1, 0), (1, 1)) is Cmp.GREATER
    assert unimodal_cmp((0, 0), (0, 1)) is Cmp.LESS
    assert unimodal_cmp((1, 1, 0), (1, 1, 0)) is Cmp.EQUAL


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
@settings(max_examples=150, deadline=None)
def test_unimodal_order_is_spatial(i, j):
    """Itineraries compare like the points themselves."""
    tm = TentMap.from_spec("1.62")
    a, b = 0.3143, 0.81
    x, y = a + (b - a) * i / 10 ** 6, a + (b - a) * j / 10 ** 6
    if abs(x - y) < 1e-9:
        return
    u, v = float_itinerary(1.62, x, 30), float_itinerary(1.62, y, 30)
    if u == v:
        return
    want = Cmp.LESS if x < y else Cmp.GREATER
    assert unimodal_cmp(tuple(map(int, u)), tuple(map(int, v))) is want


def test_word_basics():
    w = Word.of("0110")
    assert len(w) == 4 and str(w) == "0110"
    assert str(w + Word.of("1")) == "01101"
