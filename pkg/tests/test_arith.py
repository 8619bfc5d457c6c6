from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlab.arith import (Interval, Parameter, PrecisionExhausted, SideClass, classify_side, gap, run_escalating,
                           same)
from tentlab.errors import DomainError, Uncertain

from conftest import GOLDEN

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
small = st.fractions(min_value=-5, max_value=5, max_denominator=50)


@pytest.fixture(scope="module")
def field():
    return Parameter.parse(GOLDEN).field


def test_golden_relation(field):
    L = field.gen
    assert (L * L - L - 1).is_zero()
    assert L.inverse() == L - 1
    assert L ** 3 == 2 * L + 1
    assert abs(float(L) - (1 + 5 ** 0.5) / 2) < 1e-15


def test_golden_comparisons(field):
    L = field.gen
    assert L > Fraction(1618, 1000) and L < Fraction(1619, 1000)
    assert (L - 1) * 2 > 1  # 2/lambda > 1


@given(st.lists(small, min_size=2, max_size=2), st.lists(small, min_size=2, max_size=2),
       st.lists(small, min_size=2, max_size=2))
@settings(max_examples=80, deadline=None)
def test_field_axioms(u, v, w):
    K = Parameter.parse(GOLDEN).field
    x, y, z = K.from_poly(u), K.from_poly(v), K.from_poly(w)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    if not x.is_zero():
        assert (x * x.inverse()) == K.one


@given(st.lists(small, min_size=2, max_size=2))
@settings(max_examples=80, deadline=None)
def test_sign_matches_closed_form(c):
    K = Parameter.parse(GOLDEN).field
    x = K.from_poly(c)
    approx = float(c[0]) + float(c[1]) * (1 + 5 ** 0.5) / 2
    if abs(approx) > 1e-9:
        assert x.sign() == (1 if approx > 0 else -1)
    elif c[0] == 0 and c[1] == 0:
        assert x.sign() == 0


@given(fracs, fracs)
@settings(max_examples=200, deadline=None)
def test_interval_encloses_exact(p, q):
    P, Q = Interval.exact(p, 80), Interval.exact(q, 80)
    for iv, exact in ((P + Q, p + q), (P - Q, p - q), (P * Q, p * q)):
        assert iv.lo <= exact <= iv.hi
    if q != 0:
        iv = P / Q
        assert iv.lo <= p / q <= iv.hi


def test_interval_uncertain():
    x = Interval.exact(Fraction(1, 3), 64)
    wide = Interval(x.lo - 1, x.hi + 1, 64)
    with pytest.raises(Uncertain):
        wide.sign()
    with pytest.raises(Uncertain):
        _ = wide < x
    assert same(wide, x)
    assert gap(x, x) < 1e-19


def test_parse_decimal_and_poly():
    d = Parameter.parse("1.62")
    assert not d.exact and d.lambda_value == 1.62
    assert Parameter.parse('dec:"1.62"').lambda_value == 1.62
    g = Parameter.parse(GOLDEN)
    assert g.exact and g.describe()["coefficient_order"] == "constant-first"


def test_parse_highest_first_fallback():
    # constant-first x^3 - 2x + 1 has no root in (1.6, 1.7); highest-first has the golden factor
    p = Parameter.parse('poly:"1,-2,0,1":interval:"1.6,1.7"')
    assert p.describe()["coefficient_order"] == "highest-first"
    L = p.field.gen
    assert (L * L - L - 1).is_zero()


@pytest.mark.parametrize("spec", ["golden", 'poly:"1,0,1":interval:"1.6,1.7"', "2.5", "1.2", "x"])
def test_parse_rejects(spec):
    with pytest.raises(DomainError):
        Parameter.parse(spec)


def test_side_classes():
    p = Parameter.parse(GOLDEN)
    L = p.lam()
    assert classify_side(p.num(Fraction(1, 2)), p) is SideClass.AT_C
    assert classify_side((L - 1) / 2, p) is SideClass.LEFT
    assert classify_side(L / 2, p) is SideClass.RIGHT


def test_escalation_cap():
    p = Parameter.parse("1.62", precision=64, cap=256)

    def never(_):
        raise Uncertain("always")

    with pytest.raises(PrecisionExhausted):
        run_escalating(p, never)

    seen = []

    def after_two(q):
        seen.append(q.precision)
        if len(seen) < 3:
            raise Uncertain("not yet")
        return q.precision

    assert run_escalating(p, after_two) == 256
    assert seen == [64, 128, 256]
