"""The circle S of two glued copies of I, the outside maps, extreme elements and the height."""

from __future__ import annotations

import enum
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .arith import Parameter, QL, Real, gap, run_escalating
from .errors import DomainError, Inconsistent, PrecisionExhausted
from .ilim import Thread
from .tent import Profile, TentMap

GAMMA_TOL = 2.0 ** -48
PROFILE_TOL = Fraction(1, 2**40)


class Copy(enum.Enum):
    LOWER = "Lower"
    UPPER = "Upper"


@dataclass(frozen=True)
class CirclePoint:
    x: Real
    copy: Copy

    @property
    def upper(self) -> bool:
        return self.copy is Copy.UPPER

    def label(self) -> str:
        return f"{float(self.x):.12g}_{'u' if self.upper else 'l'}"


def _is(x: Real, ref: Real) -> bool:
    """Exact identity for Q(lambda); structural identity for intervals."""
    if isinstance(x, QL):
        return x == ref
    return x is ref or x == ref


def point(tm: TentMap, x, copy: Copy = Copy.LOWER) -> CirclePoint:
    """A circle point in canonical form (a and b are stored on the lower copy)."""
    x = tm.num(x)
    if copy is Copy.UPPER and (_is(x, tm.a) or _is(x, tm.b)):
        copy = Copy.LOWER
    return CirclePoint(x, copy)


def lower(tm: TentMap, x) -> CirclePoint:
    return point(tm, x, Copy.LOWER)


def upper(tm: TentMap, x) -> CirclePoint:
    return point(tm, x, Copy.UPPER)


def tau(y: CirclePoint) -> Real:
    return y.x


def chart_t(tm: TentMap, y: CirclePoint) -> Real:
    """Normalized arclength coordinate in [0, 1): a at 0, b at 1/2, lower copy first."""
    span = 2 * (tm.b - tm.a)
    if y.upper:
        return Fraction(1, 2) + (tm.b - y.x) / span
    return (y.x - tm.a) / span


def in_gamma(tm: TentMap, y: CirclePoint) -> bool:
    """Membership of the closed plateau arc from a_hat_u to a."""
    if not y.upper:
        return _is(y.x, tm.a)
    return y.x <= tm.a_hat


def in_gamma_interior(tm: TentMap, y: CirclePoint) -> bool:
    return y.upper and tm.a < y.x < tm.a_hat


def B_tilde_step(tm: TentMap, y: CirclePoint) -> Tuple[CirclePoint, int]:
    """One step of B~ together with the number of times the lift passes t = 1."""
    x = y.x
    if y.upper:
        if x <= tm.a_hat:
            raise DomainError("B~ is undefined on the plateau arc [a_hat_u, a)")
        return CirclePoint(tm._f(x), Copy.LOWER), 1
    if _is(x, tm.b):
        return CirclePoint(tm.a, Copy.LOWER), 1
    if _is(x, tm.a):
        return CirclePoint(tm.fa, Copy.LOWER), 0
    if _is(x, tm.c):
        return CirclePoint(tm.b, Copy.LOWER), 0
    if x <= tm.c:
        return CirclePoint(tm.lam * x, Copy.LOWER), 0
    return CirclePoint(tm.lam * (1 - x), Copy.UPPER), 0


def B_tilde(tm: TentMap, y: CirclePoint) -> CirclePoint:
    return B_tilde_step(tm, y)[0]


def B_step(tm: TentMap, y: CirclePoint) -> Tuple[CirclePoint, int]:
    """The outside map B: B~ off the plateau, constant f(a)_l on it."""
    if in_gamma(tm, y):
        return CirclePoint(tm.fa, Copy.LOWER), (0 if not y.upper else 1)
    return B_tilde_step(tm, y)


def B(tm: TentMap, y: CirclePoint) -> CirclePoint:
    return B_step(tm, y)[0]


def B_tilde_inverse_step(tm: TentMap, y: CirclePoint) -> Tuple[CirclePoint, int]:
    """The B~-preimage of y and the branch symbol of the chosen f-preimage."""
    x = y.x
    if y.upper:
        return CirclePoint(1 - x * tm.inv_lam, Copy.LOWER), 1
    if _is(x, tm.b):
        return CirclePoint(tm.c, Copy.LOWER), 1
    if _is(x, tm.a):
        return CirclePoint(tm.b, Copy.LOWER), 1
    if _is(x, tm.fa):
        return CirclePoint(tm.a, Copy.LOWER), 0
    if x >= tm.fa:
        return CirclePoint(x * tm.inv_lam, Copy.LOWER), 0
    return CirclePoint(1 - x * tm.inv_lam, Copy.UPPER), 1


def B_tilde_inverse(tm: TentMap, y: CirclePoint) -> CirclePoint:
    return B_tilde_inverse_step(tm, y)[0]


def extreme_element(tm: TentMap, y: CirclePoint, r: int) -> Thread:
    """Depth-r truncation of e(y) = <tau(y), tau(B~^-1 y), ...>."""
    coords = [y.x]
    word = []
    cur = y
    for _ in range(r):
        cur, s = B_tilde_inverse_step(tm, cur)
        coords.append(cur.x)
        word.append(s)
    return Thread(tuple(coords), tuple(word))


def lower_extreme(tm: TentMap, x, r: int) -> Thread:
    return extreme_element(tm, lower(tm, x), r)


def upper_extreme(tm: TentMap, x, r: int) -> Thread:
    return extreme_element(tm, upper(tm, x), r)


def avoids_gamma_interior(tm: TentMap, y: CirclePoint, horizon: int) -> bool:
    """True when B^k(y) stays out of the open plateau arc for 0 <= k < horizon."""

    def run(t: TentMap) -> bool:
        cur = CirclePoint(t.num(y.x), y.copy)
        for _ in range(horizon):
            if in_gamma_interior(t, cur):
                return False
            cur = B_step(t, cur)[0]
        return True

    return tm.escalating(run)


# ---------------------------------------------------------------------------
# height


@dataclass(frozen=True)
class HeightResult:
    kind: str  # Rational | Undecided
    m: Optional[int] = None
    n: Optional[int] = None
    type: Optional[str] = None  # EndpointMinus | EndpointPlus | NBT | General
    confidence: str = "exact"
    bracket: Tuple[float, float] = (0.0, 0.5)
    iterations: int = 0
    landing: Optional[float] = None
    note: str = ""

    @property
    def rational(self) -> bool:
        return self.kind == "Rational"

    @property
    def value(self) -> Optional[Fraction]:
        return Fraction(self.m, self.n) if self.rational else None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "m": self.m, "n": self.n, "type": self.type,
               "confidence": self.confidence, "bracket": [self.bracket[0], self.bracket[1]],
               "iterations": self.iterations}
        if self.landing is not None:
            out["landing_x"] = self.landing
        if self.note:
            out["note"] = self.note
        return out


def landing_tol(tm: TentMap) -> float:
    """Distance below which a numeric landing counts as an endpoint or c.

    2^-48 for ordinary decimals; a decimal with d > 16 significant digits
    gets 10^-(d-4), so long inputs are not snapped to nearby special slopes.
    """
    if tm.exact:
        return GAMMA_TOL
    digits = len(re.sub(r"[^0-9]", "", tm.param.spec).lstrip("0"))
    if digits <= 16:
        return GAMMA_TOL
    return min(GAMMA_TOL, 10.0 ** -(digits - 4))


def _landing_type(tm: TentMap, y: CirclePoint, tol: float) -> Tuple[Optional[str], str]:
    """(type, confidence) when y lies in the closed plateau arc, else (None, _)."""
    if isinstance(y.x, QL):
        if not in_gamma(tm, y):
            return None, "exact"
        if _is(y.x, tm.a):
            return "EndpointMinus", "exact"
        if y.x == tm.a_hat:
            return "EndpointPlus", "exact"
        if y.x == tm.c:
            return "NBT", "exact"
        return "General", "exact"
    if gap(y.x, tm.a) < tol:
        return "EndpointMinus", "numeric"
    if y.upper and gap(y.x, tm.a_hat) < tol:
        return "EndpointPlus", "numeric"
    if y.upper and gap(y.x, tm.c) < tol:
        return "NBT", "numeric"
    if in_gamma(tm, y):
        return "General", "certified"
    return None, "certified"


def _lift_bounds(t: Real) -> Tuple[float, float]:
    if isinstance(t, QL):
        v = float(t)
        return v - 1e-15, v + 1e-15
    return float(t.lo), float(t.hi)


def _height_run(tm: TentMap, max_iters: int, tol: float) -> HeightResult:
    y = CirclePoint(tm.a, Copy.LOWER)
    w = 0
    lo, hi = 0.0, 1.0
    for k in range(1, max_iters + 1):
        y, dw = B_tilde_step(tm, y)
        w += dw
        typ, conf = _landing_type(tm, y, tol)
        if typ is not None:
            at_a = typ == "EndpointMinus" and not y.upper
            m = w if at_a else w + 1
            return HeightResult("Rational", m, k, typ, conf, (m / k, m / k), k, float(y.x))
        t_lo, t_hi = _lift_bounds(chart_t(tm, y))
        lo = max(lo, (w + t_lo - 1) / k)
        hi = min(hi, (w + t_hi + 1) / k)
    return HeightResult("Undecided", confidence="bracket", bracket=(lo, hi), iterations=max_iters)


def height(tm: TentMap, max_iters: int = 2000, tol: Optional[float] = None) -> HeightResult:
    """First return of the B~-orbit of a to the plateau, or a rotation bracket.

    The winding over the return segment gives m; the landing point gives the type.
    """
    if tol is None:
        tol = landing_tol(tm)
    if tm.exact:
        return _height_run(tm, max_iters, tol)
    return run_escalating(tm.param, lambda p: _height_run(TentMap(p), max_iters, tol))


def height_or_undecided(tm: TentMap, max_iters: int = 2000, tol: Optional[float] = None) -> HeightResult:
    """Like height, but precision exhaustion becomes an Undecided result."""
    try:
        return height(tm, max_iters, tol)
    except PrecisionExhausted as exc:
        return HeightResult("Undecided", confidence="precision-exhausted", iterations=0, note=str(exc))


@dataclass(frozen=True)
class Classification:
    kind: str  # Irrational-or-undecided | RationalEndpointMinus | ... | RationalGeneral
    height: HeightResult
    profile: Profile

    @property
    def pcf(self) -> str:
        if self.profile.kind == "PeriodicC":
            return f"PCF periodic period {self.profile.period}"
        if self.profile.kind == "PreperiodicC":
            return f"PCF preperiodic ({self.profile.preperiod},{self.profile.period})"
        return "PCI within cap"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "height": self.height.as_dict(),
                "profile": self.profile.as_dict(), "pcf": self.pcf}


def classify(tm: TentMap, max_iters: int = 2000) -> Classification:
    h = height(tm, max_iters)
    if h.confidence == "numeric":
        # a numeric landing is matched against a numeric critical orbit at a comparable scale
        prof = tm.postcritical_profile(tol=PROFILE_TOL)
    else:
        prof = tm.postcritical_profile()
    if not h.rational:
        return Classification("Irrational-or-undecided", h, prof)
    kind = "Rational" + h.type
    if h.type == "EndpointMinus" and not (prof.kind == "PeriodicC" and prof.period == h.n):
        raise Inconsistent(f"EndpointMinus with n={h.n} but critical profile {prof}")
    if h.type == "EndpointPlus" and prof.kind != "PreperiodicC":
        raise Inconsistent(f"EndpointPlus but critical profile {prof}")
    return Classification(kind, h, prof)


# ---------------------------------------------------------------------------
# parameter sweeps


def grid(lo, hi, steps: int, places: int = 10) -> List[str]:
    """Evenly spaced decimal parameter strings, rounded to `places` digits."""
    lo, hi = Fraction(str(lo)), Fraction(str(hi))
    q = Decimal(1).scaleb(-places)
    out = []
    for i in range(steps):
        v = lo + (hi - lo) * i / max(steps - 1, 1)
        out.append(str((Decimal(v.numerator) / Decimal(v.denominator)).quantize(q)))
    return out


def sweep(values: Sequence[str], max_iters: int = 2000, workers: int = 1,
          precision: int = 256) -> List[Tuple[str, HeightResult]]:
    """Heights over a list of decimal parameters; order and values independent of `workers`."""

    def one(text: str) -> Tuple[str, HeightResult]:
        tm = TentMap(Parameter.decimal(text, precision=precision))
        return text, height_or_undecided(tm, max_iters)

    if workers <= 1:
        return [one(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, values))


def heights_monotone(rows: Sequence[Tuple[str, HeightResult]]) -> bool:
    """Non-increasing in lambda, using brackets for undecided rows."""
    spans = []
    for _, h in rows:
        spans.append((float(h.value), float(h.value)) if h.rational else h.bracket)
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            if spans[i][1] < spans[j][0] - 1e-12:
                return False
    return True
