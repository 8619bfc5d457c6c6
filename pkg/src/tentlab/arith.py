"""Numeric backends: exact arithmetic in Q(lambda) and outward-rounded intervals.

A `Parameter` fixes the slope.  Given as a polynomial with an isolating
interval it selects the exact backend (`QL` elements); given as a decimal it
selects the interval backend (`Interval` elements).  Every other module is
written against the small common surface of the two classes: ring
operations, certified comparisons, `float()`, and `interval(prec)`.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError, PrecisionExhausted, Uncertain

DEFAULT_PRECISION = 256
PRECISION_CAP = 4096

Number = Union[int, Fraction]


# ---------------------------------------------------------------------------
# interval backend


@lru_cache(maxsize=None)
def _contexts(prec: int):
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return down, up


def _as_mpq(q) -> mpq:
    if isinstance(q, Fraction):
        return mpq(q.numerator, q.denominator)
    return mpq(q)


class Interval:
    """A closed interval [lo, hi] of reals with MPFR endpoints.

    All operations round outward, so the true value always stays inside.
    Comparisons are certified: they raise `Uncertain` when the answer is not
    determined by the enclosures.
    """

    __slots__ = ("lo", "hi", "prec", "recipe")

    def __init__(self, lo, hi, prec: int, recipe: Optional[Callable[[int], "Interval"]] = None):
        self.lo = lo
        self.hi = hi
        self.prec = prec
        self.recipe = recipe

    # construction -------------------------------------------------------
    @classmethod
    def exact(cls, q, prec: int) -> "Interval":
        """Tightest enclosure of the rational `q`; remembers how to redo it."""
        down, up = _contexts(prec)
        qq = _as_mpq(q)
        frozen = Fraction(int(qq.numerator), int(qq.denominator))
        lo = mpfr(qq, prec, down)
        hi = mpfr(qq, prec, up)
        return cls(lo, hi, prec, recipe=lambda p, f=frozen: Interval.exact(f, p))

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.exact(other, self.prec)
        if isinstance(other, (type(mpz(0)), type(mpq(0)))):
            return Interval.exact(other, self.prec)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        down, up = _contexts(p)
        return Interval(down.add(self.lo, o.lo), up.add(self.hi, o.hi), p)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        down, up = _contexts(p)
        return Interval(down.sub(self.lo, o.hi), up.sub(self.hi, o.lo), p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        down, up = _contexts(p)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        if a >= 0 and c >= 0:
            return Interval(down.mul(a, c), up.mul(b, d), p)
        los = (down.mul(a, c), down.mul(a, d), down.mul(b, c), down.mul(b, d))
        his = (up.mul(a, c), up.mul(a, d), up.mul(b, c), up.mul(b, d))
        return Interval(min(los), max(his), p)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return _ipow(self, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.lo <= 0 <= o.hi:
            raise Uncertain("division by an interval containing zero")
        p = max(self.prec, o.prec)
        down, up = _contexts(p)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        los = (down.div(a, c), down.div(a, d), down.div(b, c), down.div(b, d))
        his = (up.div(a, c), up.div(a, d), up.div(b, c), up.div(b, d))
        return Interval(min(los), max(his), p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o.__truediv__(self)

    # comparison -------------------------------------------------------------
    def sign(self) -> int:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        raise Uncertain("interval straddles zero")

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare Interval with {type(other).__name__}")
        if self.hi < o.lo:
            return -1
        if self.lo > o.hi:
            return 1
        if self.lo == self.hi == o.lo == o.hi:
            return 0
        raise Uncertain("overlapping intervals")

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        # structural equality; use `same` / `cmp` for numeric questions
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((float(self.lo), float(self.hi)))

    # inspection -------------------------------------------------------------
    def width(self):
        _, up = _contexts(self.prec)
        return up.sub(self.hi, self.lo)

    def mid(self):
        down, _ = _contexts(self.prec + 2)
        return down.div(down.add(self.lo, self.hi), 2)

    def overlaps(self, other) -> bool:
        o = self._coerce(other)
        return not (self.hi < o.lo or o.hi < self.lo)

    def contains(self, other) -> bool:
        o = self._coerce(other)
        return self.lo <= o.lo and o.hi <= self.hi

    def interval(self, prec: Optional[int] = None) -> "Interval":
        return self

    def __float__(self):
        return float(self.mid())

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r}, prec={self.prec})"


# ---------------------------------------------------------------------------
# exact backend: the field Q(lambda)


def _poly_eval_fraction(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class NumberField:
    """Q[x]/(p) for an irreducible p, together with the real embedding x -> lambda.

    The embedding is pinned down by an isolating interval that is refined by
    exact bisection on demand.
    """

    def __init__(self, minpoly: Sequence[Fraction], lo: Fraction, hi: Fraction):
        lead = Fraction(minpoly[-1])
        self.minpoly = tuple(Fraction(c) / lead for c in minpoly)  # monic, constant first
        self.degree = len(self.minpoly) - 1
        # integer version for fast sign evaluation at dyadic points
        den = 1
        for c in self.minpoly:
            den = den * c.denominator // gcd(den, c.denominator)
        self._int_poly = [int(c * den) for c in self.minpoly]
        self._lo, self._hi = Fraction(lo), Fraction(hi)
        self._sign_lo = self._sign_at(self._lo)
        self._sign_hi = self._sign_at(self._hi)
        if self._sign_lo == 0 or self._sign_hi == 0 or self._sign_lo == self._sign_hi:
            raise DomainError("isolating interval must bracket a simple root strictly inside it")
        d = self.degree
        # x^k reduced mod p, for k < 2d - 1
        table = []
        for k in range(2 * d - 1):
            if k < d:
                v = [Fraction(0)] * d
                v[k] = Fraction(1)
            else:
                prev = table[k - 1]
                top = prev[d - 1]
                v = [Fraction(0)] + list(prev[: d - 1])
                for i in range(d):
                    v[i] -= top * self.minpoly[i]
            table.append(tuple(v))
        self._reduce = table
        self._enclosures: dict = {}
        self._float: Optional[float] = None
        self.one = QL(self, (Fraction(1),) + (Fraction(0),) * (d - 1))
        self.zero = QL(self, (Fraction(0),) * d)
        self.gen = self.from_poly([0, 1])

    def _sign_at(self, q: Fraction) -> int:
        v = _poly_eval_fraction(self._int_poly, q)
        return (v > 0) - (v < 0)

    def _refine(self, width: Fraction) -> None:
        while self._hi - self._lo > width:
            m = (self._lo + self._hi) / 2
            s = self._sign_at(m)
            if s == 0:
                # an exact rational root: the minimal polynomial is linear
                self._lo = self._hi = m
                return
            if s == self._sign_lo:
                self._lo = m
            else:
                self._hi = m

    def float_root(self) -> float:
        """lambda to double precision (from a 64-bit enclosure)."""
        if self._float is None:
            self._float = float(self.root_interval(64).mid())
        return self._float

    def root_interval(self, prec: int) -> Interval:
        """Enclosure of lambda of width about 2**-prec."""
        cached = self._enclosures.get(prec)
        if cached is not None:
            return cached
        self._refine(Fraction(1, 1 << (prec + 4)))
        down, up = _contexts(prec)
        iv = Interval(mpfr(_as_mpq(self._lo), prec, down), mpfr(_as_mpq(self._hi), prec, up), prec)
        self._enclosures[prec] = iv
        return iv

    def from_poly(self, coeffs: Sequence[Number]) -> "QL":
        """The element sum coeffs[i] * lambda**i (any length)."""
        d = self.degree
        out = [Fraction(0)] * d
        for k, c in enumerate(coeffs):
            c = Fraction(c)
            if c == 0:
                continue
            if k < len(self._reduce):
                row = self._reduce[k]
            else:
                row = self._power_row(k)
            for i in range(d):
                if row[i]:
                    out[i] += c * row[i]
        return QL(self, tuple(out))

    def _power_row(self, k: int):
        e = self.gen
        acc = self.one
        n = k
        while n:
            if n & 1:
                acc = acc * e
            e = e * e
            n >>= 1
        return acc.c

    def const(self, q: Number) -> "QL":
        return QL(self, (Fraction(q),) + (Fraction(0),) * (self.degree - 1))

    def approx(self) -> float:
        return float((self._lo + self._hi) / 2)


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


class QL:
    """An element of Q(lambda), stored as polynomial coefficients (constant first)."""

    __slots__ = ("K", "c", "_f")

    def __init__(self, K: NumberField, c):
        self.K = K
        self.c = c
        self._f = None

    def _coerce(self, other):
        if isinstance(other, QL):
            return other
        if isinstance(other, (int, Fraction)):
            return self.K.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QL(self.K, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return QL(self.K, tuple(-x for x in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QL(self.K, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QL(self.K, tuple(x * other for x in self.c))
        if not isinstance(other, QL):
            return NotImplemented
        d = self.K.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:d])
        red = self.K._reduce
        for k in range(d, 2 * d - 1):
            v = prod[k]
            if v:
                row = red[k]
                for i in range(d):
                    if row[i]:
                        out[i] += v * row[i]
        return QL(self.K, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return _ipow(self, n)

    def inverse(self) -> "QL":
        if all(x == 0 for x in self.c):
            raise ZeroDivisionError("inverse of zero in Q(lambda)")
        # extended Euclid on (p, self) in Q[x]; polynomials are constant-first lists
        r0, r1 = list(self.K.minpoly), _trim(list(self.c))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
            if len(r1) == 1 and r1[0] == 0:
                break
        # r0 is a nonzero constant
        inv_const = 1 / r0[0]
        return self.K.from_poly([x * inv_const for x in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QL(self.K, tuple(x / other for x in self.c))
        if not isinstance(other, QL):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def interval(self, prec: int = 128) -> Interval:
        lam = self.K.root_interval(prec)
        acc = Interval.exact(self.c[-1], prec)
        for x in reversed(self.c[:-1]):
            acc = acc * lam + Interval.exact(x, prec)
        return acc

    def sign(self) -> int:
        if self.is_zero():
            return 0
        # float Horner first; accepted only when it clears a wide rounding margin
        try:
            lam = self.K.float_root()
            acc = mag = 0.0
            for x in reversed(self.c):
                fx = float(x)
                acc = acc * lam + fx
                mag = mag * lam + abs(fx)
            if math.isfinite(mag) and abs(acc) > 1e-9 * mag:
                return 1 if acc > 0 else -1
        except OverflowError:
            pass
        prec = 64
        while True:
            iv = self.interval(prec)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            prec *= 2
            if prec > 1 << 16:  # a nonzero algebraic number is never this small here
                raise PrecisionExhausted("sign determination in Q(lambda)")

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QL with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __float__(self):
        if self._f is None:
            self._f = float(self.interval(64).mid())
        return self._f

    def rational(self) -> Optional[Fraction]:
        """The value as a Fraction when it lies in Q, else None."""
        if all(x == 0 for x in self.c[1:]):
            return self.c[0]
        return None

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.c):
            if x:
                terms.append(f"{x}" if i == 0 else f"{x}*L^{i}")
        return "QL(" + (" + ".join(terms) or "0") + ")"


def _trim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _polysub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(x) for x in out])


def _polydivmod(a, b):
    a = list(a)
    b = _trim(list(b))
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1] / lead
        q[k] = coef
        if coef:
            for i, y in enumerate(b):
                a[k + i] -= coef * y
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


Real = Union[QL, Interval]


# ---------------------------------------------------------------------------
# the slope parameter

def _ipow(x, n: int):
    """x^n by repeated squaring."""
    out = x * 0 + 1
    base = x
    while n:
        if n & 1:
            out = out * base
        n >>= 1
        if n:
            base = base * base
    return out


_POLY_RE = re.compile(r'^poly:"?([^":]+)"?:interval:"?([^":]+)"?$')
_DEC_RE = re.compile(r'^dec:"?([^"]+)"?$')
_BARE_RE = re.compile(r"^[0-9]+(\.[0-9]+)?$")


@dataclass(frozen=True)
class Parameter:
    """The slope lambda in (sqrt 2, 2) together with its numeric backend.

    Build with `Parameter.parse`.  `kind` is "algebraic" (exact Q(lambda)) or
    "decimal" (intervals at `precision` bits).
    """

    spec: str
    kind: str
    poly: tuple = ()
    interval_bounds: tuple = ()
    value: Optional[Fraction] = None
    precision: int = DEFAULT_PRECISION
    cap: int = PRECISION_CAP
    coefficient_order: str = "constant-first"
    _field: Optional[NumberField] = field(default=None, compare=False, repr=False)

    @classmethod
    def parse(cls, spec: str, precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP) -> "Parameter":
        spec = spec.strip()
        m = _POLY_RE.match(spec)
        if m:
            coeffs = tuple(int(s) for s in m.group(1).split(","))
            lo, hi = (Fraction(s.strip()) for s in m.group(2).split(","))
            return cls.algebraic(coeffs, lo, hi, precision=precision, cap=cap, spec=spec)
        m = _DEC_RE.match(spec)
        if m or _BARE_RE.match(spec):
            text = m.group(1) if m else spec
            return cls.decimal(text, precision=precision, cap=cap)
        raise DomainError(f"unrecognised lambda spec {spec!r}")

    @classmethod
    def decimal(cls, text: str, precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP) -> "Parameter":
        text = str(text).strip()
        v = Fraction(text)
        if not (v * v > 2 and v < 2):
            raise DomainError(f"lambda = {text} is outside (sqrt 2, 2)")
        return cls(spec=f'dec:"{text}"', kind="decimal", value=v, precision=precision, cap=cap)

    @classmethod
    def algebraic(cls, coeffs: Sequence[int], lo, hi, precision: int = DEFAULT_PRECISION,
                  cap: int = PRECISION_CAP, spec: Optional[str] = None) -> "Parameter":
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo < hi:
            raise DomainError("empty isolating interval")
        order = "constant-first"
        try:
            minpoly = _isolate_factor(tuple(coeffs), lo, hi)
        except DomainError:
            # a highest-first list is accepted when only that reading has a root here
            try:
                minpoly = _isolate_factor(tuple(reversed(coeffs)), lo, hi)
            except DomainError:
                raise DomainError("interval must isolate exactly one real root of the polynomial") from None
            order = "highest-first"
        K = NumberField(minpoly, lo, hi)
        if spec is None:
            spec = 'poly:"{}":interval:"{},{}"'.format(",".join(str(c) for c in coeffs), lo, hi)
        p = cls(spec=spec, kind="algebraic", poly=tuple(coeffs), interval_bounds=(lo, hi),
                precision=precision, cap=cap, coefficient_order=order, _field=K)
        lam = K.gen
        if not (lam * lam > 2 and lam < 2):
            raise DomainError("lambda is outside (sqrt 2, 2)")
        return p

    # backend access ---------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.kind == "algebraic"

    @property
    def field(self) -> NumberField:
        if self._field is None:
            raise DomainError("decimal parameters have no number field")
        return self._field

    def num(self, q) -> Real:
        """Embed a rational (int, Fraction, decimal string, float) into the backend."""
        if isinstance(q, (QL, Interval)):
            return q
        if isinstance(q, str):
            q = Fraction(q)
        elif isinstance(q, float):
            q = Fraction(q)
        if self.exact:
            return self.field.const(q)
        return Interval.exact(q, self.precision)

    def lam(self) -> Real:
        if self.exact:
            return self.field.gen
        return Interval.exact(self.value, self.precision)

    @property
    def lambda_value(self) -> float:
        if self.exact:
            return self.field.approx()
        return float(self.value)

    def with_precision(self, bits: int) -> "Parameter":
        return replace(self, precision=bits)

    def describe(self) -> dict:
        out = {"spec": self.spec, "kind": self.kind, "precision": self.precision,
               "lambda_approx": repr(self.lambda_value)}
        if self.exact:
            out["minimal_polynomial"] = [str(c) for c in self.field.minpoly]
            out["coefficient_order"] = self.coefficient_order
        return out


def _isolate_factor(coeffs: tuple, lo: Fraction, hi: Fraction) -> tuple:
    """The irreducible factor of `coeffs` owning the unique root in [lo, hi]."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, domain="QQ")
    if poly.is_zero or poly.degree() < 1:
        raise DomainError("polynomial must have positive degree")
    slo, shi = sympy.Rational(lo.numerator, lo.denominator), sympy.Rational(hi.numerator, hi.denominator)
    if poly.sqf_part().count_roots(slo, shi) != 1:
        raise DomainError("interval must isolate exactly one real root of the polynomial")
    for fac, _mult in poly.factor_list()[1]:
        if fac.count_roots(slo, shi) == 1:
            cs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
            return tuple(cs)
    raise DomainError("no factor carries the isolated root")  # pragma: no cover


# ---------------------------------------------------------------------------
# side classification, escalation, helpers


class SideClass(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"
    AT_C = "AtC"
    UNCERTAIN = "Uncertain"


_HALF = Fraction(1, 2)


def classify_side(x: Real, p: Optional[Parameter] = None) -> SideClass:
    """Which side of c = 1/2 the point x lies on, certified by the backend.

    An undecided interval that knows how to recompute itself is escalated
    up to the precision cap before Uncertain is reported.
    """
    cap = p.cap if p is not None else PRECISION_CAP
    cur = x
    while True:
        try:
            s = (cur - _HALF).sign()
            return {-1: SideClass.LEFT, 0: SideClass.AT_C, 1: SideClass.RIGHT}[s]
        except Uncertain:
            if not isinstance(cur, Interval) or cur.recipe is None or cur.prec * 2 > cap:
                return SideClass.UNCERTAIN
            nxt = cur.recipe(cur.prec * 2)
            if nxt.recipe is None:
                nxt.recipe = cur.recipe
            cur = nxt


def width(x: Real):
    if isinstance(x, QL):
        return 0
    return x.width()


def escalate(x: Real, target_width, cap: int = PRECISION_CAP) -> Real:
    """Recompute x at doubling precision until its width is <= target_width.

    Exact values are returned unchanged.  Intervals must carry a recipe (how
    to recompute themselves at a given precision).
    """
    if isinstance(x, QL):
        return x
    target = Fraction(target_width)
    cur = x
    while True:
        if cur.width() <= target:
            return cur
        if cur.recipe is None or cur.prec * 2 > cap:
            raise PrecisionExhausted(
                f"width {float(cur.width()):.3g} at {cur.prec} bits exceeds the target")
        nxt = cur.recipe(cur.prec * 2)
        if nxt.recipe is None:
            nxt.recipe = cur.recipe
        cur = nxt


def same(x: Real, y: Real) -> bool:
    """Equality for exact values; overlap of enclosures for intervals."""
    if isinstance(x, QL) or isinstance(y, QL):
        return x == y
    return x.overlaps(y)


def gap(x: Real, y: Real) -> float:
    """An upper bound for |x - y| as a float."""
    d = x - y
    if isinstance(d, QL):
        return abs(float(d))
    return float(max(abs(d.lo), abs(d.hi)))


def to_fraction(x: Real) -> Fraction:
    """A rational inside the enclosure (the exact value when it is rational)."""
    if isinstance(x, QL):
        r = x.rational()
        if r is not None:
            return r
        iv = x.interval(128)
        m = iv.mid()
    else:
        m = x.mid()
    n, d = m.as_integer_ratio()
    return Fraction(int(n), int(d))


def run_escalating(param: Parameter, fn: Callable[[Parameter], object]):
    """Call fn(param), retrying at doubled precision whenever it raises Uncertain."""
    p = param
    while True:
        try:
            return fn(p)
        except Uncertain as exc:
            if p.exact or p.precision * 2 > p.cap:
                raise PrecisionExhausted(
                    f"undecided at {p.precision} bits (cap {p.cap}): {exc}") from None
            p = p.with_precision(p.precision * 2)
