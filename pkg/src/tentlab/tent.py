"""The core tent map, its itineraries, the kneading sequence and the unimodal order."""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .arith import Interval, Parameter, QL, Real, run_escalating, same
from .errors import DomainError, Uncertain

DEFAULT_DEPTH = 24
PC_CAP = 512
COINCIDENCE = Fraction(1, 2**64)


class Cmp(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal-at-depth"
    GREATER = "Greater"


@dataclass(frozen=True)
class Word:
    """A finite 0/1 word.  `ambiguous` marks a prefix cut at an exact hit of c."""

    symbols: Tuple[int, ...]
    ambiguous: bool = False

    @classmethod
    def of(cls, text: str) -> "Word":
        return cls(tuple(int(ch) for ch in text))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "".join(str(s) for s in self.symbols)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.symbols + other.symbols, other.ambiguous)


def parity_key(symbols: Sequence[int]) -> Tuple[int, ...]:
    """The running parities of a word; lexicographic order on keys is the unimodal order."""
    out = []
    acc = 0
    for s in symbols:
        acc ^= s
        out.append(acc)
    return tuple(out)


def unimodal_cmp(s, t) -> Cmp:
    """Compare two words in the parity-lexicographic order.

    Words that agree up to the shorter length compare Equal-at-depth.
    """
    s = s.symbols if isinstance(s, Word) else tuple(s)
    t = t.symbols if isinstance(t, Word) else tuple(t)
    total = 0
    for x, y in zip(s, t):
        if x != y:
            return Cmp.LESS if (total + x) % 2 == 0 else Cmp.GREATER
        total += x
    return Cmp.EQUAL


@dataclass(frozen=True)
class Profile:
    """What the critical orbit does within the detection cap."""

    kind: str  # PeriodicC | PreperiodicC | InfiniteWithinCap
    period: Optional[int] = None
    preperiod: Optional[int] = None
    confidence: str = "exact"
    cap: int = PC_CAP

    @property
    def finite(self) -> bool:
        return self.kind != "InfiniteWithinCap"

    def __str__(self) -> str:
        if self.kind == "PeriodicC":
            return f"PeriodicC({self.period})"
        if self.kind == "PreperiodicC":
            return f"PreperiodicC({self.preperiod},{self.period})"
        return "InfiniteWithinCap"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "period": self.period, "preperiod": self.preperiod,
                "confidence": self.confidence, "cap": self.cap, "label": str(self)}


class TentMap:
    """f(x) = min(lam x, lam (1 - x)) restricted to its core I = [a, b]."""

    def __init__(self, param: Parameter):
        self.param = param
        L = param.lam()
        self.lam = L
        self.inv_lam = 1 / L
        self.c = param.num(Fraction(1, 2))
        self.b = L / 2
        self.a = L - L * L / 2
        self.a_hat = 1 - self.a
        self.fa = L * self.a
        self.p_fix = L / (1 + L)
        self._crit: List[Real] = []
        self._profiles: dict = {}
        self._pc_index = None
        self._inv_pows: List[Real] = [param.num(1)]

    def inv_lam_power(self, r: int) -> Real:
        """lam^-r (cached)."""
        while len(self._inv_pows) <= r:
            self._inv_pows.append(self._inv_pows[-1] * self.inv_lam)
        return self._inv_pows[r]

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_spec(cls, spec: str, precision: int = 256) -> "TentMap":
        return cls(Parameter.parse(spec, precision=precision))

    @property
    def exact(self) -> bool:
        return self.param.exact

    def at_precision(self, bits: int) -> "TentMap":
        return TentMap(self.param.with_precision(bits))

    def num(self, q) -> Real:
        """Embed a number; intervals computed at lower precision are recomputed when possible."""
        if isinstance(q, Interval):
            if q.prec < self.param.precision and q.recipe is not None:
                fresh = q.recipe(self.param.precision)
                fresh.recipe = q.recipe
                return fresh
            return q
        return self.param.num(q)

    def escalating(self, fn):
        """Run fn(tm), doubling precision on undecided comparisons."""
        return run_escalating(self.param, lambda p: fn(self if p is self.param else TentMap(p)))

    # -- the map --------------------------------------------------------------
    def check_in_I(self, x: Real) -> None:
        try:
            if x < self.a or x > self.b:
                raise DomainError("point lies outside the core interval I = [a, b]")
        except Uncertain:
            pass

    def eval(self, x) -> Real:
        x = self.num(x)
        self.check_in_I(x)
        return self._f(x)

    def _f(self, x: Real) -> Real:
        L = self.lam
        try:
            if x <= self.c:
                return L * x
            return L * (1 - x)
        except Uncertain:
            # x straddles c: both branches enclose the value, take the hull
            u, v = L * x, L * (1 - x)
            return Interval(min(u.lo, v.lo), max(u.hi, v.hi), max(u.prec, v.prec))

    def hat(self, x) -> Real:
        x = self.num(x)
        if same(x, self.c):
            raise DomainError("hat is undefined at c")
        try:
            if x < self.a or x > self.a_hat:
                raise DomainError("hat needs x in [a, a_hat]")
        except Uncertain:
            pass
        return 1 - x

    def preimages(self, y) -> List[Tuple[Real, int]]:
        """Preimages of y in I as (point, branch) pairs, left branch first."""
        y = self.num(y)
        self.check_in_I(y)
        return self._preimages(y)

    def _preimages(self, y: Real) -> List[Tuple[Real, int]]:
        right = 1 - y * self.inv_lam
        if self._is_b(y):
            return [(self.c, 1)]
        if y >= self.fa:
            return [(y * self.inv_lam, 0), (right, 1)]
        return [(right, 1)]

    def _is_b(self, y: Real) -> bool:
        if isinstance(y, QL):
            return y == self.b
        try:
            return not (y < self.b)
        except Uncertain:
            d = y - self.b
            tiny = Fraction(1, 2 ** max(64, y.prec // 2))
            if d.width() < tiny and max(abs(d.lo), abs(d.hi)) < tiny:
                return True
            raise

    def symbol(self, x: Real) -> int:
        """0 left of c, 1 right of c; c itself gets 1 (it is the right preimage of b)."""
        return 0 if x < self.c else 1

    def orbit(self, x, n: int) -> List[Real]:
        """[x, f(x), ..., f^n(x)]."""
        out = [self.num(x)]
        for _ in range(n):
            out.append(self._f(out[-1]))
        return out

    # -- critical orbit -------------------------------------------------------
    def critical_orbit(self, n: int) -> List[Real]:
        """[f(c), f^2(c), ..., f^n(c)] (cached)."""
        if not self._crit:
            self._crit.append(self.b)
        while len(self._crit) < n:
            self._crit.append(self._f(self._crit[-1]))
        return self._crit[:n]

    def postcritical_profile(self, cap: int = PC_CAP, tol=COINCIDENCE) -> Profile:
        """Periodic / preperiodic / neither for the critical orbit, up to `cap` steps.

        Interval parameters report coincidences closer than `tol` as numeric.
        """
        key = (cap, tol)
        if key in self._profiles:
            return self._profiles[key]
        if self.exact:
            prof = self._profile_exact(cap)
        else:
            prof = run_escalating(self.param, lambda p: TentMap(p)._profile_numeric(cap, tol))
        self._profiles[key] = prof
        return prof

    def _profile_exact(self, cap: int) -> Profile:
        seen = {}
        for j, v in enumerate(self.critical_orbit(cap), start=1):
            if v == self.c:
                return Profile("PeriodicC", period=j, cap=cap)
            if v in seen:
                i = seen[v]
                return Profile("PreperiodicC", period=j - i, preperiod=i, cap=cap)
            seen[v] = j
        return Profile("InfiniteWithinCap", cap=cap)

    def _profile_numeric(self, cap: int, tol) -> Profile:
        orbit = self.critical_orbit(cap)
        mids: list = []
        c_mid = self.c.mid()
        for j, v in enumerate(orbit, start=1):
            if v.width() > tol / 2**16:
                raise Uncertain("critical orbit enclosure too wide")
            m = v.mid()
            if abs(m - c_mid) < tol:
                return Profile("PeriodicC", period=j, confidence="numeric", cap=cap)
            k = bisect.bisect_left(mids, (m, 0))
            for cand in mids[max(0, k - 1): k + 1]:
                if abs(cand[0] - m) < tol:
                    i = cand[1]
                    return Profile("PreperiodicC", period=j - i, preperiod=i,
                                   confidence="numeric", cap=cap)
            bisect.insort(mids, (m, j))
        return Profile("InfiniteWithinCap", confidence="numeric", cap=cap)

    def epsilon(self) -> Optional[int]:
        """Parity of the count of f^r(c), 1 <= r < n, in (c, b] when c has period n."""
        prof = self.postcritical_profile()
        if prof.kind != "PeriodicC":
            return None
        pts = self.critical_orbit(prof.period)[: prof.period - 1]
        return sum(1 for v in pts if v > self.c) % 2

    def in_pc(self, x: Real, cap: int = PC_CAP) -> bool:
        """Is x one of f^r(c), 1 <= r <= cap?  (exact, or numeric to 2^-64)"""
        orbit = self.critical_orbit(cap)
        if self.exact:
            if self._pc_index is None or self._pc_index[0] != cap:
                self._pc_index = (cap, set(orbit))
            return x in self._pc_index[1]
        return any(_near(x, v) for v in orbit)

    def in_grand_orbit(self, x, cap: int = PC_CAP) -> bool:
        """Does the forward orbit of x meet {c} or the critical orbit within the cap?

        For intervals the scan stops early once the enclosure grows past 2^-64.
        """
        x = self.num(x)
        y = x
        for _ in range(cap + 1):
            if self.exact:
                if y == self.c or self.in_pc(y, cap):
                    return True
            else:
                if y.width() > COINCIDENCE:
                    return False
                if _near(y, self.c) or self.in_pc(y, cap):
                    return True
            y = self._f(y)
        return False

    # -- itineraries ----------------------------------------------------------
    def itinerary(self, x, n: int = DEFAULT_DEPTH) -> Word:
        """The length-n itinerary of x.

        At an exact hit of c the symbol is epsilon(f) when c is periodic;
        otherwise the word stops there with the ambiguity flag set.
        """
        return self.escalating(lambda tm: tm._itinerary(tm.num(x), n))

    def _itinerary(self, x: Real, n: int) -> Word:
        self.check_in_I(x)
        syms = []
        y = x
        for _ in range(n):
            s = (y - self.c).sign()
            if s < 0:
                syms.append(0)
            elif s > 0:
                syms.append(1)
            else:
                eps = self.epsilon()
                if eps is None:
                    return Word(tuple(syms), ambiguous=True)
                syms.append(eps)
            y = self._f(y)
        return Word(tuple(syms))

    def both_continuations(self, x, n: int = DEFAULT_DEPTH) -> Tuple[Word, Word]:
        """The two itineraries of a point whose orbit hits a non-periodic c."""
        w = self.itinerary(x, n)
        if not w.ambiguous:
            return w, w
        k = len(w)
        if k >= n:
            return Word(w.symbols), Word(w.symbols)
        tail = self.itinerary(self.b, n - k - 1) if n - k - 1 > 0 else Word(())
        return (Word(w.symbols + (0,) + tail.symbols), Word(w.symbols + (1,) + tail.symbols))

    def kneading(self, n: int = DEFAULT_DEPTH) -> Word:
        return self.itinerary(self.b, n)


def _near(x: Real, y: Real) -> bool:
    if isinstance(x, QL):
        return x == y
    return abs(x.mid() - y.mid()) < COINCIDENCE
