"""Identifications made by the semi-conjugacy, fiber arcs, chart coordinates, streamlines, and the Cantor class."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import gmpy2

from .arith import QL, Real, gap, same
from .errors import (DepthExhausted, DomainError, EnteredGamma, InGrandOrbit, PrecisionExhausted,
                     TypeMismatch, Uncertain)
from .ilim import (FiberApprox, FlatArc, Thread, ZeroBox, _apply_word, consecutive_pairs,
                   fhat, fiber, is_exactly, zero_box, GUARD)
from .measure import Density, alpha_cylinder
from .outside import (B_tilde_inverse_step, B_tilde_step, CirclePoint, Classification, Copy,
                      chart_t, extreme_element, in_gamma, in_gamma_interior, lower, upper)
from .tent import PC_CAP, TentMap, parity_key


# ---------------------------------------------------------------------------
# the embedding H of itineraries into the middle-thirds Cantor set


def H_embed(word) -> Tuple[Fraction, Fraction]:
    """sum_r 2 eps_r / 3^(r+1) with eps_r the running parity of the word.

    A finite word stands for all its continuations, which fill [lo, hi].
    """
    syms = word.symbols if hasattr(word, "symbols") else tuple(word)
    lo = Fraction(0)
    scale = Fraction(1, 3)
    for e in parity_key(syms):
        lo += 2 * e * scale
        scale /= 3
    return lo, lo + 3 * scale


# ---------------------------------------------------------------------------
# identification classes


@dataclass(frozen=True)
class IdentClass:
    kind: str  # EI | EII | EIII | Trivial
    members: Tuple[Thread, ...]
    note: str = ""


def _fhat_power(tm: TentMap, y: CirclePoint, k: int, r: int) -> Thread:
    """Depth-r truncation of f-hat^k(e(y)) for k >= 0."""
    base = extreme_element(tm, y, max(r - k, 0))
    t = base
    for _ in range(k):
        t = fhat(tm, t)
    return t.truncate(r)


def _thread_of(tm: TentMap, item, k: int, r: int) -> Thread:
    """item is ('e', y, shift): the thread f-hat^(k + shift)(e(y)), shift may be negative."""
    _, y, shift = item
    total = k + shift
    if total >= 0:
        return _fhat_power(tm, y, total, r)
    for _ in range(-total):
        y, _s = B_tilde_inverse_step(tm, y)
    return _fhat_power(tm, y, 0, r)


def first_entry(tm: TentMap, y: CirclePoint, horizon: int) -> Tuple[Optional[int], CirclePoint]:
    """Least s >= 0 with B~^s(y) in the open plateau arc, or (None, last point)."""
    cur = y
    for s in range(horizon + 1):
        if in_gamma_interior(tm, cur):
            return s, cur
        if in_gamma(tm, cur):
            return None, cur
        if s < horizon:
            cur, _ = B_tilde_step(tm, cur)
    return None, cur


def pi_orbit(tm: TentMap, n: int, warmup: int = 200) -> List[CirclePoint]:
    """The period-n orbit of B that never meets the open plateau (rational general type).

    Backward B~ iteration contracts onto it; the limit's branch pattern is then
    solved exactly as an affine fixed point.
    """
    y = lower(tm, tm.p_fix)
    for _ in range(warmup * n):
        y, _ = B_tilde_inverse_step(tm, y)
    pattern = []
    cur = y
    for _ in range(n):
        cur, s = B_tilde_inverse_step(tm, cur)
        pattern.append((cur.copy, s))
    # x_{i+1} = x_i / lam (s = 0) or 1 - x_i / lam (s = 1): compose and solve x = A + B x
    A, Bc = tm.num(0), tm.num(1)
    for _copy, s in pattern:
        A, Bc = (A * tm.inv_lam, Bc * tm.inv_lam) if s == 0 else (1 - A * tm.inv_lam, -(Bc * tm.inv_lam))
    x = A / (1 - Bc)
    start = CirclePoint(x, y.copy)
    orbit = [start]
    cur = start
    for _ in range(n - 1):
        cur, _ = B_tilde_step(tm, cur)
        orbit.append(cur)
    return orbit


def in_pi(tm: TentMap, y: CirclePoint, n: int) -> bool:
    """y is B-periodic with period n and its orbit avoids the closed plateau."""
    cur = y
    for _ in range(n):
        if in_gamma(tm, cur):
            return False
        cur, _ = B_tilde_step(tm, cur)
    return cur.copy == y.copy and same(cur.x, y.x) and (not isinstance(cur.x, QL) or cur.x == y.x)


def identify_partner(tm: TentMap, cls: Classification, y: CirclePoint, k: int, r: int,
                     horizon: int = 2000) -> IdentClass:
    """The identification class of f-hat^k(e(y)), truncated to depth r.

    The certificate (y, k) says the thread is f-hat^k of the extreme element e(y).
    """
    rational = cls.kind != "Irrational-or-undecided"
    general = cls.kind == "RationalGeneral"
    me = _fhat_power(tm, y, k, r)
    if rational and not general:
        raise TypeMismatch(f"identification classes are described for the general type, not {cls.kind}")
    n = cls.height.n if rational else None
    limit = 2 * n if rational else horizon
    s, hit = first_entry(tm, y, limit)
    if s is not None:
        x = hit.x
        if is_exactly(x, tm.c) or (isinstance(x, QL) and x == tm.c):
            return IdentClass("Trivial", (me,), "enters the plateau at c_u")
        if rational:
            z = _landing_exact(tm, n)
            zhat = 1 - z
            if same(x, z) or same(x, zhat):
                # {f^r(e(zhat_u)), f^(r+n)(e(a)), f^(r+n)(e(ahat_u))} with f^r = f-hat^(k - s)
                items = [("e", upper(tm, zhat), -s), ("e", lower(tm, tm.a), n - s),
                         ("e", upper(tm, tm.a_hat), n - s)]
                members = tuple(_thread_of(tm, it, k, r) for it in items)
                return IdentClass("EII", members, f"z = f^{n}(a) class, entry step {s}")
        partner = upper(tm, 1 - x)
        other = ("e", partner, -s)
        return IdentClass("EI", (me, _thread_of(tm, other, k, r)), f"entry step {s}")
    if rational:
        if in_pi(tm, y, n):
            orbit = pi_orbit(tm, n)
            members = tuple(_fhat_power(tm, p, 0, r) for p in orbit)
            return IdentClass("EIII", members, f"period-{n} orbit")
        return IdentClass("Trivial", (me,), f"no plateau entry within {limit} steps")
    return IdentClass("EII", (me,), f"Cantor class: no plateau entry within {horizon} steps")


def _landing_exact(tm: TentMap, n: int) -> Real:
    y = CirclePoint(tm.a, Copy.LOWER)
    for _ in range(n):
        y, _ = B_tilde_step(tm, y)
    return y.x


# ---------------------------------------------------------------------------
# fiber arcs


@dataclass
class FiberArc:
    x: Real
    depth: int
    threads: List[Thread]
    H: List[Tuple[Fraction, Fraction]]
    alpha: List[Real]
    t_collapsed: List[Real]
    identified_pairs: List[Tuple[int, int]]
    total: Real
    phi_x: Real
    guard: int = GUARD

    @property
    def t_unit(self) -> List[float]:
        """t_collapsed divided by phi(x), in [0, 1]."""
        tot = float(self.total)
        return [float(t) / tot for t in self.t_collapsed]

    def as_dict(self) -> dict:
        return {
            "x": float(self.x), "depth": self.depth, "guard": self.guard,
            "phi_x": float(self.phi_x), "total_collapsed": float(self.total),
            "points": [{"word": "".join(map(str, t.word)), "H": float(h[0]),
                        "alpha": float(al), "t_collapsed": float(tc)}
                       for t, h, al, tc in zip(self.threads, self.H, self.alpha, self.t_collapsed)],
            "identified_pairs": [list(p) for p in self.identified_pairs],
        }


def fiber_arc(tm: TentMap, d: Density, x, r: int, guard: int = GUARD, rational: bool = True,
              cap: int = PC_CAP) -> FiberArc:
    """The fiber over x as an arc: sorted threads, H coordinates, identified pairs,
    and the collapsed coordinate given by cumulative cylinder mass.

    Consecutive pairs share the collapsed coordinate (top of the lower cylinder,
    bottom of the upper one); the extremes sit at 0 and at the total mass phi(x).
    """
    x = tm.num(x)
    hit = tm.in_grand_orbit(x, cap) if rational else tm.in_pc(x, cap)
    if hit:
        raise InGrandOrbit("x lies on the grand orbit of c (within the cap)")
    fib = fiber(tm, x, r, cap)
    pairs = consecutive_pairs(tm, fib, guard)
    alphas = [alpha_cylinder(d, t, tm).value for t in fib.threads]
    zero = alphas[0] * 0
    below = [zero]
    for al in alphas:
        below.append(below[-1] + al)
    total = below[-1]
    lower_member = {i for i, _ in pairs}
    upper_member = {j for _, j in pairs}
    last = len(alphas) - 1
    t = []
    for i, al in enumerate(alphas):
        if i == 0:
            t.append(zero)
        elif i == last:
            t.append(total)
        elif i in lower_member:
            t.append(below[i + 1])
        elif i in upper_member:
            t.append(below[i])
        else:
            t.append(below[i] + al / 2)
    return FiberArc(x, r, fib.threads, [H_embed(th.word) for th in fib.threads], alphas, t,
                    pairs, total, d.value(x), guard)


# ---------------------------------------------------------------------------
# chart patches


@dataclass
class ChartPatch:
    K: Tuple[Real, Real]
    depth: int
    xs: List[float]
    words: List[Tuple[int, ...]]
    psi: List[List[float]]  # psi[arc][x]

    def spread(self) -> float:
        """Largest variation of psi along an arc."""
        return max((max(row) - min(row)) for row in self.psi) if self.psi else 0.0

    def rows(self) -> List[Tuple[float, str, float]]:
        out = []
        for w, row in zip(self.words, self.psi):
            label = "".join(map(str, w))
            for x, v in zip(self.xs, row):
                out.append((x, label, v))
        return out


def chart_patch(tm: TentMap, d: Density, K, r: int, samples: int = 8,
                box: Optional[ZeroBox] = None) -> ChartPatch:
    """psi on a 0-box: alpha of the set of threads weakly below each arc, at sampled x in K."""
    box = box or zero_box(tm, K, r)
    arcs = sorted(box.arcs, key=lambda a: parity_key(a.word))
    lo, hi = box.J
    xs = [lo + (hi - lo) * Fraction(2 * i + 1, 2 * samples) for i in range(samples)]
    psi = [[0.0] * samples for _ in arcs]
    for j, xv in enumerate(xs):
        acc = 0.0
        for i, arc in enumerate(arcs):
            acc += float(alpha_cylinder(d, _apply_word(tm, xv, arc.word), tm).value)
            psi[i][j] = acc
    return ChartPatch(box.J, r, [float(v) for v in xs], [a.word for a in arcs], psi)


def psi_of(tm: TentMap, d: Density, x, word: Sequence[int], r: Optional[int] = None) -> float:
    """psi of the thread over x with the given branch word: alpha of the threads weakly below it."""
    r = len(word) if r is None else r
    fib = fiber(tm, x, r)
    key = parity_key(tuple(word)[:r])
    total = 0.0
    for t in fib.threads:
        if parity_key(t.word) <= key:
            total += float(alpha_cylinder(d, t, tm).value)
    return total


# ---------------------------------------------------------------------------
# 0-flat decomposition of a path component


@dataclass(frozen=True)
class TracedArc:
    arc: FlatArc
    levels: Tuple[Optional[int], Optional[int]]  # index of the c-coordinate at each end


def _arc_with_levels(tm: TentMap, word: Sequence[int]) -> TracedArc:
    """J for a branch word together with the level where each end thread meets c."""
    lo, hi = tm.a, tm.b
    lo_level, hi_level = 2, 1  # x_0 = a gives x_2 = c; x_0 = b gives x_1 = c
    A, Bc = tm.num(0), tm.num(1)
    for i, s in enumerate(word):
        if s == 0:
            bound = (tm.fa - A) / Bc
            if Bc > 0:
                if bound > lo:
                    lo, lo_level = bound, i + 3
            elif bound < hi:
                hi, hi_level = bound, i + 3
        A, Bc = (A * tm.inv_lam, Bc * tm.inv_lam) if s == 0 else (1 - A * tm.inv_lam, -(Bc * tm.inv_lam))
    word = tuple(word)
    arc = FlatArc(word, (lo, hi), (_apply_word(tm, lo, word), _apply_word(tm, hi, word)))
    return TracedArc(arc, (lo_level, hi_level))


def trace_streamline(tm: TentMap, seed: Thread, steps: int, r: Optional[int] = None,
                     direction: str = "hi") -> List[FlatArc]:
    """Consecutive 0-flat arcs of the path component through seed.

    At an end thread some coordinate x_j equals c; the next arc flips the
    branch symbol s_(j-1) and folds back over the same side of that end.
    """
    r = seed.depth if r is None else r
    if seed.depth != r:
        raise DomainError("seed depth differs from r")
    for i, v in enumerate(seed.coords[1:], start=1):
        if is_exactly(v, tm.c):
            raise DomainError(f"seed coordinate {i} equals c")
    cur = _arc_with_levels(tm, seed.word)
    out = [cur.arc]
    end = 1 if direction == "hi" else 0
    while len(out) < steps:
        j = cur.levels[end]
        if j is None or j > r:
            raise DepthExhausted(f"the end of arc {len(out) - 1} meets c at level {j} > depth {r}")
        shared = cur.arc.J[end]
        word = list(cur.arc.word)
        word[j - 1] ^= 1
        nxt = _arc_with_levels(tm, word)
        # the shared end is whichever end of the new interval coincides with it
        e0 = gap(nxt.arc.J[0], shared)
        e1 = gap(nxt.arc.J[1], shared)
        end = 1 if e0 <= e1 else 0
        cur = nxt
        out.append(cur.arc)
    return out


def end_level(tm: TentMap, t: Thread) -> Optional[int]:
    """Index of a coordinate equal to c (exactly, or within enclosure for intervals)."""
    for i, v in enumerate(t.coords):
        if isinstance(v, QL):
            if v == tm.c:
                return i
        elif gap(v, tm.c) < 1e-30:
            return i
    return None


# ---------------------------------------------------------------------------
# spikes


@dataclass(frozen=True)
class Spike:
    arc: FlatArc
    lebesgue: Real
    nu_u: Real
    one_arc: bool
    ends_match: bool


def spike_arc(tm: TentMap, r: int, samples: int = 7) -> Spike:
    """The component S_0 = {e(x_u) : a < x < a_hat} as a 0-flat arc.

    Sample extreme elements across (a, a_hat) must share one branch word
    (`one_arc`); the arc covers [a, a_hat] and its thread over a_hat is
    e(a_hat_u) (`ends_match`).  Its unstable measure is half its length.
    """
    words = set()
    seed = None
    for i in range(1, samples + 2):
        x = tm.a + (tm.a_hat - tm.a) * Fraction(i, samples + 2)
        if same(x, tm.c):
            continue
        seed = extreme_element(tm, upper(tm, x), r)
        words.add(seed.word)
    arc = _arc_with_levels(tm, seed.word).arc
    contains = gap(arc.J[0], tm.a) < 1e-30 or arc.J[0] < tm.a
    contains = contains and (gap(arc.J[1], tm.a_hat) < 1e-30 or arc.J[1] > tm.a_hat)
    at_ah = _apply_word(tm, tm.a_hat, arc.word)
    ends = contains and at_ah.max_gap(extreme_element(tm, upper(tm, tm.a_hat), r)) < 1e-12
    length = tm.a_hat - tm.a
    return Spike(arc, length, length / 2, len(words) == 1, ends)


# ---------------------------------------------------------------------------
# the Cantor set in the irrational case


@dataclass
class CantorApprox:
    points: List[float]  # chart coordinates of B~^k(f(a)_l), k = 0 .. horizon-1
    gaps: List[Tuple[float, float]]
    records_a: List[Tuple[int, float]]  # (step, log10 distance) each time the orbit gets closer to a
    records_ahat: List[Tuple[int, float]]
    precision: int

    @property
    def log10_min_to_a(self) -> float:
        return self.records_a[-1][1] if self.records_a else math.inf

    @property
    def log10_min_to_ahat(self) -> float:
        return self.records_ahat[-1][1] if self.records_ahat else math.inf

    def as_dict(self) -> dict:
        return {"count": len(self.points), "largest_gaps": [list(g) for g in self.gaps[:8]],
                "log10_min_distance_to_a": self.log10_min_to_a,
                "log10_min_distance_to_ahat_u": self.log10_min_to_ahat,
                "closest_approaches_a": [list(r) for r in self.records_a],
                "closest_approaches_ahat_u": [list(r) for r in self.records_ahat],
                "precision": self.precision}


def _log10_gap(x: Real, ref: Real) -> float:
    d = x - ref
    if isinstance(d, QL):
        v = abs(float(d))
        return math.log10(v) if v > 0 else -math.inf
    m = max(abs(d.lo), abs(d.hi))
    return float(gmpy2.log10(m)) if m > 0 else -math.inf


def cantor_approx(tm: TentMap, horizon: int = 10_000) -> CantorApprox:
    """The first `horizon` points of the B~-orbit of f(a)_l.

    Raises EnteredGamma(step) when B~^step(a) meets the closed plateau; the
    step counts powers of B~ applied to a, so f(a)_l is step 1.
    """
    if tm.exact:
        return _cantor_run(tm, horizon)
    lam = tm.param.lambda_value
    # the slope must be held to its full input length, plus the bits the orbit loses
    value = tm.param.value
    input_bits = max(value.numerator.bit_length(), value.denominator.bit_length())
    bits = max(tm.param.precision, input_bits + int(horizon * math.log2(lam)) + 192)
    p = replace(tm.param, precision=bits, cap=max(tm.param.cap, 2 * bits))
    return _cantor_run(TentMap(p), horizon)


def _cantor_run(tm: TentMap, horizon: int) -> CantorApprox:
    y = CirclePoint(tm.fa, Copy.LOWER)
    ts = []
    rec_a: List[Tuple[int, float]] = []
    rec_ah: List[Tuple[int, float]] = []
    for k in range(horizon):
        step = k + 1
        try:
            if in_gamma_interior(tm, y):
                raise EnteredGamma(step, "interior")
            if in_gamma(tm, y):
                raise EnteredGamma(step, "boundary")
        except Uncertain:
            raise PrecisionExhausted(f"plateau test undecided at step {step}") from None
        ts.append(float(chart_t(tm, y)))
        if y.upper:
            g = _log10_gap(y.x, tm.a_hat)
            if not rec_ah or g < rec_ah[-1][1]:
                rec_ah.append((step, g))
        else:
            g = _log10_gap(y.x, tm.a)
            if not rec_a or g < rec_a[-1][1]:
                rec_a.append((step, g))
        y, _ = B_tilde_step(tm, y)
    srt = sorted(ts)
    gaps = [(srt[i], srt[i + 1]) for i in range(len(srt) - 1)]
    gaps.append((srt[-1], srt[0] + 1.0))
    gaps.sort(key=lambda g: g[0] - g[1])
    return CantorApprox(ts, gaps, rec_a, rec_ah, getattr(tm.param, "precision", 0))
