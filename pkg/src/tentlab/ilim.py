"""Finite-depth inverse limit: threads, fibers, reconstruction, consecutive pairs, flat arcs, boxes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import QL, Real, gap, same
from .errors import DomainError, NotInY, NotRealizable
from .tent import PC_CAP, Word, parity_key

GUARD = 8


@dataclass(frozen=True)
class Thread:
    """A backward orbit <x_0, x_1, ..., x_r> with f(x_{i+1}) = x_i.

    `word` is the branch word: symbol i is the side of x_{i+1} (c counts as 1).
    """

    coords: Tuple[Real, ...]
    word: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def depth(self) -> int:
        return len(self.coords) - 1

    @property
    def x0(self) -> Real:
        return self.coords[0]

    def branch_word(self) -> Word:
        return Word(self.word)

    def floats(self) -> List[float]:
        return [float(v) for v in self.coords]

    def agrees(self, other: "Thread", upto: Optional[int] = None) -> bool:
        """Coordinate-wise equality (exact, or enclosure overlap)."""
        if self.depth != other.depth:
            raise DomainError("threads of different depth")
        n = len(self.coords) if upto is None else upto + 1
        return all(same(u, v) for u, v in zip(self.coords[:n], other.coords[:n]))

    def max_gap(self, other: "Thread") -> float:
        if self.depth != other.depth:
            raise DomainError("threads of different depth")
        return max(gap(u, v) for u, v in zip(self.coords, other.coords))

    def truncate(self, r: int) -> "Thread":
        if r > self.depth:
            raise DomainError("cannot truncate to a larger depth")
        return Thread(self.coords[: r + 1], self.word[:r])

    def tail(self, k: int) -> "Thread":
        return Thread(self.coords[k:], self.word[k:])

    def metric(self, other: "Thread") -> float:
        """sum_i |x_i - y_i| / 2^i over the common depth."""
        if self.depth != other.depth:
            raise DomainError("threads of different depth")
        return sum(gap(u, v) / 2.0 ** i for i, (u, v) in enumerate(zip(self.coords, other.coords)))


def is_exactly(v: Real, ref: Real) -> bool:
    """Exact equality; for intervals both must be the same point enclosure."""
    if isinstance(v, QL):
        return v == ref
    return v.lo == v.hi and ref.lo == ref.hi and v.lo == ref.lo


def fhat(tm, t: Thread) -> Thread:
    """The shift <x_0, x_1, ...> -> <f(x_0), x_0, x_1, ...>."""
    x0 = t.x0
    return Thread((tm._f(x0),) + t.coords, (tm.symbol(x0),) + t.word)


def fhat_inverse(t: Thread) -> Thread:
    if t.depth < 1:
        raise DomainError("a depth-0 thread has no f-hat preimage at finite depth")
    return Thread(t.coords[1:], t.word[1:])


# ---------------------------------------------------------------------------
# fibers


@dataclass
class FiberApprox:
    x: Real
    depth: int
    threads: List[Thread]
    sorted: bool = True
    in_pc: bool = False

    @property
    def words(self) -> List[Word]:
        return [t.branch_word() for t in self.threads]

    def __len__(self) -> int:
        return len(self.threads)


def _extend(tm, threads: List[Thread]) -> List[Thread]:
    out = []
    for t in threads:
        for y, s in tm._preimages(t.coords[-1]):
            out.append(Thread(t.coords + (y,), t.word + (s,)))
    return out


def fiber(tm, x, r: int, pc_cap: int = PC_CAP) -> FiberApprox:
    """All depth-r threads over x, sorted by the unimodal order of their branch words.

    When x is (detected as) a post-critical point the order is left as enumerated.
    """
    return tm.escalating(lambda t: _fiber(t, t.num(x), r, pc_cap))


def _fiber(tm, x: Real, r: int, pc_cap: int) -> FiberApprox:
    tm.check_in_I(x)
    threads = [Thread((x,), ())]
    for _ in range(r):
        threads = _extend(tm, threads)
    pc = tm.in_pc(x, pc_cap)
    if not pc:
        threads.sort(key=lambda t: parity_key(t.word))
    return FiberApprox(x, r, threads, sorted=not pc, in_pc=pc)


def reconstruct(tm, x, s) -> Thread:
    """The thread over x whose branch word is s."""
    word = s.symbols if isinstance(s, Word) else tuple(s)
    return tm.escalating(lambda t: _reconstruct(t, t.num(x), word))


def _reconstruct(tm, x: Real, word: Sequence[int]) -> Thread:
    tm.check_in_I(x)
    coords = [x]
    used = []
    for i, s in enumerate(word):
        pre = tm._preimages(coords[-1])
        if len(pre) == 1 and pre[0][1] == 1 and tm._is_b(coords[-1]):
            y, b = pre[0]  # the only preimage of b is c
        else:
            match = [p for p in pre if p[1] == s]
            if not match:
                raise NotRealizable(f"symbol {s} at position {i} has no preimage")
            y, b = match[0]
        coords.append(y)
        used.append(b)
    return Thread(tuple(coords), tuple(used))


# ---------------------------------------------------------------------------
# consecutive elements


def _extreme_tail_table(tm, t: Thread) -> List[Tuple[bool, bool]]:
    """For each level j, whether the tail from j follows e((x_j)_l) and e((x_j)_u).

    Built from the deep end: the B~-inverse rule picks, from an upper point, the
    right preimage on the lower copy; from a lower point at or above f(a), the
    left preimage on the lower copy; below f(a), the right preimage on the upper copy.
    """
    r = t.depth
    table: List[Tuple[bool, bool]] = [(True, True)] * (r + 1)
    for j in range(r - 1, -1, -1):
        x, s = t.coords[j], t.word[j]
        low_next, up_next = table[j + 1]
        if tm._is_b(x):
            ok = low_next
            table[j] = (ok, ok)
            continue
        up = s == 1 and low_next
        if x >= tm.fa:
            lo = s == 0 and low_next
        else:
            lo = s == 1 and up_next
        table[j] = (lo, up)
    return table


def consecutive(tm, t1: Thread, t2: Thread, guard: int = GUARD) -> bool:
    """Decide whether two threads over the same point are consecutive.

    With k the first level where they differ, both tails from k must be
    truncated upper extreme elements, and k must leave `guard` levels of depth.
    """
    if t1.depth != t2.depth:
        raise DomainError("threads of different depth")
    if not same(t1.x0, t2.x0):
        raise DomainError("threads lie over different points")
    k = first_difference(t1, t2)
    if k is None or k > t1.depth - guard:
        return False
    return _extreme_tail_table(tm, t1)[k][1] and _extreme_tail_table(tm, t2)[k][1]


def first_difference(t1: Thread, t2: Thread) -> Optional[int]:
    if t1.word and t2.word:
        for i, (u, v) in enumerate(zip(t1.word, t2.word)):
            if u != v:
                return i + 1
        return None
    for i, (u, v) in enumerate(zip(t1.coords, t2.coords)):
        if not same(u, v):
            return i
    return None


def consecutive_pairs(tm, fib: FiberApprox, guard: int = GUARD) -> List[Tuple[int, int]]:
    """All consecutive pairs of a fiber, as sorted index pairs (i < j)."""
    r = fib.depth
    tables = [_extreme_tail_table(tm, t) for t in fib.threads]
    pairs = set()
    for k in range(1, r - guard + 1):
        groups: Dict[Tuple[int, ...], Dict[int, int]] = {}
        for idx, t in enumerate(fib.threads):
            if tables[idx][k][1]:
                groups.setdefault(t.word[: k - 1], {})[t.word[k - 1]] = idx
        for g in groups.values():
            if len(g) == 2:
                i, j = sorted(g.values())
                if not same(fib.threads[i].coords[k], fib.threads[j].coords[k]):
                    pairs.add((i, j))
    return sorted(pairs)


# ---------------------------------------------------------------------------
# 0-flat arcs and 0-boxes


@dataclass(frozen=True)
class FlatArc:
    word: Tuple[int, ...]
    J: Tuple[Real, Real]
    endpoints: Tuple[Thread, Thread]

    @property
    def depth(self) -> int:
        return len(self.word)

    def branch_word(self) -> Word:
        return Word(self.word)

    def length(self):
        return self.J[1] - self.J[0]


def _apply_word(tm, x: Real, word: Sequence[int]) -> Thread:
    coords = [x]
    for s in word:
        y = coords[-1] * tm.inv_lam
        coords.append(y if s == 0 else 1 - y)
    return Thread(tuple(coords), tuple(word))


def flat_arc_through(tm, t: Thread) -> FlatArc:
    """The maximal interval J around x_0 over which t's branch word pulls back injectively."""
    for i, v in enumerate(t.coords[1:], start=1):
        if is_exactly(v, tm.c):
            raise DomainError(f"coordinate {i} equals c: the thread is an arc endpoint")
    word = t.word
    lo, hi = tm.a, tm.b
    # x_i = A + B x_0 with B = +-lam^-i; constraint x_i >= f(a) where s_i = 0
    A, Bc = tm.num(0), tm.num(1)
    for i, s in enumerate(word):
        if s == 0:
            bound = (tm.fa - A) / Bc
            if Bc > 0:
                if bound > lo:
                    lo = bound
            elif bound < hi:
                hi = bound
        A, Bc = (A * tm.inv_lam, Bc * tm.inv_lam) if s == 0 else (1 - A * tm.inv_lam, -(Bc * tm.inv_lam))
    return FlatArc(tuple(word), (lo, hi), (_apply_word(tm, lo, word), _apply_word(tm, hi, word)))


@dataclass(frozen=True)
class ZeroBox:
    J: Tuple[Real, Real]
    depth: int
    arcs: Tuple[FlatArc, ...]
    pc_cap: int = PC_CAP

    def thread_over(self, tm, arc: FlatArc, x) -> Thread:
        return _apply_word(tm, tm.num(x), arc.word)


def check_in_Y(tm, K: Tuple[Real, Real], cap: int = PC_CAP) -> None:
    lo, hi = K
    for i, v in enumerate(tm.critical_orbit(cap), start=1):
        if not (v < lo or v > hi):
            raise NotInY(f"f^{i}(c) = {float(v):.12g} lies in K")


def zero_box(tm, K, r: int, cap: int = PC_CAP) -> ZeroBox:
    """pi_0^-1(K) at depth r as a disjoint union of 0-flat arcs over K."""
    lo, hi = tm.num(K[0]), tm.num(K[1])
    if not lo < hi:
        raise DomainError("K must be a non-degenerate interval")
    tm.check_in_I(lo)
    tm.check_in_I(hi)
    check_in_Y(tm, (lo, hi), cap)
    mid = (lo + hi) / 2
    fib = fiber(tm, mid, r, cap)
    arcs = tuple(FlatArc(t.word, (lo, hi), (_apply_word(tm, lo, t.word), _apply_word(tm, hi, t.word)))
                 for t in fib.threads)
    return ZeroBox((lo, hi), r, arcs, cap)
