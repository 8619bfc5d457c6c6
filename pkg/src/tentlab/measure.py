"""Invariant density, fiber measures alpha_x, and the measure identities as checkable numbers."""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .arith import QL, Real
from .errors import DomainError, NotConverged, NotMarkov, Uncertain
from .ilim import FlatArc, Thread, ZeroBox
from .tent import TentMap


@dataclass
class Density:
    """The invariant density phi on I = [a, b], normalized to total mass 1.

    kind "markov": exact Q(lambda) values on the cells cut by c and the critical orbit.
    kind "grid": cell averages on N equal cells (fixed point of the cell-averaged operator).
    kind "series": phi = A (1 + sum_n w_n 1[a, f^n(c)]), truncated where the weights drop below 1e-18.
    """

    kind: str
    lam: float
    a: float
    b: float
    # markov
    breaks: List[Real] = field(default_factory=list)
    values: List[Real] = field(default_factory=list)
    tm: Optional[TentMap] = None
    # grid
    cells: Optional[np.ndarray] = None
    residual: Optional[float] = None
    iterations: int = 0
    # series
    points: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    scale: float = 1.0
    # float views used for vectorized evaluation
    _fbreaks: Optional[np.ndarray] = None
    _fvalues: Optional[np.ndarray] = None
    _sorted_pts: Optional[np.ndarray] = None
    _suffix: Optional[np.ndarray] = None

    @property
    def exact(self) -> bool:
        return self.kind == "markov"

    # -- evaluation -----------------------------------------------------------
    def value(self, x: Real):
        """phi(x): an exact Q(lambda) value for Markov densities on exact points, else a float."""
        if self.kind == "markov" and isinstance(x, QL):
            i = _locate(self.breaks, x)
            return self.values[i]
        return float(self.evaluate(np.array([float(x)]))[0])

    def __call__(self, x) -> float:
        return float(self.evaluate(np.array([float(x)]))[0])

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.kind == "grid":
            n = len(self.cells)
            h = (self.b - self.a) / n
            idx = np.clip(np.floor((xs - self.a) / h).astype(np.int64), 0, n - 1)
            return self.cells[idx]
        if self.kind == "markov":
            idx = np.searchsorted(self._fbreaks, xs, side="right") - 1
            idx = np.clip(idx, 0, len(self._fvalues) - 1)
            return self._fvalues[idx]
        k = np.searchsorted(self._sorted_pts, xs, side="left")
        return self.scale * (1.0 + self._suffix[k])

    def integral(self, lo: float, hi: float) -> float:
        """The integral of phi over [lo, hi] (exact for the step representations, up to rounding)."""
        lo, hi = max(float(lo), self.a), min(float(hi), self.b)
        if hi <= lo:
            return 0.0
        if self.kind == "series":
            tot = hi - lo
            over = np.clip(np.minimum(self.points, hi) - lo, 0.0, None)
            return self.scale * (tot + float(np.dot(self.weights, over)))
        if self.kind == "grid":
            n = len(self.cells)
            edges = self.a + (self.b - self.a) * np.arange(n + 1) / n
        else:
            edges = self._fbreaks
        left = np.clip(edges[:-1], lo, hi)
        right = np.clip(edges[1:], lo, hi)
        vals = self.cells if self.kind == "grid" else self._fvalues
        return float(np.dot(vals, right - left))

    def minimum(self) -> float:
        if self.kind == "grid":
            return float(self.cells.min())
        if self.kind == "markov":
            return float(self._fvalues.min())
        # the series is a step function with jumps at its points: check every step
        xs = np.concatenate(([self.a], self._sorted_pts, [self.b]))
        probes = np.concatenate((xs, (xs[:-1] + xs[1:]) / 2))
        probes = probes[(probes >= self.a) & (probes <= self.b)]
        return float(self.evaluate(probes).min())

    def maximum(self) -> float:
        if self.kind == "grid":
            return float(self.cells.max())
        if self.kind == "markov":
            return float(self._fvalues.max())
        xs = np.concatenate(([self.a], self._sorted_pts, [self.b]))
        probes = np.concatenate((xs, (xs[:-1] + xs[1:]) / 2))
        probes = probes[(probes >= self.a) & (probes <= self.b)]
        return float(self.evaluate(probes).max())

    def exact_mass(self) -> Real:
        if self.kind != "markov":
            raise DomainError("only Markov densities carry exact values")
        tot = self.tm.num(0)
        for i, v in enumerate(self.values):
            tot = tot + v * (self.breaks[i + 1] - self.breaks[i])
        return tot

    def rows(self, n: int = 1024) -> List[Tuple[float, float]]:
        xs = self.a + (self.b - self.a) * (np.arange(n) + 0.5) / n
        return list(zip(xs.tolist(), self.evaluate(xs).tolist()))

    def describe(self) -> dict:
        out = {"kind": self.kind, "lambda": self.lam, "a": self.a, "b": self.b,
               "min": self.minimum(), "max": self.maximum()}
        if self.kind == "markov":
            out["breaks"] = [float(p) for p in self.breaks]
            out["values"] = [str(v) for v in self.values]
        if self.kind == "grid":
            out.update(cells=len(self.cells), residual=self.residual, iterations=self.iterations)
        if self.kind == "series":
            out.update(terms=len(self.points))
        return out


def _locate(breaks: Sequence[Real], x: Real) -> int:
    """Index of the cell [p_i, p_{i+1}) holding x; the last cell is closed at b."""
    lo, hi = 0, len(breaks) - 1
    if x < breaks[0] or x > breaks[-1]:
        raise DomainError("point outside I")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if x < breaks[mid]:
            hi = mid
        else:
            lo = mid
    return lo


def _cmp(u: Real, v: Real) -> int:
    return -1 if u < v else (1 if v < u else 0)


# ---------------------------------------------------------------------------
# Markov (exact)


def density_markov(tm: TentMap) -> Density:
    """Exact piecewise-constant density for a post-critically finite algebraic slope."""
    if not tm.exact:
        raise NotMarkov("exact Markov densities need an algebraic slope")
    prof = tm.postcritical_profile()
    if not prof.finite:
        raise NotMarkov(f"critical orbit is not finite within the cap ({prof})")
    count = prof.period if prof.kind == "PeriodicC" else prof.preperiod + prof.period - 1
    pts = set(tm.critical_orbit(count)) | {tm.c}
    breaks = sorted(pts, key=functools.cmp_to_key(_cmp))
    n = len(breaks) - 1
    index = {p: i for i, p in enumerate(breaks)}
    # M[i][j] = 1 when f(C_i) covers C_j
    cover = []
    for i in range(n):
        u, v = tm._f(breaks[i]), tm._f(breaks[i + 1])
        lo, hi = (u, v) if u < v else (v, u)
        cover.append(range(index[lo], index[hi]))
    # solve lam phi_j = sum_{i: C_j in f(C_i)} phi_i
    L = tm.lam
    zero = tm.num(0)
    rows = []
    for j in range(n):
        row = [zero] * n
        row[j] = row[j] - L
        rows.append(row)
    for i in range(n):
        for j in cover[i]:
            rows[j][i] = rows[j][i] + 1
    phi = _nullvector(rows, tm)
    mass = zero
    for i in range(n):
        mass = mass + phi[i] * (breaks[i + 1] - breaks[i])
    inv = 1 / mass
    values = [v * inv for v in phi]
    d = Density("markov", tm.param.lambda_value, float(tm.a), float(tm.b),
                breaks=breaks, values=values, tm=tm)
    d._fbreaks = np.array([float(p) for p in breaks])
    d._fvalues = np.array([float(v) for v in values])
    return d


def _nullvector(rows: List[List[Real]], tm: TentMap) -> List[Real]:
    """A vector spanning the kernel of a square matrix over Q(lambda) (kernel must be a line)."""
    A = [list(r) for r in rows]
    n = len(A)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if not A[i][col].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][col]
        A[r] = [v * inv for v in A[r]]
        for i in range(n):
            if i != r and not A[i][col].is_zero():
                fac = A[i][col]
                A[i] = [vi - fac * vr for vi, vr in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise NotMarkov(f"transfer system has a {len(free)}-dimensional kernel")
    f0 = free[0]
    x = [tm.num(0)] * n
    x[f0] = tm.num(1)
    for row_i, col in enumerate(pivots):
        x[col] = -A[row_i][f0]
    return x


# ---------------------------------------------------------------------------
# grid (cell averages)


def _ulam_entries(lam: float, a: float, b: float, n: int):
    """Sparse transfer entries (source cell, target cell, weight) of the cell-averaged operator."""
    h = (b - a) / n
    edges = a + h * np.arange(n + 1)
    lo, hi = edges[:-1], edges[1:]
    pieces_src, pieces_u, pieces_v = [], [], []
    # left branch x -> lam x on [lo, min(hi, c)], right branch x -> lam (1 - x) on [max(lo, c), hi]
    l_hi = np.minimum(hi, 0.5)
    m = lo < l_hi
    idx = np.nonzero(m)[0]
    pieces_src.append(idx)
    pieces_u.append(lam * lo[m])
    pieces_v.append(lam * l_hi[m])
    r_lo = np.maximum(lo, 0.5)
    m = r_lo < hi
    idx = np.nonzero(m)[0]
    pieces_src.append(idx)
    pieces_u.append(lam * (1 - hi[m]))
    pieces_v.append(lam * (1 - r_lo[m]))
    src = np.concatenate(pieces_src)
    u = np.clip(np.concatenate(pieces_u), a, b)
    v = np.clip(np.concatenate(pieces_v), a, b)
    rows, cols, ws = [], [], []
    j0 = np.clip(np.floor((u - a) / h).astype(np.int64), 0, n - 1)
    for off in range(4):
        j = j0 + off
        ok = j < n
        jl = a + h * j
        over = np.clip(np.minimum(v, jl + h) - np.maximum(u, jl), 0.0, None)
        keep = ok & (over > 0)
        rows.append(src[keep])
        cols.append(j[keep])
        ws.append(over[keep] / (lam * h))
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(ws)


def density_grid(tm: TentMap, N: int = 4096, tol: float = 1e-12, max_iters: int = 2000) -> Density:
    """Iterate the transfer operator on cell averages from the uniform density until the L1 change < tol."""
    lam, a, b = tm.param.lambda_value, float(tm.a), float(tm.b)
    src, dst, w = _ulam_entries(lam, a, b, N)
    h = (b - a) / N

    def step(p):
        return np.bincount(dst, weights=p[src] * w, minlength=N)

    phi = np.full(N, 1.0 / (b - a))
    for k in range(1, max_iters + 1):
        new = step(phi)
        change = float(np.abs(new - phi).sum() * h)
        phi = new
        if change < tol:
            break
    else:
        raise NotConverged(f"no convergence in {max_iters} iterations (last L1 change {change:.3g})")
    phi = phi / (phi.sum() * h)
    residual = float(np.abs(step(phi) - phi).max())
    return Density("grid", lam, a, b, cells=phi, residual=residual, iterations=k, tm=tm)


# ---------------------------------------------------------------------------
# kneading series


def density_series(tm: TentMap, cutoff: float = 1e-18) -> Density:
    """phi from the critical orbit: the transfer operator maps 1[a, t] to a
    combination of 1[a, f(t)], 1[a, f(a)] and the constant, so a fixed point
    1 + sum_{n>=3} w_n 1[a, f^n(c)] has w_{n+1} = w_n s_n / lam with s_n = +-1
    by the side of f^n(c), and w_3 = -1 / (lam + sum_n w_n / w_3).
    """
    lam = tm.param.lambda_value
    terms = int(math.ceil(math.log(1 / cutoff) / math.log(lam))) + 4
    orbit = tm.critical_orbit(terms + 3)  # orbit[k-1] = f^k(c)
    ratios = []
    prod = 1.0
    for n in range(3, terms + 3):
        ratios.append(prod)
        ck = orbit[n - 1]
        try:
            s = 1.0 if ck <= tm.c else -1.0
        except Uncertain:
            # both transfer formulas agree at t = c, so either sign is right there
            s = 1.0 if float(ck) <= 0.5 else -1.0
        prod *= s / lam
    ratios = np.array(ratios)
    w3 = -1.0 / (lam + ratios.sum())
    weights = w3 * ratios
    points = np.array([float(orbit[n - 1]) for n in range(3, terms + 3)])
    a, b = float(tm.a), float(tm.b)
    mass = (b - a) + float(np.dot(weights, points - a))
    d = Density("series", lam, a, b, points=points, weights=weights, scale=1.0 / mass, tm=tm)
    order = np.argsort(points, kind="stable")
    d._sorted_pts = points[order]
    sw = weights[order]
    d._suffix = np.concatenate((np.cumsum(sw[::-1])[::-1], [0.0]))
    return d


def density_auto(tm: TentMap) -> Density:
    """Markov when the slope is algebraic with a finite critical orbit, otherwise the series."""
    if tm.exact and tm.postcritical_profile().finite:
        return density_markov(tm)
    return density_series(tm)


# ---------------------------------------------------------------------------
# identities


def pf_residual_exact(d: Density, x: Real) -> Real:
    """phi(x) - sum_{f(y)=x} phi(y)/lam, exactly in Q(lambda)."""
    tm = d.tm
    tot = tm.num(0)
    for y, _ in tm._preimages(x):
        tot = tot + d.value(y)
    return d.value(x) - tot * tm.inv_lam


def pf_residual(d: Density, xs: np.ndarray) -> float:
    """sup over xs of |phi(x) - sum_{f(y)=x} phi(y)/lam| in floating point."""
    lam, a = d.lam, d.a
    xs = np.asarray(xs, dtype=float)
    fa = lam * a
    right = d.evaluate(1 - xs / lam)
    left = np.where(xs >= fa, d.evaluate(xs / lam), 0.0)
    return float(np.abs(d.evaluate(xs) - (left + right) / lam).max())


@dataclass(frozen=True)
class AlphaValue:
    value: Real
    depth: int
    density: str

    def __float__(self) -> float:
        return float(self.value)


def alpha_cylinder(d: Density, t: Thread, tm: Optional[TentMap] = None) -> AlphaValue:
    """alpha_x of the cylinder <x, y_1, ..., y_r> is phi(y_r) / lam^r."""
    tm = tm or d.tm
    r = t.depth
    if d.exact and isinstance(t.coords[-1], QL):
        return AlphaValue(d.value(t.coords[-1]) * tm.inv_lam_power(r), r, d.kind)
    return AlphaValue(d(t.coords[-1]) / d.lam ** r, r, d.kind)


def alpha_of_box(d: Density, box: ZeroBox, x, tm: Optional[TentMap] = None) -> AlphaValue:
    """alpha_x of a 0-box: the cylinder masses of the arcs' points over x."""
    tm = tm or d.tm
    x = tm.num(x)
    if x < box.J[0] or x > box.J[1]:
        raise DomainError("x lies outside the box interval")
    tot = None
    for arc in box.arcs:
        v = alpha_cylinder(d, box.thread_over(tm, arc, x), tm).value
        tot = v if tot is None else tot + v
    return AlphaValue(tot if tot is not None else 0.0, box.depth, d.kind)


def preimage_tree(lam: float, xs: np.ndarray, r: int) -> List[np.ndarray]:
    """All r-fold preimages of each x (NaN where a branch does not exist), one array per branch word."""
    a = lam - lam * lam / 2
    fa = lam * a
    level = [np.asarray(xs, dtype=float)]
    for _ in range(r):
        nxt = []
        for ys in level:
            left = np.where(ys >= fa, ys / lam, np.nan)
            nxt.append(left)
            nxt.append(1 - ys / lam)
        level = nxt
    return level


@dataclass(frozen=True)
class Disintegration:
    lhs: float
    rhs: float
    gap: float
    cells: int
    error_bound: float

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "gap": self.gap, "cells": self.cells,
                "quadrature_bound": self.error_bound}


def disintegration_check(d: Density, r: int, J: Tuple[float, float], cells: int = 4096) -> Disintegration:
    """Compare the integral over I of alpha_x(pi_r^-1 J) with mu(J), midpoint rule on `cells` cells.

    The integrand is a step function; `error_bound` is h/2 times its total variation estimate.
    """
    lo, hi = float(J[0]), float(J[1])
    h = (d.b - d.a) / cells
    xs = d.a + h * (np.arange(cells) + 0.5)
    total = np.zeros(cells)
    for ys in preimage_tree(d.lam, xs, r):
        ok = ~np.isnan(ys)
        inside = ok & (ys >= lo) & (ys <= hi)
        vals = np.zeros(cells)
        vals[inside] = d.evaluate(ys[inside])
        total += vals
    total /= d.lam ** r
    lhs = float(total.sum() * h)
    rhs = d.integral(lo, hi)
    variation = float(np.abs(np.diff(total)).sum()) + float(total[0] + total[-1])
    return Disintegration(lhs, rhs, abs(lhs - rhs), cells, h / 2 * variation)


def unstable_measure(arc: FlatArc, sub: Optional[Tuple[Real, Real]]) -> Real:
    """Lebesgue length of a subinterval of the arc's base interval."""
    if sub is None:
        return 0.0
    lo, hi = sub
    if lo < arc.J[0] or hi > arc.J[1] or hi < lo:
        raise DomainError("sub-interval is not contained in the arc's interval")
    return hi - lo


def birkhoff_histogram(lam: float, steps: int = 10 ** 7, bins: int = 1024, seed: int = 0,
                       burn_in: int = 1000) -> Tuple[np.ndarray, np.ndarray]:
    """Normalized visit histogram of one floating-point orbit of a random point of I."""
    a, b = lam - lam * lam / 2, lam / 2
    rng = random.Random(seed)
    x = a + (b - a) * rng.random()
    for _ in range(burn_in):
        x = lam * x if x <= 0.5 else lam * (1 - x)
    out = np.empty(steps)
    for i in range(steps):
        x = lam * x if x <= 0.5 else lam * (1 - x)
        out[i] = x
    counts, edges = np.histogram(out, bins=bins, range=(a, b))
    width = (b - a) / bins
    return counts / (steps * width), edges


def l1_distance(d: Density, other, cells: int = 1 << 14) -> float:
    """L1 distance on I between d and another density (or a histogram (values, edges))."""
    xs = d.a + (d.b - d.a) * (np.arange(cells) + 0.5) / cells
    h = (d.b - d.a) / cells
    mine = d.evaluate(xs)
    if isinstance(other, Density):
        theirs = other.evaluate(xs)
    else:
        values, edges = other
        idx = np.clip(np.searchsorted(edges, xs, side="right") - 1, 0, len(values) - 1)
        theirs = values[idx]
    return float(np.abs(mine - theirs).sum() * h)
