"""Tartans over 0-boxes, their compatibility/scaling/tameness checks, and the named property suites."""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import Interval, Parameter, QL, Real, gap, same
from .errors import (DomainError, EnteredGamma, InGrandOrbit, NotConverged, NotInY,
                     NotRealizable, TentlabError, Uncertain, UnknownSuite)
from .ilim import (FlatArc, Thread, _apply_word, check_in_Y, consecutive_pairs, fhat, fiber,
                   flat_arc_through, reconstruct, zero_box)
from .measure import (Density, alpha_cylinder, alpha_of_box, density_auto, density_grid,
                      birkhoff_histogram, density_markov, disintegration_check, l1_distance, pf_residual,
                      pf_residual_exact)
from .outside import (B_step, B_tilde_inverse_step, B_tilde_step, CirclePoint, Copy,
                      avoids_gamma_interior, chart_t, classify, extreme_element, grid,
                      heights_monotone, in_gamma, in_gamma_interior, lower, lower_extreme,
                      sweep, upper, upper_extreme)
from .tent import PC_CAP, Cmp, TentMap, parity_key, unimodal_cmp

PASS, FAIL, UNDECIDED = "Pass", "Fail", "Undecided"
TOL_EXACT = 1e-6
TOL_GRID = 1e-4

GOLDEN = 'poly:"-1,-1,1":interval:"1.6,1.7"'
# slopes with a finite critical orbit, used by the cross-validation suite
MARKOV_SPECS = (
    GOLDEN,
    'poly:"-1,-1,-1,1":interval:"1.8,1.9"',
    'poly:"2,-2,-1,-1,1":interval:"1.8,1.85"',
    'poly:"1,-1,-1,-1,1":interval:"1.7,1.75"',
    'poly:"-1,1,-1,-1,1":interval:"1.5,1.52"',
)


@dataclass
class Report:
    name: str
    status: str
    metrics: Dict[str, object] = field(default_factory=dict)
    provenance: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "metrics": _plain(self.metrics),
                "provenance": _plain(self.provenance)}


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return float(v)


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# ---------------------------------------------------------------------------
# tartans


@dataclass
class TartanPiece:
    """One 0-box with a row of stable fibers.

    `words` are the unstable arcs (sorted in unimodal order), `xs` the stable
    fiber bases (increasing), `cells` the part of K each stable fiber stands for,
    and `matrix[i][j]` the thread where arc i meets the fiber over xs[j].
    """

    K: Tuple[Real, Real]
    depth: int
    words: List[Tuple[int, ...]]
    xs: List[Real]
    cells: List[Tuple[Real, Real]]
    matrix: List[List[Thread]]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.words), len(self.xs)


@dataclass
class TartanApprox:
    tm: TentMap
    d: Density
    pieces: List[TartanPiece]
    iterate: int = 0

    @property
    def depth(self) -> int:
        return self.pieces[0].depth

    def summary(self) -> dict:
        return {"iterate": self.iterate, "depth": self.depth,
                "pieces": [{"K": [float(p.K[0]), float(p.K[1])], "arcs": p.shape[0],
                            "stable": p.shape[1]} for p in self.pieces]}


def build_tartan(tm: TentMap, d: Density, K, r: int, n_stable: int, cap: int = PC_CAP) -> TartanApprox:
    """R^u = the arcs of zero_box(K, r); R^s = fibers over the midpoints of n equal cells of K.

    `cap` bounds the critical orbit checked against K.
    """
    if n_stable < 1:
        raise DomainError("need at least one stable fiber")
    box = zero_box(tm, K, r, cap)
    lo, hi = box.J
    step = (hi - lo) / n_stable
    cells = [(lo + step * j, lo + step * (j + 1)) for j in range(n_stable)]
    xs = [(u + v) / 2 for u, v in cells]
    words = [arc.word for arc in box.arcs]
    matrix = [[reconstruct(tm, x, w) for x in xs] for w in words]
    return TartanApprox(tm, d, [TartanPiece((lo, hi), r, words, xs, cells, matrix)])


def _affine(tm: TentMap, word: Sequence[int]) -> Tuple[float, float]:
    """y_r = A + B x_0 along a branch word, in floats."""
    inv = 1.0 / tm.param.lambda_value
    A, B = 0.0, 1.0
    for s in word:
        A, B = (A * inv, B * inv) if s == 0 else (1.0 - A * inv, -B * inv)
    return A, B


def _affine_all(tm: TentMap, word: Sequence[int]) -> Tuple[List[float], List[float]]:
    """Float coefficients of every coordinate x_i = A_i + B_i x_0 along a branch word."""
    inv = 1.0 / tm.param.lambda_value
    As, Bs = [0.0], [1.0]
    for s in word:
        A, B = As[-1], Bs[-1]
        A, B = (A * inv, B * inv) if s == 0 else (1.0 - A * inv, -B * inv)
        As.append(A)
        Bs.append(B)
    return As, Bs


def _alpha_float(tm: TentMap, d: Density, t: Thread) -> float:
    return float(alpha_cylinder(d, t, tm).value)


def _rectangle_gap(tm: TentMap, d: Density, piece: TartanPiece, S: Sequence[int], U: Sequence[int],
                   alphas: np.ndarray, nodes: int) -> Tuple[float, float, float]:
    """(product, disintegration, gap) for stable indices S and unstable indices U."""
    if not S or not U:
        return 0.0, 0.0, 0.0
    lam_r = d.lam ** piece.depth
    prod = 0.0
    dis = 0.0
    coeffs = [_affine(tm, piece.words[i]) for i in U]
    for j in S:
        u, v = float(piece.cells[j][0]), float(piece.cells[j][1])
        h = (v - u) / nodes
        xq = u + h * (np.arange(nodes) + 0.5)
        prod += float(alphas[U, j].sum()) * (v - u)
        acc = np.zeros(nodes)
        for A, B in coeffs:
            acc += d.evaluate(A + B * xq)
        dis += float(acc.sum()) * h / lam_r
    return prod, dis, abs(prod - dis)


def _alpha_matrix(t: TartanApprox, piece: TartanPiece) -> np.ndarray:
    return np.array([[_alpha_float(t.tm, t.d, th) for th in row] for row in piece.matrix])


def check_compatibility(t: TartanApprox, tol: Optional[float] = None, rectangles: int = 20,
                        seed: int = 0, nodes: int = 64) -> Report:
    """Product of the fiber measures against the disintegration value on random rectangles.

    The disintegration side integrates alpha_x over each cell by the midpoint
    rule on `nodes` points; the product side uses alpha at the cell's stable fiber.
    """
    tol = (TOL_EXACT if t.d.exact else TOL_GRID) if tol is None else tol
    rng = random.Random(seed)
    worst = 0.0
    full = []
    holo = 0.0
    for piece in t.pieces:
        alphas = _alpha_matrix(t, piece)
        nu, ns = piece.shape
        p, q, g = _rectangle_gap(t.tm, t.d, piece, list(range(ns)), list(range(nu)), alphas, nodes)
        full.append({"product": p, "disintegration": q, "gap": g})
        worst = max(worst, g)
        e = _rectangle_gap(t.tm, t.d, piece, [], [], alphas, nodes)[2]
        worst = max(worst, e)
        for _ in range(rectangles):
            S = sorted(rng.sample(range(ns), rng.randint(1, ns)))
            U = sorted(rng.sample(range(nu), rng.randint(1, nu)))
            worst = max(worst, _rectangle_gap(t.tm, t.d, piece, S, U, alphas, nodes)[2])
        # holonomy along each unstable arc: its cylinder mass is the same on every stable fiber
        if ns > 1:
            holo = max(holo, float((alphas.max(axis=1) - alphas.min(axis=1)).max()))
    ok = worst <= tol and holo <= tol
    return Report("tartan_compatibility", _status(ok),
                  {"max_gap": worst, "holonomy_gap": holo, "tol": tol, "full_rectangle": full,
                   "rectangles": rectangles, "quadrature_nodes": nodes, **t.summary()},
                  {"lambda": t.tm.param.spec, "density": t.d.kind, "seed": seed})


def _rmax(x: Real, y: Real) -> Real:
    """max; overlapping enclosures are the same point, so either will do."""
    try:
        return y if x < y else x
    except Uncertain:
        return x


def _rmin(x: Real, y: Real) -> Real:
    try:
        return x if x < y else y
    except Uncertain:
        return x


def _image_pieces(t: TartanApprox) -> Tuple[List[TartanPiece], Dict[str, float]]:
    """Apply f-hat to every fiber, splitting each piece at c."""
    tm = t.tm
    out = []
    worst_len = 0.0
    worst_word = 0.0
    for piece in t.pieces:
        lo, hi = piece.K
        sides = []
        if hi <= tm.c:
            sides.append((0, lo, hi))
        elif not lo < tm.c:
            sides.append((1, lo, hi))
        else:
            sides.append((0, lo, tm.c))
            sides.append((1, tm.c, hi))
        for s, u, v in sides:
            cells, xs, cols = [], [], []
            for j, (cu, cv) in enumerate(piece.cells):
                iu = _rmax(u, cu)
                iv = _rmin(cv, v)
                if not iu < iv:
                    continue
                x = piece.xs[j]
                inside = not (x < iu) and not (x > iv)
                if inside:
                    col = [fhat(tm, row[j]) for row in piece.matrix]
                    xr = x
                else:
                    # the cell is split by c and its fiber lies on the other side
                    xr = (iu + iv) / 2
                    col = [fhat(tm, reconstruct(tm, xr, w)) for w in piece.words]
                fu, fv = tm._f(iu), tm._f(iv)
                cells.append((fu, fv) if s == 0 else (fv, fu))
                xs.append(tm._f(xr))
                cols.append(col)
            if not xs:
                continue
            fu, fv = tm._f(u), tm._f(v)
            K = (fu, fv) if s == 0 else (fv, fu)
            worst_len = max(worst_len, abs(float(K[1] - K[0]) - d_lam(tm) * float(v - u)))
            words = [(s,) + w for w in piece.words]
            matrix = [[cols[j][i] for j in range(len(xs))] for i in range(len(words))]
            if s == 1:
                cells.reverse()
                xs.reverse()
                matrix = [row[::-1] for row in matrix]
            order = sorted(range(len(words)), key=lambda i: parity_key(words[i]))
            words = [words[i] for i in order]
            matrix = [matrix[i] for i in order]
            # each image thread is the image arc's point over the image fiber
            for i, w in enumerate(words):
                A, B = _affine_all(tm, w)
                for j, x in enumerate(xs):
                    th = matrix[i][j]
                    if th.word != w or not same(th.x0, x):
                        worst_word = math.inf
                        continue
                    xf = float(x)
                    worst_word = max(worst_word, max(abs(v - (p + q * xf)) for v, p, q in zip(th.floats(), A, B)))
            out.append(TartanPiece(K, piece.depth + 1, words, xs, cells, matrix))
    return out, {"length_gap": worst_len, "thread_gap": worst_word}


def d_lam(tm: TentMap) -> float:
    return tm.param.lambda_value


def _orientation_ok(piece: TartanPiece) -> bool:
    xs_ok = all(piece.xs[j] < piece.xs[j + 1] for j in range(len(piece.xs) - 1))
    words_ok = all(unimodal_cmp(piece.words[i], piece.words[i + 1]) == Cmp.LESS
                   for i in range(len(piece.words) - 1))
    return xs_ok and words_ok


def check_scaling(t: TartanApprox, iterates: int = 1, tol: Optional[float] = None) -> Report:
    """f-hat applied to the tartan: unstable lengths grow by lam, stable masses shrink by lam,
    and the image is again a tartan (total intersection matrix, consistent orientation)."""
    tol = (TOL_EXACT if t.d.exact else TOL_GRID) if tol is None else tol
    tm, d = t.tm, t.d
    cur = t
    rows = []
    ok = True
    for k in range(iterates):
        before = {}
        for piece in cur.pieces:
            for row in piece.matrix:
                for th in row:
                    before[id(th)] = alpha_cylinder(d, th, tm).value
        pieces, gaps = _image_pieces(cur)
        # stable scaling: alpha of f-hat(cylinder) against alpha / lam, exactly when possible
        worst_alpha = 0.0
        for piece in cur.pieces:
            for row in piece.matrix:
                for th in row:
                    a0 = before[id(th)]
                    a1 = alpha_cylinder(d, fhat(tm, th), tm).value
                    if isinstance(a0, QL) and isinstance(a1, QL):
                        diff = a1 - a0 * tm.inv_lam
                        worst_alpha = max(worst_alpha, 0.0 if diff.is_zero() else abs(float(diff)))
                    else:
                        worst_alpha = max(worst_alpha, abs(float(a1) - float(a0) / d.lam))
        total = all(len(row) == len(p.xs) for p in pieces for row in p.matrix)
        distinct = all(len({tuple(float(v) for v in p.matrix[i][j].coords) for i in range(len(p.words))})
                       == len(p.words) for p in pieces for j in range(len(p.xs)))
        oriented = all(_orientation_ok(p) for p in pieces)
        nxt = TartanApprox(tm, d, pieces, cur.iterate + 1)
        comp = check_compatibility(nxt, tol)
        step_ok = (worst_alpha <= 1e-12 and gaps["length_gap"] <= 1e-9 and gaps["thread_gap"] <= 1e-9
                   and total and distinct and oriented and comp.passed)
        ok = ok and step_ok
        rows.append({"iterate": k + 1, "alpha_scaling_gap": worst_alpha, **gaps, "total": total,
                     "distinct": distinct, "oriented": oriented,
                     "compatibility_gap": comp.metrics["max_gap"], "pieces": len(pieces)})
        cur = nxt
    return Report("tartan_scaling", _status(ok), {"iterates": rows, "tol": tol},
                  {"lambda": tm.param.spec, "density": d.kind})


def check_regularity(t: TartanApprox, deltas: int = 10, samples: int = 5) -> Report:
    """Chart-coordinate shadow of regularity: the four stream-arc sides of small
    rectangles at each intersection point stay within 2 delta of it."""
    tm, d = t.tm, t.d
    worst = 0.0
    piece = t.pieces[0]
    alphas = _alpha_matrix(t, piece)
    psi = np.cumsum(alphas, axis=0)  # psi[i][j]: mass weakly below arc i on fiber j
    coeffs = [_affine(tm, w) for w in piece.words]
    lam_r = d.lam ** piece.depth
    lo, hi = float(piece.K[0]), float(piece.K[1])
    ok = True
    for j, x in enumerate(piece.xs):
        xf = float(x)
        for i in range(len(piece.words)):
            for k in range(deltas):
                delta = (hi - lo) / 4 / 2 ** k
                x2 = min(hi, xf + delta) if xf + delta <= hi else max(lo, xf - delta)
                # neighbour arc within delta in psi, else the same arc
                i2 = i + 1 if i + 1 < len(piece.words) and psi[i + 1, j] - psi[i, j] <= delta else i
                ts = np.linspace(min(xf, x2), max(xf, x2), samples)
                dev = 0.0
                for arc in {i, i2}:
                    A, B = coeffs[arc]
                    below = sum(d.evaluate(coeffs[m][0] + coeffs[m][1] * ts) for m in range(arc + 1)) / lam_r
                    dev = max(dev, float(np.abs(below - psi[i, j]).max()), abs(float(ts[-1] - ts[0])))
                worst = max(worst, dev / (2 * delta))
                if dev > 2 * delta + 1e-12:
                    ok = False
    return Report("regularity", _status(ok),
                  {"worst_ratio": worst, "deltas": deltas, "note": "chart-ball shadow, weaker than the full condition"},
                  {"lambda": tm.param.spec})


def check_tameness(tm: TentMap, d: Density, n_samples: int = 20, depth: int = 8, seed: int = 0) -> Report:
    """Cylinder masses at least k / lam^r and metric diameters at most 2^-r; flat arcs of diameter < 2|J|."""
    rng = random.Random(seed)
    k = d.minimum()
    lam = d.lam
    bound = k / lam ** depth
    min_ratio = math.inf
    worst_diam = 0.0
    worst_arc = 0.0
    ok = True
    for _ in range(n_samples):
        x = _random_point(tm, rng)
        try:
            fib = fiber(tm, x, depth)
        except TentlabError:
            continue
        for th in fib.threads:
            al = _alpha_float(tm, d, th)
            min_ratio = min(min_ratio, al / bound)
            if al < bound * (1 - 1e-12):
                ok = False
        # metric diameter of a cylinder: two deep continuations of one thread
        th = fib.threads[rng.randrange(len(fib))]
        ext = _continuations(tm, th, 12, rng)
        if len(ext) == 2:
            dm = ext[0].metric(ext[1])
            worst_diam = max(worst_diam, dm * 2 ** depth)
            if dm > 2.0 ** -depth:
                ok = False
        try:
            arc = flat_arc_through(tm, th)
        except DomainError:
            continue
        J = float(arc.J[1] - arc.J[0])
        diam = arc.endpoints[0].metric(arc.endpoints[1])
        if J > 0:
            worst_arc = max(worst_arc, diam / J)
            if diam >= 2 * J:
                ok = False
    return Report("tameness", _status(ok),
                  {"min_mass_ratio": min_ratio, "k": k, "depth": depth,
                   "diameter_over_2^-r": worst_diam, "arc_diameter_over_J": worst_arc,
                   "arc_bound_2lam/(2lam-1)": 2 * lam / (2 * lam - 1)},
                  {"lambda": tm.param.spec, "seed": seed})


def _continuations(tm: TentMap, t: Thread, extra: int, rng: random.Random) -> List[Thread]:
    """Two random extensions of t by `extra` levels that differ right after depth r."""
    pre = tm._preimages(t.coords[-1])
    out = []
    for first in pre[:2]:
        coords = list(t.coords) + [first[0]]
        word = list(t.word) + [first[1]]
        for _ in range(extra - 1):
            opts = tm._preimages(coords[-1])
            y, s = opts[rng.randrange(len(opts))]
            coords.append(y)
            word.append(s)
        out.append(Thread(tuple(coords), tuple(word)))
    if len(out) == 1:
        return []
    return out


# ---------------------------------------------------------------------------
# admissible boxes


# critical-orbit cap for randomly drawn boxes; at decimal slopes the orbit is
# dense, so no interval of useful width misses the full PC_CAP prefix
K_CAP = 64


def admissible_K(tm: TentMap, width: float, rng: random.Random, tries: int = 200,
                 cap: int = K_CAP) -> Tuple[Real, Real]:
    """A random interval of the given relative width that misses the critical orbit up to `cap`."""
    for _ in range(tries):
        lo = tm.a + (tm.b - tm.a) * Fraction(rng.randrange(1, 2 ** 16), 2 ** 16) * (1 - Fraction(width).limit_denominator(2 ** 20))
        hi = lo + (tm.b - tm.a) * Fraction(width).limit_denominator(2 ** 20)
        try:
            check_in_Y(tm, (lo, hi), cap)
        except NotInY:
            continue
        except Uncertain:
            continue
        return lo, hi
    raise NotInY("no admissible interval found")


def _random_point(tm: TentMap, rng: random.Random) -> Real:
    q = Fraction(rng.randrange(1, 2 ** 20), 2 ** 20)
    return tm.a + (tm.b - tm.a) * q


def _random_circle_point(tm: TentMap, rng: random.Random) -> CirclePoint:
    x = _random_point(tm, rng)
    return CirclePoint(x, Copy.UPPER if rng.random() < 0.5 else Copy.LOWER)


def _from_chart(tm: TentMap, t: Fraction) -> CirclePoint:
    t = t % 1
    if t < Fraction(1, 2):
        return lower(tm, tm.a + 2 * t * (tm.b - tm.a))
    return upper(tm, tm.b - (2 * t - 1) * (tm.b - tm.a))


# ---------------------------------------------------------------------------
# named suites


@dataclass
class SuiteContext:
    spec: str
    seed: int = 0
    depth: int = 20
    precision: int = 256
    _tm: Optional[TentMap] = None
    _d: Optional[Density] = None

    @property
    def tm(self) -> TentMap:
        if self._tm is None:
            self._tm = TentMap(Parameter.parse(self.spec, precision=self.precision))
        return self._tm

    @property
    def d(self) -> Density:
        if self._d is None:
            self._d = density_auto(self.tm)
        return self._d

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def prov(self, **extra) -> dict:
        return {"lambda": self.spec, "seed": self.seed, "depth": self.depth, **extra}


def _exact_orbit(ctx: SuiteContext) -> Report:
    tm = ctx.tm
    worst = 0
    ok = True
    if tm.exact:
        orbit = tm.critical_orbit(40)
        for bits in (64, 128, 256):
            for v in orbit:
                iv = v.interval(bits)
                m = v.interval(bits * 4)
                if not (iv.lo <= m.lo and m.hi <= iv.hi):
                    ok = False
            worst = bits
    else:
        lo = tm.at_precision(ctx.precision)
        hi = tm.at_precision(ctx.precision * 4)
        for u, v in zip(lo.critical_orbit(40), hi.critical_orbit(40)):
            if not (u.lo <= v.lo and v.hi <= u.hi):
                ok = False
    return Report("exact_orbit", _status(ok), {"steps": 40, "backend": "exact" if tm.exact else "interval"},
                  ctx.prov())


def _interval_outward(ctx: SuiteContext) -> Report:
    rng = ctx.rng("outward")
    bad = 0
    n = 1000
    for _ in range(n):
        qs = [Fraction(rng.randrange(1, 10 ** 6), rng.randrange(1, 10 ** 6)) for _ in range(4)]
        vals = []
        for bits in (53, 530):
            a, b, c, e = (Interval.exact(q, bits) for q in qs)
            vals.append(((a * b - c) / (e + 1) + a / (b + c)) * e)
        exact = ((qs[0] * qs[1] - qs[2]) / (qs[3] + 1) + qs[0] / (qs[1] + qs[2])) * qs[3]
        lo, hi = vals
        if not (lo.lo <= exact <= lo.hi and hi.lo <= exact <= hi.hi and lo.lo <= hi.lo and hi.hi <= lo.hi):
            bad += 1
    return Report("interval_outward", _status(bad == 0), {"samples": n, "violations": bad}, ctx.prov())


def _surely_lt(u: Real, v: Real) -> bool:
    """u < v, certified; overlapping enclosures count as not less."""
    try:
        return bool(u < v)
    except Uncertain:
        return False


def _core_invariant(ctx: SuiteContext) -> Report:
    tm, rng = ctx.tm, ctx.rng("core")
    bad = 0
    for _ in range(1000):
        y = tm.eval(_random_point(tm, rng))
        if _surely_lt(y, tm.a) or _surely_lt(tm.b, y):
            bad += 1
    for x in (tm.a, tm.b, tm.c):
        y = tm.eval(x)
        if _surely_lt(y, tm.a) or _surely_lt(tm.b, y):
            bad += 1
    return Report("core_invariant", _status(bad == 0), {"samples": 1003, "violations": bad}, ctx.prov())


def _hat_involution(ctx: SuiteContext) -> Report:
    tm, rng = ctx.tm, ctx.rng("hat")
    worst = 0.0
    for _ in range(500):
        x = tm.a + (tm.a_hat - tm.a) * Fraction(rng.randrange(1, 2 ** 20), 2 ** 20)
        if same(x, tm.c):
            continue
        h = tm.hat(x)
        worst = max(worst, gap(tm.hat(h), x), gap(tm.eval(h), tm.eval(x)))
    return Report("hat_involution", _status(worst <= (0 if tm.exact else 2.0 ** -100)),
                  {"max_gap": worst}, ctx.prov())


def _preimages_exact(ctx: SuiteContext) -> Report:
    tm, rng = ctx.tm, ctx.rng("pre")
    worst = 0.0
    for _ in range(500):
        y = _random_point(tm, rng)
        for x, _s in tm.preimages(y):
            worst = max(worst, gap(tm.eval(x), y))
    return Report("preimages", _status(worst <= (0 if tm.exact else 2.0 ** -100)), {"max_gap": worst},
                  ctx.prov())


def _order_reflection(ctx: SuiteContext, pairs: int = 2000, depth: int = 40) -> Report:
    """x < y with unambiguous itineraries never compare Greater."""
    lam = ctx.tm.param.lambda_value
    rng = ctx.rng("order")
    a, b = lam - lam * lam / 2, lam / 2
    bad = 0
    used = 0
    for _ in range(pairs):
        x, y = sorted(a + (b - a) * rng.random() for _ in range(2))
        tm = TentMap(Parameter.decimal(repr(lam)))
        wx = tm.itinerary(Fraction(x), depth)
        wy = tm.itinerary(Fraction(y), depth)
        if wx.ambiguous or wy.ambiguous:
            continue
        used += 1
        if unimodal_cmp(wx, wy) == Cmp.GREATER:
            bad += 1
    return Report("order_reflection", _status(bad == 0), {"pairs": used, "violations": bad, "depth": depth},
                  ctx.prov())


def _fa_p_ahat(ctx: SuiteContext) -> Report:
    rng = ctx.rng("fa")
    bad = 0
    for _ in range(100):
        lam = Fraction(141422, 100000) + Fraction(rng.randrange(1, 58577), 100000)
        tm = TentMap(Parameter.decimal(str(float(lam))))
        if not (tm.fa < tm.p_fix < tm.a_hat):
            bad += 1
    return Report("fa_p_ahat", _status(bad == 0), {"samples": 100, "violations": bad}, ctx.prov())


def _run_bound(tm: TentMap) -> int:
    """Longest possible run of backward coordinates below f(a).

    Below f(a) only the right preimage exists, and the right inverse branch
    contracts by 1/lam around p; a run ends once |x - p| < p - f(a).
    """
    lam = tm.param.lambda_value
    span = float(tm.b - tm.a)
    margin = float(tm.p_fix - tm.fa)
    return int(math.ceil(math.log(span / margin) / math.log(lam))) + 1


def _random_thread(tm: TentMap, r: int, rng: random.Random) -> Thread:
    x = _random_point(tm, rng)
    coords, word = [x], []
    for _ in range(r):
        opts = tm._preimages(coords[-1])
        y, s = opts[rng.randrange(len(opts))]
        coords.append(y)
        word.append(s)
    return Thread(tuple(coords), tuple(word))


def _many_choices(ctx: SuiteContext, n: int = 1000, r: int = 60) -> Report:
    tm = TentMap(Parameter.decimal(repr(ctx.tm.param.lambda_value), precision=512))
    rng = ctx.rng("choices")
    fewest = r
    longest = 0
    bound = _run_bound(tm)
    for _ in range(n):
        t = _random_thread(tm, r, rng)
        two = [not (v < tm.fa) and v < tm.b for v in t.coords[:-1]]
        fewest = min(fewest, sum(two))
        run = best = 0
        for flag in two:
            run = 0 if flag else run + 1
            best = max(best, run)
        longest = max(longest, best)
    K = max(longest, 1)
    ok = fewest >= max(5, math.ceil(r / (K + 1)) - 1) and longest <= bound
    return Report("many_choices", _status(ok),
                  {"threads": n, "depth": r, "fewest_two_preimage_coords": fewest,
                   "longest_run_below_fa": longest, "run_bound": bound}, ctx.prov())


def _lift_degree_one(ctx: SuiteContext, n: int = 1000) -> Report:
    tm = ctx.tm
    vals = []
    for i in range(n + 1):
        t = Fraction(i, n)
        y = _from_chart(tm, t) if i < n else _from_chart(tm, Fraction(0))
        img, w = B_step(tm, y)
        L = float(chart_t(tm, img)) + w + (1 if i == n else 0)
        vals.append(L)
    drops = sum(1 for u, v in zip(vals, vals[1:]) if v < u - 1e-12)
    degree = vals[-1] - vals[0]
    ok = drops == 0 and abs(degree - 1) < 1e-12
    return Report("lift_degree_one", _status(ok), {"grid": n, "decreases": drops, "degree": degree},
                  ctx.prov())


def _inverse_roundtrip(ctx: SuiteContext, n: int = 1000) -> Report:
    tm, rng = ctx.tm, ctx.rng("inverse")
    worst_r = worst_l = 0.0
    for _ in range(n):
        y = _random_circle_point(tm, rng)
        y = CirclePoint(y.x, y.copy) if not same(y.x, tm.a) else lower(tm, tm.a)
        pre, _s = B_tilde_inverse_step(tm, y)
        back, _ = B_tilde_step(tm, pre)
        worst_r = max(worst_r, gap(back.x, y.x) + (0 if back.copy == y.copy else 1))
        if in_gamma(tm, y):
            continue
        img, _ = B_tilde_step(tm, y)
        if same(img.x, tm.fa) and not img.upper:
            continue
        again, _ = B_tilde_inverse_step(tm, img)
        worst_l = max(worst_l, gap(again.x, y.x) + (0 if again.copy == y.copy else 1))
    tol = 0 if tm.exact else 2.0 ** -100
    return Report("inverse_roundtrip", _status(worst_r <= tol and worst_l <= tol),
                  {"right_inverse_gap": worst_r, "left_inverse_gap": worst_l, "samples": n}, ctx.prov())


def model_action_gap(tm: TentMap, y: CirclePoint, r: int) -> float:
    """Max coordinate gap between f-hat(e(y)) and e(B~ y) at depth r."""
    lhs = fhat(tm, extreme_element(tm, y, r - 1))
    rhs = extreme_element(tm, B_tilde_step(tm, y)[0], r)
    if tm.exact:
        return 0.0 if all(u == v for u, v in zip(lhs.coords, rhs.coords)) else lhs.max_gap(rhs)
    return lhs.max_gap(rhs)


def _model_action(ctx: SuiteContext, n: int = 1000) -> Report:
    tm, rng = ctx.tm, ctx.rng("model")
    r = ctx.depth
    worst = 0.0
    used = 0
    while used < n:
        y = _random_circle_point(tm, rng)
        if in_gamma(tm, y):
            continue
        worst = max(worst, model_action_gap(tm, y, r))
        used += 1
    tol = 0.0 if tm.exact else 2.0 ** -40
    return Report("model_action", _status(worst <= tol), {"samples": n, "depth": r, "max_gap": worst, "tol": tol},
                  ctx.prov())


def _height_monotone(ctx: SuiteContext) -> Report:
    vals = grid(Fraction(145, 100), Fraction(199, 100), 50)
    rows = sweep(vals, workers=1)
    decided = [(v, h) for v, h in rows if h.rational]
    in_range = all(0 < h.value < Fraction(1, 2) for _, h in decided)
    ok = heights_monotone(rows) and in_range
    return Report("height_monotone", _status(ok),
                  {"grid": len(vals), "decided": len(decided), "in_(0,1/2)": in_range},
                  {"grid": [vals[0], vals[-1]]})


def _extreme_distinct(ctx: SuiteContext, n: int = 100, r: int = 30) -> Report:
    tm, rng = ctx.tm, ctx.rng("distinct")
    same_count = 0
    for _ in range(n):
        x = _random_point(tm, rng)
        lo, up = lower_extreme(tm, x, r), upper_extreme(tm, x, r)
        if lo.agrees(up):
            same_count += 1
    ends = all(lower_extreme(tm, v, r).agrees(upper_extreme(tm, v, r)) for v in (tm.a, tm.b))
    return Report("extreme_distinct", _status(same_count == 0 and ends),
                  {"samples": n, "depth": r, "coinciding": same_count, "endpoints_coincide": ends}, ctx.prov())


IRRATIONAL_FIXTURE_FILE = "irrational_fixture.txt"


def irrational_fixture() -> str:
    """A decimal slope whose plateau orbit avoids the plateau for 10^4 steps."""
    from importlib.resources import files
    return files("tentlab").joinpath(IRRATIONAL_FIXTURE_FILE).read_text().strip()


def _irrational_avoidance(ctx: SuiteContext, horizon: int = 10_000) -> Report:
    from .glue import cantor_approx
    spec = irrational_fixture()
    tm = TentMap(Parameter.decimal(spec))
    try:
        ca = cantor_approx(tm, horizon)
    except EnteredGamma as exc:
        return Report("irrational_avoidance", FAIL, {"entered_at": exc.step, "horizon": horizon},
                      {"lambda_digits": len(spec)})
    return Report("irrational_avoidance", PASS,
                  {"horizon": horizon, "log10_min_distance_to_a": ca.log10_min_to_a,
                   "log10_min_distance_to_ahat_u": ca.log10_min_to_ahat}, {"lambda_digits": len(spec)})


def _fiber_reconstruct(ctx: SuiteContext, n: int = 10, r: int = 8) -> Report:
    tm, rng = ctx.tm, ctx.rng("recon")
    worst = 0.0
    count = bad = 0
    for _ in range(n):
        x = _random_point(tm, rng)
        for t in fiber(tm, x, r).threads:
            u = reconstruct(tm, x, t.word)
            worst = max(worst, u.max_gap(t))
            bad += not u.agrees(t)
            count += 1
    return Report("fiber_reconstruct", _status(bad == 0), {"threads": count, "disagreements": bad, "max_gap": worst},
                  ctx.prov())


def _extremes_match(ctx: SuiteContext, n: int = 100, r: int = 8) -> Report:
    tm, rng = ctx.tm, ctx.rng("extremes")
    bad = 0
    for _ in range(n):
        x = _random_point(tm, rng)
        fib = fiber(tm, x, r)
        if fib.in_pc:
            continue
        if not (fib.threads[0].agrees(lower_extreme(tm, x, r)) and fib.threads[-1].agrees(upper_extreme(tm, x, r))):
            bad += 1
    return Report("extremes_match", _status(bad == 0), {"samples": n, "depth": r, "mismatches": bad}, ctx.prov())


def _action_on_extremes(ctx: SuiteContext, n: int = 200, r: int = 20) -> Report:
    tm, rng = ctx.tm, ctx.rng("action")
    worst = 0.0
    cases = {"a": 0, "b": 0}
    for _ in range(n):
        x = _random_point(tm, rng)
        if not x < tm.b:
            continue
        x1 = 1 - x * tm.inv_lam
        if x < tm.fa:
            cases["a"] += 1
            pairs = [(lower_extreme(tm, x, r), fhat(tm, upper_extreme(tm, x1, r - 1))),
                     (upper_extreme(tm, x, r), fhat(tm, lower_extreme(tm, x1, r - 1)))]
        else:
            cases["b"] += 1
            x0 = x * tm.inv_lam
            pairs = [(lower_extreme(tm, x, r), fhat(tm, lower_extreme(tm, x0, r - 1))),
                     (upper_extreme(tm, x, r), fhat(tm, lower_extreme(tm, x1, r - 1)))]
        for u, v in pairs:
            worst = max(worst, u.max_gap(v))
    tol = 0 if tm.exact else 2.0 ** -100
    return Report("action_on_extremes", _status(worst <= tol), {"cases": cases, "depth": r, "max_gap": worst},
                  ctx.prov())


def _flat_word_constant(ctx: SuiteContext, n: int = 50, r: int = 12) -> Report:
    tm, rng = ctx.tm, ctx.rng("flat")
    bad = 0
    used = 0
    for _ in range(n):
        t = _random_thread(tm, r, rng)
        try:
            arc = flat_arc_through(tm, t)
        except DomainError:
            continue
        lo, hi = arc.J
        used += 1
        for i in range(1, 11):
            x = lo + (hi - lo) * Fraction(i, 11)
            try:
                u = reconstruct(tm, x, arc.word)
            except NotRealizable:
                bad += 1
                continue
            if u.word != arc.word:
                bad += 1
    return Report("flat_word_constant", _status(bad == 0 and used > 0), {"arcs": used, "violations": bad},
                  ctx.prov())


def _pf_residual(ctx: SuiteContext) -> Report:
    tm, rng = ctx.tm, ctx.rng("pf")
    if ctx.d.exact:
        worst = 0.0
        for _ in range(1000):
            x = _random_point(tm, rng)
            if tm.in_pc(x):
                continue
            res = pf_residual_exact(ctx.d, x)
            if not res.is_zero():
                worst = max(worst, abs(float(res)))
        return Report("pf_residual", _status(worst == 0), {"max_residual": worst, "kind": "markov", "exact": True},
                      ctx.prov())
    g = density_grid(tm, N=1 << 14, tol=1e-10)
    xs = np.array([rng.random() for _ in range(1000)]) * (ctx.d.b - ctx.d.a) + ctx.d.a
    series_res = pf_residual(ctx.d, xs)
    ok = g.residual <= 1e-8
    return Report("pf_residual", _status(ok),
                  {"grid_cells": 1 << 14, "grid_residual": g.residual, "grid_iterations": g.iterations,
                   "series_residual_random_points": series_res}, ctx.prov())


def _cylinder_additivity(ctx: SuiteContext, trees: int = 10, r: int = 15) -> Report:
    tm, d, rng = ctx.tm, ctx.d, ctx.rng("cyl")
    worst = 0.0
    nodes = 0
    for _ in range(trees):
        t = Thread((_random_point(tm, rng),), ())
        for _level in range(r):
            parent = alpha_cylinder(d, t, tm).value
            kids = [Thread(t.coords + (y,), t.word + (s,)) for y, s in tm._preimages(t.coords[-1])]
            total = sum((alpha_cylinder(d, k, tm).value for k in kids[1:]), alpha_cylinder(d, kids[0], tm).value)
            diff = total - parent
            g = (0.0 if diff.is_zero() else abs(float(diff))) if isinstance(diff, QL) else abs(float(diff))
            worst = max(worst, g / max(abs(float(parent)), 1e-300))
            nodes += 1
            t = kids[rng.randrange(len(kids))]
    tol = 0.0 if d.exact else 1e-12
    return Report("cylinder_additivity", _status(worst <= tol),
                  {"nodes": nodes, "max_relative_gap": worst, "density": d.kind}, ctx.prov())


def _alpha_scaling(ctx: SuiteContext, n: int = 10_000, r: int = 10) -> Report:
    tm, d, rng = ctx.tm, ctx.d, ctx.rng("alpha")
    worst = 0.0
    for _ in range(n):
        t = _random_thread(tm, rng.randrange(0, r + 1), rng)
        a0 = alpha_cylinder(d, t, tm).value
        a1 = alpha_cylinder(d, fhat(tm, t), tm).value
        diff = a1 - a0 * tm.inv_lam if isinstance(a0, QL) else float(a1) - float(a0) / d.lam
        g = (0.0 if diff.is_zero() else abs(float(diff))) if isinstance(diff, QL) else abs(diff)
        worst = max(worst, g)
    tol = 0.0 if d.exact else 1e-15
    return Report("alpha_scaling", _status(worst <= tol), {"cylinders": n, "max_gap": worst}, ctx.prov())


def _holonomy(ctx: SuiteContext, boxes: int = 50, r: int = 6) -> Report:
    tm, d, rng = ctx.tm, ctx.d, ctx.rng("holonomy")
    worst = 0.0
    for _ in range(boxes):
        K = admissible_K(tm, 0.02, rng)
        box = zero_box(tm, K, r, K_CAP)
        x = K[0] + (K[1] - K[0]) * Fraction(rng.randrange(1, 1000), 1000)
        y = K[0] + (K[1] - K[0]) * Fraction(rng.randrange(1, 1000), 1000)
        ax, ay = alpha_of_box(d, box, x, tm).value, alpha_of_box(d, box, y, tm).value
        diff = ax - ay
        g = (0.0 if diff.is_zero() else abs(float(diff))) if isinstance(diff, QL) else abs(float(diff))
        worst = max(worst, g)
    tol = TOL_EXACT if d.exact else TOL_GRID
    return Report("holonomy", _status(worst <= tol), {"boxes": boxes, "depth": r, "max_gap": worst, "tol": tol},
                  ctx.prov(density=d.kind))


def _grid_vs_markov(ctx: SuiteContext) -> Report:
    rows = []
    ok = True
    for spec in MARKOV_SPECS:
        tm = TentMap.from_spec(spec)
        dm = density_markov(tm)
        try:
            dg = density_grid(tm, N=1 << 12, tol=1e-12)
        except NotConverged as exc:
            rows.append({"lambda": spec, "error": str(exc)})
            ok = False
            continue
        dist = l1_distance(dg, dm)
        rows.append({"lambda": spec, "l1": dist})
        ok = ok and dist <= 0.02
    return Report("grid_vs_markov", _status(ok), {"parameters": rows, "tol": 0.02}, {})


def _disintegration(ctx: SuiteContext, pairs: int = 20) -> Report:
    d, rng = ctx.d, ctx.rng("disint")
    worst = 0.0
    bound_ok = True
    halving = True
    raw = [0.0, 0.0]
    rows = []
    for _ in range(pairs):
        u, v = sorted(d.a + (d.b - d.a) * rng.random() for _ in range(2))
        r = rng.randint(0, 6)
        g1 = disintegration_check(d, r, (u, v), 1 << 12)
        g2 = disintegration_check(d, r, (u, v), 1 << 13)
        worst = max(worst, g1.gap)
        bound_ok = bound_ok and g1.gap <= g1.error_bound + 1e-12 and g2.gap <= g2.error_bound + 1e-12
        halving = halving and abs(g2.error_bound - g1.error_bound / 2) <= 1e-9 * max(g1.error_bound, 1e-300) + 1e-15
        raw[0] += g1.gap
        raw[1] += g2.gap
        rows.append({"J": [u, v], "r": r, "gap_4096": g1.gap, "gap_8192": g2.gap, "bound_4096": g1.error_bound})
    ok = worst <= 1e-3 and bound_ok and halving
    return Report("disintegration", _status(ok),
                  {"pairs": pairs, "max_gap": worst, "gap_within_bound": bound_ok, "bound_halves": halving,
                   "total_gap_4096": raw[0], "total_gap_8192": raw[1], "rows": rows}, ctx.prov(density=d.kind))


def check_disintegration(d: Density, r: int, J: Tuple[float, float], cells: int = 1 << 12) -> Report:
    """One (J, r) pair at `cells` and twice as many cells."""
    g1 = disintegration_check(d, r, J, cells)
    g2 = disintegration_check(d, r, J, 2 * cells)
    ok = g1.gap <= 1e-3 and g1.gap <= g1.error_bound + 1e-12 and g2.gap <= g2.error_bound + 1e-12
    return Report("disintegrate", _status(ok),
                  {"J": [float(J[0]), float(J[1])], "r": r, "coarse": g1.as_dict(), "fine": g2.as_dict()},
                  {"density": d.kind})


def _g_consistency(ctx: SuiteContext, n: int = 5, r: int = 8) -> Report:
    from .glue import fiber_arc
    tm, d, rng = ctx.tm, ctx.d, ctx.rng("gcons")
    worst = 0.0
    monotone = True
    used = 0
    tries = 0
    while used < n and tries < 10 * n:
        tries += 1
        x = _random_point(tm, rng)
        try:
            A = fiber_arc(tm, d, x, r)
            B = fiber_arc(tm, d, tm.eval(x), r + 1)
        except InGrandOrbit:
            continue
        used += 1
        s = tm.symbol(x)
        index = {t.word: i for i, t in enumerate(B.threads)}
        targets = [index[(s,) + t.word] for t in A.threads]
        steps = [v - u for u, v in zip(targets, targets[1:])]
        if not (all(st > 0 for st in steps) or all(st < 0 for st in steps)):
            monotone = False
        below_a = np.concatenate(([0.0], np.cumsum([float(v) for v in A.alpha])))
        below_b = np.concatenate(([0.0], np.cumsum([float(v) for v in B.alpha])))
        block = min(targets)
        for i, j in enumerate(targets):
            # cumulative mass inside the image block, read from either end
            inside = below_b[j] - below_b[block] if steps and steps[0] > 0 else below_b[j + 1] - below_b[block]
            src = below_a[i] if steps and steps[0] > 0 else below_a[-1] - below_a[i]
            worst = max(worst, abs(inside - src / d.lam))
    ok = monotone and worst <= 1e-12 and used > 0
    return Report("g_consistency", _status(ok), {"points": used, "depth": r, "max_gap": worst, "monotone": monotone},
                  ctx.prov(density=d.kind))


def _extremes_not_identified(ctx: SuiteContext, n: int = 20, r: int = 12) -> Report:
    tm, rng = ctx.tm, ctx.rng("notident")
    bad = 0
    for _ in range(n):
        x = _random_point(tm, rng)
        fib = fiber(tm, x, r)
        last = len(fib) - 1
        for i, j in consecutive_pairs(tm, fib):
            if i == 0 or j == last:
                bad += 1
    return Report("extremes_not_identified", _status(bad == 0), {"fibers": n, "depth": r, "violations": bad},
                  ctx.prov())


def _abs_diff(u, v) -> float:
    diff = u - v
    if isinstance(diff, QL):
        return 0.0 if diff.is_zero() else abs(float(diff))
    return abs(float(diff))


def _fiber_arc_structure(ctx: SuiteContext, n: int = 100, r: int = 12) -> Report:
    from .glue import fiber_arc
    tm, d, rng = ctx.tm, ctx.d, ctx.rng("fiberarc")
    used = tries = 0
    ends_bad = pairs_bad = extreme_bad = 0
    worst_total = 0.0
    while used < n and tries < 10 * n:
        tries += 1
        x = _random_point(tm, rng)
        try:
            arc = fiber_arc(tm, d, x, r)
        except InGrandOrbit:
            continue
        used += 1
        th = arc.threads
        if not (th[0].agrees(lower_extreme(tm, x, r)) and th[-1].agrees(upper_extreme(tm, x, r))):
            ends_bad += 1
        if arc.identified_pairs != consecutive_pairs(tm, fiber(tm, x, r)):
            pairs_bad += 1
        for i, j in arc.identified_pairs:
            # an identified pair is adjacent in the fiber order and collapses to one point
            if j != i + 1 or _abs_diff(arc.t_collapsed[i], arc.t_collapsed[j]) > 0:
                pairs_bad += 1
            if i == 0 or j == len(th) - 1:
                extreme_bad += 1
        worst_total = max(worst_total, _abs_diff(arc.total, arc.phi_x))
    ok = used == n and ends_bad == 0 and pairs_bad == 0 and extreme_bad == 0 and worst_total <= 1e-8
    return Report("fiber_arc_structure", _status(ok),
                  {"samples": used, "depth": r, "endpoint_mismatches": ends_bad, "pair_mismatches": pairs_bad,
                   "identified_extremes": extreme_bad, "max_total_gap": worst_total, "tol": 1e-8},
                  ctx.prov(density=d.kind))


def _grid_vs_birkhoff(ctx: SuiteContext, lam: str = "1.9", steps: int = 10 ** 7) -> Report:
    tm = TentMap(Parameter.decimal(lam))
    g = density_grid(tm, N=1 << 12)
    hist = birkhoff_histogram(float(Fraction(lam)), steps, seed=ctx.seed)
    dist = l1_distance(g, hist)
    return Report("grid_vs_birkhoff", _status(dist <= 0.05),
                  {"lambda": lam, "steps": steps, "l1": dist, "tol": 0.05}, {"seed": ctx.seed})


def _irrat_key(ctx: SuiteContext, n: int = 100, horizon: int = 2000) -> Report:
    spec = irrational_fixture()
    tm = TentMap(Parameter.decimal(spec, precision=2048))
    rng = ctx.rng("irratkey")
    both = 0
    for _ in range(n):
        x = _random_point(tm, rng)
        if avoids_gamma_interior(tm, upper(tm, x), horizon) and avoids_gamma_interior(tm, lower(tm, x), horizon):
            both += 1
    return Report("irrat_key", _status(both == 0), {"samples": n, "horizon": horizon, "both_avoid": both},
                  {"lambda_digits": len(spec), "seed": ctx.seed})


def _spike_halving(ctx: SuiteContext) -> Report:
    from .glue import spike_arc
    tm = ctx.tm
    sp = spike_arc(tm, min(ctx.depth, 16))
    half = sp.nu_u - sp.lebesgue / 2
    g = (0.0 if half.is_zero() else abs(float(half))) if isinstance(half, QL) else gap(sp.nu_u, sp.lebesgue / 2)
    ok = sp.one_arc and sp.ends_match and g <= 1e-30
    return Report("spike_halving", _status(ok),
                  {"lebesgue": float(sp.lebesgue), "nu_u": float(sp.nu_u), "one_arc": sp.one_arc,
                   "ends_match": sp.ends_match}, ctx.prov())


def _tartan_for(ctx: SuiteContext, r: int = 12, n_stable: int = 8) -> TartanApprox:
    rng = ctx.rng("tartan")
    for width in (0.1, 0.05, 0.02):
        try:
            K = admissible_K(ctx.tm, width, rng)
            break
        except NotInY:
            continue
    else:
        raise NotInY("no admissible interval of relative width 0.02 or more")
    return build_tartan(ctx.tm, ctx.d, K, r, n_stable, K_CAP)


def _tartan_compat(ctx: SuiteContext) -> Report:
    rep = check_compatibility(_tartan_for(ctx), seed=ctx.seed)
    rep.provenance.update(ctx.prov())
    return rep


def _tartan_scaling(ctx: SuiteContext) -> Report:
    rep = check_scaling(_tartan_for(ctx), iterates=3)
    rep.provenance.update(ctx.prov())
    return rep


def _regularity(ctx: SuiteContext) -> Report:
    rep = check_regularity(_tartan_for(ctx, r=8, n_stable=4))
    rep.provenance.update(ctx.prov())
    return rep


def _tameness(ctx: SuiteContext) -> Report:
    return check_tameness(ctx.tm, ctx.d, 20, 8, ctx.seed)


SUITES: Dict[str, Callable[[SuiteContext], Report]] = {
    "action_on_extremes": _action_on_extremes,
    "alpha_scaling": _alpha_scaling,
    "core_invariant": _core_invariant,
    "cylinder_additivity": _cylinder_additivity,
    "disintegration": _disintegration,
    "exact_orbit": _exact_orbit,
    "extreme_distinct": _extreme_distinct,
    "extremes_match": _extremes_match,
    "fiber_arc_structure": _fiber_arc_structure,
    "extremes_not_identified": _extremes_not_identified,
    "fa_p_ahat": _fa_p_ahat,
    "fiber_reconstruct": _fiber_reconstruct,
    "flat_word_constant": _flat_word_constant,
    "g_consistency": _g_consistency,
    "grid_vs_birkhoff": _grid_vs_birkhoff,
    "grid_vs_markov": _grid_vs_markov,
    "hat_involution": _hat_involution,
    "height_monotone": _height_monotone,
    "holonomy": _holonomy,
    "interval_outward": _interval_outward,
    "inverse_roundtrip": _inverse_roundtrip,
    "irrat_key": _irrat_key,
    "irrational_avoidance": _irrational_avoidance,
    "lift_degree_one": _lift_degree_one,
    "many_choices": _many_choices,
    "model_action": _model_action,
    "order_reflection": _order_reflection,
    "pf_residual": _pf_residual,
    "preimages": _preimages_exact,
    "regularity": _regularity,
    "spike_halving": _spike_halving,
    "tameness": _tameness,
    "tartan_compatibility": _tartan_compat,
    "tartan_scaling": _tartan_scaling,
}


def suite_names() -> List[str]:
    return sorted(SUITES)


def run_suite(names: Sequence[str], spec: str = GOLDEN, seed: int = 0, depth: int = 20,
              workers: int = 1, precision: int = 256) -> List[Report]:
    """Run named suites ("all" expands to every suite); reports come back ordered by name."""
    wanted = []
    for n in names:
        if n == "all":
            wanted.extend(suite_names())
        elif n not in SUITES:
            raise UnknownSuite(f"unknown suite {n!r}; known: {', '.join(suite_names())}")
        else:
            wanted.append(n)
    wanted = sorted(set(wanted))

    def one(name: str) -> Report:
        ctx = SuiteContext(spec, seed, depth, precision)
        try:
            return SUITES[name](ctx)
        except TentlabError as exc:
            return Report(name, UNDECIDED, {"error": f"{type(exc).__name__}: {exc}"}, ctx.prov())

    if workers <= 1:
        return [one(n) for n in wanted]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, wanted))
