"""Plain SVG figures: the tent graph, the outside map, the height staircase, fiber arcs, streamlines, charts."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .outside import B_step, chart_t, lower, upper

W, H, PAD = 640, 480, 48


def _fmt(v: float) -> str:
    return f"{v:.6g}"


class Figure:
    """A fixed-size SVG canvas with data coordinates [x0, x1] x [y0, y1]."""

    def __init__(self, x0: float, x1: float, y0: float, y1: float, title: str = ""):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.items: List[str] = []
        if title:
            self.items.append(f'<text x="{W / 2}" y="{PAD / 2}" text-anchor="middle" '
                              f'font-size="14">{escape(title)}</text>')
        self.items.append(f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" '
                          'fill="none" stroke="#888"/>')

    def px(self, x: float, y: float) -> Tuple[float, float]:
        sx = PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2 * PAD)
        sy = H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2 * PAD)
        return sx, sy

    def polyline(self, pts: Iterable[Tuple[float, float]], color: str = "#000", width: float = 1.2) -> None:
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (self.px(x, y) for x, y in pts))
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def line(self, p: Tuple[float, float], q: Tuple[float, float], color: str = "#000", width: float = 1.0,
             dash: Optional[str] = None) -> None:
        (a, b), (c, d) = self.px(*p), self.px(*q)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<line x1="{_fmt(a)}" y1="{_fmt(b)}" x2="{_fmt(c)}" y2="{_fmt(d)}" '
                          f'stroke="{color}" stroke-width="{width}"{extra}/>')

    def dot(self, x: float, y: float, label: str = "", color: str = "#c00", r: float = 3) -> None:
        a, b = self.px(x, y)
        self.items.append(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{r}" fill="{color}"/>')
        if label:
            self.items.append(f'<text x="{_fmt(a + 5)}" y="{_fmt(b - 5)}" font-size="12">{escape(label)}</text>')

    def axis_labels(self, xl: str, yl: str) -> None:
        self.items.append(f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12">{escape(xl)}</text>')
        self.items.append(f'<text x="14" y="{H / 2}" font-size="12" transform="rotate(-90 14 {H / 2})" '
                          f'text-anchor="middle">{escape(yl)}</text>')
        for v, anchor in ((self.x0, "start"), (self.x1, "end")):
            a, _ = self.px(v, self.y0)
            self.items.append(f'<text x="{_fmt(a)}" y="{H - PAD + 14}" font-size="10" '
                              f'text-anchor="{anchor}">{_fmt(v)}</text>')
        for v in (self.y0, self.y1):
            _, b = self.px(self.x0, v)
            self.items.append(f'<text x="{PAD - 4}" y="{_fmt(b)}" font-size="10" text-anchor="end">{_fmt(v)}</text>')

    def svg(self) -> str:
        body = "\n".join(self.items)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
                f'{body}\n</svg>\n')


def tentgraph(tm) -> str:
    lam = tm.param.lambda_value
    a, b, c, p = float(tm.a), float(tm.b), 0.5, float(tm.p_fix)
    fig = Figure(0, 1, 0, 1, f"tent map, lambda = {lam:.10g}")
    fig.polyline([(0, 0), (0.5, lam / 2), (1, 0)], "#999", 1)
    fig.polyline([(a, lam * a), (c, b), (b, lam * (1 - b))], "#000", 2)
    fig.line((0, 0), (1, 1), "#bbb", 1, "4 3")
    for x, name in ((a, "a"), (c, "c"), (b, "b"), (p, "p")):
        fig.dot(x, x if name != "c" else b, name)
        fig.line((x, 0), (x, 1), "#ddd", 0.6)
    fig.axis_labels("x", "f(x)")
    return fig.svg()


def outsidegraph(tm, samples: int = 800) -> str:
    """The lift of B on the chart circle: a degree-one curve flat over the plateau arc."""
    fig = Figure(0, 1, 0, 2, "outside map B (lifted)")
    pts = []
    for i in range(samples + 1):
        t = Fraction(i, samples)
        if t < Fraction(1, 2):
            y = lower(tm, tm.a + 2 * t * (tm.b - tm.a))
        elif t < 1:
            y = upper(tm, tm.b - (2 * t - 1) * (tm.b - tm.a))
        else:
            y = lower(tm, tm.a)
        img, w = B_step(tm, y)
        pts.append((float(t), float(chart_t(tm, img)) + w + (1 if i == samples else 0)))
    # split where the lift wraps so the drawing stays monotone
    fig.polyline(pts, "#000", 1.6)
    fa = float(chart_t(tm, lower(tm, tm.fa)))
    fig.line((0, fa + 1), (1, fa + 1), "#c00", 0.6, "4 3")
    fig.axis_labels("t (chart coordinate)", "lift of B")
    return fig.svg()


def staircase(rows: Sequence[Tuple[str, object]]) -> Tuple[str, str]:
    """SVG of heights against lambda and the CSV of the sweep."""
    xs = [float(v) for v, _ in rows]
    fig = Figure(min(xs), max(xs), 0, 0.5, "height of the outside map")
    pts = []
    csv = ["lambda,kind,m,n,height,bracket_lo,bracket_hi,type"]
    for v, h in rows:
        if h.rational:
            val = float(h.value)
            csv.append(f"{v},{h.kind},{h.m},{h.n},{_fmt(val)},{_fmt(val)},{_fmt(val)},{h.type}")
        else:
            val = sum(h.bracket) / 2
            csv.append(f"{v},{h.kind},,,{_fmt(val)},{_fmt(h.bracket[0])},{_fmt(h.bracket[1])},")
        pts.append((float(v), val))
    fig.polyline(pts, "#000", 1.2)
    for q in (Fraction(1, 3), Fraction(1, 4), Fraction(2, 5)):
        fig.line((min(xs), float(q)), (max(xs), float(q)), "#ccc", 0.6, "3 3")
    fig.axis_labels("lambda", "q")
    return fig.svg(), "\n".join(csv) + "\n"


def fiberarc(arc) -> str:
    fig = Figure(0, 1, 0, 1, f"fiber arc over x = {float(arc.x):.6g}, depth {arc.depth}")
    units = arc.t_unit
    pts = [(float(h[0]), u) for h, u in zip(arc.H, units)]
    fig.polyline(pts, "#000", 1)
    for i, j in arc.identified_pairs:
        fig.line(pts[i], pts[j], "#c00", 1.2)
    fig.dot(*pts[0], "lower extreme", "#06c")
    fig.dot(*pts[-1], "upper extreme", "#06c")
    fig.axis_labels("H (itinerary coordinate)", "collapsed coordinate / phi(x)")
    return fig.svg()


def chart(patch) -> str:
    lo, hi = float(patch.K[0]), float(patch.K[1])
    top = max((max(row) for row in patch.psi), default=1.0)
    fig = Figure(lo, hi, 0, top * 1.02, f"chart patch, depth {patch.depth}")
    for row in patch.psi:
        fig.polyline(list(zip(patch.xs, row)), "#000", 0.8)
    for x in patch.xs:
        fig.line((x, 0), (x, top), "#ddd", 0.5)
    fig.axis_labels("x_0", "psi")
    return fig.svg()


def streamlines(segments: Sequence[Sequence[Tuple[float, float]]], verticals: Sequence[Tuple[float, float, float]],
                title: str) -> str:
    """Arcs as polylines in (x_0, psi); stable fibers as vertical segments (x, psi_lo, psi_hi)."""
    xs = [p[0] for seg in segments for p in seg] + [v[0] for v in verticals]
    ys = [p[1] for seg in segments for p in seg] + [v[2] for v in verticals]
    x0, x1 = min(xs), max(xs)
    if x1 <= x0:
        x1 = x0 + 1e-9
    y1 = max(ys) * 1.02 if ys and max(ys) > 0 else 1.0
    fig = Figure(x0, x1, 0, y1, title)
    for x, u, v in verticals:
        fig.line((x, u), (x, v), "#bbb", 0.6)
    palette = ("#000", "#c00", "#06c", "#080")
    for k, seg in enumerate(segments):
        fig.polyline(seg, palette[k % len(palette)], 1.4)
    fig.axis_labels("x_0", "psi")
    return fig.svg()
