"""tentlab command line: heights, sweeps, fibers, densities, verification suites and SVG figures."""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import click

from . import render
from .arith import Parameter
from .errors import TentlabError
from .glue import chart_patch, fiber_arc, psi_of, trace_streamline
from .ilim import consecutive_pairs, fiber, reconstruct
from .measure import density_auto, density_grid, density_markov, density_series
from .outside import (classify, grid, height_or_undecided, heights_monotone, lower_extreme, sweep,
                      upper_extreme)
from .tent import TentMap, Word
from .verify import GOLDEN, Report, check_disintegration, run_suite, suite_names

SCHEMA = "tentlab/1"
CONFIG_KEYS = ("lambda", "depth", "precision", "seed", "json", "out", "workers", "cells")
# worker count changes only the schedule, never the output, so it is not echoed
ECHO_KEYS = ("lambda", "depth", "precision", "seed", "cells")


def read_config(path: str) -> Dict[str, str]:
    """A flat key=value file; '#' starts a comment."""
    out: Dict[str, str] = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.BadParameter(f"line {n}: expected key=value", param_hint="--config")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise click.BadParameter(f"line {n}: unknown key {key!r}", param_hint="--config")
        out[key] = value
    return out


class Run:
    """Resolved configuration plus output helpers."""

    def __init__(self, cfg: dict):
        self.cfg = cfg

    @property
    def tm(self) -> TentMap:
        return TentMap(Parameter.parse(self.cfg["lambda"], precision=self.cfg["precision"]))

    def echo(self, extra: Optional[dict] = None) -> dict:
        e = {k: self.cfg[k] for k in ECHO_KEYS}
        if extra:
            e.update(extra)
        return e

    def emit(self, command: str, result, text: str, reports: Optional[List[Report]] = None,
             extra: Optional[dict] = None, out: Optional[str] = None) -> None:
        if self.cfg["json"]:
            env = {"schema": SCHEMA, "command": command, "config_echo": self.echo(extra),
                   "result": result, "reports": [r.as_dict() for r in (reports or [])]}
            payload = json.dumps(env, indent=2, sort_keys=True) + "\n"
        else:
            payload = text if text.endswith("\n") else text + "\n"
        out = out or self.cfg["out"]
        if out:
            Path(out).write_text(payload)
        else:
            click.echo(payload, nl=False)

    def write(self, path: str, content: str) -> None:
        Path(path).write_text(content)


pass_run = click.make_pass_decorator(Run)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--lambda", "lam", default=GOLDEN, show_default=True,
              help='Slope: poly:"c0,c1,...":interval:"lo,hi" (exact) or a decimal / dec:"..." (intervals).')
@click.option("--depth", type=int, default=12, show_default=True, help="Thread depth r.")
@click.option("--precision", type=int, default=256, show_default=True, help="Interval precision in bits.")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON envelope.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the main output here.")
@click.option("--workers", type=int, default=1, show_default=True, help="Threads for sweeps and suites.")
@click.option("--cells", type=int, default=4096, show_default=True, help="Grid density cells.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Flat key=value file with the same keys; flags given explicitly win.")
@click.pass_context
def main(ctx, lam, depth, precision, seed, as_json, out, workers, cells, config_path):
    """Computations on core tent maps, their inverse limits and outside maps."""
    cfg = {"lambda": lam, "depth": depth, "precision": precision, "seed": seed, "json": as_json,
           "out": out, "workers": workers, "cells": cells}
    if config_path:
        names = {"lambda": "lam", "json": "as_json"}
        types = {"depth": int, "precision": int, "seed": int, "workers": int, "cells": int,
                 "json": lambda v: v.lower() in ("1", "true", "yes", "on"), "lambda": str, "out": str}
        for key, value in read_config(config_path).items():
            src = ctx.get_parameter_source(names.get(key, key))
            if src is None or src.name in ("DEFAULT", "DEFAULT_MAP"):
                cfg[key] = types[key](value)
    ctx.obj = Run(cfg)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(2)


@main.command()
@click.option("--max-iters", type=int, default=2000, show_default=True)
@pass_run
def height(run: Run, max_iters):
    """Rotation number of the outside map (first plateau return)."""
    try:
        h = height_or_undecided(run.tm, max_iters)
    except TentlabError as exc:
        _fail(exc)
    txt = (f"height {h.m}/{h.n} ({h.type}, {h.confidence})" if h.rational
           else f"undecided after {h.iterations} iterations, bracket [{h.bracket[0]:.10g}, {h.bracket[1]:.10g}]")
    run.emit("height", h.as_dict(), txt, extra={"max_iters": max_iters})


@main.command(name="sweep")
@click.option("--from", "--lo", "lo", default="1.45", show_default=True)
@click.option("--to", "--hi", "hi", default="1.99", show_default=True)
@click.option("--steps", type=int, default=500, show_default=True)
@click.option("--max-iters", type=int, default=2000, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Also write the CSV.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Output file (overrides the global --out).")
@pass_run
def sweep_cmd(run: Run, lo, hi, steps, max_iters, csv_path, out_path):
    """Heights over an evenly spaced decimal grid of slopes."""
    values = grid(Fraction(lo), Fraction(hi), steps)
    rows = sweep(values, max_iters, run.cfg["workers"], run.cfg["precision"])
    _, csv = render.staircase(rows)
    if csv_path:
        run.write(csv_path, csv)
    result = {"rows": [dict(lam=v, **h.as_dict()) for v, h in rows], "monotone": heights_monotone(rows)}
    run.emit("sweep", result, csv, extra={"lo": lo, "hi": hi, "steps": steps, "max_iters": max_iters}, out=out_path)


@main.command(name="classify")
@click.option("--max-iters", type=int, default=2000, show_default=True)
@pass_run
def classify_cmd(run: Run, max_iters):
    """Tent type: rational (with landing type) or irrational/undecided, and the critical profile."""
    try:
        c = classify(run.tm, max_iters)
    except TentlabError as exc:
        _fail(exc)
    run.emit("classify", c.as_dict(), f"{c.kind} {c.pcf}", extra={"max_iters": max_iters})


@main.command()
@click.option("-n", "length", type=int, default=None, help="Word length (default: --depth).")
@pass_run
def kneading(run: Run, length):
    """Itinerary of b = f(c), and epsilon(f) when c is periodic."""
    tm = run.tm
    n = run.cfg["depth"] if length is None else length
    w = tm.kneading(n)
    eps = tm.epsilon()
    res = {"lambda": run.cfg["lambda"], "depth": n, "word": str(w), "epsilon": eps, "ambiguous": w.ambiguous}
    txt = str(w) + ("" if eps is None else f"  epsilon={eps}")
    run.emit("kneading", res, txt, extra={"n": n})


@main.command(name="fiber")
@click.option("--x", "x", required=True, help="Base point (a decimal or fraction).")
@pass_run
def fiber_cmd(run: Run, x):
    """All depth-r threads over x in unimodal order."""
    tm = run.tm
    try:
        fib = fiber(tm, Fraction(x), run.cfg["depth"])
        r = run.cfg["depth"]
        ext = {"lower": lower_extreme(tm, Fraction(x), r), "upper": upper_extreme(tm, Fraction(x), r)}
        pairs = consecutive_pairs(tm, fib)
    except TentlabError as exc:
        _fail(exc)
    rows = [{"word": "".join(map(str, t.word)), "coords": t.floats()} for t in fib.threads]
    res = {"x": x, "sorted": fib.sorted, "in_pc": fib.in_pc, "threads": rows,
           "extremes": {k: {"word": "".join(map(str, t.word)), "coords": t.floats()} for k, t in ext.items()},
           "consecutive_pairs": [list(p) for p in pairs]}
    txt = "\n".join(f"{r['word']} " + " ".join(f"{v:.12g}" for v in r["coords"]) for r in rows)
    run.emit("fiber", res, txt, extra={"x": x})


@main.command()
@click.option("--x", "x", required=True)
@pass_run
def arc(run: Run, x):
    """The fiber over x as an arc: H coordinates, identified pairs, collapsed coordinates."""
    tm = run.tm
    try:
        d = density_auto(tm)
        fa = fiber_arc(tm, d, Fraction(x), run.cfg["depth"])
    except TentlabError as exc:
        _fail(exc)
    res = fa.as_dict()
    txt = (f"{len(fa.threads)} threads, {len(fa.identified_pairs)} identified pairs, "
           f"collapsed length {float(fa.total):.12g}, phi(x) {float(fa.phi_x):.12g}")
    run.emit("arc", res, txt, extra={"x": x, "density": d.kind})


@main.command(name="chart")
@click.option("--K", "K", required=True, help="lo,hi")
@click.option("--samples", type=int, default=8, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Output file (overrides the global --out).")
@pass_run
def chart_cmd(run: Run, K, samples, out_path):
    """psi on a 0-box over K (CSV rows x, arc word, psi)."""
    tm = run.tm
    lo, hi = (Fraction(s) for s in K.split(","))
    try:
        d = density_auto(tm)
        patch = chart_patch(tm, d, (lo, hi), run.cfg["depth"], samples)
    except TentlabError as exc:
        _fail(exc)
    lines = ["x,word,psi"] + [f"{x:.12g},{w},{v:.12g}" for x, w, v in patch.rows()]
    res = {"K": [float(lo), float(hi)], "spread": patch.spread(),
           "rows": [{"x": x, "word": w, "psi": v} for x, w, v in patch.rows()]}
    run.emit("chart", res, "\n".join(lines), extra={"K": K, "samples": samples}, out=out_path)


def _streamline_figure(tm, d, arcs, r: int, samples: int = 5):
    segs = []
    verticals = []
    for a in arcs:
        lo, hi = a.J
        seg = []
        for i in range(1, samples + 1):
            x = lo + (hi - lo) * Fraction(i, samples + 1)
            seg.append((float(x), psi_of(tm, d, x, a.word, r)))
        segs.append(seg)
        for x, _ in seg[:: max(1, samples // 2)]:
            verticals.append((x, 0.0, d(x)))
    return segs, verticals


@main.command()
@click.option("--seed-x", required=True)
@click.option("--branch-word", required=True, help="0/1 word of length depth.")
@click.option("--steps", type=int, default=6, show_default=True)
@click.option("--direction", type=click.Choice(["hi", "lo"]), default="hi", show_default=True)
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None)
@pass_run
def streamline(run: Run, seed_x, branch_word, steps, direction, svg_path):
    """Consecutive 0-flat arcs of the path component through a thread."""
    tm = run.tm
    w = Word.of(branch_word).symbols
    try:
        seed = reconstruct(tm, Fraction(seed_x), w)
        arcs = trace_streamline(tm, seed, steps, len(w), direction)
    except TentlabError as exc:
        _fail(exc)
    res = {"arcs": [{"word": "".join(map(str, a.word)), "J": [float(a.J[0]), float(a.J[1])]} for a in arcs]}
    if svg_path:
        d = density_auto(tm)
        segs, verticals = _streamline_figure(tm, d, arcs, len(w))
        run.write(svg_path, render.streamlines(segs, verticals, f"streamline through x = {seed_x}"))
    txt = "\n".join(f"{r['word']} [{r['J'][0]:.12g}, {r['J'][1]:.12g}]" for r in res["arcs"])
    run.emit("streamline", res, txt, extra={"seed_x": seed_x, "branch_word": branch_word, "steps": steps,
                                            "direction": direction})


@main.command(name="density")
@click.option("--kind", type=click.Choice(["auto", "markov", "grid", "series"]), default="auto", show_default=True)
@click.option("--grid", "grid_n", type=int, default=None, help="Shorthand for --kind grid with N cells.")
@click.option("--markov", is_flag=True, help="Shorthand for --kind markov.")
@click.option("--rows", "nrows", type=int, default=64, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Output file (overrides the global --out).")
@pass_run
def density_cmd(run: Run, kind, grid_n, markov, nrows, out_path):
    """The invariant density: exact Markov, Ulam grid, or critical-orbit series."""
    tm = run.tm
    if markov:
        kind = "markov"
    elif grid_n is not None:
        kind = "grid"
        run.cfg["cells"] = grid_n
    try:
        if kind == "markov":
            d = density_markov(tm)
        elif kind == "grid":
            d = density_grid(tm, run.cfg["cells"])
        elif kind == "series":
            d = density_series(tm)
        else:
            d = density_auto(tm)
    except TentlabError as exc:
        _fail(exc)
    rows = d.rows(nrows)
    res = {"density": d.describe(), "rows": [{"x": x, "phi": v} for x, v in rows]}
    txt = "x,phi\n" + "\n".join(f"{x:.12g},{v:.12g}" for x, v in rows)
    run.emit("density", res, txt, extra={"kind": kind, "rows": nrows}, out=out_path)


@main.command(name="verify")
@click.argument("names", nargs=-1)
@click.option("--J", "J", default=None, help="lo,hi for the 'disintegrate' check (default: the core).")
@pass_run
def verify_cmd(run: Run, names, J):
    """Run named property suites ('all' for every suite); exit status 0 iff all pass.

    'disintegrate' checks one pair (--J, --depth) instead of the random pairs of 'disintegration'.
    """
    names = list(names or ("all",))
    single = "disintegrate" in names
    names = [n for n in names if n != "disintegrate"]
    try:
        reports = run_suite(names, run.cfg["lambda"], run.cfg["seed"], run.cfg["depth"],
                            run.cfg["workers"], run.cfg["precision"]) if names else []
        if single:
            tm = run.tm
            d = density_auto(tm)
            lo, hi = (float(Fraction(v)) for v in J.split(",")) if J else (d.a, d.b)
            reports.append(check_disintegration(d, run.cfg["depth"], (lo, hi)))
    except TentlabError as exc:
        _fail(exc)
    txt = "\n".join(f"{r.status:9s} {r.name}" for r in reports)
    ok = all(r.passed for r in reports)
    run.emit("verify", {"all_pass": ok, "suites": [r.name for r in reports]}, txt, reports,
             extra={"names": names + (["disintegrate"] if single else []), "J": J})
    sys.exit(0 if ok else 1)


@main.command(name="suites")
def suites_cmd():
    """List suite names."""
    click.echo("\n".join(suite_names()))


@main.command(name="render")
@click.argument("kind", type=click.Choice(["tentgraph", "outsidegraph", "staircase", "fiberarc", "streamlines",
                                           "chart"]))
@click.option("--x", "x", default="0.61", show_default=True, help="Base point (fiberarc, streamlines).")
@click.option("--K", "K", default=None, help="lo,hi for chart (default: an admissible interval).")
@click.option("--steps", type=int, default=500, show_default=True, help="Sweep steps (staircase) or arcs.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Staircase CSV path.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="SVG path.")
@pass_run
def render_cmd(run: Run, kind, x, K, steps, csv_path, out_path):
    """Write an SVG figure to --out (default <kind>.svg) and print its path."""
    out = out_path or run.cfg["out"] or f"{kind}.svg"
    tm = run.tm
    r = run.cfg["depth"]
    try:
        if kind == "tentgraph":
            svg = render.tentgraph(tm)
        elif kind == "outsidegraph":
            svg = render.outsidegraph(tm)
        elif kind == "staircase":
            rows = sweep(grid(Fraction("1.45"), Fraction("1.99"), steps), 2000, run.cfg["workers"],
                         run.cfg["precision"])
            svg, csv = render.staircase(rows)
            run.write(csv_path or str(Path(out).with_suffix(".csv")), csv)
        elif kind == "fiberarc":
            svg = render.fiberarc(fiber_arc(tm, density_auto(tm), Fraction(x), r))
        elif kind == "chart":
            if K:
                lo, hi = (Fraction(s) for s in K.split(","))
            else:
                import random
                from .ilim import zero_box
                from .verify import K_CAP, admissible_K
                lo, hi = admissible_K(tm, 0.1, random.Random(run.cfg["seed"]))
            box = None if K else zero_box(tm, (lo, hi), r, K_CAP)
            svg = render.chart(chart_patch(tm, density_auto(tm), (lo, hi), r, box=box))
        else:
            d = density_auto(tm)
            fib = fiber(tm, Fraction(x), r)
            seed = fib.threads[len(fib) // 2]
            arcs = trace_streamline(tm, seed, min(steps, 6), r)
            segs, verticals = _streamline_figure(tm, d, arcs, r)
            svg = render.streamlines(segs, verticals, f"streamline through x = {x}")
    except TentlabError as exc:
        _fail(exc)
    Path(out).write_text(svg)
    click.echo(out)


if __name__ == "__main__":  # pragma: no cover
    main()
