"""The nine acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import time
from fractions import Fraction

import pytest
from click.testing import CliRunner

from tentlab.arith import Parameter
from tentlab.cli import main
from tentlab.errors import EnteredGamma
from tentlab.glue import cantor_approx
from tentlab.outside import classify, grid, height_or_undecided, heights_monotone, sweep
from tentlab.tent import TentMap
from tentlab.verify import run_suite

from conftest import GOLDEN

TRIBONACCI = 'poly:"-1,-1,-1,1":interval:"1.8,1.9"'
LABELS = {GOLDEN: "golden", TRIBONACCI: "tribonacci"}


@pytest.fixture
def line(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def test_criterion_1_golden_benchmark(line):
    t0 = time.perf_counter()
    c = classify(TentMap(Parameter.parse(GOLDEN)))
    elapsed = time.perf_counter() - t0
    ok = (c.kind == "RationalEndpointMinus" and (c.height.m, c.height.n) == (1, 3)
          and c.profile.kind == "PeriodicC" and c.profile.period == 3
          and c.height.confidence == "exact" and elapsed < 1.0)
    line(1, ok, f"{c.kind} {c.height.m}/{c.height.n} {c.pcf}, {c.height.confidence}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_height_staircase(line):
    t0 = time.perf_counter()
    rows = sweep(grid(Fraction(145, 100), Fraction(199, 100), 500))
    elapsed = time.perf_counter() - t0
    decided = all(h.rational for _, h in rows)
    in_range = all(0 < (h.value if h.rational else h.bracket[0]) and
                   (h.value if h.rational else h.bracket[1]) < Fraction(1, 2) for _, h in rows)
    # the run of grid points at height 1/3 that contains 1.62
    lams = [Fraction(v) for v, _ in rows]
    third = [h.rational and h.value == Fraction(1, 3) for _, h in rows]
    i = min(range(len(lams)), key=lambda k: abs(lams[k] - Fraction(162, 100)))
    lo = hi = i
    while lo > 0 and third[lo - 1]:
        lo -= 1
    while hi < len(rows) - 1 and third[hi + 1]:
        hi += 1
    width = float(lams[hi] - lams[lo]) if third[i] else 0.0
    contains = third[i] and lams[lo] <= Fraction(162, 100) <= lams[hi]
    ok = heights_monotone(rows) and in_range and contains and width >= 0.02 and elapsed < 30
    line(2, ok, f"monotone={heights_monotone(rows)} in(0,1/2)={in_range} decided={decided} "
                f"plateau 1/3 = [{float(lams[lo]):.4f}, {float(lams[hi]):.4f}] width {width:.4f}, {elapsed:.1f}s")
    assert ok


def test_criterion_3_model_action(line):
    specs = [GOLDEN, TRIBONACCI, "1.62", "1.75", "1.9"]
    parts = []
    ok = True
    for spec in specs:
        (rep,) = run_suite(["model_action"], spec, seed=7, depth=20)
        m = rep.metrics
        good = rep.passed and m["samples"] == 1000 and m["depth"] == 20
        if not Parameter.parse(spec).exact:
            good = good and m["max_gap"] <= 2.0 ** -40
        ok = ok and good
        parts.append(f"{LABELS.get(spec, spec)}:{m.get('max_gap', 'n/a'):.3g}")
    line(3, ok, "max gaps " + " ".join(parts))
    assert ok


def test_criterion_4_measure_identities(line):
    golden = {r.name: r for r in run_suite(["pf_residual", "alpha_scaling", "holonomy", "disintegration"],
                                           GOLDEN, seed=7)}
    grid_pf = run_suite(["pf_residual"], "1.9", seed=7)[0]
    grid_holo = run_suite(["holonomy"], "1.62", seed=7)[0]
    i = golden["pf_residual"].passed and golden["pf_residual"].metrics["max_residual"] == 0 \
        and grid_pf.passed and grid_pf.metrics["grid_residual"] <= 1e-8
    ii = golden["alpha_scaling"].passed and golden["alpha_scaling"].metrics["cylinders"] == 10_000 \
        and golden["alpha_scaling"].metrics["max_gap"] == 0
    iii = golden["holonomy"].passed and golden["holonomy"].metrics["max_gap"] <= 1e-6 \
        and grid_holo.passed and grid_holo.metrics["max_gap"] <= 1e-4
    dm = golden["disintegration"].metrics
    iv = golden["disintegration"].passed and dm["max_gap"] <= 1e-3 and dm["bound_halves"]
    ok = i and ii and iii and iv
    line(4, ok, f"(i) markov 0, grid {grid_pf.metrics['grid_residual']:.2e}; (ii) {ii}; "
                f"(iii) {golden['holonomy'].metrics['max_gap']:.1e}/{grid_holo.metrics['max_gap']:.1e}; "
                f"(iv) max gap {dm['max_gap']:.2e}, bound halves {dm['bound_halves']}")
    assert ok


def test_criterion_5_tartan(line):
    t0 = time.perf_counter()
    comp, scal = run_suite(["tartan_compatibility", "tartan_scaling"], GOLDEN, seed=7)
    elapsed = time.perf_counter() - t0
    its = scal.metrics["iterates"]
    ok = (comp.passed and comp.metrics["depth"] == 12 and comp.metrics["pieces"][0]["stable"] == 8
          and scal.passed and len(its) == 3 and elapsed < 60)
    line(5, ok, f"compatibility gap {comp.metrics['max_gap']:.1e}, scaling iterates {len(its)} "
                f"(image gaps {max(r['compatibility_gap'] for r in its):.1e}), {elapsed:.1f}s")
    assert ok


def test_criterion_6_fiber_arc_structure(line):
    reps = [run_suite(["fiber_arc_structure"], spec, seed=7)[0] for spec in (GOLDEN, "1.62")]
    ok = all(r.passed and r.metrics["samples"] == 100 for r in reps)
    line(6, ok, "; ".join(f"{LABELS.get(r.provenance['lambda'], r.provenance['lambda'])}: total gap {r.metrics['max_total_gap']:.1e}, "
                          f"mismatches {r.metrics['endpoint_mismatches'] + r.metrics['pair_mismatches']}"
                          for r in reps))
    assert ok


def test_criterion_7_density_cross_validation(line):
    reps = {r.name: r for r in run_suite(["grid_vs_markov", "grid_vs_birkhoff"], GOLDEN, seed=7)}
    gm, gb = reps["grid_vs_markov"], reps["grid_vs_birkhoff"]
    golden_l1 = next(p["l1"] for p in gm.metrics["parameters"] if p["lambda"] == GOLDEN)
    ok = golden_l1 <= 0.02 and gb.passed and gb.metrics["steps"] == 10 ** 7
    line(7, ok, f"golden grid vs markov L1 {golden_l1:.2e}; lambda 1.9 grid vs Birkhoff L1 {gb.metrics['l1']:.2e}")
    assert ok


def test_criterion_8_irrational_probe(line):
    horizon = 10_000
    tm = TentMap(Parameter.decimal("1.7548776662"))
    try:
        ca = cantor_approx(tm, horizon)
        outcome, certified = f"completed, no plateau entry in {len(ca.points)} steps", True
    except EnteredGamma as exc:
        outcome, certified = f"EnteredGamma at step {exc.step} ({exc.where})", exc.step is not None
    h = height_or_undecided(tm, horizon)
    width = h.bracket[1] - h.bracket[0]
    ok = certified and width <= 10 / horizon
    line(8, ok, f"{outcome}; height {h.kind} {h.m}/{h.n}, bracket width {width:g}")
    assert ok


DETERMINISM = [
    ("sweep.json", ["--json", "sweep", "--steps", "120"]),
    ("sweep.csv", ["sweep", "--steps", "120"]),
    ("verify.json", ["--json", "--depth", "12", "verify", "preimages", "hat_involution", "core_invariant",
                     "height_monotone", "holonomy"]),
    ("fiber.json", ["--json", "fiber", "--x", "0.61"]),
    ("density.csv", ["density", "--grid", "4096", "--rows", "128"]),
    ("chart.csv", ["chart", "--K", "0.62,0.66"]),
    ("staircase.svg", ["render", "staircase", "--steps", "120"]),
    ("tentgraph.svg", ["render", "tentgraph"]),
    ("fiberarc.svg", ["render", "fiberarc"]),
]


def test_criterion_9_determinism(line, tmp_path):
    differing = []
    for name, args in DETERMINISM:
        outputs = []
        for workers in (1, 4, 16):
            out = tmp_path / f"{workers}_{name}"
            argv = ["--workers", str(workers)] + args
            if args[0] == "render" or "render" in args:
                argv += ["--out", str(out)]
            else:
                argv = ["--out", str(out)] + argv
            res = CliRunner().invoke(main, argv, catch_exceptions=False)
            assert res.exit_code == 0, res.output
            outputs.append(out.read_bytes())
        if not (outputs[0] == outputs[1] == outputs[2]) or not outputs[0]:
            differing.append(name)
    ok = not differing
    line(9, ok, f"{len(DETERMINISM)} outputs compared across 1/4/16 workers; differing: {differing or 'none'}")
    assert ok
