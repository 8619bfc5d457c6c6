import json
import random
from fractions import Fraction

import pytest

from tentlab.errors import DomainError, NotInY, UnknownSuite
from tentlab.verify import (PASS, SUITES, admissible_K, build_tartan, check_compatibility, check_disintegration,
                            check_scaling, check_tameness, run_suite, suite_names)

from conftest import GOLDEN

QUICK = ["core_invariant", "cylinder_additivity", "exact_orbit", "fa_p_ahat", "hat_involution", "height_monotone",
         "interval_outward", "lift_degree_one", "preimages", "pf_residual", "spike_halving", "grid_vs_markov"]


def test_suite_names_cover_the_properties():
    names = suite_names()
    assert names == sorted(SUITES)
    for want in ("model_action", "height_monotone", "holonomy", "disintegration", "alpha_scaling",
                 "tartan_compatibility", "tartan_scaling", "fiber_arc_structure", "grid_vs_birkhoff",
                 "irrational_avoidance", "tameness", "regularity"):
        assert want in names


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite(["no_such_suite"])


@pytest.mark.parametrize("name", QUICK)
def test_quick_suites_pass_at_golden(name):
    (rep,) = run_suite([name], GOLDEN, seed=7)
    assert rep.status == PASS, rep.metrics


def test_reports_deterministic_and_ordered():
    names = ["preimages", "hat_involution", "core_invariant"]
    one = run_suite(names, GOLDEN, seed=3, workers=1)
    many = run_suite(names, GOLDEN, seed=3, workers=4)
    assert [r.name for r in one] == sorted(names)
    assert json.dumps([r.as_dict() for r in one], sort_keys=True) == \
        json.dumps([r.as_dict() for r in many], sort_keys=True)


def test_model_action_decimal():
    (rep,) = run_suite(["model_action"], "1.62", seed=1, depth=12)
    assert rep.passed and rep.metrics["max_gap"] <= 2.0 ** -40


def test_small_tartan(golden, golden_density):
    K = admissible_K(golden, 0.1, random.Random(5))
    t = build_tartan(golden, golden_density, K, 8, 4)
    piece = t.pieces[0]
    assert piece.shape[1] == 4
    assert all(len(row) == 4 for row in piece.matrix)
    assert check_compatibility(t, seed=1).passed
    assert check_scaling(t, iterates=1).passed


def test_tartan_rejects(golden, golden_density):
    with pytest.raises(NotInY):
        build_tartan(golden, golden_density, (golden.a, golden.b), 6, 4)
    with pytest.raises(DomainError):
        build_tartan(golden, golden_density, (Fraction(62, 100), Fraction(66, 100)), 6, 0)


def test_tameness(golden, golden_density):
    rep = check_tameness(golden, golden_density, 10, 6, seed=2)
    assert rep.passed and rep.metrics["min_mass_ratio"] >= 1 - 1e-12


def test_single_disintegration(golden_density):
    rep = check_disintegration(golden_density, 3, (golden_density.a, 0.5))
    assert rep.passed
    assert rep.metrics["fine"]["quadrature_bound"] == pytest.approx(rep.metrics["coarse"]["quadrature_bound"] / 2,
                                                                     rel=1e-9)
