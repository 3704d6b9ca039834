import random

import numpy as np
import pytest

from teamsem.evaluate import eval_probabilistic
from teamsem.formula import parse
from teamsem.io import read_team
from teamsem.probe import ProbeConfig, identity_matrices, residuals, search_probabilistic_realization, target_formula
from teamsem.random_teams import random_empirical_team
from teamsem.team import ProbabilisticTeam, collapse

SMALL = ProbeConfig(restarts=200, iterations=200)


def test_identity_residuals_vanish_exactly_when_the_atoms_hold():
    rng = random.Random(0)
    seen = set()
    for _ in range(300):
        X = random_empirical_team(rng, 2, max_rows=6)
        pt = ProbabilisticTeam(X.variables, {r: rng.randint(1, 3) for r in X.rows}, normalize=True)
        phi = target_formula(X, ["NS"])
        P = np.array([[float(pt.weights[r]) for r in X.rows]])
        zero = bool(np.abs(residuals(identity_matrices(X, phi), P)).max(initial=0) < 1e-12)
        holds = eval_probabilistic(pt, phi)
        assert zero == holds
        seen.add(holds)
    assert seen == {True, False}


def test_worked_example_has_an_exact_independence_witness(fixtures):
    X = read_team(fixtures / "worked_example.csv")
    phi = parse("y0 _||_ y1 | x0 x1")
    res = search_probabilistic_realization(X, phi, SMALL)
    assert res.exact and res.witness is not None
    assert collapse(res.witness) == X
    assert eval_probabilistic(res.witness, phi)


def test_probe_reports_a_positive_residual_when_the_support_forbids_the_target(fixtures):
    X = read_team(fixtures / "worked_example.csv")
    res = search_probabilistic_realization(X, ["NS"], SMALL)
    assert res.witness is None and res.residual > 1e-4


def test_no_probabilistic_no_signalling_on_the_counterexample_team(fixtures):
    X = read_team(fixtures / "ns_counterexample.csv")
    res = search_probabilistic_realization(X, ["NS"], ProbeConfig(restarts=500))
    assert res.witness is None and res.residual >= 1e-6


def test_probe_is_reproducible_and_independent_of_workers(fixtures):
    X = read_team(fixtures / "ns_counterexample.csv")
    cfg = ProbeConfig(restarts=2500, iterations=50, seed=3)
    a = search_probabilistic_realization(X, ["NS"], cfg)
    b = search_probabilistic_realization(X, ["NS"], cfg)
    c = search_probabilistic_realization(X, ["NS"], ProbeConfig(restarts=2500, iterations=50, seed=3, workers=3))
    assert a == b == c


def test_probe_rejects_non_atomic_targets(fixtures):
    X = read_team(fixtures / "epr.csv")
    with pytest.raises(ValueError):
        search_probabilistic_realization(X, parse("x0 = x1"), SMALL)
