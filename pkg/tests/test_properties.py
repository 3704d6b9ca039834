import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import local_literal, prob_local_literal
from strategies import empirical_teams, teams
from teamsem.evaluate import eval_probabilistic
from teamsem.formula import to_text
from teamsem.io import read_team
from teamsem.properties import (
    PropertyId,
    RoleError,
    Roles,
    build,
    check,
    check_atoms_directly,
    locality_holds,
    mutual_indep_conjunction,
    mutual_indep_product_holds,
    prob_locality_holds,
)
from teamsem.random_teams import (
    random_hidden_prob_team,
    random_hidden_team,
    random_instruction_team,
    random_local_prob_team,
)
from teamsem.quantum import ghz_system, quantum_team
from teamsem.team import Team, collapse, uniform_lift

HIDDEN2 = ("x0", "x1", "y0", "y1", "z")


def test_property_formulas_for_two_sites():
    r = Roles.standard(2, 1)
    assert to_text(build("SD", r)) == "=(x0 z ; y0) /\\ =(x1 z ; y1)"
    assert to_text(build("NS", r)) == "x1 _||_ y0 | x0 /\\ x0 _||_ y1 | x1"
    assert to_text(build("ZI", r)) == "z _||_ x0 x1"
    assert to_text(build("SV", r)) == "=(z)"


def test_roles_must_pair_up():
    with pytest.raises(RoleError):
        Roles(("x0", "x1"), ("y0",))
    with pytest.raises(RoleError):
        build("ZI", Roles.standard(2))
    assert Roles.standard(3, 2).zs == ("z0", "z1")


def test_no_signalling_examples(fixtures):
    assert check("NS", read_team(fixtures / "epr.csv"))
    assert check("NS", read_team(fixtures / "ns_counterexample.csv"))
    assert not check("NS", read_team(fixtures / "ghz_minimal.csv"))
    assert check("NS", collapse(quantum_team(ghz_system())))
    signalling = Team(["x0", "x1", "y0", "y1"], [(0, 0, 0, 0), (0, 1, 1, 0)])
    assert not check("NS", signalling)


@pytest.mark.parametrize("prop", [p for p in PropertyId if p is not PropertyId.LOCAL])
def test_evaluator_and_direct_atoms_agree(prop):
    rng = random.Random(prop.value)
    for _ in range(200):
        t = random_hidden_team(rng, 2, 1)
        assert check(prop, t) == check_atoms_directly(prop, t)
        pt = uniform_lift(t)
        assert check(prop, pt) == check_atoms_directly(prop, pt)


@given(teams(HIDDEN2, max_rows=7))
def test_locality_matches_literal_definition(t):
    assert locality_holds(t) == local_literal(t.rows, t.names, 2, ["z"])


@given(teams(HIDDEN2, max_rows=7))
def test_locality_is_parameter_and_outcome_independence(t):
    assert locality_holds(t) == (check("PI", t) and check("OI", t))


def test_instruction_teams_are_local():
    rng = random.Random(5)
    for _ in range(200):
        t = random_instruction_team(rng, rng.randint(1, 3))
        assert check("LOCAL", t) and check("SD", t) and check("ZI", t)


def test_probabilistic_locality_matches_literal_definition():
    rng = random.Random(9)
    seen = set()
    for _ in range(300):
        pt = random_hidden_prob_team(rng)
        v = prob_locality_holds(pt)
        assert v == prob_local_literal(pt.weights, pt.names, 2, ["z"])
        assert v == (check("PI", pt) and check("OI", pt))
        seen.add(v)
    assert seen == {True, False}


def test_mixtures_of_product_kernels_are_local():
    rng = random.Random(13)
    for _ in range(100):
        assert prob_locality_holds(random_local_prob_team(rng))


def test_mutual_independence_product_equals_pairwise_conjunction():
    rng = random.Random(17)
    for _ in range(300):
        pt = random_hidden_prob_team(rng)
        vs, u = [("y0",), ("y1",)], ("x0", "x1", "z")
        assert mutual_indep_product_holds(pt, vs, u) == eval_probabilistic(pt, mutual_indep_conjunction(vs, u))


@given(empirical_teams(n=2, max_rows=8))
def test_empirical_team_without_hidden_variables_is_local_iff_product_closed(t):
    # with no hidden variable, locality asks the team to be closed under mixing sites
    closed = all(
        (s[0], u[1], s[2], u[3]) in set(t.rows)
        for s, u in itertools.product(t.rows, repeat=2)
        if any(r[0] == s[0] and r[1] == u[1] for r in t.rows)
    )
    assert locality_holds(t) == closed
