import random
import time

import pytest

from teamsem.derivation import AtomFact, Derivation, Step, check_step, entail, replay, side_tuples
from teamsem.evaluate import indep_atom_holds
from teamsem.random_teams import random_hidden_team

LEMMAS = {
    "weak determinism gives outcome independence": (["=(x0 x1 z ; y0)", "=(x0 x1 z ; y1)"], "y0 _||_ y1 | x0 x1 z"),
    "strong determinism gives parameter independence": (["=(x0 z ; y0)", "=(x1 z ; y1)"], "x1 _||_ y0 | x0 z"),
    "parameter independence and weak determinism give strong determinism": (
        ["x1 _||_ y0 | x0 z", "=(x0 x1 z ; y0)"],
        "=(x0 z ; y0)",
    ),
}


@pytest.mark.parametrize("name", sorted(LEMMAS))
def test_lemmas_are_derived_and_replay(name):
    premises, goal = LEMMAS[name]
    t0 = time.perf_counter()
    res = entail(premises, goal, depth=6)
    assert time.perf_counter() - t0 < 5
    assert res and res.rounds <= 6
    assert res.derivation.goal == AtomFact.parse(goal)
    assert replay(res.derivation, [AtomFact.parse(p) for p in premises])


@pytest.mark.parametrize("name", sorted(LEMMAS))
def test_every_derived_step_holds_on_teams_satisfying_the_premises(name):
    premises, goal = LEMMAS[name]
    d = entail(premises, goal).derivation
    prem = [AtomFact.parse(p) for p in premises]
    rng = random.Random(name)
    hits = 0
    for _ in range(2000):
        t = random_hidden_team(rng, 2, 1, max_rows=6)
        if not all(indep_atom_holds(t, p.y, p.x, p.z) for p in prem):
            continue
        hits += 1
        for st in d.steps:
            assert indep_atom_holds(t, st.fact.y, st.fact.x, st.fact.z)
    assert hits > 50


def test_canonical_form_and_printing():
    a = AtomFact.parse("y1 y0 _||_ x1 x0 | z")
    assert a == AtomFact(("y0", "y1"), ("z",), ("x0", "x1"))
    assert str(a) == "y0 y1 _||_ x0 x1 | z"
    assert AtomFact.parse("=(x0 ; y0)").y == AtomFact.parse("=(x0 ; y0)").z


def test_premise_goal_is_immediate():
    res = entail(["y0 _||_ y1 | x0"], "y0 _||_ y1 | x0")
    assert res.rounds == 0 and res.derivation.rule_steps == 0


def test_underivable_goal_is_reported_as_a_bound_not_a_refutation():
    res = entail(["x0 _||_ y0"], "x0 _||_ y1", depth=2)
    assert not res and res.exhausted
    assert res.diagnostics


def test_fact_cap():
    res = entail(["x0 _||_ y0"], "x0 _||_ y1", depth=6, max_facts=50)
    assert not res and "cap" in res.diagnostics[0]


def test_input_validation():
    with pytest.raises(ValueError):
        entail([], "x0 _||_ y0", depth=0)
    with pytest.raises(ValueError):
        entail(["x0 _||_ y0"], "x0 _||_ q", universe=["x0", "y0"])


def test_side_tuples():
    assert side_tuples(["b", "a"], 1) == [(), ("a",), ("b",)]
    assert len(side_tuples("abcd", 3)) == 1 + 4 + 6 + 4


def test_step_checker_rejects_wrong_conclusions():
    a = AtomFact.parse("x _||_ y | z")
    assert check_step(3, [a], AtomFact.parse("y _||_ x | z"))
    assert not check_step(3, [a], AtomFact.parse("y _||_ x"))
    assert not check_step(1, [a], AtomFact.parse("x _||_ u | z"))
    assert check_step(4, [AtomFact.parse("x w _||_ y | z")], a)
    bogus = Derivation((Step(a, None, (), 0), Step(AtomFact.parse("y _||_ x"), 3, (0,))))
    assert not replay(bogus, [a])


def test_derivation_text_lists_rules():
    premises, goal = LEMMAS["strong determinism gives parameter independence"]
    text = str(entail(premises, goal).derivation)
    assert "premise 1" in text and "Symmetry" in text
