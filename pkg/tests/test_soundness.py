import pytest

from teamsem.soundness import (
    POSSIBILISTIC,
    PROBABILISTIC,
    exhaustive_counterexample,
    separoid_fuzz,
    soundness_fuzz,
    studeny_fuzz,
    studeny_possibilistic,
    studeny_probabilistic,
)
from teamsem.team import Team, dirac, uniform_lift


@pytest.mark.parametrize("semantics", [POSSIBILISTIC, PROBABILISTIC])
@pytest.mark.parametrize("rule", range(1, 10))
def test_rules_have_no_counterexamples(rule, semantics):
    r = soundness_fuzz(rule, 400, semantics)
    assert r.sound, r.counterexamples[:1]
    assert r.nonvacuous > 0


@pytest.mark.parametrize("rule", range(1, 10))
def test_rules_survive_exhaustive_small_teams(rule):
    assert exhaustive_counterexample(rule, max_rows=3) is None


def test_fuzz_catches_an_unsound_rule():
    assert not soundness_fuzz("symmetry_drop", 500).sound
    team, inst = exhaustive_counterexample("symmetry_drop", max_rows=3)
    assert isinstance(team, Team)


def test_fuzz_is_reproducible():
    a = soundness_fuzz(7, 200, PROBABILISTIC, seed=4)
    b = soundness_fuzz(7, 200, PROBABILISTIC, seed=4)
    assert (a.nonvacuous, a.counterexamples) == (b.nonvacuous, b.counterexamples)
    with pytest.raises(ValueError):
        soundness_fuzz(1, 0)


def test_separoid_laws():
    reports = separoid_fuzz(500)
    assert {"P1", "P2", "P3", "P4", "P5"} <= set(reports)
    for name, r in reports.items():
        assert r.sound, name
        assert r.nonvacuous > 0, name


@pytest.mark.parametrize("semantics", [POSSIBILISTIC, PROBABILISTIC])
def test_studeny_rules_in_their_own_semantics(semantics):
    r = studeny_fuzz(semantics, 600)
    assert r.sound and r.nonvacuous > 100


def test_studeny_instances_by_hand():
    # x, y, z, u all constant: every premise and the conclusion hold
    t = Team(["a", "b", "c", "d"], [(0, 0, 0, 0)])
    assert studeny_possibilistic(t, "a", "b", "c", "d") is True
    assert studeny_probabilistic(dirac(t.variables, t.rows[0]), "a", "b", "c", "d") is True
    # a = b uniformly random: x ⊥ y fails, so the rule is vacuous
    t2 = Team(["a", "b", "c", "d"], [(0, 0, 0, 0), (1, 1, 0, 0)])
    assert studeny_probabilistic(uniform_lift(t2), "a", "b", "c", "d") is None

