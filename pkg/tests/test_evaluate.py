import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formulas import dependence_formulas, quantifier_free, with_quantifier
from oracles import indep_literal, prob_indep_literal, sat
from strategies import prob_teams, teams
from teamsem.evaluate import (
    EvalContext,
    EvaluationError,
    UnsupportedFragment,
    Verdict,
    eval_possibilistic,
    eval_probabilistic,
    holds,
    indep_atom_holds,
    prob_indep_atom_holds,
)
from teamsem.formula import parse
from teamsem.io import read_team
from teamsem.random_teams import mixed_prob_team, random_team
from teamsem.team import ProbabilisticTeam, Team, collapse, dirac, uniform_lift

EPR_FORMULA = "Eh z . ( =(z) /\\ y0 _||_ y1 | x0 x1 z )"
BINARY = EvalContext(domain=(0, 1))


@pytest.fixture
def worked(fixtures):
    return read_team(fixtures / "worked_example.csv")


@pytest.fixture
def epr(fixtures):
    return read_team(fixtures / "epr.csv")


def test_worked_example_satisfies_conditional_independence(worked):
    assert eval_possibilistic(worked, parse("y0 _||_ y1 | x0 x1")) is Verdict.TRUE
    assert indep_atom_holds(worked, ["y0"], ["x0", "x1"], ["y1"])


def test_epr_has_no_single_valued_outcome_independent_realization(epr):
    assert eval_possibilistic(epr, parse(EPR_FORMULA), EvalContext(k_max=1)) is Verdict.FALSE


def test_epr_fails_conditional_independence(epr):
    assert not indep_atom_holds(epr, ["y0"], ["x0", "x1"], ["y1"])


def test_empty_team_satisfies_everything():
    empty = Team(["x0", "y0", "y1", "x1"], [])
    assert eval_possibilistic(empty, parse(EPR_FORMULA)) is Verdict.TRUE
    assert eval_possibilistic(empty, parse("x0 != x0")) is Verdict.TRUE


@given(teams(min_rows=1, max_rows=1), st.lists(st.tuples(st.sampled_from(["v0", "v1", "v2"])), min_size=1, max_size=3))
def test_singleton_satisfies_independence_atoms(t, pairs):
    phi = parse(" /\\ ".join(f"{a} _||_ v1 | v2" for (a,) in pairs), warn_roles=False)
    assert eval_possibilistic(t, phi) is Verdict.TRUE


@given(teams(), st.lists(st.sampled_from(["v0", "v1", "v2"]), max_size=2), st.lists(st.sampled_from(["v0", "v1", "v2"]), min_size=1, max_size=2))
def test_reflexivity(t, x, y):
    assert indep_atom_holds(t, x, x, y)


def test_inexact_verdicts_have_no_plain_truth_value(epr):
    with pytest.raises(ValueError):
        bool(Verdict.INCONCLUSIVE)
    assert bool(Verdict.BOUNDED_TRUE) and not bool(Verdict.BOUNDED_FALSE)
    with pytest.raises(EvaluationError):
        holds(epr, parse("Eh z . y0 _||_ y1 | x0 x1 z"), EvalContext(k_max=1))


def test_budget_exhaustion_is_inconclusive(epr):
    assert eval_possibilistic(epr, parse(EPR_FORMULA), EvalContext(budget=2)) is Verdict.INCONCLUSIVE


def test_new_sort_verdicts(epr):
    ctx = EvalContext(k_max=2)
    # a found witness is exact; an exhausted search without constancy is only bounded
    assert eval_possibilistic(epr, parse("Eh z . y0 _||_ y1 | x0 x1 z"), ctx) is Verdict.TRUE
    phi = parse("Eh z . ( =(x0 ; z) /\\ y0 _||_ y1 | x0 x1 z )")
    assert eval_possibilistic(epr, phi, ctx) is Verdict.BOUNDED_FALSE
    assert eval_possibilistic(epr, parse("Ah z . ( z _||_ y0 )"), ctx) is Verdict.BOUNDED_TRUE
    assert eval_possibilistic(epr, parse("Ah z . ( =(z) )"), ctx) is Verdict.FALSE


def test_context_validation():
    with pytest.raises(ValueError):
        EvalContext(k_max=0)
    with pytest.raises(ValueError):
        EvalContext(budget=0)


def test_free_variables_must_be_in_the_domain(epr):
    with pytest.raises(EvaluationError):
        eval_possibilistic(epr, parse("y0 _||_ q0", warn_roles=False))


# ------------------------------------------------------------- oracles


@given(teams(max_rows=5), quantifier_free())
def test_quantifier_free_matches_oracle(t, phi):
    assert bool(eval_possibilistic(t, phi, BINARY)) == sat(t.rows, t.names, phi, (0, 1))


@settings(max_examples=60)
@given(teams(max_rows=3), with_quantifier())
def test_quantified_matches_oracle(t, phi):
    v = eval_possibilistic(t, phi, BINARY)
    assert v.exact
    assert bool(v) == sat(t.rows, t.names, phi, (0, 1))


@given(teams(max_rows=6), st.data())
def test_atom_matches_literal_definition(t, data):
    pick = st.lists(st.sampled_from(t.names), max_size=2)
    y, x, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert indep_atom_holds(t, y, x, z) == indep_literal(t.rows, t.names, y, x, z)


@given(prob_teams(), st.data())
def test_prob_atom_matches_literal_identity(pt, data):
    pick = st.lists(st.sampled_from(pt.names), max_size=2)
    y, x, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert prob_indep_atom_holds(pt, y, x, z) == prob_indep_literal(pt.weights, pt.names, y, x, z)


# ------------------------------------------------------------ closure laws


def test_downward_closure_of_dependence_formulas():
    rng = random.Random(7)
    names = ["v0", "v1", "v2"]
    checked = 0
    for _ in range(1000):
        t = random_team(rng, names, domain_size=2, max_rows=6)
        phi = _random_dependence_formula(rng, names)
        if not eval_possibilistic(t, phi, BINARY):
            continue
        sub = Team(names, [r for r in t.rows if rng.random() < 0.5])
        assert eval_possibilistic(sub, phi, BINARY), (t, sub, phi)
        checked += 1
    assert checked > 100


def _random_dependence_formula(rng, names, depth=2):
    from teamsem.formula import And, Or, dep

    if depth == 0 or rng.random() < 0.4:
        x = tuple(rng.sample(names, rng.randint(0, 2)))
        y = tuple(rng.sample(names, rng.randint(1, 2)))
        return dep(x, y)
    op = And if rng.random() < 0.5 else Or
    return op(_random_dependence_formula(rng, names, depth - 1), _random_dependence_formula(rng, names, depth - 1))


def test_independence_atoms_are_closed_under_unions_of_chains():
    rng = random.Random(11)
    names = ["v0", "v1", "v2"]
    found = 0
    for _ in range(3000):
        full = random_team(rng, names, domain_size=2, max_rows=8, min_rows=3)
        rows = list(full.rows)
        rng.shuffle(rows)
        i, j = sorted(rng.sample(range(1, len(rows) + 1), 2))
        chain = [Team(names, rows[:i]), Team(names, rows[:j]), full]
        y, x, z = (rng.sample(names, rng.randint(k, 1)) for k in (1, 0, 1))
        if all(indep_atom_holds(c, y, x, z) for c in chain[:2]):
            found += 1
            union = Team(names, set(chain[0].rows) | set(chain[1].rows))
            assert indep_atom_holds(union, y, x, z)
    assert found > 100


@given(prob_teams(), dependence_formulas(max_leaves=3))
def test_weak_flatness_of_dependence_formulas(pt, phi):
    assert eval_probabilistic(pt, phi) == bool(eval_possibilistic(collapse(pt), phi))


@given(prob_teams(), quantifier_free(disjunction=False))
def test_probabilistic_truth_is_preserved_by_collapse(pt, phi):
    if eval_probabilistic(pt, phi):
        assert eval_possibilistic(collapse(pt), phi)


def test_evaluation_is_deterministic(epr):
    phi = parse(EPR_FORMULA)
    verdicts = {eval_possibilistic(epr, phi, EvalContext(k_max=k)) for k in (1, 1, 1)}
    assert len(verdicts) == 1


# ---------------------------------------------------------- probabilistic


def test_quantum_epr_fails_probabilistic_independence(fixtures):
    q = read_team(fixtures / "epr_quantum.csv")
    assert not eval_probabilistic(q, parse("y0 _||_ y1 | x0 x1"))


def test_uniform_lift_of_worked_example_satisfies_independence(worked):
    assert eval_probabilistic(uniform_lift(worked), parse("y0 _||_ y1 | x0 x1"))


@given(prob_teams())
def test_reflexive_dependence_always_holds(pt):
    assert eval_probabilistic(pt, parse("=(v0 ; v0)", warn_roles=False))


def test_unsupported_fragments_are_rejected(epr):
    pt = uniform_lift(epr)
    with pytest.raises(UnsupportedFragment):
        eval_probabilistic(pt, parse("y0 _||_ y1 \\/ x0 = x1"))
    with pytest.raises(UnsupportedFragment):
        eval_probabilistic(pt, parse("E z . =(z)"))


def test_witness_kernels_and_duplication(epr):
    pt = uniform_lift(epr)
    coin = lambda s: {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert eval_probabilistic(pt, parse("E z . z _||_ x0 x1 y0 y1"), witnesses={"z": coin})
    copy = lambda s: {s["y0"]: 1}
    assert not eval_probabilistic(pt, parse("E z . z _||_ y0"), witnesses={"z": copy})
    assert eval_probabilistic(pt, parse("A z . z _||_ y0 y1"), EvalContext(domain=(0, 1)))


def test_dependence_disjunction_goes_through_the_collapse():
    pt = ProbabilisticTeam(["v0", "v1"], {(0, 0): Fraction(1, 3), (1, 1): Fraction(2, 3)})
    assert eval_probabilistic(pt, parse("=(v0 ; v1) \\/ =(v1)", warn_roles=False))
    phi = parse("=(v0) \\/ =(v1)", warn_roles=False)
    assert eval_probabilistic(pt, phi) == bool(eval_possibilistic(collapse(pt), phi)) is True


def test_dirac_satisfies_every_quantifier_free_atom():
    pt = dirac(["v0", "v1"], (0, 1))
    assert eval_probabilistic(pt, parse("v0 _||_ v1 /\\ =(v0) /\\ v0 != v1", warn_roles=False))


def test_collapse_preservation_on_structured_teams():
    rng = random.Random(3)
    names = ["v0", "v1", "v2"]
    for _ in range(300):
        pt = mixed_prob_team(rng, names)
        y, x, z = (tuple(rng.sample(names, rng.randint(k, 2))) for k in (1, 0, 1))
        phi = parse(f"{' '.join(y)} _||_ {' '.join(z)}" + (f" | {' '.join(x)}" if x else ""), warn_roles=False)
        if eval_probabilistic(pt, phi):
            assert eval_possibilistic(collapse(pt), phi)
