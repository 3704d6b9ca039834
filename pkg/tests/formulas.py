"""Hypothesis strategies for formulas over v0..v2."""

from hypothesis import strategies as st

from teamsem.formula import And, Eq, Exists, Forall, Indep, Neq, Or

NAMES = ("v0", "v1", "v2")

var_tuples = st.lists(st.sampled_from(NAMES), min_size=0, max_size=2).map(tuple)


def atoms(names=NAMES, first_order=True):
    tuples = st.lists(st.sampled_from(names), min_size=0, max_size=2).map(tuple)
    nonempty = st.lists(st.sampled_from(names), min_size=1, max_size=2).map(tuple)
    indep = st.builds(Indep, nonempty, nonempty, tuples)
    dep = st.builds(lambda x, y: Indep(y, y, x), tuples, nonempty)
    options = [indep, dep]
    if first_order:
        pair = st.tuples(st.sampled_from(names), st.sampled_from(names))
        options += [pair.map(lambda p: Eq(*p)), pair.map(lambda p: Neq(*p))]
    return st.one_of(*options)


def quantifier_free(names=NAMES, max_leaves=4, disjunction=True):
    def extend(children):
        ops = [st.builds(And, children, children)]
        if disjunction:
            ops.append(st.builds(Or, children, children))
        return st.one_of(*ops)

    return st.recursive(atoms(names), extend, max_leaves=max_leaves)


def dependence_formulas(names=NAMES, max_leaves=4):
    tuples = st.lists(st.sampled_from(names), min_size=0, max_size=2).map(tuple)
    nonempty = st.lists(st.sampled_from(names), min_size=1, max_size=2).map(tuple)
    dep = st.builds(lambda x, y: Indep(y, y, x), tuples, nonempty)

    def extend(children):
        return st.one_of(st.builds(And, children, children), st.builds(Or, children, children))

    return st.recursive(dep, extend, max_leaves=max_leaves)


def with_quantifier(names=NAMES):
    """One ∃u or ∀u wrapped around a quantifier-free body mentioning u."""
    body = quantifier_free(names + ("u",), max_leaves=3)
    return st.one_of(st.builds(Exists, st.just("u"), body), st.builds(Forall, st.just("u"), body))
