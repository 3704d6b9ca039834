"""Hypothesis strategies for small teams."""

from fractions import Fraction

from hypothesis import strategies as st

from teamsem.team import ProbabilisticTeam, Team

NAMES = ("v0", "v1", "v2")


@st.composite
def teams(draw, names=NAMES, domain=2, min_rows=0, max_rows=6):
    row = st.tuples(*[st.integers(0, domain - 1)] * len(names))
    rows = draw(st.lists(row, min_size=min_rows, max_size=max_rows, unique=True))
    return Team(list(names), rows)


@st.composite
def prob_teams(draw, names=NAMES, domain=2, max_rows=6):
    t = draw(teams(names, domain, min_rows=1, max_rows=max_rows))
    nums = draw(st.lists(st.integers(1, 9), min_size=len(t.rows), max_size=len(t.rows)))
    total = sum(nums)
    return ProbabilisticTeam(t.variables, {r: Fraction(k, total) for r, k in zip(t.rows, nums)})


@st.composite
def empirical_teams(draw, n=2, domain=2, min_rows=1, max_rows=6):
    names = tuple(f"x{i}" for i in range(n)) + tuple(f"y{i}" for i in range(n))
    return draw(teams(names, domain, min_rows, max_rows))
