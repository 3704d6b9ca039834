from fractions import Fraction

import pytest
from hypothesis import given

from strategies import prob_teams, teams
from teamsem.io import (
    FormatError,
    dumps_csv,
    format_rational,
    loads_csv,
    parse_rational,
    read_team,
    team_from_json,
    team_to_json,
    write_team,
)
from teamsem.team import ProbabilisticTeam, Role, Team

GOLDEN = [
    "worked_example",
    "epr",
    "ghz_minimal",
    "hardy_minimal",
    "hardy_reference_rows",
    "ns_counterexample",
    "epr_quantum",
    "ghz_quantum_excluded",
    "hardy_quantum_collapse",
]


@pytest.mark.parametrize("name", GOLDEN)
def test_golden_fixture_round_trips(fixtures, name):
    team = read_team(fixtures / f"{name}.csv")
    text = dumps_csv(team)
    again = loads_csv(text)
    assert again == team
    assert again.roles == team.roles
    assert dumps_csv(again) == text


def test_roles_row_overrides_prefixes():
    t = loads_csv("a,b\n#roles: m,o\n0,1\n")
    assert t.roles == (Role.MEASUREMENT, Role.OUTCOME)


def test_prob_column_makes_a_probabilistic_team():
    t = loads_csv("x0,prob\n0,0.25\n1,3/4\n")
    assert isinstance(t, ProbabilisticTeam)
    assert t.weights == {(0,): Fraction(1, 4), (1,): Fraction(3, 4)}


def test_decimals_are_exact():
    assert parse_rational("0.1") == Fraction(1, 10)
    with pytest.raises(FormatError):
        # 1/3 + 0.666…667 is not exactly 1
        loads_csv("a,prob\n0,1/3\n1,0.666666666666666667\n")


def test_format_errors_carry_a_line_number():
    with pytest.raises(FormatError) as e:
        loads_csv("a,b\n0,1\n2\n")
    assert e.value.line == 3


def test_format_rational():
    assert format_rational(Fraction(3, 6)) == "1/2"
    assert format_rational(1) == "1"


def test_json_and_csv_files(tmp_path):
    t = Team(["x0", "y0"], [(0, "a"), (1, "b")])
    for suffix in (".csv", ".json"):
        p = tmp_path / f"t{suffix}"
        write_team(t, p)
        assert read_team(p) == t


@given(teams())
def test_csv_round_trip(t):
    assert loads_csv(dumps_csv(t)) == t


@given(prob_teams())
def test_prob_csv_and_json_round_trip(pt):
    assert loads_csv(dumps_csv(pt)) == pt
    assert team_from_json(team_to_json(pt)) == pt
