"""CSV and JSON serialization for teams and probabilistic teams."""

from __future__ import annotations

import csv
import io
import json
import re
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Union

from .team import ProbabilisticTeam, Role, Team, TeamError, Var

_INT = re.compile(r"-?\d+\Z")
PROB_COLUMN = "prob"


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_value(token: str):
    token = token.strip()
    return int(token) if _INT.match(token) else token


def parse_rational(token: str) -> Fraction:
    token = token.strip()
    try:
        if "/" in token:
            p, q = token.split("/")
            return Fraction(int(p), int(q))
        return Fraction(Decimal(token))
    except (ValueError, InvalidOperation, ZeroDivisionError):
        raise ValueError(f"not a rational: {token!r}") from None


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_value(v) -> str:
    return str(v)


def loads_csv(text: str) -> Union[Team, ProbabilisticTeam]:
    reader = csv.reader(io.StringIO(text))
    lines = [(i + 1, row) for i, row in enumerate(reader) if row and any(c.strip() for c in row)]
    if not lines:
        raise FormatError("empty file: expected a header row of variable names", 1)
    lineno, header = lines[0]
    header = [h.strip() for h in header]
    probabilistic = header[-1] == PROB_COLUMN
    names = header[:-1] if probabilistic else header
    roles = None
    body = lines[1:]
    if body and body[0][1][0].strip().startswith("#roles:"):
        rl, cells = body[0]
        first = cells[0].strip()[len("#roles:"):]
        tokens = [t.strip() for t in [first] + cells[1:] if t.strip()]
        if len(tokens) != len(names):
            raise FormatError(f"roles row has {len(tokens)} entries for {len(names)} variables", rl)
        try:
            roles = [Role(t) for t in tokens]
        except ValueError as e:
            raise FormatError(f"unknown role: {e}", rl) from None
        body = body[1:]
    rows, weights = [], []
    for ln, cells in body:
        if cells[0].strip().startswith("#"):
            continue
        if len(cells) != len(header):
            raise FormatError(f"expected {len(header)} fields, got {len(cells)}", ln)
        vals = tuple(parse_value(c) for c in cells[: len(names)])
        rows.append(vals)
        if probabilistic:
            try:
                weights.append(parse_rational(cells[-1]))
            except ValueError as e:
                raise FormatError(str(e), ln) from None
    variables = [Var(n, roles[i]) if roles else Var.of(n) for i, n in enumerate(names)]
    try:
        if probabilistic:
            return ProbabilisticTeam(variables, list(zip(rows, weights)))
        return Team(variables, rows)
    except TeamError as e:
        raise FormatError(str(e)) from None


def dumps_csv(team: Union[Team, ProbabilisticTeam], roles: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    probabilistic = isinstance(team, ProbabilisticTeam)
    w.writerow(list(team.names) + ([PROB_COLUMN] if probabilistic else []))
    if roles:
        rs = [r.value for r in team.roles]
        w.writerow(["#roles: " + rs[0]] + rs[1:] if rs else ["#roles:"])
    for r in team.rows:
        cells = [format_value(v) for v in r]
        if probabilistic:
            cells.append(format_rational(team.weights[r]))
        w.writerow(cells)
    return buf.getvalue()


def team_to_json(team: Union[Team, ProbabilisticTeam]) -> dict:
    d = {"domain": list(team.names), "roles": [r.value for r in team.roles], "rows": [list(r) for r in team.rows]}
    if isinstance(team, ProbabilisticTeam):
        d["weights"] = [format_rational(team.weights[r]) for r in team.rows]
    return d


def team_from_json(d: dict) -> Union[Team, ProbabilisticTeam]:
    roles = d.get("roles")
    variables = [Var(n, Role(roles[i])) if roles else Var.of(n) for i, n in enumerate(d["domain"])]
    rows = [tuple(r) for r in d["rows"]]
    if "weights" in d:
        return ProbabilisticTeam(variables, [(r, parse_rational(str(w))) for r, w in zip(rows, d["weights"])])
    return Team(variables, rows)


def read_team(path: Union[str, Path]):
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            return team_from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError) as e:
            raise FormatError(f"{path}: {e}") from None
    return loads_csv(text)


def write_team(team, path: Union[str, Path]) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(team_to_json(team), indent=2) + "\n")
    else:
        path.write_text(dumps_csv(team))
