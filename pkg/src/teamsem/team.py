"""Teams, probabilistic teams and the primitive operations on them.

A team is a finite set of assignments over an ordered variable domain.  Rows
are stored as value tuples aligned with the domain, in canonical sorted order.
Probabilistic teams carry exact ``Fraction`` weights; only positive weights are
stored, so the stored rows are exactly the support.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence, Union

Value = Hashable
Row = tuple


class Role(str, Enum):
    MEASUREMENT = "m"
    OUTCOME = "o"
    HIDDEN = "h"
    PLAIN = "p"


_PREFIX_ROLES = {"x": Role.MEASUREMENT, "y": Role.OUTCOME, "z": Role.HIDDEN}


class TeamError(ValueError):
    """Domain, arity or precondition violation on a team operation."""


def infer_role(name: str, warn: bool = False) -> Role:
    role = _PREFIX_ROLES.get(name[:1])
    if role is None:
        if warn:
            warnings.warn(f"no role prefix on variable {name!r}; treating as plain", stacklevel=3)
        return Role.PLAIN
    return role


@dataclass(frozen=True)
class Var:
    name: str
    role: Role = Role.PLAIN

    @classmethod
    def of(cls, name: str) -> "Var":
        return cls(name, infer_role(name))


def value_key(v: Value):
    # ints before strings; anything else by repr
    if isinstance(v, bool):
        return (0, int(v), "")
    if isinstance(v, int):
        return (0, v, "")
    if isinstance(v, str):
        return (1, 0, v)
    return (2, 0, repr(v))


def row_key(row: Row):
    return tuple(value_key(v) for v in row)


def sort_values(values: Iterable[Value]) -> tuple:
    return tuple(sorted(set(values), key=value_key))


def intern_token(obj) -> str:
    """Canonical string for structured hidden values (functions, pairs, tuples)."""
    if isinstance(obj, str):
        return obj
    if isinstance(obj, (int, bool)):
        return str(int(obj))
    if isinstance(obj, Mapping):
        items = sorted(obj.items(), key=lambda kv: row_key(kv[0]) if isinstance(kv[0], tuple) else (value_key(kv[0]),))
        return "{" + ";".join(f"{intern_token(k)}>{intern_token(v)}" for k, v in items) + "}"
    if isinstance(obj, (tuple, list)):
        return "(" + ",".join(intern_token(x) for x in obj) + ")"
    return repr(obj)


def _normalize_vars(variables: Sequence[Union[Var, str]], roles: Sequence[Role] | None = None) -> tuple[Var, ...]:
    out = []
    for i, v in enumerate(variables):
        if isinstance(v, Var):
            var = v
        else:
            var = Var.of(v)
        if roles is not None:
            var = Var(var.name, Role(roles[i]))
        out.append(var)
    names = [v.name for v in out]
    if len(set(names)) != len(names):
        raise TeamError(f"duplicate variable names in domain {names}")
    return tuple(out)


class _Domain:
    """Shared behaviour for the two team kinds."""

    variables: tuple[Var, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def roles(self) -> tuple[Role, ...]:
        return tuple(v.role for v in self.variables)

    def var(self, name: str) -> Var:
        for v in self.variables:
            if v.name == name:
                return v
        raise TeamError(f"unknown variable {name!r}; domain is {self.names}")

    def positions(self, names: Sequence[str]) -> tuple[int, ...]:
        index = {v.name: i for i, v in enumerate(self.variables)}
        try:
            return tuple(index[n] for n in names)
        except KeyError as e:
            raise TeamError(f"unknown variable {e.args[0]!r}; domain is {self.names}") from None

    def names_with_role(self, role: Role) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.role == role)

    @property
    def measurement(self) -> tuple[str, ...]:
        return self.names_with_role(Role.MEASUREMENT)

    @property
    def outcome(self) -> tuple[str, ...]:
        return self.names_with_role(Role.OUTCOME)

    @property
    def hidden(self) -> tuple[str, ...]:
        return self.names_with_role(Role.HIDDEN)


class Team(_Domain):
    """Immutable set of assignments with canonical row order."""

    __slots__ = ("variables", "rows", "_rowset")

    def __init__(self, variables: Sequence[Union[Var, str]], rows: Iterable[Sequence[Value]] = (), roles=None):
        vs = _normalize_vars(variables, roles)
        rowset = set()
        for r in rows:
            r = tuple(r)
            if len(r) != len(vs):
                raise TeamError(f"row {r} does not bind the domain {[v.name for v in vs]}")
            rowset.add(r)
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "_rowset", frozenset(rowset))
        object.__setattr__(self, "rows", tuple(sorted(rowset, key=row_key)))

    def __setattr__(self, key, value):
        raise AttributeError("Team is immutable")

    @classmethod
    def from_dicts(cls, variables, assignments: Iterable[Mapping[str, Value]], roles=None) -> "Team":
        vs = _normalize_vars(variables, roles)
        return cls(vs, (tuple(a[v.name] for v in vs) for a in assignments))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.rows)

    def __contains__(self, row) -> bool:
        return tuple(row) in self._rowset

    @property
    def rowset(self) -> frozenset:
        return self._rowset

    def assignments(self) -> Iterator[dict]:
        names = self.names
        for r in self.rows:
            yield dict(zip(names, r))

    def reorder(self, names: Sequence[str]) -> "Team":
        if set(names) != set(self.names) or len(names) != len(self.names):
            raise TeamError(f"cannot reorder {self.names} as {tuple(names)}")
        return project(self, names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Team):
            return NotImplemented
        if set(self.names) != set(other.names):
            return False
        if self.names != other.names:
            other = other.reorder(self.names)
        return self._rowset == other._rowset

    def __hash__(self):
        pos = sorted(range(len(self.names)), key=lambda i: self.names[i])
        return hash((tuple(self.names[i] for i in pos), frozenset(tuple(r[i] for i in pos) for r in self.rows)))

    def values(self) -> tuple:
        """rng(X): every value occurring anywhere in the team."""
        return sort_values(v for r in self.rows for v in r)

    def column_values(self, name: str) -> tuple:
        (p,) = self.positions([name])
        return sort_values(r[p] for r in self.rows)

    def with_roles(self, roles: Sequence[Role]) -> "Team":
        return Team([Var(v.name, Role(r)) for v, r in zip(self.variables, roles)], self.rows)

    def __repr__(self) -> str:
        return f"Team({list(self.names)}, {list(self.rows)})"


class ProbabilisticTeam(_Domain):
    """Exact-rational distribution over assignments; stores the support only."""

    __slots__ = ("variables", "rows", "weights")

    def __init__(self, variables: Sequence[Union[Var, str]], weights: Union[Mapping, Iterable], roles=None, normalize: bool = False):
        vs = _normalize_vars(variables, roles)
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[Row, Fraction] = {}
        for r, w in items:
            r = tuple(r)
            if len(r) != len(vs):
                raise TeamError(f"row {r} does not bind the domain {[v.name for v in vs]}")
            w = Fraction(w)
            if w < 0:
                raise TeamError(f"negative weight {w} on row {r}")
            if w:
                acc[r] = acc.get(r, Fraction(0)) + w
        total = sum(acc.values(), Fraction(0))
        if normalize:
            if total == 0:
                raise TeamError("cannot normalize a zero-mass team")
            acc = {r: w / total for r, w in acc.items()}
        elif total != 1:
            raise TeamError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "rows", tuple(sorted(acc, key=row_key)))
        object.__setattr__(self, "weights", {r: acc[r] for r in self.rows})

    def __setattr__(self, key, value):
        raise AttributeError("ProbabilisticTeam is immutable")

    def __len__(self) -> int:
        return len(self.rows)

    def weight(self, row) -> Fraction:
        return self.weights.get(tuple(row), Fraction(0))

    def items(self):
        return ((r, self.weights[r]) for r in self.rows)

    def reorder(self, names: Sequence[str]) -> "ProbabilisticTeam":
        if set(names) != set(self.names) or len(names) != len(self.names):
            raise TeamError(f"cannot reorder {self.names} as {tuple(names)}")
        return prob_project(self, names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProbabilisticTeam):
            return NotImplemented
        if set(self.names) != set(other.names):
            return False
        if self.names != other.names:
            other = other.reorder(self.names)
        return self.weights == other.weights

    def __hash__(self):
        return hash((self.names, frozenset(self.weights.items())))

    def __repr__(self) -> str:
        return f"ProbabilisticTeam({list(self.names)}, {[(r, str(w)) for r, w in self.items()]})"


# ---------------------------------------------------------------- operations


def project(team: Team, names: Sequence[str]) -> Team:
    names = list(dict.fromkeys(names))
    pos = team.positions(names)
    vs = [team.variables[p] for p in pos]
    return Team(vs, (tuple(r[p] for p in pos) for r in team.rows))


def prob_project(pt: ProbabilisticTeam, names: Sequence[str]) -> ProbabilisticTeam:
    names = list(dict.fromkeys(names))
    pos = pt.positions(names)
    vs = [pt.variables[p] for p in pos]
    acc: dict = {}
    for r, w in pt.items():
        k = tuple(r[p] for p in pos)
        acc[k] = acc.get(k, 0) + w
    return ProbabilisticTeam(vs, acc)


def collapse(pt: ProbabilisticTeam) -> Team:
    return Team(pt.variables, pt.rows)


def uniform_lift(team: Team) -> ProbabilisticTeam:
    if not team.rows:
        raise TeamError("uniform lift of the empty team is undefined")
    w = Fraction(1, len(team.rows))
    return ProbabilisticTeam(team.variables, {r: w for r in team.rows})


def dirac(variables, row) -> ProbabilisticTeam:
    return ProbabilisticTeam(variables, {tuple(row): 1})


def marginal(pt: ProbabilisticTeam, names: Sequence[str], values: Sequence[Value]) -> Fraction:
    if len(names) != len(values):
        raise TeamError(f"arity mismatch: {len(names)} variables, {len(values)} values")
    pos = pt.positions(names)
    values = tuple(values)
    return sum((w for r, w in pt.items() if tuple(r[p] for p in pos) == values), Fraction(0))


def marginal_table(pt: ProbabilisticTeam, names: Sequence[str]) -> dict[tuple, Fraction]:
    """All nonzero marginals |X_{names = a}| at once."""
    pos = pt.positions(names)
    acc: dict[tuple, Fraction] = {}
    for r, w in pt.items():
        k = tuple(r[p] for p in pos)
        acc[k] = acc.get(k, Fraction(0)) + w
    return acc


def scaled_union(a: ProbabilisticTeam, b: ProbabilisticTeam, r) -> ProbabilisticTeam:
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise TeamError(f"scale {r} outside [0,1]")
    if a.names != b.names:
        if set(a.names) != set(b.names):
            raise TeamError(f"domain mismatch: {a.names} vs {b.names}")
        b = b.reorder(a.names)
    acc: dict = {}
    for row, w in a.items():
        acc[row] = acc.get(row, 0) + r * w
    for row, w in b.items():
        acc[row] = acc.get(row, 0) + (1 - r) * w
    return ProbabilisticTeam(a.variables, acc)


def _extend_vars(variables: tuple[Var, ...], v: Union[Var, str]) -> tuple[tuple[Var, ...], int | None]:
    v = v if isinstance(v, Var) else Var.of(v)
    for i, u in enumerate(variables):
        if u.name == v.name:
            return variables, i
    return variables + (v,), None


def _set_value(row: Row, pos: int | None, value) -> Row:
    if pos is None:
        return row + (value,)
    return row[:pos] + (value,) + row[pos + 1 :]


def duplicate(team, v: Union[Var, str], dom: Iterable[Value]):
    """X[A/v]; probabilistic mass is split uniformly over ``dom``."""
    dom = sort_values(dom)
    if not dom:
        raise TeamError("duplication over an empty value domain")
    vs, pos = _extend_vars(team.variables, v)
    if isinstance(team, ProbabilisticTeam):
        share = Fraction(1, len(dom))
        acc: dict = {}
        for r, w in team.items():
            for a in dom:
                k = _set_value(r, pos, a)
                acc[k] = acc.get(k, 0) + w * share
        return ProbabilisticTeam(vs, acc)
    return Team(vs, (_set_value(r, pos, a) for r in team.rows for a in dom))


Kernel = Callable[[dict], object]


def supplement(team, v: Union[Var, str], kernel: Union[Kernel, Mapping]):
    """X[F/v].  ``kernel`` maps an assignment dict (or a row tuple, for mappings) to
    a nonempty value set, or to a distribution ``{value: weight}`` for probabilistic teams."""
    vs, pos = _extend_vars(team.variables, v)
    names = team.names

    def image(row):
        if isinstance(kernel, Mapping):
            if row not in kernel:
                raise TeamError(f"kernel undefined on row {row}")
            return kernel[row]
        return kernel(dict(zip(names, row)))

    if isinstance(team, ProbabilisticTeam):
        acc: dict = {}
        for r, w in team.items():
            dist = image(r)
            if not isinstance(dist, Mapping):
                raise TeamError("probabilistic supplement needs a distribution-valued kernel")
            dist = {a: Fraction(p) for a, p in dist.items()}
            if sum(dist.values()) != 1 or any(p < 0 for p in dist.values()):
                raise TeamError(f"kernel image on {r} is not a distribution: {dist}")
            for a, p in dist.items():
                if p:
                    k = _set_value(r, pos, a)
                    acc[k] = acc.get(k, 0) + w * p
        return ProbabilisticTeam(vs, acc)
    out = []
    for r in team.rows:
        vals = image(r)
        vals = list(vals.keys()) if isinstance(vals, Mapping) else list(vals)
        if not vals:
            raise TeamError(f"kernel image on row {r} is empty")
        out.extend(_set_value(r, pos, a) for a in vals)
    return Team(vs, out)


# ---------------------------------------------------------------- realization


def _empirical_names(hidden, empirical) -> tuple[str, ...]:
    observed = {v.name for v in hidden.variables if v.role in (Role.MEASUREMENT, Role.OUTCOME)}
    if set(empirical.names) != observed:
        raise TeamError(
            f"role mismatch: empirical domain {empirical.names} vs measurement/outcome variables {sorted(observed)}"
        )
    return empirical.names


def realizes(hidden: Team, empirical: Team) -> bool:
    names = _empirical_names(hidden, empirical)
    return project(hidden, names) == empirical


def prob_realizes(hidden: ProbabilisticTeam, empirical: ProbabilisticTeam, uniform: bool = False) -> bool:
    names = _empirical_names(hidden, empirical)
    xs = [n for n in names if empirical.var(n).role == Role.MEASUREMENT]
    ys = [n for n in names if n not in xs]
    hx, ex = marginal_table(hidden, xs), marginal_table(empirical, xs)
    hxy, exy = marginal_table(hidden, xs + ys), marginal_table(empirical, xs + ys)
    zero = Fraction(0)
    for a in set(hx) | set(ex):
        if (hx.get(a, zero) == 0) != (ex.get(a, zero) == 0):
            return False
        if uniform and hx.get(a, zero) != ex.get(a, zero):
            return False
    for ab in set(hxy) | set(exy):
        a = ab[: len(xs)]
        if hxy.get(ab, zero) * ex.get(a, zero) != exy.get(ab, zero) * hx.get(a, zero):
            return False
    return True


def prob_uniformly_realizes(hidden: ProbabilisticTeam, empirical: ProbabilisticTeam) -> bool:
    return prob_realizes(hidden, empirical, uniform=True)
