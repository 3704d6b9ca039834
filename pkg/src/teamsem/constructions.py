"""Hidden-variable realizations, the probabilistic lift and entropy tools."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .properties import PropertyId, Roles, check, locality_holds
from .team import ProbabilisticTeam, Role, Team, TeamError, Var, intern_token, marginal_table, prob_project, sort_values

SINGLE_VALUE = "*"
DEFAULT_GAMMA_CAP = 10**6


class PreconditionError(TeamError):
    pass


def _hidden_names(l: int) -> tuple[str, ...]:
    return ("z",) if l == 1 else tuple(f"z{k}" for k in range(l))


def _split(row, pos):
    return tuple(row[p] for p in pos)


def extend_single_valued(X: Team, l: int = 1, value=SINGLE_VALUE) -> Team:
    """Append ``l`` constant hidden columns."""
    names = _hidden_names(l)
    vs = X.variables + tuple(Var(n, Role.HIDDEN) for n in names)
    return Team(vs, (r + (value,) * l for r in X.rows))


def site_token(i: int, a, j: int) -> str:
    return f"h:{i}:{a}:{j}"


def _outcome_index(X: Team, roles: Roles) -> list[dict]:
    """For each site i: a ↦ sorted outcomes b^a_0 < b^a_1 < ... of y_i given x_i = a."""
    out = []
    for xi, yi in zip(roles.xs, roles.ys):
        px, py = X.positions([xi, yi])
        table: dict = {}
        for r in X.rows:
            table.setdefault(r[px], set()).add(r[py])
        out.append({a: sort_values(bs) for a, bs in table.items()})
    return out


def realize_strong_determinism_per_site(X: Team) -> Team:
    """The union ⋃_i Y_i, where Y_i tags each row with a fresh value for (i, s(x_i), s(y_i)).

    Realizes X, but for n ≥ 2 the tag chosen for one site does not pin down the
    other sites' outcomes, so strong determinism can fail.  Kept for comparison
    with ``realize_strong_determinism``.
    """
    roles = Roles.of(X)
    index = _outcome_index(X, roles)
    vs = X.variables + (Var("z", Role.HIDDEN),)
    rows = []
    for i, (xi, yi) in enumerate(zip(roles.xs, roles.ys)):
        px, py = X.positions([xi, yi])
        for r in X.rows:
            rows.append(r + (site_token(i, r[px], index[i][r[px]].index(r[py])),))
    return Team(vs, rows)


def realize_strong_determinism(X: Team) -> Team:
    """Tag each row with the tuple of its per-site tokens h:i:a:j.

    The tag determines every y_i given x_i, so =(x_i z, y_i) holds for all i.
    """
    if not X.rows:
        raise PreconditionError("strong-determinism realization needs a nonempty team")
    roles = Roles.of(X)
    index = _outcome_index(X, roles)
    vs = X.variables + (Var("z", Role.HIDDEN),)
    pos = [X.positions([xi, yi]) for xi, yi in zip(roles.xs, roles.ys)]
    rows = []
    for r in X.rows:
        tags = tuple(site_token(i, r[px], index[i][r[px]].index(r[py])) for i, (px, py) in enumerate(pos))
        rows.append(r + (intern_token(tags),))
    return Team(vs, rows)


def realize_weak_det_z_indep(X: Team, cap: int = DEFAULT_GAMMA_CAP) -> Team:
    """Hidden values are the selector functions γ: M → O with (a, γ(a)) ∈ X."""
    if not X.rows:
        raise PreconditionError("weak-determinism realization needs a nonempty team")
    roles = Roles.of(X)
    px, py = X.positions(roles.xs), X.positions(roles.ys)
    sections: dict = {}
    for r in X.rows:
        sections.setdefault(_split(r, px), set()).add(_split(r, py))
    M = sort_values(sections)
    choices = [sort_values(sections[a]) for a in M]
    size = math.prod(len(c) for c in choices)
    if size > cap:
        raise PreconditionError(f"{size} selector functions exceed the cap of {cap}")
    vs = X.variables + (Var("z", Role.HIDDEN),)
    rows = []
    for picks in itertools.product(*choices):
        gamma = dict(zip(M, picks))
        token = intern_token(gamma)
        for a, b in gamma.items():
            row = [None] * len(X.variables)
            for p, v in zip(px, a):
                row[p] = v
            for p, v in zip(py, b):
                row[p] = v
            rows.append(tuple(row) + (token,))
    return Team(vs, rows)


def canonicalize_local_to_sd(X: Team) -> Team:
    """Replace a z-independent local team by an empirically equivalent one supporting
    z-independence and strong determinism.

    The first hidden variable takes values (γ⃗, f) where f_i picks an outcome
    from O_i^{a,γ⃗} for each a ∈ M_i; the others become constant.
    """
    roles = Roles.of(X)
    if not roles.zs:
        raise PreconditionError("no hidden variables")
    if not check(PropertyId.ZI, X, roles):
        raise PreconditionError("z-independence fails")
    if not locality_holds(X, roles):
        raise PreconditionError("locality fails")
    n = roles.n
    px, py, pz = X.positions(roles.xs), X.positions(roles.ys), X.positions(roles.zs)
    M = sort_values(_split(r, px) for r in X.rows)
    Gamma = sort_values(_split(r, pz) for r in X.rows)
    M_i = [sort_values(a[i] for a in M) for i in range(n)]
    O: dict = {}
    for r in X.rows:
        g = _split(r, pz)
        for i in range(n):
            O.setdefault((i, r[px[i]], g), set()).add(r[py[i]])
    rows = []
    for g in Gamma:
        site_functions = []
        for i in range(n):
            per_value = [sort_values(O[i, a, g]) for a in M_i[i]]
            site_functions.append([dict(zip(M_i[i], pick)) for pick in itertools.product(*per_value)])
        for fs in itertools.product(*site_functions):
            token = intern_token((g, tuple(fs)))
            hidden = (token,) + (SINGLE_VALUE,) * (len(pz) - 1)
            for a in M:
                row = [None] * len(X.variables)
                for i in range(n):
                    row[px[i]] = a[i]
                    row[py[i]] = fs[i][a[i]]
                for p, v in zip(pz, hidden):
                    row[p] = v
                rows.append(tuple(row))
    return Team(X.variables, rows)


# ------------------------------------------------------------------- the lift


@dataclass(frozen=True)
class LiftCounts:
    m_h: int
    m_m: int
    m_o: Mapping[tuple, int]


def lift_counts(X: Team) -> LiftCounts:
    roles = Roles.of(X)
    px, py, pz = X.positions(roles.xs), X.positions(roles.ys), X.positions(roles.zs)
    outcomes: dict = {}
    for r in X.rows:
        outcomes.setdefault((_split(r, px), _split(r, pz)), set()).add(_split(r, py))
    return LiftCounts(
        m_h=len({_split(r, pz) for r in X.rows}),
        m_m=len({_split(r, px) for r in X.rows}),
        m_o={k: len(v) for k, v in outcomes.items()},
    )


def probabilistic_lift(X: Team) -> ProbabilisticTeam:
    """Weight 1/(m_h·m_m·m_o(a⃗,γ⃗)) on each row."""
    roles = Roles.of(X)
    if not X.rows:
        raise PreconditionError("the lift of the empty team is undefined")
    if roles.zs and not check(PropertyId.ZI, X, roles):
        raise PreconditionError("z-independence fails; the lift would not be a distribution")
    c = lift_counts(X)
    px, pz = X.positions(roles.xs), X.positions(roles.zs)
    weights = {r: Fraction(1, c.m_h * c.m_m * c.m_o[_split(r, px), _split(r, pz)]) for r in X.rows}
    return ProbabilisticTeam(X.variables, weights)


def uniform_joint(family: Mapping[tuple, Mapping[tuple, object]], xs: Sequence[str], ys: Sequence[str]) -> ProbabilisticTeam:
    """𝕏(a⃗b⃗) = p_a⃗(b⃗)/|M| for an outcome-distribution family indexed by M."""
    M = list(family)
    share = Fraction(1, len(M))
    weights = {}
    for a in M:
        dist = {b: Fraction(p) for b, p in family[a].items()}
        if sum(dist.values()) != 1:
            raise TeamError(f"outcome distribution for {a} does not sum to 1")
        for b, p in dist.items():
            if p:
                weights[tuple(a) + tuple(b)] = p * share
    vs = [Var(x, Role.MEASUREMENT) for x in xs] + [Var(y, Role.OUTCOME) for y in ys]
    return ProbabilisticTeam(vs, weights)


# -------------------------------------------------------------------- entropy


def entropy(p: Union[ProbabilisticTeam, Mapping, Iterable]) -> float:
    """Shannon entropy in bits."""
    if isinstance(p, ProbabilisticTeam):
        ws = p.weights.values()
    elif isinstance(p, Mapping):
        ws = p.values()
    else:
        ws = p
    h = 0.0
    for w in ws:
        if w:
            w = float(w)
            h -= w * math.log2(w)
    return h + 0.0


def measurement_prior(pt: ProbabilisticTeam) -> ProbabilisticTeam:
    roles = Roles.of(pt)
    return prob_project(pt, roles.xs + roles.zs)


def outcome_conditional(pt: ProbabilisticTeam, a: Sequence, gamma: Sequence = ()) -> ProbabilisticTeam:
    roles = Roles.of(pt)
    key = tuple(a) + tuple(gamma)
    theta = marginal_table(pt, roles.xs + roles.zs).get(key, Fraction(0))
    if theta == 0:
        raise TeamError(f"section {key} has zero mass")
    px, py, pz = pt.positions(roles.xs), pt.positions(roles.ys), pt.positions(roles.zs)
    weights: dict = {}
    for r, w in pt.items():
        if _split(r, px) + _split(r, pz) == key:
            b = _split(r, py)
            weights[b] = weights.get(b, 0) + w / theta
    return ProbabilisticTeam([pt.var(y) for y in roles.ys], weights)


def entropy_sections(pt: ProbabilisticTeam) -> dict[tuple, float]:
    """H(η^{a⃗γ⃗}) for each support section a⃗γ⃗."""
    roles = Roles.of(pt)
    n = len(roles.xs)
    out = {}
    for key in measurement_prior(pt).rows:
        out[key] = entropy(outcome_conditional(pt, key[:n], key[n:]))
    return out
