"""Named empirical and hidden-variable properties in both semantics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .evaluate import eval_possibilistic, eval_probabilistic, indep_atom_holds, prob_indep_atom_holds
from .formula import Formula, Indep, conj, conjuncts, const, dep
from .team import ProbabilisticTeam, Role, Team, TeamError, marginal_table


class PropertyId(str, Enum):
    WD = "WD"
    SD = "SD"
    NS = "NS"
    SV = "SV"
    ZI = "ZI"
    PI = "PI"
    OI = "OI"
    ML = "ML"
    LOCAL = "LOCAL"


class RoleError(TeamError):
    pass


@dataclass(frozen=True)
class Roles:
    """x_i and y_i are paired by position; hidden variables form one tuple."""

    xs: tuple[str, ...]
    ys: tuple[str, ...]
    zs: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise RoleError(f"{len(self.xs)} measurement variables but {len(self.ys)} outcome variables")

    @property
    def n(self) -> int:
        return len(self.xs)

    @classmethod
    def of(cls, team: Union[Team, ProbabilisticTeam]) -> "Roles":
        return cls(team.measurement, team.outcome, team.hidden)

    @classmethod
    def standard(cls, n: int, l: int = 0) -> "Roles":
        zs = ("z",) if l == 1 else tuple(f"z{k}" for k in range(l))
        return cls(tuple(f"x{i}" for i in range(n)), tuple(f"y{i}" for i in range(n)), zs)


def _others(t: tuple, i: int) -> tuple:
    return t[:i] + t[i + 1 :]


def build(prop: Union[PropertyId, str], roles: Roles) -> Formula:
    prop = PropertyId(prop)
    xs, ys, zs, n = roles.xs, roles.ys, roles.zs, roles.n
    if prop in (PropertyId.SV, PropertyId.ZI) and not zs:
        raise RoleError(f"{prop.value} needs hidden variables")
    if prop not in (PropertyId.SV, PropertyId.ZI) and n == 0:
        raise RoleError(f"{prop.value} needs at least one measurement/outcome pair")
    if prop is PropertyId.WD:
        return conj([dep(xs + zs, (ys[i],)) for i in range(n)])
    if prop is PropertyId.SD:
        return conj([dep((xs[i],) + zs, (ys[i],)) for i in range(n)])
    if prop is PropertyId.NS:
        return conj([Indep(_others(xs, i), (ys[i],), (xs[i],)) for i in range(n)])
    if prop is PropertyId.SV:
        return const(zs)
    if prop is PropertyId.ZI:
        return Indep(zs, xs)
    if prop is PropertyId.PI:
        return conj([Indep(_others(xs, i), (ys[i],), (xs[i],) + zs) for i in range(n)])
    if prop is PropertyId.OI:
        return conj([Indep((ys[i],), _others(ys, i), xs + zs) for i in range(n)])
    if prop is PropertyId.ML:
        return conj([Indep((xs[i],), _others(xs, i), zs) for i in range(n)])
    # locality is equivalent to PI ∧ OI; check() uses the direct definition
    return build(PropertyId.PI, roles) & build(PropertyId.OI, roles)


def check(prop: Union[PropertyId, str], team: Union[Team, ProbabilisticTeam], roles: Roles | None = None) -> bool:
    prop = PropertyId(prop)
    roles = roles or Roles.of(team)
    if isinstance(team, ProbabilisticTeam):
        if prop is PropertyId.LOCAL:
            return prob_locality_holds(team, roles)
        return eval_probabilistic(team, build(prop, roles))
    if prop is PropertyId.LOCAL:
        return locality_holds(team, roles)
    # atoms only, so the verdict is always exact
    return bool(eval_possibilistic(team, build(prop, roles)))


def check_atoms_directly(prop: Union[PropertyId, str], team, roles: Roles | None = None) -> bool:
    """Same verdict as ``check`` but bypassing the generic evaluator."""
    roles = roles or Roles.of(team)
    f = indep_atom_holds if isinstance(team, Team) else prob_indep_atom_holds
    return all(f(team, a.y, a.x, a.z) for a in conjuncts(build(prop, roles)))


def locality_holds(team: Team, roles: Roles | None = None) -> bool:
    """For all s_0..s_{n-1}: if some s agrees with each s_i on x_i z⃗, some s' agrees
    with each s_i on x_i y_i z⃗.  Exhaustive over X^n."""
    roles = roles or Roles.of(team)
    n = roles.n
    px = team.positions(roles.xs)
    py = team.positions(roles.ys)
    pz = team.positions(roles.zs)
    xz = {(tuple(r[p] for p in px), tuple(r[p] for p in pz)) for r in team.rows}
    xyz = {(tuple(r[p] for p in px), tuple(r[p] for p in py), tuple(r[p] for p in pz)) for r in team.rows}
    for ss in itertools.product(team.rows, repeat=n):
        gammas = {tuple(s[p] for p in pz) for s in ss}
        if len(gammas) != 1:
            continue
        (g,) = gammas
        a = tuple(ss[i][px[i]] for i in range(n))
        if (a, g) not in xz:
            continue
        b = tuple(ss[i][py[i]] for i in range(n))
        if (a, b, g) not in xyz:
            return False
    return True


def prob_locality_holds(pt: ProbabilisticTeam, roles: Roles | None = None) -> bool:
    """|X_{x y z}|·∏|X_{x_i z}| = |X_{x z}|·∏|X_{x_i y_i z}| over occurring values."""
    roles = roles or Roles.of(pt)
    xs, ys, zs, n = roles.xs, roles.ys, roles.zs, roles.n
    m_xyz = marginal_table(pt, xs + ys + zs)
    m_xz = marginal_table(pt, xs + zs)
    m_xiz = [marginal_table(pt, (xs[i],) + zs) for i in range(n)]
    m_xiyiz = [marginal_table(pt, (xs[i], ys[i]) + zs) for i in range(n)]
    zero = Fraction(0)
    # candidate (a, b, γ): a⃗γ occurs and every (a_i, b_i, γ) occurs
    per_site: list[dict] = [{} for _ in range(n)]
    for i in range(n):
        for (a, b, *g) in m_xiyiz[i]:
            per_site[i].setdefault((a, tuple(g)), []).append(b)
    for key, w_xz in m_xz.items():
        a, g = key[:n], key[n:]
        lists = [per_site[i].get((a[i], g), []) for i in range(n)]
        for b in itertools.product(*lists):
            lhs = m_xyz.get(a + b + g, zero)
            rhs = w_xz
            for i in range(n):
                lhs *= m_xiz[i][(a[i],) + g]
                rhs *= m_xiyiz[i][(a[i], b[i]) + g]
            if lhs != rhs:
                return False
    return True


def mutual_indep_product_holds(pt: ProbabilisticTeam, vs: Sequence[Sequence[str]], u: Sequence[str]) -> bool:
    """|X_{v⃗u⃗}|·|X_{u⃗}|^{n-1} = ∏|X_{v_i u⃗}| for all values."""
    vs = [tuple(v) for v in vs]
    u = tuple(u)
    n = len(vs)
    flat = tuple(x for v in vs for x in v)
    m_all = marginal_table(pt, flat + u)
    m_u = marginal_table(pt, u)
    m_vi = [marginal_table(pt, v + u) for v in vs]
    sections: list[dict] = [{} for _ in range(n)]
    for i, v in enumerate(vs):
        for key in m_vi[i]:
            sections[i].setdefault(key[len(v):], []).append(key[: len(v)])
    zero = Fraction(0)
    for c, wu in m_u.items():
        for parts in itertools.product(*(sections[i].get(c, []) for i in range(n))):
            a = tuple(x for p in parts for x in p)
            lhs = m_all.get(a + c, zero) * wu ** (n - 1)
            rhs = Fraction(1)
            for i in range(n):
                rhs *= m_vi[i][parts[i] + c]
            if lhs != rhs:
                return False
    return True


def mutual_indep_conjunction(vs: Sequence[Sequence[str]], u: Sequence[str]) -> Formula:
    vs = [tuple(v) for v in vs]
    return conj([Indep(vs[i], tuple(x for j, v in enumerate(vs) if j != i for x in v), tuple(u)) for i in range(len(vs))])
