"""Possibilistic and probabilistic evaluation of independence-logic formulas.

The possibilistic evaluator is exhaustive over finite search spaces (covers for
disjunction, set-valued kernels for the existential quantifier).  Quantifiers
over a new sort are finitized by trying fresh domains of size 1..k_max; a
verdict that depends on that truncation is reported as bounded rather than
as a plain truth value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .formula import (
    And,
    Eq,
    Exists,
    ExistsNewSort,
    Forall,
    ForallNewSort,
    Formula,
    Indep,
    Neq,
    Or,
    conjuncts,
    free_vars,
    is_dependence_formula,
)
from .team import ProbabilisticTeam, Role, Team, collapse, duplicate, infer_role, marginal_table, sort_values, supplement


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    BOUNDED_TRUE = "bounded-true"
    BOUNDED_FALSE = "bounded-false"
    INCONCLUSIVE = "inconclusive: budget"

    def __bool__(self) -> bool:
        if self is Verdict.INCONCLUSIVE:
            raise ValueError("an inconclusive verdict has no truth value")
        return self in (Verdict.TRUE, Verdict.BOUNDED_TRUE)

    @property
    def exact(self) -> bool:
        return self in (Verdict.TRUE, Verdict.FALSE)


class EvaluationError(ValueError):
    pass


class UnsupportedFragment(EvaluationError):
    """The probabilistic evaluator has no procedure for this construct."""


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class EvalContext:
    domain: Optional[tuple] = None
    role_domains: Mapping[Role, tuple] = field(default_factory=dict)
    k_max: int = 4
    budget: int = 1_000_000

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.budget < 1:
            raise ValueError("budget must be positive")


# ------------------------------------------------------------------ atoms


def _indep_rows(index: Mapping[str, int], rows, y, z, x) -> bool:
    py = [index[v] for v in y]
    pz = [index[v] for v in z]
    px = [index[v] for v in x]
    groups: dict = {}
    for r in rows:
        g = groups.get(k := tuple(r[p] for p in px))
        if g is None:
            g = groups[k] = (set(), set(), set())
        yv = tuple(r[p] for p in py)
        zv = tuple(r[p] for p in pz)
        g[0].add(yv)
        g[1].add(zv)
        g[2].add((yv, zv))
    return all(len(yz) == len(ys) * len(zs) for ys, zs, yz in groups.values())


def _check_names(domain_names, names):
    missing = [v for v in names if v not in domain_names]
    if missing:
        raise EvaluationError(f"variables {missing} are not in the team domain {tuple(domain_names)}")


def indep_atom_holds(team: Team, y: Sequence[str], x: Sequence[str], z: Sequence[str]) -> bool:
    """y ⊥_x z in the possibilistic sense."""
    _check_names(team.names, [*y, *x, *z])
    index = {n: i for i, n in enumerate(team.names)}
    return _indep_rows(index, team.rows, tuple(y), tuple(z), tuple(x))


def prob_indep_atom_holds(pt: ProbabilisticTeam, y: Sequence[str], x: Sequence[str], z: Sequence[str]) -> bool:
    """|X_{yx=ab}|·|X_{xz=bc}| = |X_{yxz=abc}|·|X_{x=b}| for all occurring values."""
    y, x, z = tuple(y), tuple(x), tuple(z)
    _check_names(pt.names, [*y, *x, *z])
    pos = pt.positions
    py, px, pz = pos(y), pos(x), pos(z)
    m_yx: dict = {}
    m_xz: dict = {}
    m_yxz: dict = {}
    m_x: dict = {}
    for r, w in pt.items():
        a = tuple(r[p] for p in py)
        b = tuple(r[p] for p in px)
        c = tuple(r[p] for p in pz)
        m_yx[a, b] = m_yx.get((a, b), 0) + w
        m_xz[b, c] = m_xz.get((b, c), 0) + w
        m_yxz[a, b, c] = m_yxz.get((a, b, c), 0) + w
        m_x[b] = m_x.get(b, 0) + w
    by_b_y: dict = {}
    by_b_z: dict = {}
    for a, b in m_yx:
        by_b_y.setdefault(b, []).append(a)
    for b, c in m_xz:
        by_b_z.setdefault(b, []).append(c)
    for b, total in m_x.items():
        for a in by_b_y[b]:
            lhs_a = m_yx[a, b]
            for c in by_b_z[b]:
                if lhs_a * m_xz[b, c] != m_yxz.get((a, b, c), 0) * total:
                    return False
    return True


def _first_order_rows(index, rows, phi) -> bool:
    i, j = index[phi.left], index[phi.right]
    if isinstance(phi, Eq):
        return all(r[i] == r[j] for r in rows)
    return all(r[i] != r[j] for r in rows)


# ------------------------------------------------------------- possibilistic


def _forces_single_value(body: Formula, v: str) -> bool:
    for c in conjuncts(body):
        if isinstance(c, Indep) and c.is_dependence and not c.x and v in c.y:
            return True
    return False


def _nonempty_subsets(values: tuple) -> list[tuple]:
    out = []
    for k in range(1, len(values) + 1):
        out.extend(itertools.combinations(values, k))
    return out


def _set_column(names: tuple, rows, v: str, images):
    """Rows of X[F/v] given per-row image tuples."""
    if v in names:
        p = names.index(v)
        new_rows = {r[:p] + (a,) + r[p + 1 :] for r, img in zip(rows, images) for a in img}
        return names, tuple(new_rows)
    new_rows = {r + (a,) for r, img in zip(rows, images) for a in img}
    return names + (v,), tuple(new_rows)


class _Possibilistic:
    def __init__(self, ctx: EvalContext):
        self.ctx = ctx
        self.nodes = 0
        self.memo: dict = {}

    def tick(self):
        self.nodes += 1
        if self.nodes > self.ctx.budget:
            raise _BudgetExhausted()

    def domain_for(self, v: str, doms: Mapping[Role, tuple], default: tuple) -> tuple:
        d = doms.get(infer_role(v))
        if d is None:
            d = default
        if not d:
            raise EvaluationError(f"no value domain for quantified variable {v!r}")
        return d

    def eval(self, names: tuple, rows: tuple, phi: Formula, doms, default) -> tuple[bool, bool]:
        if not rows:
            return True, True
        key = (phi, names, frozenset(rows), tuple(sorted(doms.items())))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.tick()
        out = self._eval(names, rows, phi, doms, default)
        self.memo[key] = out
        return out

    def _eval(self, names, rows, phi, doms, default):
        index = {n: i for i, n in enumerate(names)}
        if isinstance(phi, Indep):
            return _indep_rows(index, rows, phi.y, phi.z, phi.x), True
        if isinstance(phi, (Eq, Neq)):
            return _first_order_rows(index, rows, phi), True
        if isinstance(phi, And):
            lv, le = self.eval(names, rows, phi.left, doms, default)
            if not lv and le:
                return False, True
            rv, re_ = self.eval(names, rows, phi.right, doms, default)
            return lv and rv, (le and re_) or (not rv and re_)
        if isinstance(phi, Or):
            return self.disjunction(names, rows, phi, doms, default)
        if isinstance(phi, Forall):
            dom = self.domain_for(phi.var, doms, default)
            n2, r2 = _set_column(names, rows, phi.var, [dom] * len(rows))
            return self.eval(n2, r2, phi.body, doms, default)
        if isinstance(phi, Exists):
            dom = self.domain_for(phi.var, doms, default)
            return self.exists(names, rows, phi.var, phi.body, dom, doms, default, canonical=False)
        if isinstance(phi, ExistsNewSort):
            return self.exists_new_sort(names, rows, phi, doms, default)
        if isinstance(phi, ForallNewSort):
            role = infer_role(phi.var)
            for k in range(1, self.ctx.k_max + 1):
                fresh = _fresh_domain(phi.var, k)
                d2 = {**doms, role: fresh}
                n2, r2 = _set_column(names, rows, phi.var, [fresh] * len(rows))
                v, e = self.eval(n2, r2, phi.body, d2, default)
                if not v:
                    return False, e
            return True, False
        raise TypeError(phi)

    def disjunction(self, names, rows, phi: Or, doms, default):
        n = len(rows)
        full = (1 << n) - 1

        def sub(mask):
            return tuple(rows[i] for i in range(n) if mask >> i & 1)

        def side(f, mask):
            return self.eval(names, sub(mask), f, doms, default)

        all_exact = True
        left, right = phi.left, phi.right
        if is_dependence_formula(right) or is_dependence_formula(left):
            # one side downward closed: it suffices to try partitions
            for mask in range(full + 1):
                lv, le = side(left, mask)
                all_exact &= le
                if not lv:
                    continue
                rv, re_ = side(right, full ^ mask)
                all_exact &= re_
                if rv:
                    return True, le and re_
            return False, all_exact
        # general covers: Z must contain the complement of Y
        right_ok = [False] * (full + 1)
        for mask in range(full + 1):
            rv, re_ = side(right, mask)
            all_exact &= re_
            right_ok[mask] = rv
        sup = right_ok[:]
        for i in range(n):
            bit = 1 << i
            for mask in range(full + 1):
                if not mask & bit and sup[mask | bit]:
                    sup[mask] = True
        for mask in range(full + 1):
            if not sup[full ^ mask]:
                continue
            lv, le = side(left, mask)
            all_exact &= le
            if lv:
                return True, all_exact
        return False, all_exact

    def exists(self, names, rows, v, body, dom, doms, default, canonical: bool, require_all: bool = False):
        singleton_only = is_dependence_formula(body)
        options = [(a,) for a in dom] if singleton_only else _nonempty_subsets(dom)
        all_exact = True
        for images in self._kernels(len(rows), dom, options, canonical, require_all):
            self.tick()
            n2, r2 = _set_column(names, rows, v, images)
            val, ex = self.eval(n2, r2, body, doms, default)
            all_exact &= ex
            if val:
                return True, ex
        return False, all_exact

    def _kernels(self, n_rows, dom, options, canonical, require_all):
        if not canonical:
            yield from itertools.product(options, repeat=n_rows)
            return
        # values of a fresh sort are interchangeable: only enumerate kernels in
        # which new values appear in order of first use
        k = len(dom)
        pos = {a: i for i, a in enumerate(dom)}
        idx_options = [tuple(sorted(pos[a] for a in o)) for o in options]

        def rec(i, used, acc):
            if i == n_rows:
                if not require_all or used == k:
                    yield tuple(acc)
                return
            for o in idx_options:
                new = [j for j in o if j >= used]
                if new and new != list(range(used, used + len(new))):
                    continue
                acc.append(tuple(dom[j] for j in o))
                yield from rec(i + 1, used + len(new), acc)
                acc.pop()

        yield from rec(0, 0, [])

    def exists_new_sort(self, names, rows, phi: ExistsNewSort, doms, default):
        role = infer_role(phi.var)
        single = _forces_single_value(phi.body, phi.var)
        k_top = 1 if single else self.ctx.k_max
        all_exact = True
        for k in range(1, k_top + 1):
            fresh = _fresh_domain(phi.var, k)
            d2 = {**doms, role: fresh}
            val, ex = self.exists(names, rows, phi.var, phi.body, fresh, d2, default, canonical=True, require_all=True)
            all_exact &= ex
            if val:
                return True, ex
        # a constancy conjunct on the witness makes one fresh value complete
        return False, all_exact and single


def _fresh_domain(v: str, k: int) -> tuple:
    return tuple(f"~{v}{i}" for i in range(k))


def eval_possibilistic(team: Team, phi: Formula, ctx: EvalContext | None = None) -> Verdict:
    ctx = ctx or EvalContext()
    _check_names(team.names, sorted(free_vars(phi)))
    if not team.rows:
        return Verdict.TRUE
    default = ctx.domain if ctx.domain is not None else team.values()
    ev = _Possibilistic(ctx)
    try:
        val, exact = ev.eval(team.names, team.rows, phi, dict(ctx.role_domains), tuple(default))
    except _BudgetExhausted:
        return Verdict.INCONCLUSIVE
    if val:
        return Verdict.TRUE if exact else Verdict.BOUNDED_TRUE
    return Verdict.FALSE if exact else Verdict.BOUNDED_FALSE


def holds(team: Team, phi: Formula, ctx: EvalContext | None = None) -> bool:
    """Boolean shortcut that refuses inexact verdicts."""
    v = eval_possibilistic(team, phi, ctx)
    if not v.exact:
        raise EvaluationError(f"verdict is {v.value}, not exact")
    return bool(v)


# ------------------------------------------------------------- probabilistic

ProbKernel = Callable[[dict], Mapping]


def eval_probabilistic(
    pt: ProbabilisticTeam,
    phi: Formula,
    ctx: EvalContext | None = None,
    witnesses: Mapping[str, object] | None = None,
) -> bool:
    """Exact evaluation on the supported fragment.

    ``witnesses`` maps an existentially bound variable to a kernel (assignment dict →
    distribution) and a new-sort universally bound variable to its finite domain.
    """
    ctx = ctx or EvalContext()
    witnesses = witnesses or {}
    _check_names(pt.names, sorted(free_vars(phi)))
    return _prob_eval(pt, phi, ctx, witnesses)


def _prob_eval(pt, phi, ctx, witnesses) -> bool:
    if isinstance(phi, Indep):
        return prob_indep_atom_holds(pt, phi.y, phi.x, phi.z)
    if isinstance(phi, (Eq, Neq)):
        index = {n: i for i, n in enumerate(pt.names)}
        return _first_order_rows(index, pt.rows, phi)
    if isinstance(phi, And):
        return _prob_eval(pt, phi.left, ctx, witnesses) and _prob_eval(pt, phi.right, ctx, witnesses)
    if isinstance(phi, Or):
        if is_dependence_formula(phi.left) and is_dependence_formula(phi.right):
            v = eval_possibilistic(collapse(pt), phi, ctx)
            if not v.exact:
                raise EvaluationError(f"collapse verdict is {v.value}")
            return bool(v)
        raise UnsupportedFragment("disjunction is only supported between weakly flat disjuncts")
    if isinstance(phi, Forall):
        dom = ctx.role_domains.get(infer_role(phi.var)) or ctx.domain or sort_values(v for r in pt.rows for v in r)
        return _prob_eval(duplicate(pt, phi.var, dom), phi.body, ctx, witnesses)
    if isinstance(phi, (Exists, ExistsNewSort)):
        kernel = witnesses.get(phi.var)
        if kernel is None:
            raise UnsupportedFragment(f"existential quantifier over {phi.var!r} needs a witness kernel")
        return _prob_eval(supplement(pt, phi.var, kernel), phi.body, ctx, witnesses)
    if isinstance(phi, ForallNewSort):
        dom = witnesses.get(phi.var)
        if dom is None:
            raise UnsupportedFragment(f"new-sort universal over {phi.var!r} needs a witness domain")
        return _prob_eval(duplicate(pt, phi.var, dom), phi.body, ctx, witnesses)
    raise TypeError(phi)
