"""Forward-chaining entailment for independence atoms under the nine axioms.

Facts are kept in canonical form (each tuple sorted and deduplicated), which
is how the permutation rule is applied.  Saturation proceeds in rounds; a fact
first derived in round k has a derivation of depth k, so the first round that
produces the goal gives a depth-minimal derivation.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .formula import Indep, parse_atom

RULE_NAMES = {
    1: "Constancy",
    2: "Reflexivity",
    3: "Symmetry",
    4: "Weakening",
    5: "Permutation",
    6: "Fixed Parameter",
    7: "First Transitivity",
    8: "Second Transitivity",
    9: "Exchange",
}


def _canon(t: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(t)))


@dataclass(frozen=True, order=True)
class AtomFact:
    """y ⊥_x z; a dependence atom =(x, y) has z = y."""

    y: tuple[str, ...]
    x: tuple[str, ...]
    z: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "y", _canon(self.y))
        object.__setattr__(self, "x", _canon(self.x))
        object.__setattr__(self, "z", _canon(self.z))

    @classmethod
    def parse(cls, text: str) -> "AtomFact":
        a = parse_atom(text)
        return cls(a.y, a.x, a.z)

    @classmethod
    def of(cls, atom: Indep) -> "AtomFact":
        return cls(atom.y, atom.x, atom.z)

    def to_atom(self) -> Indep:
        return Indep(self.y, self.z, self.x)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.y + self.x + self.z)

    def __str__(self) -> str:
        return str(self.to_atom())


@dataclass(frozen=True)
class Step:
    fact: AtomFact
    rule: Optional[int]  # None for a premise
    inputs: tuple[int, ...] = ()  # indices into the derivation's steps
    premise_index: Optional[int] = None


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    @property
    def goal(self) -> AtomFact:
        return self.steps[-1].fact

    @property
    def rule_steps(self) -> int:
        return sum(1 for s in self.steps if s.rule is not None)

    def lines(self) -> list[str]:
        out = []
        for i, s in enumerate(self.steps, 1):
            if s.rule is None:
                why = f"premise {s.premise_index + 1}"
            else:
                refs = ", ".join(str(j + 1) for j in s.inputs)
                why = f"rule {s.rule} ({RULE_NAMES[s.rule]})" + (f" from {refs}" if refs else "")
            out.append(f"{i}. {s.fact}    [{why}]")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass
class EntailResult:
    derivation: Optional[Derivation]
    rounds: int
    facts: int
    seconds: float
    exhausted: bool = False
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.derivation is not None


def side_tuples(universe: Iterable[str], max_len: int = 3) -> list[tuple[str, ...]]:
    u = sorted(set(universe))
    out = []
    for k in range(0, min(max_len, len(u)) + 1):
        out.extend(itertools.combinations(u, k))
    return out


# -------------------------------------------------------------- rule schemas


def _unary(f: AtomFact, pool) -> Iterable[tuple[int, AtomFact]]:
    yield 3, AtomFact(f.z, f.x, f.y)
    for dy in (None,) + f.y:
        for dz in (None,) + f.z:
            if dy is None and dz is None:
                continue
            y = tuple(v for v in f.y if v != dy)
            z = tuple(v for v in f.z if v != dz)
            yield 4, AtomFact(y, f.x, z)
    yield 6, AtomFact(f.z + f.x, f.x, f.y + f.x)
    if f.y == f.z:
        for w in pool:
            yield 1, AtomFact(f.y, f.x, w)


def check_step(rule: int, inputs: Sequence[AtomFact], out: AtomFact) -> bool:
    """Does ``out`` follow from ``inputs`` by one instance of ``rule``?  Independent of the generator."""
    s = set
    if rule == 1:
        (a,) = inputs
        return a.y == a.z and out.y == a.y and out.x == a.x
    if rule == 2:
        return not inputs and out.y == out.x
    if rule == 3:
        (a,) = inputs
        return (out.y, out.x, out.z) == (a.z, a.x, a.y)
    if rule == 4:
        (a,) = inputs
        return (
            out.x == a.x
            and s(out.y) <= s(a.y)
            and s(out.z) <= s(a.z)
            and len(s(a.y) - s(out.y)) <= 1
            and len(s(a.z) - s(out.z)) <= 1
        )
    if rule == 5:
        (a,) = inputs
        return a == out
    if rule == 6:
        (a,) = inputs
        return s(out.y) == s(a.z) | s(a.x) and out.x == a.x and s(out.z) == s(a.y) | s(a.x)
    if rule == 7:
        a, b = inputs  # x ⊥_z y, u ⊥_{zx} y ⊢ u ⊥_z y
        return s(b.x) == s(a.x) | s(a.y) and b.z == a.z and out == AtomFact(b.y, a.x, a.z)
    if rule == 8:
        a, b = inputs  # y ⊥_z y, zx ⊥_y u ⊢ x ⊥_z u
        return (
            a.y == a.z
            and b.x == a.y
            and s(b.y) == s(a.x) | s(out.y)
            and out.x == a.x
            and out.z == b.z
        )
    if rule == 9:
        a, b = inputs  # x ⊥_z y, xy ⊥_z u ⊢ x ⊥_z yu
        return s(b.y) == s(a.y) | s(a.z) and b.x == a.x and out == AtomFact(a.y, a.x, a.z + b.z)
    raise ValueError(f"unknown rule {rule}")


def replay(d: Derivation, premises: Sequence[AtomFact]) -> bool:
    for i, st in enumerate(d.steps):
        if any(j >= i for j in st.inputs):
            return False
        if st.rule is None:
            if st.premise_index is None or premises[st.premise_index] != st.fact:
                return False
        elif not check_step(st.rule, [d.steps[j].fact for j in st.inputs], st.fact):
            return False
    return True


# ---------------------------------------------------------------- saturation


class _Store:
    def __init__(self):
        self.info: dict[AtomFact, tuple] = {}  # fact -> (round, rule, parents, premise index)
        self.by_cond_right: dict = {}
        self.by_left_cond: dict = {}
        self.by_cond: dict = {}
        self.by_right: dict = {}
        self.deps: list[AtomFact] = []
        self.order: list[AtomFact] = []

    def add(self, f: AtomFact, rnd: int, rule, parents=(), premise=None) -> bool:
        if f in self.info:
            return False
        self.info[f] = (rnd, rule, parents, premise)
        self.order.append(f)
        self.by_cond_right.setdefault((f.x, f.z), []).append(f)
        self.by_left_cond.setdefault((f.y, f.x), []).append(f)
        self.by_cond.setdefault(f.x, []).append(f)
        self.by_right.setdefault(f.z, []).append(f)
        if f.y == f.z:
            self.deps.append(f)
        return True


def _binary(f: AtomFact, store: _Store) -> Iterable[tuple[int, AtomFact, tuple[AtomFact, AtomFact]]]:
    """Every binary application with ``f`` in either premise position."""
    # rule 7 with f first: f = x ⊥_z y, partner u ⊥_{z∪x} y
    for g in store.by_cond_right.get((_canon(f.x + f.y), f.z), ()):
        yield 7, AtomFact(g.y, f.x, f.z), (f, g)
    # rule 7 with f second: f = u ⊥_w y; partner x ⊥_z y with z ∪ x = w
    for g in list(store.by_right.get(f.z, ())):
        if _canon(g.x + g.y) == f.x:
            yield 7, AtomFact(f.y, g.x, g.z), (g, f)
    # rule 8 with f as the dependence premise y ⊥_z y
    if f.y == f.z:
        for g in store.by_cond.get(f.y, ()):
            if set(f.x) <= set(g.y):
                rest = tuple(v for v in g.y if v not in f.x)
                yield 8, AtomFact(rest, f.x, g.z), (f, g)
                yield 8, AtomFact(g.y, f.x, g.z), (f, g)
    # rule 8 with f second: f = zx ⊥_y u; partner y ⊥_z y with y = f.x
    for g in store.deps:
        if g.y == f.x and set(g.x) <= set(f.y):
            rest = tuple(v for v in f.y if v not in g.x)
            yield 8, AtomFact(rest, g.x, f.z), (g, f)
            yield 8, AtomFact(f.y, g.x, f.z), (g, f)
    # rule 9 with f first: f = x ⊥_z y, partner xy ⊥_z u
    for g in store.by_left_cond.get((_canon(f.y + f.z), f.x), ()):
        yield 9, AtomFact(f.y, f.x, f.z + g.z), (f, g)
    # rule 9 with f second: f = w ⊥_z u; partner x ⊥_z y with x ∪ y = w
    for g in store.by_cond.get(f.x, ()):
        if _canon(g.y + g.z) == f.y:
            yield 9, AtomFact(g.y, g.x, g.z + f.z), (g, f)


def entail(
    premises: Iterable[Union[AtomFact, str]],
    goal: Union[AtomFact, str],
    depth: int = 6,
    universe: Optional[Iterable[str]] = None,
    side_len: int = 3,
    max_facts: int = 200_000,
) -> EntailResult:
    t0 = time.perf_counter()
    prem = [p if isinstance(p, AtomFact) else AtomFact.parse(p) for p in premises]
    goal = goal if isinstance(goal, AtomFact) else AtomFact.parse(goal)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    declared = set(universe) if universe is not None else set().union(goal.variables, *(p.variables for p in prem))
    undeclared = (goal.variables | set().union(*(p.variables for p in prem))) - declared
    if undeclared:
        raise ValueError(f"undeclared variables {sorted(undeclared)}")
    pool = side_tuples(declared, side_len)
    store = _Store()
    for i, p in enumerate(prem):
        store.add(p, 0, None, (), i)
    if goal in store.info:
        return EntailResult(_extract(store, goal), 0, len(store.info), time.perf_counter() - t0)
    frontier = list(store.order)
    for rnd in range(1, depth + 1):
        new: list[AtomFact] = []

        def emit(rule, fact, parents):
            if store.add(fact, rnd, rule, parents):
                new.append(fact)

        if rnd == 1:
            for a in pool:
                for b in pool:
                    emit(2, AtomFact(a, a, b), ())
        for f in frontier:
            for rule, g in _unary(f, pool):
                emit(rule, g, (f,))
        for f in frontier:
            for rule, g, parents in list(_binary(f, store)):
                if store.info[parents[0]][0] < rnd and store.info[parents[1]][0] < rnd:
                    emit(rule, g, parents)
        if goal in store.info:
            return EntailResult(_extract(store, goal), rnd, len(store.info), time.perf_counter() - t0)
        if len(store.info) > max_facts:
            return EntailResult(
                None, rnd, len(store.info), time.perf_counter() - t0, True, [f"fact cap {max_facts} exceeded in round {rnd}"]
            )
        frontier = new
        if not frontier:
            return EntailResult(None, rnd, len(store.info), time.perf_counter() - t0, True, ["saturated without reaching the goal"])
    return EntailResult(
        None, depth, len(store.info), time.perf_counter() - t0, True, [f"depth bound {depth} reached; not a refutation"]
    )


def _extract(store: _Store, goal: AtomFact) -> Derivation:
    needed: list[AtomFact] = []
    seen = set()

    def visit(f):
        if f in seen:
            return
        seen.add(f)
        for p in store.info[f][2]:
            visit(p)
        needed.append(f)

    visit(goal)
    index = {}
    steps = []
    for f in needed:
        _, rule, parents, premise = store.info[f]
        index[f] = len(steps)
        steps.append(Step(f, rule, tuple(index[p] for p in parents), premise))
    return Derivation(tuple(steps))
