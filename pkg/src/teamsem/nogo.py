"""Canonical EPR, GHZ, Hardy and Kochen-Specker teams, recognizers, and
brute-force oracles for the absence of local or non-contextual models."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .formula import Formula, parse
from .properties import PropertyId, Roles, build
from .team import Team, TeamError

# ---------------------------------------------------------------- EPR


def epr_team() -> Team:
    return Team(["x0", "x1", "y0", "y1"], [(0, 1, 0, 1), (0, 1, 1, 0)])


EPR_FORMULA = "Eh z . ( =(z) /\\ y0 _||_ y1 | x0 x1 z )"


def epr_formula() -> Formula:
    return parse(EPR_FORMULA)


def worked_example_team() -> Team:
    """Six rows over (x0, y0, x1, y1) satisfying y0 ⊥_{x0 x1} y1."""
    return Team(
        ["x0", "y0", "x1", "y1"],
        [(0, 1, 0, 1), (0, 1, 1, 2), (0, 1, 1, 7), (0, 5, 1, 2), (0, 5, 1, 7), (1, 5, 1, 1)],
    )


# ---------------------------------------------------------------- GHZ


@dataclass(frozen=True)
class GHZSpec:
    P: frozenset = frozenset({(0, 1, 1), (1, 0, 1), (1, 1, 0)})

    @property
    def Q(self) -> frozenset:
        return self.P | {(0, 0, 0)}

    @property
    def R(self) -> frozenset:
        return frozenset(t for t in itertools.product((0, 1), repeat=3) if t not in self.Q)


GHZ_NAMES = ["x0", "x1", "x2", "y0", "y1", "y2"]


def ghz_team_minimal() -> Team:
    rows = [
        (0, 0, 0, 0, 0, 1),
        (0, 0, 0, 0, 1, 0),
        (0, 0, 0, 1, 0, 0),
        (0, 0, 0, 1, 1, 1),
        (0, 1, 1, 0, 0, 0),
        (0, 1, 1, 0, 1, 1),
        (1, 0, 1, 1, 0, 1),
        (1, 1, 0, 1, 1, 0),
    ]
    return Team(GHZ_NAMES, rows)


def _xy(X: Team, n: int, kind: str):
    roles = Roles.of(X)
    if roles.n != n:
        raise TeamError(f"{kind} teams have {n} sites; got {roles.n}")
    px, py = X.positions(roles.xs), X.positions(roles.ys)
    return [(tuple(r[p] for p in px), tuple(r[p] for p in py)) for r in X.rows]


def is_ghz_team(X: Team, spec: GHZSpec = GHZSpec()) -> bool:
    pairs = _xy(X, 3, "GHZ")
    if set(X.values()) != {0, 1}:
        return False
    ys_on_P = {b for a, b in pairs if a in spec.P}
    xs_on_Q = {a for a, b in pairs if b in spec.Q}
    ys_on_000 = {b for a, b in pairs if a == (0, 0, 0)}
    return ys_on_P == spec.Q and spec.P <= xs_on_Q and ys_on_000 == spec.R


# ---------------------------------------------------------------- Hardy


def hardy_team_minimal() -> Team:
    return Team(["x0", "x1", "y0", "y1"], [(0, 0, 0, 0), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 0)])


def is_hardy_team(X: Team) -> bool:
    pairs = set(_xy(X, 2, "Hardy"))
    if set(X.values()) != {0, 1}:
        return False
    s0 = ((0, 0), (0, 0))
    excluded = [((0, 1), (0, 0)), ((1, 0), (0, 0)), ((1, 1), (1, 1))]
    every_question = {a for a, _ in pairs} == set(itertools.product((0, 1), repeat=2))
    return s0 in pairs and not any(s in pairs for s in excluded) and every_question


# ---------------------------------------------------------------- local models


@dataclass(frozen=True)
class MerminInstruction:
    """Deterministic per-site response tables: ``responses[i]`` maps a
    measurement value of site i to its outcome."""

    responses: tuple  # per site: tuple of (measurement value, outcome) pairs

    def __call__(self, a: Sequence) -> tuple:
        return tuple(dict(site)[ai] for site, ai in zip(self.responses, a))

    def rows(self) -> list[tuple]:
        """b^j for each measurement value j shared by all sites (binary: b⁰, b¹)."""
        common = sorted(set.intersection(*(set(dict(s)) for s in self.responses)))
        return [tuple(dict(s)[j] for s in self.responses) for j in common]

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.rows())


@dataclass
class LocalModelCertificate:
    instructions: int
    consistent: list[MerminInstruction]
    uncovered: list
    model: Optional[list[MerminInstruction]]

    @property
    def has_model(self) -> bool:
        return self.model is not None


def _scenario(X: Team):
    roles = Roles.of(X)
    n = roles.n
    pairs = set(_xy(X, n, "empirical"))
    M = sorted({a for a, _ in pairs})
    M_i = [sorted({a[i] for a in M}) for i in range(n)]
    O_i = [sorted({b[i] for _, b in pairs}) for i in range(n)]
    return n, pairs, M, M_i, O_i


def _instructions(M_i: Sequence[Sequence], O_i: Sequence[Sequence]):
    per_site = [
        [tuple(zip(ms, outs)) for outs in itertools.product(os, repeat=len(ms))] for ms, os in zip(M_i, O_i)
    ]
    return [MerminInstruction(inst) for inst in itertools.product(*per_site)]


def _instruction_count(M_i, O_i) -> int:
    total = 1
    for ms, os in zip(M_i, O_i):
        total *= len(os) ** len(ms)
    return total


def local_model_search(X: Team, cap: int = 1 << 20) -> LocalModelCertificate:
    """Search for a z-independent, strongly deterministic model of X.

    A model is a nonempty set S of instructions f with
    {(a⃗, f(a⃗)) : a⃗ ∈ M, f ∈ S} = X, one hidden value per instruction.  Every
    instruction in S must be consistent, i.e. produce only rows of X on M; the
    union of all consistent instructions is the largest candidate, so a model
    exists iff that union covers X.
    """
    n, pairs, M, M_i, O_i = _scenario(X)
    total = _instruction_count(M_i, O_i)
    if total > cap:
        raise TeamError(f"{total} instructions exceed the cap of {cap}")
    consistent, covered = [], set()
    for inst in _instructions(M_i, O_i):
        produced = {(a, inst(a)) for a in M}
        if produced <= pairs:
            consistent.append(inst)
            covered |= produced
    uncovered = sorted(pairs - covered)
    model = consistent if pairs and not uncovered else None
    return LocalModelCertificate(total, consistent, uncovered, model)


def verify_no_local_model(X: Team, cap: int = 1 << 20) -> tuple[bool, LocalModelCertificate]:
    """True iff no set of instructions reproduces X exactly; ``cap`` bounds the
    number of candidate instructions (equivalently, of shared hidden values)."""
    cert = local_model_search(X, cap)
    return not cert.has_model, cert


def exists_union_model_bruteforce(X: Team, max_instructions: int = 20) -> bool:
    """Try every nonempty set of instructions; only for tiny scenarios."""
    n, pairs, M, M_i, O_i = _scenario(X)
    insts = _instructions(M_i, O_i)
    if len(insts) > max_instructions:
        raise TeamError("too many instructions for subset enumeration")
    products = [frozenset((a, inst(a)) for a in M) for inst in insts]
    for mask in range(1, 1 << len(insts)):
        union = set()
        for j in range(len(insts)):
            if mask >> j & 1:
                union |= products[j]
        if union == pairs:
            return True
    return False


def locality_formula(n: int) -> Formula:
    """∃̃z (z ⊥ x⃗ ∧ PI ∧ OI) over standard names."""
    roles = Roles.standard(n, 1)
    body = build(PropertyId.ZI, roles) & build(PropertyId.PI, roles) & build(PropertyId.OI, roles)
    return parse(f"Eh z . ( {body} )", warn_roles=False)


def ghz_parity_check(spec: GHZSpec = GHZSpec()) -> bool:
    """R has only odd bit-sums, while any instruction's (0,0,0) output lies in Q
    whenever its outputs on P lie in Q."""
    if not all(sum(t) % 2 == 1 for t in spec.R):
        return False
    for b0 in itertools.product((0, 1), repeat=3):
        for b1 in itertools.product((0, 1), repeat=3):
            outs = {a: tuple((b1 if a[i] else b0)[i] for i in range(3)) for a in spec.Q}
            if all(outs[a] in spec.Q for a in spec.P) and outs[(0, 0, 0)] not in spec.Q:
                return False
    return True


# ---------------------------------------------------------------- Kochen-Specker

KS_P = (
    (0, 1, 2, 3),
    (0, 4, 5, 6),
    (7, 8, 2, 9),
    (7, 10, 6, 11),
    (1, 4, 12, 13),
    (8, 10, 13, 14),
    (15, 16, 3, 9),
    (15, 17, 5, 11),
    (16, 17, 12, 14),
)


@dataclass(frozen=True)
class KSSpec:
    P: tuple = KS_P
    require_double_cover: bool = True

    def __post_init__(self):
        if not self.P:
            raise TeamError("empty P")
        width = {len(t) for t in self.P}
        if len(width) != 1:
            raise TeamError("all tuples of P must have the same length")
        if self.require_double_cover and not self.double_cover:
            raise TeamError("some element does not occur in exactly two tuples of P")

    @property
    def width(self) -> int:
        return len(self.P[0])

    @property
    def Q(self) -> tuple:
        w = self.width
        return tuple(tuple(int(i == j) for i in range(w)) for j in range(w))

    @property
    def occurrences(self) -> Counter:
        return Counter(v for t in self.P for v in t)

    @property
    def double_cover(self) -> bool:
        return all(c == 2 for c in self.occurrences.values())


KS_NAMES = ["x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"]


def noncontextual_assignments(ks: KSSpec) -> np.ndarray:
    """All f: P → Q, encoded by the position of the 1 in each tuple, that give
    every element the same value in every tuple containing it."""
    k, w = len(ks.P), ks.width
    grid = np.indices((w,) * k).reshape(k, -1).T  # every f, one row each
    ok = np.ones(len(grid), dtype=bool)
    where: dict = {}
    for ti, t in enumerate(ks.P):
        for pos, v in enumerate(t):
            where.setdefault(v, []).append((ti, pos))
    for occ in where.values():
        vals = [grid[:, ti] == pos for ti, pos in occ]
        for other in vals[1:]:
            ok &= other == vals[0]
    return grid[ok]


def verify_no_noncontextual(ks: KSSpec = KSSpec()) -> tuple[bool, dict]:
    found = noncontextual_assignments(ks)
    parity = None
    if ks.double_cover:
        # a non-contextual f marks exactly one element per tuple, each marked
        # element lying in two tuples: |P| = 2·(marked count) must be even
        parity = len(ks.P) % 2 == 1
    report = {
        "assignments": ks.width ** len(ks.P),
        "noncontextual": int(len(found)),
        "parity_argument_applies": parity,
        "parity_agrees": parity is None or parity == (len(found) == 0),
    }
    return len(found) == 0, report


def _act(perm, t):
    return tuple(t[perm[i]] for i in range(len(t)))


def ks_team_canonical(ks: KSSpec = KSSpec(), f: Optional[Mapping] = None) -> Team:
    """Close {(a⃗, f(a⃗)) : a⃗ ∈ P} under simultaneous coordinate permutations.

    ``f`` defaults to the first unit vector on every tuple.
    """
    first = ks.Q[0]
    f = f or {t: first for t in ks.P}
    rows = set()
    for perm in itertools.permutations(range(ks.width)):
        for a in ks.P:
            rows.add(_act(perm, a) + _act(perm, f[a]))
    names = [f"x{i}" for i in range(ks.width)] + [f"y{i}" for i in range(ks.width)]
    return Team(names, rows)


def is_ks_team(X: Team, f: Mapping, ks: KSSpec = KSSpec()) -> bool:
    pairs = set(_xy(X, ks.width, "KS"))
    elements = set(ks.occurrences)
    if not all(set(a) <= elements and set(b) <= {0, 1} for a, b in pairs):
        return False
    for a in ks.P:
        ys = {b for x, b in pairs if x == a}
        if ys != {tuple(f[a])}:
            return False
    for perm in itertools.permutations(range(ks.width)):
        for a, b in pairs:
            if (_act(perm, a), _act(perm, b)) not in pairs:
                return False
    return True


# ---------------------------------------------------------------- NS counterexample


def ns_counterexample_team() -> Team:
    """Twelve rows over (x0, x1, y0, y1) supporting no-signalling with no
    probabilistic no-signalling distribution on the same support."""
    rows = "0000 0001 0011 0100 0110 0111 1000 1010 1011 1100 1101 1111".split()
    return Team(["x0", "x1", "y0", "y1"], [tuple(int(c) for c in r) for r in rows])
