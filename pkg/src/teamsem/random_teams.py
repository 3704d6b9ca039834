"""Seeded generators of small random teams for fuzzing and experiments."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .team import ProbabilisticTeam, Role, Team, Var


def random_rational_dist(rng: random.Random, k: int, max_num: int = 6, allow_zero: bool = False) -> list[Fraction]:
    lo = 0 if allow_zero else 1
    while True:
        nums = [rng.randint(lo, max_num) for _ in range(k)]
        if sum(nums):
            total = sum(nums)
            return [Fraction(n, total) for n in nums]


def random_team(rng: random.Random, names: Sequence[str], domain_size: int = 2, max_rows: int = 5, min_rows: int = 1) -> Team:
    space = list(itertools.product(range(domain_size), repeat=len(names)))
    k = rng.randint(min_rows, min(max_rows, len(space)))
    return Team(list(names), rng.sample(space, k))


def random_prob_team(rng: random.Random, names: Sequence[str], domain_size: int = 2, max_rows: int = 6) -> ProbabilisticTeam:
    """Random rational weights on a random support."""
    team = random_team(rng, names, domain_size, max_rows)
    ws = random_rational_dist(rng, len(team.rows))
    return ProbabilisticTeam(team.variables, dict(zip(team.rows, ws)))


def structured_prob_team(rng: random.Random, names: Sequence[str], domain_size: int = 2) -> ProbabilisticTeam:
    """A small Bayesian network: each variable is constant, an independent coin,
    a deterministic function of earlier variables, or a noisy copy of one.

    Such distributions satisfy many independence atoms, so rule premises are
    not vacuously false as they are for generic weights.
    """
    values = list(range(domain_size))
    modes = []
    for i in range(len(names)):
        kind = rng.choice(["const", "coin", "coin", "func", "noisy"] if i else ["const", "coin", "coin"])
        if kind == "const":
            modes.append(("const", rng.choice(values)))
        elif kind == "coin":
            modes.append(("coin", random_rational_dist(rng, domain_size, allow_zero=False)))
        elif kind == "func":
            parents = tuple(sorted(rng.sample(range(i), rng.randint(1, min(2, i)))))
            table = {key: rng.choice(values) for key in itertools.product(values, repeat=len(parents))}
            modes.append(("func", parents, table))
        else:
            parent = rng.randrange(i)
            keep = Fraction(rng.randint(1, 3), 4)
            modes.append(("noisy", parent, keep, random_rational_dist(rng, domain_size)))
    dist: dict = {(): Fraction(1)}
    for mode in modes:
        nxt: dict = {}
        for row, w in dist.items():
            if mode[0] == "const":
                opts = [(mode[1], Fraction(1))]
            elif mode[0] == "coin":
                opts = list(zip(values, mode[1]))
            elif mode[0] == "func":
                opts = [(mode[2][tuple(row[p] for p in mode[1])], Fraction(1))]
            else:
                _, parent, keep, noise = mode
                opts = [(v, (1 - keep) * q) for v, q in zip(values, noise)]
                opts.append((row[parent], keep))
            for v, q in opts:
                if q:
                    k = row + (v,)
                    nxt[k] = nxt.get(k, 0) + w * q
        dist = nxt
    return ProbabilisticTeam(list(names), dist)


def mixed_prob_team(rng: random.Random, names: Sequence[str], domain_size: int = 2) -> ProbabilisticTeam:
    """Half structured, half generic."""
    if rng.random() < 0.5:
        return structured_prob_team(rng, names, domain_size)
    return random_prob_team(rng, names, domain_size)


def random_hidden_team(rng: random.Random, n: int, l: int, domain_size: int = 2, max_rows: int = 6) -> Team:
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)] + (["z"] if l == 1 else [f"z{k}" for k in range(l)])
    return random_team(rng, names, domain_size, max_rows)


def random_instruction_team(rng: random.Random, n: int, m: int = 2, o: int = 2, hidden_values: int = 3, l: int = 1) -> Team:
    """A z-independent, strongly deterministic (hence local) hidden-variable team.

    Each hidden value carries a per-site response function; every measurement
    tuple of a random product set M is paired with every hidden value.
    """
    M_i = [sorted(rng.sample(range(m), rng.randint(1, m))) for _ in range(n)]
    M = list(itertools.product(*M_i))
    k = rng.randint(1, hidden_values)
    rows = []
    zs = ["z"] if l == 1 else [f"z{j}" for j in range(l)]
    for g in range(k):
        f = [{a: rng.randrange(o) for a in M_i[i]} for i in range(n)]
        hidden = (g,) + (0,) * (len(zs) - 1)
        for a in M:
            rows.append(tuple(a) + tuple(f[i][a[i]] for i in range(n)) + hidden)
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)] + zs
    roles = [Role.MEASUREMENT] * n + [Role.OUTCOME] * n + [Role.HIDDEN] * len(zs)
    return Team([Var(nm, r) for nm, r in zip(names, roles)], rows)


def random_zi_team(rng: random.Random, n: int, m: int = 2, o: int = 2, hidden_values: int = 3) -> Team:
    """z-independent hidden-variable team: every (a⃗, γ) occurs with a random nonempty outcome set."""
    M_i = [sorted(rng.sample(range(m), rng.randint(1, m))) for _ in range(n)]
    M = list(itertools.product(*M_i))
    outs = list(itertools.product(range(o), repeat=n))
    rows = []
    for g in range(rng.randint(1, hidden_values)):
        for a in M:
            for b in rng.sample(outs, rng.randint(1, min(3, len(outs)))):
                rows.append(tuple(a) + b + (g,))
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)] + ["z"]
    return Team(names, rows)


def random_empirical_team(rng: random.Random, n: int, domain_size: int = 2, max_rows: int = 8) -> Team:
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)]
    return random_team(rng, names, domain_size, max_rows)


def random_local_prob_team(rng: random.Random, n: int = 2, m: int = 2, o: int = 2, hidden_values: int = 2) -> ProbabilisticTeam:
    """Σ_γ q(γ)·p(a⃗|γ)·∏_i p_i(b_i|a_i,γ), with sparse supports: satisfies probabilistic locality."""
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)] + ["z"]
    k = rng.randint(1, hidden_values)
    q = random_rational_dist(rng, k)
    weights: dict = {}
    for g in range(k):
        M = list(itertools.product(range(m), repeat=n))
        pa = random_rational_dist(rng, len(M), allow_zero=True)
        site = [{a: random_rational_dist(rng, o, allow_zero=True) for a in range(m)} for _ in range(n)]
        for a, wa in zip(M, pa):
            if not wa:
                continue
            for b in itertools.product(range(o), repeat=n):
                w = q[g] * wa
                for i in range(n):
                    w *= site[i][a[i]][b[i]]
                if w:
                    weights[a + b + (g,)] = weights.get(a + b + (g,), 0) + w
    return ProbabilisticTeam(names, weights)


def random_hidden_prob_team(rng: random.Random, n: int = 2) -> ProbabilisticTeam:
    """Mixture of locality-satisfying, PI-only and generic teams."""
    u = rng.random()
    if u < 0.4:
        return random_local_prob_team(rng, n)
    names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)] + ["z"]
    if u < 0.7:
        # correlated outcomes with local marginals: PI holds, OI usually not
        weights: dict = {}
        for g in range(rng.randint(1, 2)):
            for a in itertools.product(range(2), repeat=n):
                corr = rng.choice([0, 1])
                for b0 in range(2):
                    b = (b0,) + tuple((b0 + corr * (i % 2)) % 2 for i in range(1, n))
                    weights[a + b + (g,)] = weights.get(a + b + (g,), 0) + 1
        total = sum(weights.values())
        return ProbabilisticTeam(names, {r: Fraction(w, total) for r, w in weights.items()})
    return random_prob_team(rng, names, 2, max_rows=8)
