"""Numerical search for a probabilistic realization with prescribed support.

Every probabilistic independence atom is a family of quadratic identities in
the row weights.  The probe minimizes the sum of squared identity violations
by batched Adam steps on a softmax parameterization, with a per-row weight
floor so that the support stays exactly the given team.  Restarts run in
fixed-size chunks whose seeds derive from the config seed, so results do not
depend on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .evaluate import eval_probabilistic
from .formula import Formula, Indep, conj, conjuncts
from .properties import PropertyId, Roles, build
from .team import ProbabilisticTeam, Team

CHUNK = 1000


@dataclass(frozen=True)
class ProbeConfig:
    restarts: int = 10_000
    iterations: int = 300
    learning_rate: float = 0.05
    init_scale: float = 3.0
    min_weight: float = 0.01  # total mass reserved for the floor, split evenly over rows
    tolerance: float = 1e-9
    seed: int = 0
    workers: Optional[int] = None


@dataclass(frozen=True)
class ProbeResult:
    witness: Optional[ProbabilisticTeam]
    residual: float
    weights: tuple
    restarts: int
    exact: bool


def worker_count(requested: Optional[int] = None) -> int:
    if requested:
        return max(1, requested)
    env = os.environ.get("TEAMSEM_THREADS")
    return max(1, int(env)) if env else 1


def target_formula(X: Team, props: Union[Formula, Iterable[Union[PropertyId, str]]]) -> Formula:
    if isinstance(props, Formula):
        return props
    roles = Roles.of(X)
    return conj([build(p, roles) for p in props])


def identity_matrices(X: Team, phi: Formula) -> tuple[np.ndarray, ...]:
    """Indicator matrices E1..E4 with residual_k = (E1 p)_k (E2 p)_k − (E3 p)_k (E4 p)_k."""
    rows = X.rows
    n = len(rows)
    blocks = [[], [], [], []]
    for atom in conjuncts(phi):
        if not isinstance(atom, Indep):
            raise ValueError(f"only independence atoms have polynomial identities: {atom}")
        py, px, pz = X.positions(atom.y), X.positions(atom.x), X.positions(atom.z)
        keys = [(tuple(r[p] for p in py), tuple(r[p] for p in px), tuple(r[p] for p in pz)) for r in rows]
        ab = sorted({(a, b) for a, b, _ in keys}, key=repr)
        bc_by_b: dict = {}
        for _, b, c in keys:
            bc_by_b.setdefault(b, set()).add(c)
        for a, b in ab:
            for c in sorted(bc_by_b[b], key=repr):
                vecs = [np.zeros(n) for _ in range(4)]
                for k, (ka, kb, kc) in enumerate(keys):
                    if kb != b:
                        continue
                    vecs[3][k] = 1
                    if ka == a:
                        vecs[0][k] = 1
                    if kc == c:
                        vecs[1][k] = 1
                    if ka == a and kc == c:
                        vecs[2][k] = 1
                for blk, v in zip(blocks, vecs):
                    blk.append(v)
    if not blocks[0]:
        return tuple(np.zeros((0, n)) for _ in range(4))
    return tuple(np.array(b) for b in blocks)


def residuals(E, P: np.ndarray) -> np.ndarray:
    E1, E2, E3, E4 = E
    return (P @ E1.T) * (P @ E2.T) - (P @ E3.T) * (P @ E4.T)


def _run_chunk(E, n: int, count: int, seed_seq: np.random.SeedSequence, cfg: ProbeConfig, include_uniform: bool):
    rng = np.random.default_rng(seed_seq)
    theta = rng.normal(scale=cfg.init_scale, size=(count, n))
    if include_uniform:
        theta[0] = 0.0
    floor = cfg.min_weight / n
    scale = 1.0 - cfg.min_weight
    E1, E2, E3, E4 = E
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    b1, b2, eps = 0.9, 0.999, 1e-12

    def weights(t):
        t = t - t.max(axis=1, keepdims=True)
        s = np.exp(t)
        s /= s.sum(axis=1, keepdims=True)
        return floor + scale * s, s

    for it in range(1, cfg.iterations + 1):
        P, S = weights(theta)
        q1, q2, q3, q4 = P @ E1.T, P @ E2.T, P @ E3.T, P @ E4.T
        r = q1 * q2 - q3 * q4
        gp = (r * q2) @ E1 + (r * q1) @ E2 - (r * q4) @ E3 - (r * q3) @ E4
        # back through p = floor + scale·softmax(θ)
        gs = scale * gp
        g = S * (gs - (gs * S).sum(axis=1, keepdims=True))
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        theta -= cfg.learning_rate * (m / (1 - b1**it)) / (np.sqrt(v / (1 - b2**it)) + eps)
    P, _ = weights(theta)
    res = np.abs(residuals(E, P)).max(axis=1) if E1.shape[0] else np.zeros(count)
    best = int(np.argmin(res))
    return float(res[best]), P[best]


def _rationalize(X: Team, p: np.ndarray) -> ProbabilisticTeam:
    fr = [Fraction(float(w)).limit_denominator(10**6) for w in p]
    fr = [w if w > 0 else Fraction(1, 10**6) for w in fr]
    total = sum(fr)
    return ProbabilisticTeam(X.variables, {r: w / total for r, w in zip(X.rows, fr)})


def search_probabilistic_realization(
    X: Team, props: Union[Formula, Iterable[Union[PropertyId, str]]], config: ProbeConfig = ProbeConfig()
) -> ProbeResult:
    phi = target_formula(X, props)
    n = len(X.rows)
    if n == 0:
        raise ValueError("the probe needs a nonempty team")
    E = identity_matrices(X, phi)
    chunks = []
    left = config.restarts
    while left > 0:
        chunks.append(min(CHUNK, left))
        left -= chunks[-1]
    seeds = np.random.SeedSequence(config.seed).spawn(len(chunks))
    jobs = [(E, n, c, s, config, i == 0) for i, (c, s) in enumerate(zip(chunks, seeds))]
    workers = worker_count(config.workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: _run_chunk(*a), jobs))
    else:
        results = [_run_chunk(*a) for a in jobs]
    # lowest residual wins; ties go to the earliest chunk
    residual, p = min(results, key=lambda t: t[0])
    witness, exact = None, False
    if residual < config.tolerance:
        witness = _rationalize(X, p)
        exact = eval_probabilistic(witness, phi)
    return ProbeResult(witness, residual, tuple(float(w) for w in p), config.restarts, exact)
