"""Finite-dimensional quantum systems, Born-rule outcome distributions and the
probabilistic teams they induce.

Operators are dense complex numpy arrays.  Probabilities are computed in
double precision and snapped to nearby small-denominator rationals before they
enter the exact team layer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .team import ProbabilisticTeam, Team, TeamError

TOL = 1e-9
SUPPORT_THRESHOLD = 1e-9
MAX_DENOMINATOR = 10**6
MAX_DIMENSION = 64


class QuantumError(ValueError):
    """An invalid quantum system or an unknown measurement."""


def tensor(ms: Sequence[np.ndarray]) -> np.ndarray:
    if not ms:
        raise QuantumError("tensor of an empty list")
    out = np.asarray(ms[0], dtype=complex)
    for m in ms[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def ket(*amplitudes) -> np.ndarray:
    return np.array(amplitudes, dtype=complex)


def basis(bits: str) -> np.ndarray:
    """Computational basis vector |bits⟩."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


@dataclass
class QuantumSystem:
    """Sites with dimensions ``dims``; ``povms[i][a]`` maps outcome b to the
    operator A_i^{a,b}; ``M`` lists the measurement tuples that are used."""

    dims: tuple[int, ...]
    povms: list[dict]
    rho: np.ndarray
    M: tuple[tuple, ...]
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.dims)

    def outcomes(self, i: int) -> list:
        return sorted({b for a in self.povms[i] for b in self.povms[i][a]})

    @property
    def O(self) -> list[tuple]:
        return list(itertools.product(*(self.outcomes(i) for i in range(self.n))))

    @classmethod
    def pure(cls, dims, bases: list[dict], psi: np.ndarray, M, name: str = "") -> "QuantumSystem":
        """``bases[i][a][b]`` is the eigenvector for outcome b of measurement a at site i."""
        povms = [{a: {b: projector(v) for b, v in outs.items()} for a, outs in site.items()} for site in bases]
        return cls(tuple(dims), povms, projector(psi), tuple(tuple(a) for a in M), name)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _is_psd(m: np.ndarray, tol: float) -> bool:
    if not np.allclose(m, m.conj().T, atol=tol):
        return False
    return bool(np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -tol)


def validate(sys: QuantumSystem, tol: float = TOL) -> ValidationReport:
    rep = ValidationReport()
    total = int(np.prod(sys.dims))
    if total > MAX_DIMENSION:
        rep.violations.append(f"total dimension {total} exceeds {MAX_DIMENSION}")
    if len(sys.povms) != sys.n:
        rep.violations.append(f"{len(sys.povms)} POVM families for {sys.n} sites")
        return rep
    for i, (d, site) in enumerate(zip(sys.dims, sys.povms)):
        for a, elems in site.items():
            acc = np.zeros((d, d), dtype=complex)
            for b, op in elems.items():
                op = np.asarray(op, dtype=complex)
                if op.shape != (d, d):
                    rep.violations.append(f"A_{i}^{{{a},{b}}} has shape {op.shape}, expected {(d, d)}")
                    continue
                if not _is_psd(op, tol):
                    rep.violations.append(f"A_{i}^{{{a},{b}}} is not positive semidefinite")
                acc += op
            if not np.allclose(acc, np.eye(d), atol=tol):
                rep.violations.append(f"POVM of site {i}, measurement {a} does not sum to the identity")
    rho = np.asarray(sys.rho, dtype=complex)
    if rho.shape != (total, total):
        rep.violations.append(f"density operator has shape {rho.shape}, expected {(total, total)}")
        return rep
    if abs(np.trace(rho) - 1) > tol:
        rep.violations.append(f"density operator has trace {np.trace(rho).real:.12g}")
    if not _is_psd(rho, tol):
        rep.violations.append("density operator is not positive semidefinite")
    for a in sys.M:
        if len(a) != sys.n or any(a[i] not in sys.povms[i] for i in range(sys.n)):
            rep.violations.append(f"measurement tuple {a} has no POVM")
    return rep


def outcome_distribution(sys: QuantumSystem, a: Sequence) -> dict[tuple, float]:
    """p_a(b) = tr(A^{a,b} ρ) for every outcome tuple b."""
    a = tuple(a)
    if a not in sys.M:
        raise QuantumError(f"unknown measurement tuple {a}")
    out = {}
    for b in sys.O:
        ops = []
        for i in range(sys.n):
            op = sys.povms[i][a[i]].get(b[i])
            if op is None:
                ops = None
                break
            ops.append(op)
        out[b] = 0.0 if ops is None else float(np.trace(tensor(ops) @ sys.rho).real)
    return out


def snap(p: float, tol: float = TOL, max_denominator: int = MAX_DENOMINATOR) -> Fraction:
    """Nearest rational with bounded denominator if within ``tol``, else the exact float."""
    q = Fraction(p).limit_denominator(max_denominator)
    return q if abs(float(q) - p) < tol else Fraction(p)


def quantum_team(sys: QuantumSystem, threshold: float = SUPPORT_THRESHOLD) -> ProbabilisticTeam:
    """𝕏(s) = p_{s(x⃗)}(s(y⃗)) / |M| over the domain x0..x_{n-1}, y0..y_{n-1}."""
    rep = validate(sys)
    if not rep.ok:
        raise QuantumError("; ".join(rep.violations))
    weights = {}
    for a in sys.M:
        for b, p in outcome_distribution(sys, a).items():
            if p > threshold:
                weights[a + b] = snap(p)
    total = sum(weights.values())
    names = [f"x{i}" for i in range(sys.n)] + [f"y{i}" for i in range(sys.n)]
    return ProbabilisticTeam(names, {r: w / total for r, w in weights.items()})


# ------------------------------------------------------------------ presets

_S2 = 1 / np.sqrt(2)


def epr_system() -> QuantumSystem:
    psi = _S2 * (basis("01") + basis("10"))
    comp = {0: ket(1, 0), 1: ket(0, 1)}
    return QuantumSystem.pure((2, 2), [{0: comp}, {1: comp}], psi, [(0, 1)], "epr")


def ghz_system() -> QuantumSystem:
    psi = _S2 * (basis("000") + basis("111"))
    # |ψ^{a,b}⟩ = (|0⟩ + (−1)^{1−b} i^a |1⟩)/√2
    site = {a: {b: _S2 * ket(1, (-1) ** (1 - b) * 1j**a) for b in (0, 1)} for a in (0, 1)}
    M = list(itertools.product((0, 1), repeat=3))
    return QuantumSystem.pure((2, 2, 2), [site] * 3, psi, M, "ghz")


def hardy_system() -> QuantumSystem:
    psi = -0.5 * basis("00") + np.sqrt(3 / 8) * (basis("01") + basis("10"))
    site = {
        0: {0: ket(np.sqrt(3 / 5), np.sqrt(2 / 5)), 1: ket(-np.sqrt(2 / 5), np.sqrt(3 / 5))},
        1: {0: ket(1, 0), 1: ket(0, 1)},
    }
    M = list(itertools.product((0, 1), repeat=2))
    return QuantumSystem.pure((2, 2), [site] * 2, psi, M, "hardy")


PRESETS: dict[str, Callable[[], QuantumSystem]] = {"epr": epr_system, "ghz": ghz_system, "hardy": hardy_system}


# ------------------------------------------------------------ non-local games


@dataclass(frozen=True)
class NonLocalGame:
    I_A: tuple
    I_B: tuple
    O_A: tuple
    O_B: tuple
    V: Callable[[object, object, object, object], int]  # V(a, b | c, d)

    @classmethod
    def from_table(cls, I_A, I_B, O_A, O_B, table: Mapping[tuple, int]) -> "NonLocalGame":
        """``table`` maps (a, b, c, d) to 0/1 and must be total."""
        missing = [k for k in itertools.product(O_A, O_B, I_A, I_B) if k not in table]
        if missing:
            raise TeamError(f"decision table is missing {missing[0]}")
        return cls(tuple(I_A), tuple(I_B), tuple(O_A), tuple(O_B), lambda a, b, c, d: int(table[(a, b, c, d)]))

    def winning(self) -> list[tuple]:
        return [k for k in itertools.product(self.O_A, self.O_B, self.I_A, self.I_B) if self.V(*k)]


def game_to_team(g: NonLocalGame) -> Team:
    """All (x0, x1, y0, y1) = (c, d, a, b) with V(a, b | c, d) = 1; the empty
    team if some question pair has no winning answer."""
    names = ["x0", "x1", "y0", "y1"]
    rows = [(c, d, a, b) for a, b, c, d in g.winning()]
    questions = {(r[0], r[1]) for r in rows}
    if len(questions) < len(g.I_A) * len(g.I_B):
        return Team(names, [])
    return Team(names, rows)


def chsh_game() -> NonLocalGame:
    return NonLocalGame((0, 1), (0, 1), (0, 1), (0, 1), lambda a, b, c, d: int(a ^ b == c & d))
