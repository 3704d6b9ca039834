"""Randomized soundness checks for the independence axioms and related rules."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .evaluate import indep_atom_holds, prob_indep_atom_holds
from .random_teams import mixed_prob_team, random_team, structured_prob_team
from .team import ProbabilisticTeam, Team

Atom = tuple  # (y, x, z) as sequences: y ⊥_x z
Schema = Callable[[dict], tuple[list[Atom], Atom]]

POSSIBILISTIC = "possibilistic"
PROBABILISTIC = "probabilistic"


def _cat(*ts):
    return tuple(v for t in ts for v in t)


# schema variables: tuples unless listed in SINGLE
RULES: dict[Union[int, str], tuple[Sequence[str], Schema]] = {
    1: ("yxz", lambda t: ([(t["y"], t["x"], t["y"])], (t["y"], t["x"], t["z"]))),
    2: ("xy", lambda t: ([], (t["x"], t["x"], t["y"]))),
    3: ("zxy", lambda t: ([(t["z"], t["x"], t["y"])], (t["y"], t["x"], t["z"]))),
    4: ("yYxzZ", lambda t: ([(_cat(t["y"], t["Y"]), t["x"], _cat(t["z"], t["Z"]))], (t["y"], t["x"], t["z"]))),
    5: ("yxz", lambda t: ([(t["y"], t["x"], t["z"])], (t["y"][::-1], t["x"][::-1], t["z"][::-1]))),
    6: ("zxy", lambda t: ([(t["z"], t["x"], t["y"])], (_cat(t["y"], t["x"]), t["x"], _cat(t["z"], t["x"])))),
    7: ("xzyu", lambda t: ([(t["x"], t["z"], t["y"]), (t["u"], _cat(t["z"], t["x"]), t["y"])], (t["u"], t["z"], t["y"]))),
    8: ("yzxu", lambda t: ([(t["y"], t["z"], t["y"]), (_cat(t["z"], t["x"]), t["y"], t["u"])], (t["x"], t["z"], t["u"]))),
    9: ("xzyu", lambda t: ([(t["x"], t["z"], t["y"]), (_cat(t["x"], t["y"]), t["z"], t["u"])], (t["x"], t["z"], _cat(t["y"], t["u"])))),
    # deliberately unsound: symmetry that forgets the conditioning tuple
    "symmetry_drop": ("zxy", lambda t: ([(t["z"], t["x"], t["y"])], (t["y"], (), t["z"]))),
}
SINGLE = {"Y", "Z"}


@dataclass
class FuzzReport:
    rule: Union[int, str]
    semantics: str
    trials: int
    nonvacuous: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return not self.counterexamples


def _holds(team, atom: Atom) -> bool:
    y, x, z = atom
    if isinstance(team, ProbabilisticTeam):
        return prob_indep_atom_holds(team, y, x, z)
    return indep_atom_holds(team, y, x, z)


def _random_tuple(rng: random.Random, names: Sequence[str], single: bool) -> tuple:
    if single:
        return (rng.choice(names),)
    return tuple(rng.choice(names) for _ in range(rng.randint(0, 2)))


def _sample_team(rng: random.Random, semantics: str, names: Sequence[str]):
    if semantics == POSSIBILISTIC:
        return random_team(rng, names, domain_size=rng.choice([2, 2, 3]), max_rows=5)
    return mixed_prob_team(rng, names)


def check_instance(team, rule: Union[int, str], inst: dict) -> Optional[bool]:
    """None if a premise fails, else whether the conclusion holds."""
    premises, conclusion = RULES[rule][1](inst)
    if not all(_holds(team, p) for p in premises):
        return None
    return _holds(team, conclusion)


def soundness_fuzz(rule: Union[int, str], trials: int = 2000, semantics: str = POSSIBILISTIC, seed: int = 0) -> FuzzReport:
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(f"{rule}/{semantics}/{seed}")
    letters = RULES[rule][0]
    names = ["v0", "v1", "v2", "v3"]
    report = FuzzReport(rule, semantics, trials)
    for _ in range(trials):
        team = _sample_team(rng, semantics, names)
        inst = {c: _random_tuple(rng, names, c in SINGLE) for c in letters}
        verdict = check_instance(team, rule, inst)
        if verdict is None:
            continue
        report.nonvacuous += 1
        if not verdict:
            report.counterexamples.append((team, inst))
    return report


def exhaustive_counterexample(rule: Union[int, str], max_rows: int = 4, names=("v0", "v1", "v2")):
    """Brute force over all binary teams with at most ``max_rows`` rows and all
    instantiations by single variables or the empty tuple."""
    letters = RULES[rule][0]
    space = list(itertools.product((0, 1), repeat=len(names)))
    choices = [()] + [(v,) for v in names]
    for k in range(1, max_rows + 1):
        for rows in itertools.combinations(space, k):
            team = Team(list(names), rows)
            for pick in itertools.product(choices, repeat=len(letters)):
                inst = dict(zip(letters, pick))
                if any(c in SINGLE and not inst[c] for c in letters):
                    continue
                if check_instance(team, rule, inst) is False:
                    return team, inst
    return None


# ------------------------------------------------------------------ separoid


def _leq(pt, a, b) -> bool:
    """a ⪯ b: b functionally determines a."""
    return prob_indep_atom_holds(pt, a, b, a)


def separoid_fuzz(trials: int = 2000, seed: int = 0) -> dict[str, FuzzReport]:
    """P1-P5 plus the quasi-order and join laws, with a ⪯ b as =(b, a) and join as concatenation."""
    rng = random.Random(f"separoid/{seed}")
    names = ["v0", "v1", "v2", "v3"]
    ind = lambda pt, a, c, b: prob_indep_atom_holds(pt, a, c, b)
    laws = {
        "P1": lambda pt, a, b, c, d: ((ind(pt, a, c, b),), ind(pt, b, c, a)),
        "P2": lambda pt, a, b, c, d: ((), ind(pt, a, a, b)),
        "P3": lambda pt, a, b, c, d: ((ind(pt, a, c, b), _leq(pt, d, b)), ind(pt, a, c, d)),
        "P4": lambda pt, a, b, c, d: ((ind(pt, a, c, b), _leq(pt, d, b)), ind(pt, a, c + d, b)),
        "P5": lambda pt, a, b, c, d: ((ind(pt, a, c, b), ind(pt, a, b + c, d)), ind(pt, a, c, b + d)),
        "reflexive": lambda pt, a, b, c, d: ((), _leq(pt, a, a)),
        "transitive": lambda pt, a, b, c, d: ((_leq(pt, a, b), _leq(pt, b, c)), _leq(pt, a, c)),
        "join_upper": lambda pt, a, b, c, d: ((), _leq(pt, a, a + b) and _leq(pt, b, a + b)),
        "join_least": lambda pt, a, b, c, d: ((_leq(pt, a, c), _leq(pt, b, c)), _leq(pt, a + b, c)),
    }
    reports = {k: FuzzReport(k, PROBABILISTIC, trials) for k in laws}
    for _ in range(trials):
        pt = mixed_prob_team(rng, names)
        a, b, c, d = (_random_tuple(rng, names, False) for _ in range(4))
        for k, law in laws.items():
            premises, conclusion = law(pt, a, b, c, d)
            if not all(premises):
                continue
            reports[k].nonvacuous += 1
            if not conclusion:
                reports[k].counterexamples.append((pt, (a, b, c, d)))
    return reports


# ------------------------------------------------------------------- Studený


def studeny_possibilistic(team, x, y, z, u) -> Optional[bool]:
    """{x⊥_z y, x⊥_u y, z⊥_{xy} u} ⟹ x⊥_{zu} y."""
    premises = [((x,), (z,), (y,)), ((x,), (u,), (y,)), ((z,), (x, y), (u,))]
    if not all(_holds(team, p) for p in premises):
        return None
    return _holds(team, ((x,), (z, u), (y,)))


def studeny_probabilistic(team, x, y, z, u, printed: bool = False) -> Optional[bool]:
    """{x⫫_{zu} y, z⫫_x u, z⫫_y u, x⫫y} ⟹ z⫫u.

    ``printed=True`` uses x⫫_{yz} y as the first premise instead, which holds in every team.
    """
    first = ((x,), (y, z), (y,)) if printed else ((x,), (z, u), (y,))
    premises = [first, ((z,), (x,), (u,)), ((z,), (y,), (u,)), ((x,), (), (y,))]
    if not all(_holds(team, p) for p in premises):
        return None
    return _holds(team, ((z,), (), (u,)))


def studeny_fuzz(semantics: str, trials: int = 2000, seed: int = 0, printed: bool = False, team_semantics: Optional[str] = None) -> FuzzReport:
    """Check a Studený-style rule on random instances.

    ``semantics`` picks the rule; ``team_semantics`` (default: the same) picks the
    kind of team it is checked on, so a rule can be tried outside its home.
    """
    team_semantics = team_semantics or semantics
    rng = random.Random(f"studeny/{semantics}/{team_semantics}/{printed}/{seed}")
    names = ["v0", "v1", "v2", "v3"]
    report = FuzzReport("studeny" + ("-printed" if printed else ""), team_semantics, trials)
    for _ in range(trials):
        if team_semantics == POSSIBILISTIC:
            team = random_team(rng, names, domain_size=2, max_rows=rng.randint(2, 8))
        else:
            team = structured_prob_team(rng, names) if rng.random() < 0.8 else mixed_prob_team(rng, names)
        x, y, z, u = rng.sample(names, 4)
        if semantics == POSSIBILISTIC:
            verdict = studeny_possibilistic(team, x, y, z, u)
        else:
            verdict = studeny_probabilistic(team, x, y, z, u, printed)
        if verdict is None:
            continue
        report.nonvacuous += 1
        if not verdict:
            report.counterexamples.append((team, (x, y, z, u)))
    return report
