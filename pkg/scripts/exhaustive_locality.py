"""Exhaustive checks over small binary teams.

1. LOCAL agrees with PI ∧ OI on every two-site team with one hidden bit and
   at most --max-rows rows.
2. The Mermin-instruction search agrees with the locality formula (evaluated
   by the generic team-semantics checker) on every empirical two-site team
   with at most --formula-rows rows.
"""

import argparse
import itertools
import time
from collections import Counter

from teamsem.evaluate import EvalContext, Verdict, eval_possibilistic
from teamsem.nogo import local_model_search, locality_formula
from teamsem.properties import Roles, check_atoms_directly, locality_holds
from teamsem.team import Team


def local_vs_pi_oi(max_rows):
    roles = Roles.standard(2, 1)
    names = ["x0", "x1", "y0", "y1", "z"]
    space = list(itertools.product((0, 1), repeat=5))
    tally = Counter()
    for k in range(max_rows + 1):
        for rows in itertools.combinations(space, k):
            t = Team(names, rows)
            a = locality_holds(t, roles)
            b = check_atoms_directly("PI", t, roles) and check_atoms_directly("OI", t, roles)
            tally["agree" if a == b else "disagree"] += 1
            tally["local"] += a
    return tally


def models_vs_formula(max_rows, budget):
    phi = locality_formula(2)
    names = ["x0", "x1", "y0", "y1"]
    space = list(itertools.product((0, 1), repeat=4))
    tally = Counter()
    for k in range(1, max_rows + 1):
        for rows in itertools.combinations(space, k):
            X = Team(names, rows)
            cert = local_model_search(X)
            v = eval_possibilistic(X, phi, EvalContext(k_max=max(1, len(cert.consistent)), budget=budget))
            if v is Verdict.INCONCLUSIVE:
                tally["inconclusive"] += 1
            elif bool(v) == cert.has_model:
                tally["agree"] += 1
            else:
                tally["disagree"] += 1
    return tally


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rows", type=int, default=5)
    ap.add_argument("--formula-rows", type=int, default=4)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args()
    t0 = time.perf_counter()
    print("LOCAL vs PI and OI:", dict(local_vs_pi_oi(args.max_rows)), f"{time.perf_counter() - t0:.1f}s")
    t0 = time.perf_counter()
    print("instruction models vs formula:", dict(models_vs_formula(args.formula_rows, args.budget)), f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
