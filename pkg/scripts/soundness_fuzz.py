"""Randomized soundness checks: the nine rules in both semantics, the
separoid laws, and the Studeny-style rules in and out of their home semantics."""

import argparse

from teamsem.soundness import POSSIBILISTIC, PROBABILISTIC, separoid_fuzz, soundness_fuzz, studeny_fuzz


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for rule in list(range(1, 10)) + ["symmetry_drop"]:
        for sem in (POSSIBILISTIC, PROBABILISTIC):
            r = soundness_fuzz(rule, args.trials, sem, args.seed)
            print(f"rule {rule!s:>13} {sem:>13}: {r.nonvacuous:5d} nonvacuous, {len(r.counterexamples)} counterexamples")
    for name, r in separoid_fuzz(args.trials, args.seed).items():
        print(f"separoid {name:>10}: {r.nonvacuous:5d} nonvacuous, {len(r.counterexamples)} counterexamples")
    for rule_sem in (POSSIBILISTIC, PROBABILISTIC):
        for team_sem in (POSSIBILISTIC, PROBABILISTIC):
            r = studeny_fuzz(rule_sem, args.trials, args.seed, team_semantics=team_sem)
            print(f"studeny {rule_sem} rule on {team_sem} teams: {r.nonvacuous} nonvacuous, {len(r.counterexamples)} counterexamples")
    r = studeny_fuzz(PROBABILISTIC, args.trials, args.seed, printed=True)
    print(f"studeny probabilistic rule, printed premise: {r.nonvacuous} nonvacuous, {len(r.counterexamples)} counterexamples")


if __name__ == "__main__":
    main()
