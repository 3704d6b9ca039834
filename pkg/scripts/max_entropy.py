"""Compare the entropy of the probabilistic lift with random realizations
sharing its support, and report the smallest margins seen."""

import argparse
import random

from teamsem.constructions import entropy, entropy_sections, measurement_prior, probabilistic_lift
from teamsem.random_teams import random_zi_team
from teamsem.team import ProbabilisticTeam


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--teams", type=int, default=20)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--sites", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    worst_theta = worst_eta = float("inf")
    for _ in range(args.teams):
        X = random_zi_team(rng, args.sites)
        lift = probabilistic_lift(X)
        h_theta, h_eta = entropy(measurement_prior(lift)), entropy_sections(lift)
        for _ in range(args.samples):
            other = ProbabilisticTeam(X.variables, {r: rng.randint(1, 50) for r in X.rows}, normalize=True)
            worst_theta = min(worst_theta, h_theta - entropy(measurement_prior(other)))
            for key, h in entropy_sections(other).items():
                worst_eta = min(worst_eta, h_eta[key] - h)
    print(f"min H(theta_lift) - H(theta): {worst_theta:.3e}")
    print(f"min H(eta_lift) - H(eta) over sections: {worst_eta:.3e}")
    print("dominates" if min(worst_theta, worst_eta) >= -1e-12 else "VIOLATION")


if __name__ == "__main__":
    main()
