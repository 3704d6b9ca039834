"""Model checking for team semantics and probabilistic team semantics."""

from .team import (
    ProbabilisticTeam,
    Role,
    Team,
    TeamError,
    Var,
    collapse,
    dirac,
    duplicate,
    marginal,
    prob_project,
    prob_realizes,
    prob_uniformly_realizes,
    project,
    realizes,
    scaled_union,
    supplement,
    uniform_lift,
)

__version__ = "0.1.0"
