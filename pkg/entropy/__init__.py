from .renyi import (
    SignedDistribution,
    TrajectoryReport,
    entropy_derivative,
    evolve_trajectory,
    finite_difference_derivative,
    renyi2_entropy,
    signed_perturbations,
)

__all__ = [
    "SignedDistribution",
    "TrajectoryReport",
    "entropy_derivative",
    "evolve_trajectory",
    "finite_difference_derivative",
    "renyi2_entropy",
    "signed_perturbations",
]
