"""
Energy functionals and the flow velocity.
"""

from .background import Background, FunctionalError, background_residuals, ricci_potential
from .energy import (
    EnergyValues,
    energies,
    entropy,
    entropy_mabuchi_gap,
    mabuchi,
    mabuchi_difference,
    mabuchi_lower_bound,
    perturbed_metric,
    volume,
)
from .velocity import (
    VelocityTerms,
    coupled_residual,
    evaluate_velocity,
    flow_velocity,
    log_volume_ratio,
    mean_velocity,
    scalar_curvature_from_potential,
)

__all__ = [
    "Background",
    "EnergyValues",
    "FunctionalError",
    "VelocityTerms",
    "background_residuals",
    "coupled_residual",
    "energies",
    "entropy",
    "entropy_mabuchi_gap",
    "evaluate_velocity",
    "flow_velocity",
    "log_volume_ratio",
    "mabuchi",
    "mabuchi_difference",
    "mabuchi_lower_bound",
    "mean_velocity",
    "perturbed_metric",
    "ricci_potential",
    "scalar_curvature_from_potential",
    "volume",
]
