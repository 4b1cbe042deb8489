"""
Identity suite and flow-level checks.
"""

from .checks import (
    EnergyCheckReport,
    ReductionReport,
    calabi_reduction_check,
    energy_derivative_check,
    local_slope_error,
)
from .identities import CONTROL_THRESHOLD, SuiteContext, draw_context, identity_suite
from .manifest import IDENTITY_MANIFEST, ManifestError, registered_identities, validate_manifest
from .report import IdentityReport, IdentityResult

__all__ = [
    "CONTROL_THRESHOLD",
    "EnergyCheckReport",
    "IDENTITY_MANIFEST",
    "IdentityReport",
    "IdentityResult",
    "ManifestError",
    "ReductionReport",
    "SuiteContext",
    "calabi_reduction_check",
    "draw_context",
    "energy_derivative_check",
    "identity_suite",
    "local_slope_error",
    "registered_identities",
    "validate_manifest",
]
