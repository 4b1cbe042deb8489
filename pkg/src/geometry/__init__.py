"""
Hermitian tensor calculus for the Chern connection on the flat torus.
"""

from .connection import (
    TorsionFields,
    christoffel,
    compatibility_residual,
    covariant_derivative,
    divergence,
    torsion,
    torsion_trace,
)
from .curvature import CurvatureFields, chern_laplacian, chern_ricci, chern_scalar, curvature
from .metric import (
    HermitianMetric,
    MetricError,
    PositivityError,
    build_metric,
    i_del_delbar,
    identity_components,
    metric_from_components,
)
from .structure import (
    is_gauduchon,
    pluriclosed_residual,
    pluriclosed_residual_field,
    pluriclosed_symbols,
)
from .tensor import GeometryError, IndexSignature, SignatureError, Slot, TensorField, signature

__all__ = [
    "CurvatureFields",
    "GeometryError",
    "HermitianMetric",
    "IndexSignature",
    "MetricError",
    "PositivityError",
    "SignatureError",
    "Slot",
    "TensorField",
    "TorsionFields",
    "build_metric",
    "chern_laplacian",
    "chern_ricci",
    "chern_scalar",
    "christoffel",
    "compatibility_residual",
    "covariant_derivative",
    "curvature",
    "divergence",
    "i_del_delbar",
    "identity_components",
    "is_gauduchon",
    "metric_from_components",
    "pluriclosed_residual",
    "pluriclosed_residual_field",
    "pluriclosed_symbols",
    "signature",
    "torsion",
    "torsion_trace",
]
