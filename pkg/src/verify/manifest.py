"""
Identity manifest and evaluator registry.

IDENTITY_MANIFEST is the closed inventory of identities the suite checks,
in report order. Evaluators register themselves with @register_identity;
validate_manifest() fails when the two sets drift apart.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

IDENTITY_MANIFEST: Tuple[str, ...] = (
    "metric_compatibility",
    "torsion_antisymmetry",
    "torsion_lowering",
    "torsion_ddbar_invariance",
    "curvature_commutation",
    "curvature_conjugation",
    "ricci_contraction",
    "commutation_one_form",
    "commutation_scalar",
    "commutation_conjugate",
    "divergence_theorem",
    "gauduchon_integral",
    "gauduchon_torsion",
    "volume_preservation",
)


class ManifestError(RuntimeError):
    """Registered evaluators and the manifest disagree."""
    pass


@dataclass(frozen=True)
class IdentitySpec:
    """
    Attributes:
        name: manifest name
        description: the identity in words
        tolerance: pass threshold on the residual
        conditional: only meaningful on Gauduchon metrics; ships a
            negative control
        torsion_dependent: degenerates to 0 = 0 on torsion-free metrics
        evaluate: fn(context) -> residual
    """
    name: str
    description: str
    tolerance: float
    conditional: bool
    torsion_dependent: bool
    evaluate: Callable


_REGISTRY: Dict[str, IdentitySpec] = {}


def register_identity(name: str, description: str, tolerance: float,
                      conditional: bool = False, torsion_dependent: bool = False):
    """Decorator registering an evaluator under a manifest name."""
    def decorator(fn: Callable) -> Callable:
        if name in _REGISTRY:
            raise ManifestError(f"identity {name!r} registered twice")
        _REGISTRY[name] = IdentitySpec(name, description, tolerance, conditional,
                                       torsion_dependent, fn)
        return fn
    return decorator


def registered_identities() -> List[IdentitySpec]:
    """Registered evaluators in manifest order."""
    validate_manifest()
    return [_REGISTRY[name] for name in IDENTITY_MANIFEST]


def validate_manifest() -> None:
    """
    Raises:
        ManifestError: an evaluator is missing or unlisted
    """
    registered = set(_REGISTRY)
    listed = set(IDENTITY_MANIFEST)
    if len(listed) != len(IDENTITY_MANIFEST):
        raise ManifestError("duplicate names in IDENTITY_MANIFEST")
    missing = sorted(listed - registered)
    unlisted = sorted(registered - listed)
    if missing or unlisted:
        raise ManifestError(f"manifest mismatch: missing evaluators {missing}, unlisted {unlisted}")
