"""
Metric Recipes

A recipe names a deterministic construction of a background metric. Its
fingerprint identifies the metric across runs, reports and checkpoints.

Fingerprint properties:
- Deterministic: same recipe always produces the same fingerprint
- Machine-independent: only recipe parameters enter, no paths or PIDs
- Stable: SHA256 over sorted-key compact JSON
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

RECIPE_KINDS = ("flat", "conformal", "kahler", "random_pluriclosed", "constant_det_fixture")
PROFILES = ("random", "sine")


class RecipeError(ValueError):
    """Recipe kind or parameters are invalid."""
    pass


@dataclass(frozen=True)
class MetricRecipe:
    """
    Deterministic metric construction.

    Attributes:
        kind: one of RECIPE_KINDS
        seed: RNG seed for random profiles and random_pluriclosed
        amplitude: sup-norm of the perturbation (conformal factor u, Kähler
            potential ψ, or pluriclosed component perturbation)
        max_mode: highest Fourier mode of random perturbations; for the sine
            profile the wave number of sin(2π·max_mode·x¹/L)
        profile: "random" or "sine" (conformal and kahler)
        epsilon: off-diagonal size ε of constant_det_fixture
        mode: phase mode m of constant_det_fixture
    """
    kind: str = "flat"
    seed: int = 0
    amplitude: float = 0.0
    max_mode: int = 1
    profile: str = "random"
    epsilon: float = 0.0
    mode: int = 1

    def validate(self) -> None:
        """
        Check parameters that do not depend on the grid.

        Raises:
            RecipeError: unknown kind or profile, negative amplitude,
                ε outside [0, 1), negative modes
        """
        if self.kind not in RECIPE_KINDS:
            raise RecipeError(f"unknown recipe kind {self.kind!r}; expected one of {RECIPE_KINDS}")
        if self.profile not in PROFILES:
            raise RecipeError(f"unknown profile {self.profile!r}; expected one of {PROFILES}")
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise RecipeError(f"amplitude must be finite and ≥ 0, got {self.amplitude}")
        if self.max_mode < 0:
            raise RecipeError(f"max_mode must be ≥ 0, got {self.max_mode}")
        if self.kind == "constant_det_fixture" and not 0.0 <= self.epsilon < 1.0:
            raise RecipeError(f"epsilon must satisfy 0 ≤ ε < 1, got {self.epsilon}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricRecipe":
        known = {f: data[f] for f in cls.__dataclass_fields__ if f in data}
        unknown = set(data) - set(known)
        if unknown:
            raise RecipeError(f"unknown recipe fields: {sorted(unknown)}")
        recipe = cls(**known)
        return cls(
            kind=str(recipe.kind),
            seed=int(recipe.seed),
            amplitude=float(recipe.amplitude),
            max_mode=int(recipe.max_mode),
            profile=str(recipe.profile),
            epsilon=float(recipe.epsilon),
            mode=int(recipe.mode),
        )

    def canonical_json(self) -> str:
        """Sorted-key compact JSON, the fingerprint input."""
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":"))

    def fingerprint(self) -> str:
        """SHA256 hex digest (64 characters) of canonical_json()."""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def with_seed(self, seed: int) -> "MetricRecipe":
        return MetricRecipe(**{**self.to_dict(), "seed": seed})


def recipe_from_json(text: Optional[str]) -> Optional[MetricRecipe]:
    if not text:
        return None
    return MetricRecipe.from_dict(json.loads(text))
