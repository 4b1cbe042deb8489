"""
Deterministic test metrics: flat, conformal, Kähler perturbations, random
pluriclosed and Chern-Ricci-flat fixtures.
"""

from .generators import (
    build_from_recipe,
    conformal_metric,
    constant_det_fixture,
    flat_metric,
    kahler_perturbation,
    max_admissible_scale,
    non_gauduchon_control,
    profile_field,
    project_pluriclosed,
    random_pluriclosed,
)
from .recipes import PROFILES, RECIPE_KINDS, MetricRecipe, RecipeError, recipe_from_json

__all__ = [
    "MetricRecipe",
    "PROFILES",
    "RECIPE_KINDS",
    "RecipeError",
    "build_from_recipe",
    "conformal_metric",
    "constant_det_fixture",
    "flat_metric",
    "kahler_perturbation",
    "max_admissible_scale",
    "non_gauduchon_control",
    "profile_field",
    "project_pluriclosed",
    "random_pluriclosed",
    "recipe_from_json",
]
