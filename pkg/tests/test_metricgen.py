"""
Tests for metric recipes and generators.
"""

import math

import numpy as np
import pytest

from src.geometry import PositivityError, pluriclosed_residual, torsion
from src.lattice import GridSpec, ScalarField, make_grid, random_bandlimited
from src.metricgen import (
    MetricRecipe,
    RecipeError,
    build_from_recipe,
    conformal_metric,
    constant_det_fixture,
    flat_metric,
    kahler_perturbation,
    max_admissible_scale,
    non_gauduchon_control,
    project_pluriclosed,
    random_pluriclosed,
    recipe_from_json,
)
from src.geometry.metric import identity_components


class TestMetricRecipe:
    """Tests for recipe validation and fingerprints."""

    def test_fingerprint_is_deterministic(self):
        a = MetricRecipe(kind="random_pluriclosed", seed=3, amplitude=0.05)
        b = MetricRecipe(kind="random_pluriclosed", seed=3, amplitude=0.05)
        assert a.fingerprint() == b.fingerprint()
        assert len(a.fingerprint()) == 64

    def test_fingerprint_changes_with_parameters(self):
        base = MetricRecipe(kind="conformal", amplitude=0.1)
        assert base.fingerprint() != base.with_seed(1).fingerprint()
        assert base.fingerprint() != MetricRecipe(kind="conformal", amplitude=0.2).fingerprint()

    def test_canonical_json_sorted(self):
        text = MetricRecipe(kind="flat").canonical_json()
        assert text.startswith('{"amplitude"')
        assert " " not in text

    def test_dict_round_trip(self):
        recipe = MetricRecipe(kind="constant_det_fixture", epsilon=0.25, mode=2)
        assert MetricRecipe.from_dict(recipe.to_dict()) == recipe
        assert recipe_from_json(recipe.canonical_json()) == recipe
        assert recipe_from_json("") is None

    def test_unknown_fields_rejected(self):
        with pytest.raises(RecipeError):
            MetricRecipe.from_dict({"kind": "flat", "colour": "red"})

    @pytest.mark.parametrize("kwargs", [
        {"kind": "spherical"},
        {"kind": "conformal", "profile": "square"},
        {"kind": "conformal", "amplitude": -0.1},
        {"kind": "conformal", "amplitude": math.nan},
        {"kind": "kahler", "max_mode": -1},
        {"kind": "constant_det_fixture", "epsilon": 1.0},
    ])
    def test_invalid_recipes(self, kwargs):
        with pytest.raises(RecipeError):
            MetricRecipe(**kwargs).validate()


class TestGenerators:
    """Tests for the individual generators."""

    def test_flat(self, grid2_small):
        g = flat_metric(grid2_small)
        assert np.array_equal(g.components, identity_components(grid2_small))

    def test_conformal_requires_curve(self, grid2_small):
        with pytest.raises(RecipeError):
            conformal_metric(grid2_small, ScalarField.zeros(grid2_small))

    def test_conformal_requires_real_factor(self, grid1):
        with pytest.raises(RecipeError):
            conformal_metric(grid1, ScalarField(grid1, np.full(grid1.shape, 1j)))

    def test_conformal_components(self, grid1):
        u = random_bandlimited(1, 0.4, 3, grid1)
        g = conformal_metric(grid1, u)
        assert np.allclose(g.components[0, 0].real, np.exp(u.real))

    def test_random_pluriclosed_properties(self, grid2):
        g = random_pluriclosed(grid2, seed=9, amplitude=0.05, max_mode=1)
        perturbation = g.components - identity_components(grid2)
        assert float(np.max(np.abs(perturbation))) == pytest.approx(0.05, rel=1e-12)
        assert pluriclosed_residual(g) < 1e-12
        assert torsion(g).upper.sup_norm() > 1e-4

    def test_random_pluriclosed_deterministic(self, grid2):
        a = random_pluriclosed(grid2, seed=1, amplitude=0.05, max_mode=1)
        b = random_pluriclosed(grid2, seed=1, amplitude=0.05, max_mode=1)
        assert np.array_equal(a.components, b.components)

    def test_random_pluriclosed_requires_surface(self, grid1):
        with pytest.raises(RecipeError):
            random_pluriclosed(grid1, seed=1, amplitude=0.05, max_mode=1)

    def test_zero_amplitude_is_flat(self, grid2_small):
        g = random_pluriclosed(grid2_small, seed=1, amplitude=0.0, max_mode=1)
        assert np.array_equal(g.components, identity_components(grid2_small))

    def test_projection_is_idempotent(self, grid2_small):
        rng = np.random.default_rng(0)
        P = rng.standard_normal((2, 2) + grid2_small.shape) * 0.1
        P = 0.5 * (P + np.swapaxes(P, 0, 1))
        once = project_pluriclosed(P.astype(np.complex128), grid2_small)
        twice = project_pluriclosed(once, grid2_small)
        assert np.max(np.abs(once - twice)) < 1e-13

    def test_constant_det_fixture(self, grid2):
        g = constant_det_fixture(grid2, 0.2, 1)
        assert np.max(np.abs(g.det.real - 0.96)) < 1e-14
        with pytest.raises(RecipeError):
            constant_det_fixture(grid2, 1.2, 1)

    def test_kahler_perturbation_positivity_error(self, grid2_small):
        """A large ψ is refused and the error names the safe scaling."""
        psi = random_bandlimited(2, 5.0, 2, grid2_small)
        with pytest.raises(PositivityError) as exc_info:
            kahler_perturbation(flat_metric(grid2_small), psi)
        safe = exc_info.value.safe_scale
        assert 0.0 < safe < 1.0
        scaled = ScalarField(grid2_small, psi.real * 0.9 * safe, is_real=True)
        assert kahler_perturbation(flat_metric(grid2_small), scaled).min_eigen > 0.0

    def test_max_admissible_scale(self, grid1):
        G0 = identity_components(grid1)
        P = -0.5 * identity_components(grid1)
        assert max_admissible_scale(G0, P) == pytest.approx(2.0)
        assert max_admissible_scale(G0, -P) == math.inf

    def test_non_gauduchon_control(self, pluriclosed2):
        control = non_gauduchon_control(pluriclosed2, 0.02)
        delta = control.components[0, 0] - pluriclosed2.components[0, 0]
        assert float(np.max(np.abs(delta))) == pytest.approx(0.02, rel=1e-12)
        assert pluriclosed_residual(control) > 0.1

    def test_non_gauduchon_control_requires_surface(self, conformal1):
        with pytest.raises(RecipeError):
            non_gauduchon_control(conformal1, 0.01)


class TestBuildFromRecipe:
    """Tests for recipe dispatch."""

    @pytest.mark.parametrize("n,recipe", [
        (1, MetricRecipe(kind="flat")),
        (1, MetricRecipe(kind="conformal", amplitude=0.2, max_mode=2, seed=4)),
        (1, MetricRecipe(kind="conformal", amplitude=0.2, max_mode=1, profile="sine")),
        (2, MetricRecipe(kind="kahler", amplitude=0.005, max_mode=1, seed=2)),
        (2, MetricRecipe(kind="random_pluriclosed", amplitude=0.05, max_mode=1, seed=2)),
        (2, MetricRecipe(kind="constant_det_fixture", epsilon=0.3, mode=1)),
    ])
    def test_every_kind_builds(self, n, recipe):
        grid = make_grid(GridSpec(n, 16))
        g = build_from_recipe(grid, recipe)
        assert g.n == n
        assert g.min_eigen > 0.0

    def test_same_recipe_same_metric(self, grid1):
        recipe = MetricRecipe(kind="conformal", amplitude=0.3, max_mode=3, seed=11)
        a = build_from_recipe(grid1, recipe)
        b = build_from_recipe(grid1, recipe)
        assert np.array_equal(a.components, b.components)

    def test_invalid_recipe_raises(self, grid1):
        with pytest.raises(RecipeError):
            build_from_recipe(grid1, MetricRecipe(kind="nope"))

    def test_kind_incompatible_with_grid(self, grid1):
        with pytest.raises(RecipeError):
            build_from_recipe(grid1, MetricRecipe(kind="random_pluriclosed", amplitude=0.05))
