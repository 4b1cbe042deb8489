"""
Tests for the background, the energy functionals and the flow velocity.
"""

import numpy as np
import pytest

from src.functionals import (
    FunctionalError,
    background_residuals,
    coupled_residual,
    energies,
    entropy,
    entropy_mabuchi_gap,
    evaluate_velocity,
    flow_velocity,
    mabuchi,
    mabuchi_difference,
    mabuchi_lower_bound,
    mean_velocity,
    perturbed_metric,
    ricci_potential,
    scalar_curvature_from_potential,
    volume,
)
from src.geometry import chern_scalar
from src.lattice import ScalarField, integrate, random_bandlimited
from src.metricgen import constant_det_fixture, flat_metric


@pytest.fixture
def bg_conformal(conformal1):
    return ricci_potential(conformal1)


@pytest.fixture
def bg_pluriclosed(pluriclosed2_smooth):
    return ricci_potential(pluriclosed2_smooth)


def _small_potential(grid, seed=1, amplitude=0.002, max_mode=1):
    return random_bandlimited(seed, amplitude, max_mode, grid)


class TestBackground:
    """Tests for ricci_potential and its invariants."""

    def test_flat_background(self, grid1):
        bg = ricci_potential(flat_metric(grid1))
        assert bg.volume == pytest.approx(2.0, rel=1e-14)
        assert bg.F.sup_norm() < 1e-14
        assert bg.log_omega_density.sup_norm() < 1e-14

    def test_residuals_vanish(self, bg_conformal, bg_pluriclosed):
        """
        Ric(ω0) comes from the chain rule and i∂∂̄F from the spectral Hessian
        of log det, so "ricci" is bounded by the aliasing of log det.
        """
        for bg in (bg_conformal, bg_pluriclosed):
            residuals = background_residuals(bg)
            assert residuals["normalization"] < 1e-12
            assert residuals["ricci"] < 1e-8
            assert residuals["log_omega_hessian"] < 1e-12

    def test_omega_density_is_constant(self, bg_pluriclosed):
        density = bg_pluriclosed.omega_density.real
        assert np.max(density) - np.min(density) == 0.0

    def test_ricci_flat_fixture_has_constant_potential(self, grid2):
        bg = ricci_potential(constant_det_fixture(grid2, 0.3, 1))
        F = bg.F.real
        assert np.max(F) - np.min(F) < 1e-14


class TestEnergies:
    """Tests for Mabuchi energy, entropy and volume."""

    def test_zero_at_background(self, bg_pluriclosed):
        zero = ScalarField.zeros(bg_pluriclosed.grid)
        assert abs(mabuchi(bg_pluriclosed, zero)) < 1e-13
        assert abs(entropy(bg_pluriclosed, zero)) < 1e-13

    def test_volume_of_flat_surface(self, grid2_small):
        assert volume(flat_metric(grid2_small)) == pytest.approx(8.0, rel=1e-14)

    def test_entropy_is_non_negative(self, bg_conformal):
        phi = _small_potential(bg_conformal.grid, amplitude=0.001, max_mode=3)
        assert entropy(bg_conformal, phi) >= -1e-14

    def test_mabuchi_above_lower_bound(self, bg_conformal):
        phi = _small_potential(bg_conformal.grid, amplitude=0.001, max_mode=3)
        assert mabuchi(bg_conformal, phi) >= mabuchi_lower_bound(bg_conformal)

    def test_entropy_mabuchi_gap_vanishes(self, bg_pluriclosed):
        phi = _small_potential(bg_pluriclosed.grid)
        assert abs(entropy_mabuchi_gap(bg_pluriclosed, phi)) < 1e-12

    def test_energies_bundle(self, bg_conformal):
        phi = _small_potential(bg_conformal.grid)
        g_phi = perturbed_metric(bg_conformal, phi)
        values = energies(bg_conformal, g_phi)
        assert values.mabuchi == pytest.approx(mabuchi(bg_conformal, phi), abs=1e-15)
        assert values.volume == pytest.approx(bg_conformal.volume, rel=1e-12)

    @pytest.mark.parametrize("which", ["conformal", "pluriclosed"])
    def test_mabuchi_difference_matches_subtraction(self, which, bg_conformal, bg_pluriclosed):
        bg = bg_conformal if which == "conformal" else bg_pluriclosed
        phi_a = _small_potential(bg.grid, seed=1)
        phi_b = _small_potential(bg.grid, seed=2)
        g_a, g_b = perturbed_metric(bg, phi_a), perturbed_metric(bg, phi_b)
        expected = mabuchi(bg, phi_b) - mabuchi(bg, phi_a)
        assert mabuchi_difference(bg, g_a, g_b) == pytest.approx(expected, abs=1e-13)

    def test_mabuchi_difference_of_equal_metrics(self, bg_pluriclosed):
        g = perturbed_metric(bg_pluriclosed, _small_potential(bg_pluriclosed.grid))
        assert mabuchi_difference(bg_pluriclosed, g, g) == 0.0

    def test_non_positive_potential_raises(self, bg_conformal):
        phi = random_bandlimited(4, 1.0, 5, bg_conformal.grid)
        with pytest.raises(FunctionalError):
            perturbed_metric(bg_conformal, phi)


class TestVelocity:
    """Tests for the flow velocity and the second curvature pipeline."""

    def test_velocity_equals_scalar_curvature_without_torsion(self, bg_conformal):
        phi = _small_potential(bg_conformal.grid, max_mode=3)
        terms = evaluate_velocity(bg_conformal, phi)
        assert terms.torsion_term.sup_norm() < 1e-14
        assert np.max(np.abs(terms.velocity.real - chern_scalar(terms.metric).real)) < 1e-14

    def test_torsion_term_present_on_pluriclosed(self, bg_pluriclosed):
        phi = _small_potential(bg_pluriclosed.grid)
        terms = evaluate_velocity(bg_pluriclosed, phi)
        assert terms.velocity.is_real
        assert terms.torsion_term.sup_norm() > 0.0

    def test_flow_velocity_is_real(self, bg_pluriclosed):
        phi = _small_potential(bg_pluriclosed.grid)
        assert flow_velocity(bg_pluriclosed, phi).is_real

    def test_mean_velocity_vanishes_on_a_curve(self, bg_conformal):
        phi = _small_potential(bg_conformal.grid, max_mode=3)
        terms = evaluate_velocity(bg_conformal, phi)
        assert abs(mean_velocity(bg_conformal, terms)) < 1e-11

    def test_coupled_residual_is_small(self, bg_pluriclosed, bg_conformal):
        assert coupled_residual(bg_pluriclosed, _small_potential(bg_pluriclosed.grid)) < 1e-8
        assert coupled_residual(bg_conformal, _small_potential(bg_conformal.grid)) < 1e-10

    def test_coupled_residual_at_background(self, bg_pluriclosed):
        assert coupled_residual(bg_pluriclosed, ScalarField.zeros(bg_pluriclosed.grid)) < 1e-9

    def test_two_scalar_curvature_pipelines_agree(self, bg_pluriclosed):
        phi = _small_potential(bg_pluriclosed.grid)
        direct = chern_scalar(perturbed_metric(bg_pluriclosed, phi)).real
        via_potential = scalar_curvature_from_potential(bg_pluriclosed, phi).real
        assert np.max(np.abs(direct - via_potential)) < 1e-8

    def test_log_ratio_recovers_volume_form(self, bg_conformal):
        """∫e^{−w}ω_φⁿ = ∫Ω = V (w = log ω_φⁿ/Ω)."""
        phi = _small_potential(bg_conformal.grid, max_mode=3)
        terms = evaluate_velocity(bg_conformal, phi)
        e_minus_w = ScalarField(bg_conformal.grid, np.exp(-terms.log_ratio.real), is_real=True)
        total = integrate(e_minus_w, terms.metric).real
        assert total == pytest.approx(bg_conformal.volume, rel=1e-12)
