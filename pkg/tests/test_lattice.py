"""
Tests for the lattice layer: grids, fields, spectral derivatives,
quadrature, sampling and the finite-difference oracle.
"""

import math

import numpy as np
import pytest

from src.lattice import (
    AxisError,
    GridError,
    GridMismatchError,
    GridSpec,
    LatticeError,
    ScalarField,
    d_antihol,
    d_hol,
    d_real,
    dealias,
    fd_hol,
    fd_oracle,
    flat_laplacian,
    fourier_tail,
    integrate,
    make_grid,
    mean,
    random_bandlimited,
    random_complex_bandlimited,
)
from src.lattice.spectral import max_mode
from src.metricgen import flat_metric


def _sine(grid, axis, mode=1):
    return ScalarField.from_function(
        grid, lambda *x: np.sin(2 * np.pi * mode * x[axis] / grid.L), is_real=True
    )


def _cosine(grid, axis, mode=1):
    return ScalarField.from_function(
        grid, lambda *x: np.cos(2 * np.pi * mode * x[axis] / grid.L), is_real=True
    )


class TestGridSpec:
    """Tests for grid specification validation."""

    @pytest.mark.parametrize("n,N,L", [(3, 16, 1.0), (0, 16, 1.0), (1, 15, 1.0),
                                       (1, 6, 1.0), (2, 16, 0.0), (1, 16, -2.0)])
    def test_rejects_invalid_spec(self, n, N, L):
        """Odd or small N, unsupported n and non-positive periods raise GridError."""
        with pytest.raises(GridError):
            make_grid(GridSpec(n, N, L))

    def test_grid_error_is_lattice_error(self):
        with pytest.raises(LatticeError):
            make_grid(GridSpec(1, 9))

    def test_shape_and_spacing(self):
        """Shape is N per real axis and h = L/N."""
        grid = make_grid(GridSpec(2, 8, 2.0))
        assert grid.shape == (8, 8, 8, 8)
        assert grid.size == 8 ** 4
        assert grid.h == pytest.approx(0.25)
        assert grid.dealias_limit == 2

    def test_spec_dict_round_trip(self):
        spec = GridSpec(2, 16, 1.5)
        assert GridSpec.from_dict(spec.to_dict()) == spec

    def test_grids_compare_by_spec(self):
        assert make_grid(GridSpec(1, 16)) == make_grid(GridSpec(1, 16))
        assert make_grid(GridSpec(1, 16)) != make_grid(GridSpec(1, 32))


class TestScalarField:
    """Tests for ScalarField construction and arithmetic."""

    def test_shape_mismatch_raises(self, grid1):
        with pytest.raises(LatticeError):
            ScalarField(grid1, np.zeros((4, 4)))

    def test_real_flag_rejects_imaginary_part(self, grid1):
        with pytest.raises(LatticeError):
            ScalarField(grid1, np.full(grid1.shape, 1.0 + 0.5j), is_real=True)

    def test_values_are_frozen(self, grid1):
        f = ScalarField.zeros(grid1)
        with pytest.raises(ValueError):
            f.values[0, 0] = 1.0

    def test_arithmetic_tracks_reality(self, grid1):
        f = _sine(grid1, 0)
        assert (f + f).is_real
        assert not (f * 1j).is_real
        assert (2.0 * f - f).is_real

    def test_mixed_grids_raise(self, grid1, grid1_fine):
        with pytest.raises(GridMismatchError):
            ScalarField.zeros(grid1) + ScalarField.zeros(grid1_fine)


class TestSpectralDerivatives:
    """Tests for ∂, ∂̄ and real-axis derivatives."""

    def test_hol_derivative_of_sine_in_x(self, grid1):
        """∂_z sin(2πx) = π cos(2πx)."""
        result = d_hol(_sine(grid1, 0), 1)
        expected = np.pi * _cosine(grid1, 0).values
        assert np.max(np.abs(result.values - expected)) < 1e-12

    def test_derivatives_of_sine_in_y(self, grid1):
        """∂_z sin(2πy) = −iπ cos(2πy) and ∂_z̄ gives the conjugate."""
        f = _sine(grid1, 1)
        cos = _cosine(grid1, 1).values
        assert np.max(np.abs(d_hol(f, 1).values + 1j * np.pi * cos)) < 1e-12
        assert np.max(np.abs(d_antihol(f, 1).values - 1j * np.pi * cos)) < 1e-12

    def test_mixed_derivatives_commute(self, grid2_small):
        f = random_complex_bandlimited(4, 1.0, 2, grid2_small)
        a = d_hol(d_antihol(f, 2), 1).values
        b = d_antihol(d_hol(f, 1), 2).values
        assert np.max(np.abs(a - b)) < 1e-12

    def test_nyquist_mode_has_zero_derivative(self, grid1):
        """The first-derivative symbol vanishes at mode N/2."""
        nyquist = _cosine(grid1, 0, mode=grid1.N // 2)
        assert d_real(nyquist, 0).sup_norm() < 1e-10

    def test_flat_laplacian_eigenvalue(self, grid1):
        """Σ∂∂̄ sin(2πx) = −π² sin(2πx)."""
        f = _sine(grid1, 0)
        result = flat_laplacian(f)
        assert np.max(np.abs(result.values + np.pi ** 2 * f.values)) < 1e-10

    @pytest.mark.parametrize("k", [0, 3])
    def test_axis_out_of_range(self, grid2_small, k):
        with pytest.raises(AxisError):
            d_hol(ScalarField.zeros(grid2_small), k)

    def test_real_axis_out_of_range(self, grid1):
        with pytest.raises(AxisError):
            d_real(ScalarField.zeros(grid1), 2)


class TestDealiasAndResolution:
    """Tests for dealias() and the Fourier-tail resolution figure."""

    def test_dealias_removes_high_modes(self, grid1):
        high = _sine(grid1, 0, mode=grid1.dealias_limit + 1)
        low = _sine(grid1, 1, mode=2)
        result = dealias(high + low)
        assert np.max(np.abs(result.values - low.values)) < 1e-12

    def test_dealias_is_idempotent(self, grid2_small):
        f = random_complex_bandlimited(1, 1.0, 2, grid2_small) + _sine(grid2_small, 2, mode=3)
        once = dealias(f)
        twice = dealias(once)
        assert np.max(np.abs(once.values - twice.values)) < 1e-13

    def test_fourier_tail(self, grid1):
        assert fourier_tail(_sine(grid1, 0, mode=2).values, grid1) < 1e-14
        assert fourier_tail(_sine(grid1, 0, mode=grid1.N // 3 + 1).values, grid1) > 0.99
        assert fourier_tail(np.zeros(grid1.shape), grid1) == 0.0


class TestQuadrature:
    """Tests for ∫ f ωⁿ."""

    @pytest.mark.parametrize("n,expected", [(1, 2.0), (2, 8.0)])
    def test_flat_volume(self, n, expected):
        """Flat unit torus: V = n!·2ⁿ."""
        grid = make_grid(GridSpec(n, 8))
        assert integrate(1.0, flat_metric(grid)).real == pytest.approx(expected, rel=1e-14)

    def test_period_scaling(self):
        grid = make_grid(GridSpec(1, 16, 3.0))
        assert integrate(1.0, flat_metric(grid)).real == pytest.approx(2.0 * 9.0, rel=1e-14)

    def test_mean_of_sine_vanishes(self, grid1):
        assert abs(mean(_sine(grid1, 0), flat_metric(grid1))) < 1e-15

    def test_grid_mismatch(self, grid1, grid1_fine):
        with pytest.raises(GridMismatchError):
            integrate(ScalarField.zeros(grid1), flat_metric(grid1_fine))


class TestSampling:
    """Tests for seeded band-limited random fields."""

    def test_deterministic_in_seed(self, grid1):
        a = random_bandlimited(42, 0.3, 4, grid1)
        b = random_bandlimited(42, 0.3, 4, grid1)
        c = random_bandlimited(43, 0.3, 4, grid1)
        assert np.array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)

    def test_amplitude_and_band(self, grid1):
        f = random_bandlimited(1, 0.25, 3, grid1)
        assert f.is_real
        assert f.sup_norm() == pytest.approx(0.25, rel=1e-12)
        assert max_mode(f) <= 3

    def test_generator_draws_in_sequence(self, grid1):
        rng = np.random.default_rng(9)
        first = random_bandlimited(rng, 1.0, 2, grid1)
        second = random_bandlimited(rng, 1.0, 2, grid1)
        assert not np.array_equal(first.values, second.values)

    def test_zero_amplitude(self, grid1):
        assert random_complex_bandlimited(1, 0.0, 2, grid1).sup_norm() == 0.0

    def test_max_mode_above_dealias_limit(self, grid1):
        with pytest.raises(LatticeError):
            random_bandlimited(1, 1.0, grid1.N // 3 + 1, grid1)

    def test_negative_amplitude(self, grid1):
        with pytest.raises(LatticeError):
            random_bandlimited(1, -1.0, 2, grid1)


class TestFiniteDifferenceOracle:
    """Cross-checks between the spectral and finite-difference paths."""

    def test_first_derivative_agrees(self, grid1):
        f = _sine(grid1, 0)
        fd = fd_oracle(f, 0, 1).values
        spectral = d_real(f, 0).values
        assert np.max(np.abs(fd - spectral)) < 1e-3

    def test_second_derivative_agrees(self, grid1):
        f = _sine(grid1, 1)
        fd = fd_oracle(f, 1, 2).values
        exact = -(2 * np.pi) ** 2 * f.values
        assert np.max(np.abs(fd - exact)) < 2e-3

    def test_fourth_order_convergence(self):
        """Halving h divides the error by about 16."""
        errors = []
        for N in (32, 64):
            grid = make_grid(GridSpec(1, N))
            f = _sine(grid, 0)
            errors.append(np.max(np.abs(fd_oracle(f, 0, 1).values - d_real(f, 0).values)))
        assert math.log2(errors[0] / errors[1]) == pytest.approx(4.0, abs=0.05)

    def test_complex_derivative_agrees(self, grid1_fine):
        f = random_complex_bandlimited(2, 1.0, 2, grid1_fine)
        assert np.max(np.abs(fd_hol(f, 1).values - d_hol(f, 1).values)) < 5e-3

    def test_unsupported_order(self, grid1):
        with pytest.raises(AxisError):
            fd_oracle(ScalarField.zeros(grid1), 0, 3)
