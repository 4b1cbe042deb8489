"""
Property-based tests of the discrete calculus with Hypothesis.

Summation by parts, commuting mixed derivatives and the reality of the
flat Laplacian hold on the grid for every band-limited field, not only for
hand-picked ones.
"""

import numpy as np
from hypothesis import given, settings, strategies as st

from src.lattice import (
    GridSpec,
    d_antihol,
    d_hol,
    dealias,
    flat_laplacian,
    integrate,
    make_grid,
    random_bandlimited,
    random_complex_bandlimited,
)
from src.metricgen import flat_metric

GRID1 = make_grid(GridSpec(1, 16))
GRID2 = make_grid(GridSpec(2, 8))
FLAT1 = flat_metric(GRID1)

seeds = st.integers(min_value=0, max_value=2 ** 31 - 1)
amplitudes = st.floats(min_value=1e-3, max_value=10.0, allow_nan=False, allow_infinity=False)


@given(seed=seeds, amplitude=amplitudes, mode=st.integers(min_value=0, max_value=5))
@settings(max_examples=40, deadline=None)
def test_summation_by_parts(seed, amplitude, mode):
    """Property: ∫(∂f)·g = −∫f·(∂g) on the flat torus."""
    f = random_complex_bandlimited(seed, amplitude, mode, GRID1)
    g = random_complex_bandlimited(seed + 1, 1.0, 5, GRID1)
    lhs = integrate(d_hol(f, 1) * g, FLAT1)
    rhs = -integrate(f * d_hol(g, 1), FLAT1)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, amplitude)


@given(seed=seeds, amplitude=amplitudes)
@settings(max_examples=20, deadline=None)
def test_mixed_derivatives_commute(seed, amplitude):
    """Property: ∂_1∂̄_2 f = ∂̄_2∂_1 f for every sampled field."""
    f = random_complex_bandlimited(seed, amplitude, 2, GRID2)
    a = d_hol(d_antihol(f, 2), 1).values
    b = d_antihol(d_hol(f, 1), 2).values
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, amplitude)


@given(seed=seeds, amplitude=amplitudes)
@settings(max_examples=30, deadline=None)
def test_laplacian_of_real_field_is_real(seed, amplitude):
    """Property: Σ∂∂̄ keeps real fields real and integrates to zero."""
    f = random_bandlimited(seed, amplitude, 4, GRID1)
    lap = flat_laplacian(f)
    assert lap.is_real
    assert abs(integrate(lap, FLAT1)) <= 1e-10 * max(1.0, amplitude)


@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_dealias_is_a_projection(seed):
    """Property: dealias(dealias(f)) = dealias(f) and band-limited fields pass through."""
    f = random_complex_bandlimited(seed, 1.0, 2, GRID2)
    assert np.max(np.abs(dealias(f).values - f.values)) < 1e-12
    once = dealias(f * f * f)
    assert np.max(np.abs(dealias(once).values - once.values)) < 1e-12


@given(seed=seeds, amplitude=amplitudes, mode=st.integers(min_value=0, max_value=5))
@settings(max_examples=20, deadline=None)
def test_sampling_is_deterministic_and_scaled(seed, amplitude, mode):
    """Property: one seed gives one field, with sup-norm equal to the amplitude."""
    a = random_bandlimited(seed, amplitude, mode, GRID1)
    b = random_bandlimited(seed, amplitude, mode, GRID1)
    assert np.array_equal(a.values, b.values)
    assert a.is_real
    if mode > 0:
        assert abs(a.sup_norm() - amplitude) <= 1e-12 * amplitude


@given(seed=seeds, axis=st.integers(min_value=1, max_value=2))
@settings(max_examples=20, deadline=None)
def test_conjugation_swaps_derivatives(seed, axis):
    """Property: conj(∂_k f) = ∂̄_k conj(f)."""
    f = random_complex_bandlimited(seed, 1.0, 2, GRID2)
    lhs = d_hol(f, axis).conj().values
    rhs = d_antihol(f.conj(), axis).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12
