import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from model import NonFiniteError, PreconditionError, spectral_decompose
from model.catalog import random_signed_laplacian
from entropy import (
    SignedDistribution,
    entropy_derivative,
    evolve_trajectory,
    finite_difference_derivative,
    renyi2_entropy,
    signed_perturbations,
)
from positivity import positivity_time_bound


def _vertex(n: int, k: int = 0) -> SignedDistribution:
    w = np.zeros(n)
    w[k] = 1.0
    return SignedDistribution(w)


@pytest.mark.parametrize("n", [2, 3, 4, 8])
def test_uniform_distribution_has_maximal_entropy(n):
    assert renyi2_entropy(SignedDistribution.uniform(n)) == pytest.approx(math.log2(n))


def test_vertex_has_zero_entropy():
    assert renyi2_entropy(_vertex(4)) == 0.0


def test_signed_distribution_entropy():
    p = SignedDistribution(np.array([1.5, -0.5]))
    assert renyi2_entropy(p) == pytest.approx(-math.log2(2.5))


def test_from_weights_checks_the_sum(tol):
    assert SignedDistribution.from_weights([0.5, 0.7, -0.2], tol).n == 3
    with pytest.raises(PreconditionError):
        SignedDistribution.from_weights([0.5, 0.6], tol)


@pytest.mark.parametrize(
    "weights, error",
    [
        (np.zeros(3), PreconditionError),
        (np.ones((2, 2)), PreconditionError),
        (np.array([np.nan, 1.0]), NonFiniteError),
    ],
)
def test_invalid_distributions(weights, error):
    with pytest.raises(error):
        SignedDistribution(weights)


@seed(2)
@settings(max_examples=30, deadline=None)
@given(
    generator_seed=st.integers(min_value=0, max_value=10_000),
    n=st.integers(min_value=3, max_value=8),
    spread=st.floats(min_value=0.0, max_value=0.8),
)
def test_analytic_derivative_matches_finite_difference(generator_seed, n, spread):
    m = random_signed_laplacian(n, generator_seed)
    rng = np.random.default_rng(generator_seed)
    r = rng.standard_normal(n)
    p = SignedDistribution(np.full(n, 1.0 / n) + spread * (r - r.mean()))
    assert entropy_derivative(m, p) == pytest.approx(finite_difference_derivative(m, p, 1e-5), abs=1e-6)


def test_entropy_rises_along_four_state_trajectory(four_state, tol):
    trajectory = evolve_trajectory(four_state, _vertex(4), np.linspace(0.0, 3.0, 121), tol)
    assert trajectory.min_entropy_increment >= -1e-9
    assert all(d >= -1e-9 for d in trajectory.derivatives)
    assert trajectory.entropies[0] == 0.0
    assert trajectory.entropies[-1] == pytest.approx(2.0, abs=1e-3)


@pytest.mark.parametrize("seed_value", range(10))
def test_second_law_on_admissible_initial_states(seed_value, tol):
    n = 3 + seed_value % 6
    m = random_signed_laplacian(n, seed_value)
    for p0 in signed_perturbations(n, seed=seed_value):
        trajectory = evolve_trajectory(m, p0, np.linspace(0.0, 2.0, 41), tol)
        assert trajectory.min_entropy_increment >= -1e-9
        assert entropy_derivative(m, p0) >= -1e-12


def test_uniform_state_is_stationary(four_state, tol):
    trajectory = evolve_trajectory(four_state, SignedDistribution.uniform(4), np.linspace(0.0, 2.0, 21), tol)
    np.testing.assert_allclose(trajectory.entropies, np.full(21, 2.0), atol=1e-12)


def test_rotation_preserves_entropy(rotation, tol):
    trajectory = evolve_trajectory(rotation, _vertex(3), np.linspace(0.0, 10.0, 101), tol)
    np.testing.assert_allclose(trajectory.entropies, np.zeros(101), atol=1e-9)
    np.testing.assert_allclose(trajectory.derivatives, np.zeros(101), atol=1e-12)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_entropy_approaches_log_n(n, tol):
    m = random_signed_laplacian(n, seed=n)
    bound = positivity_time_bound(spectral_decompose(m, tol), tol)
    trajectory = evolve_trajectory(m, _vertex(n), [0.0, 10.0 * bound], tol)
    assert trajectory.entropies[-1] == pytest.approx(math.log2(n), abs=1e-6)


def test_trajectory_rows_for_csv(four_state, tol):
    rows = evolve_trajectory(four_state, _vertex(4), [0.0, 0.5], tol).rows()
    assert list(rows[0]) == ["t", "H2_bits", "dH2_dt"]
    assert len(rows) == 2


def test_single_time_trajectory(four_state, tol):
    assert evolve_trajectory(four_state, _vertex(4), [0.3], tol).min_entropy_increment == 0.0


@pytest.mark.parametrize("times", [[], [0.5, 0.2], [-0.1, 0.3], [0.1, 0.1]])
def test_trajectory_rejects_bad_times(four_state, tol, times):
    with pytest.raises(PreconditionError):
        evolve_trajectory(four_state, _vertex(4), times, tol)


def test_trajectory_rejects_dimension_mismatch(four_state, tol):
    with pytest.raises(PreconditionError):
        evolve_trajectory(four_state, _vertex(3), [0.0, 1.0], tol)


def test_signed_perturbations_are_admissible():
    states = signed_perturbations(5, scale=0.5, seed=1, per_vertex=2)
    assert len(states) == 15
    for p in states:
        assert p.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert any(np.any(p.weights < 0) for p in states)
