import math

import numpy as np
import pytest

from model import DegenerateGapError, GeneratorMatrix, PreconditionError, spectral_decompose
from model.catalog import (
    flipped_four_state_laplacian,
    random_corank1_symmetric,
    random_signed_laplacian,
    rotation_generator,
)
from positivity import (
    PfVerdict,
    TauVerdict,
    estimate_tau,
    positivity_time_bound,
    spectral_pf_test,
    psd_equivalence_oracle,
    psd_equivalence_sides,
)
from positivity.perron import default_horizon, shifted_min_entry
from positivity.tau import bisect_bracket
from propagator import classify_signs, matrix_exponential

TWO_EDGES = -np.array([
    [1.0, -1.0, 0.0, 0.0],
    [-1.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, -1.0],
    [0.0, 0.0, -1.0, 1.0],
])


def test_positivity_time_bound_for_four_state(four_state, tol):
    assert positivity_time_bound(spectral_decompose(four_state, tol), tol) == pytest.approx(math.log(3.0) / 2.0)


def test_forward_is_positive_past_the_bound(four_state, tol):
    bound = positivity_time_bound(spectral_decompose(four_state, tol), tol)
    for t in np.linspace(bound * 1.001, 5.0 * bound, 20):
        assert classify_signs(matrix_exponential(four_state, float(t), tol), tol).strictly_positive


def test_bound_requires_corank_one(tol):
    with pytest.raises(PreconditionError):
        positivity_time_bound(spectral_decompose(GeneratorMatrix.from_array(TWO_EDGES), tol), tol)


def test_bound_requires_spectral_gap(tol):
    flipped = GeneratorMatrix.from_array(-flipped_four_state_laplacian().entries)
    with pytest.raises(DegenerateGapError):
        positivity_time_bound(spectral_decompose(flipped, tol), tol)


def test_tau_for_four_state(four_state, tol):
    estimate = estimate_tau(four_state, 512, 1e-4, tol)
    assert estimate.verdict is TauVerdict.FINITE
    assert 0.165 <= estimate.tau_lo < estimate.tau_hi <= 0.175
    assert estimate.tau_hi - estimate.tau_lo <= 1e-4
    assert estimate.bound_is_analytic
    assert estimate.certified_bound == pytest.approx(math.log(3.0) / 2.0)
    assert estimate.certificate_samples >= 64
    assert classify_signs(matrix_exponential(four_state, estimate.tau_hi, tol), tol).strictly_positive
    assert not classify_signs(matrix_exponential(four_state, estimate.tau_lo, tol), tol).strictly_positive


def test_tau_bracket_respects_width(four_state, tol):
    estimate = estimate_tau(four_state, 64, 1e-3, tol)
    assert estimate.tau_hi - estimate.tau_lo <= 1e-3
    assert 0.160 <= estimate.tau_lo and estimate.tau_hi <= 0.180


def test_tau_for_classical_cycle(cycle3, tol):
    estimate = estimate_tau(cycle3, 512, 1e-4, tol)
    assert estimate.verdict is TauVerdict.FINITE
    assert estimate.tau_lo == 0.0
    assert estimate.tau_hi <= 1e-4


def test_tau_for_rotation(rotation, tol):
    estimate = estimate_tau(rotation, 128, 1e-4, tol)
    assert estimate.verdict is TauVerdict.NOT_EVENTUALLY_POSITIVE
    assert estimate.pf_verdict is PfVerdict.CERTIFIED_NOT
    assert estimate.tau_lo is None and estimate.tau_hi is None


def test_tau_for_asymmetric_eventually_positive_generator(cycle3, tol):
    m = GeneratorMatrix.from_array(cycle3.entries + 0.1 * rotation_generator().entries)
    estimate = estimate_tau(m, 128, 1e-4, tol)
    assert estimate.verdict is TauVerdict.FINITE
    assert not estimate.bound_is_analytic
    assert estimate.pf_verdict is PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE
    assert estimate.tau_hi <= 1e-4
    assert estimate.certified_bound > estimate.horizon


@pytest.mark.parametrize("seed_value", range(12))
def test_tau_on_random_signed_laplacians(seed_value, tol):
    n = 3 + seed_value % 6
    m = random_signed_laplacian(n, seed_value)
    t_star = positivity_time_bound(spectral_decompose(m, tol), tol)
    estimate = estimate_tau(m, 256, 1e-4, tol)
    assert estimate.verdict is TauVerdict.FINITE
    assert estimate.certified_bound >= t_star
    for t in np.linspace(estimate.tau_hi, 2.0 * t_star, 20):
        assert classify_signs(matrix_exponential(m, float(t), tol), tol).strictly_positive
    # Ни одной скобки смены знака правее найденной.
    assert all(lo <= estimate.tau_lo for lo, _ in estimate.crossings)
    for t in np.linspace(estimate.tau_hi, t_star, 200):
        assert classify_signs(matrix_exponential(m, float(t), tol), tol).strictly_positive


def test_tau_for_two_states_reports_zero_bound(tol):
    m = GeneratorMatrix.from_array([[-1.0, 1.0], [1.0, -1.0]])
    estimate = estimate_tau(m, 64, 1e-4, tol)
    assert estimate.verdict is TauVerdict.FINITE
    assert estimate.bound_is_analytic
    assert estimate.certified_bound == 0.0
    assert estimate.horizon == pytest.approx(1e-4)
    assert estimate.tau_lo == 0.0
    assert estimate.tau_hi <= 1e-4


@pytest.mark.parametrize("grid_points, width", [(8, 1e-4), (64, 0.0), (64, -1.0)])
def test_tau_rejects_bad_arguments(four_state, tol, grid_points, width):
    with pytest.raises(PreconditionError):
        estimate_tau(four_state, grid_points, width, tol)


def test_tau_report_serializes(four_state, tol):
    payload = estimate_tau(four_state, 64, 1e-3, tol).as_dict()
    assert payload["verdict"] == "Finite"
    assert payload["pf_verdict"] is None
    assert isinstance(payload["crossings"], list)


def test_bisect_bracket():
    lo, hi = bisect_bracket(lambda t: t > 0.3, 0.0, 1.0, 1e-6)
    assert hi - lo <= 1e-6
    assert lo <= 0.3 < hi


@pytest.mark.parametrize(
    "matrix, verdict",
    [
        ([[1.0, 2.0], [3.0, 1.0]], PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE),
        ([[0.0, 1.0], [1.0, 0.0]], PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE),
        ([[0.0, -1.0], [-1.0, 0.0]], PfVerdict.CERTIFIED_NOT),
        ([[1.0, 0.0], [0.0, -1.0]], PfVerdict.INCONCLUSIVE),
        ([[0.0, 0.0], [0.0, 0.0]], PfVerdict.INCONCLUSIVE),
    ],
)
def test_spectral_pf_test(matrix, verdict, tol):
    assert spectral_pf_test(GeneratorMatrix.from_array(matrix), tol) is verdict


def test_spectral_pf_test_on_examples(four_state, rotation, tol):
    assert spectral_pf_test(four_state, tol) is PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE
    assert spectral_pf_test(rotation, tol) is PfVerdict.CERTIFIED_NOT


def test_spectral_pf_test_on_rank_one_minus_identity(tol):
    n = 4
    m = GeneratorMatrix.from_array(np.ones((n, n)) / n - np.eye(n))
    assert spectral_pf_test(m, tol) is PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE


def test_shifted_exponential_keeps_signs(four_state):
    for t in (0.05, 0.2, 1.0):
        direct = float(np.min(matrix_exponential(four_state, t)))
        shifted = shifted_min_entry(four_state.entries, t, -8.0)
        assert np.sign(direct) == np.sign(shifted)


def test_default_horizon():
    assert default_horizon(np.array([0.0, -2.0, -4.0]), 1e-9) == pytest.approx(25.0)
    assert default_horizon(np.zeros(3), 1e-9) == 100.0


def test_psd_equivalence_on_examples(four_state, tol):
    laplacian = GeneratorMatrix.from_array(-four_state.entries)
    assert psd_equivalence_sides(laplacian, tol) == (True, True)
    assert psd_equivalence_sides(flipped_four_state_laplacian(), tol) == (False, False)


@pytest.mark.parametrize("seed_value", range(30))
def test_psd_equivalence_on_random_matrices(seed_value, tol):
    n = 3 + seed_value % 6
    negative_modes = min(seed_value % 3, n - 1)
    laplacian = random_corank1_symmetric(n, seed_value, negative_modes=negative_modes)
    side_a, side_b = psd_equivalence_sides(laplacian, tol)
    assert side_a == (negative_modes == 0)
    assert side_a == side_b
    assert psd_equivalence_oracle(laplacian, tol)


def test_psd_equivalence_requires_corank_one(tol):
    with pytest.raises(PreconditionError):
        psd_equivalence_sides(GeneratorMatrix.from_array(-TWO_EDGES), tol)
