"""
Набор воспроизводимых проверок для четырёхуровневого генератора, вращения,
классического цикла и случайных знаковых лапласианов.

Каждая проверка возвращает ReproCheck; run_repro() выполняет все и
логирует итог. Числа и допуски берутся из критериев приёмки.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np
from loguru import logger

from config import Config
from entropy import SignedDistribution, evolve_trajectory, entropy_derivative, finite_difference_derivative
from experiment import VerdictKind, aot_verdict, default_basis, fit_propagators, run_aot_protocol, simulate_experiment
from model import AotError, spectral_decompose, validate_generator
from model.catalog import (
    FOUR_STATE_SPECTRUM,
    cycle_laplacian,
    four_state_generator,
    rotation_generator,
    random_corank1_symmetric,
    random_signed_laplacian,
)
from positivity import TauVerdict, estimate_tau, psd_equivalence_oracle
from propagator import (
    classify_signs,
    diagonal_dominance_check,
    extrema_row,
    is_cyclic_permutation,
    matrix_exponential,
    permutation_times,
    propagator_pair,
    rotation_closed_form,
    rows_with_negative_entry,
)
from propagator.extrema import DISPLAY_DECIMALS

# (t, min F, max F, min B, max B, вердикт) после округления до 3 знаков.
EXTREMA_EXPECTED: Tuple[Tuple[float, float, float, float, float, str], ...] = (
    (0.05, -0.010, 0.895, -0.123, 1.369, "inconclusive"),
    (0.20, 0.007, 0.677, -0.988, 3.965, "conclusive"),
)
TAU_RANGE: Tuple[float, float] = (0.160, 0.180)
TAU_MAX_WIDTH = 1e-3
SPECTRUM_ATOL = 1e-9
ROTATION_ATOL = 1e-10
PERMUTATION_ATOL = 1e-9
ROTATION_GRID_POINTS = 50
PROPERTY_GENERATORS = 100
PROPERTY_TIMES = tuple(float(t) for t in np.linspace(0.05, 2.0, 10))
ORACLE_MATRICES = 100
FD_ATOL = 1e-6
ENTROPY_ATOL = 1e-9
CLASSICAL_TIMES = (1e-4, 1e-3, 1e-2, 1.0)
CLASSICAL_TAU_MAX = 1e-3
FIT_ATOL = 1e-9
FIT_DELTAS = (0.05, 0.1, 0.5)
FIT_TIMES = {"four_state": (0.05, 0.20, 1.0), "rotation": (0.5, 2.0 * math.pi / (3.0 * math.sqrt(3.0)), 2.0)}


@dataclass
class ReproCheck:
    name: str
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


# ------------------------------------------------------------------
# Four-state generator
# ------------------------------------------------------------------

def check_extrema_table(config: Config) -> ReproCheck:
    tol = config.tolerances
    m = four_state_generator()
    spectral = spectral_decompose(m, tol)
    rows, mismatches = [], []
    for t, *expected in EXTREMA_EXPECTED:
        row = extrema_row(m, t, tol, spectral)
        shown = row.rounded(DISPLAY_DECIMALS)
        got = [shown["min_F"], shown["max_F"], shown["min_B"], shown["max_B"], shown["verdict"]]
        rows.append(shown)
        for key, value, want in zip(("min_F", "max_F", "min_B", "max_B", "verdict"), got, expected):
            if value == want:
                continue
            mismatches.append({"t": t, "column": key, "got": value, "expected": want})
            if isinstance(want, float) and abs(value - want) <= 10 ** -DISPLAY_DECIMALS:
                logger.warning("Таблица экстремумов, t = {}: {} = {} вместо {} (последний знак)", t, key, value, want)
    return ReproCheck("extrema", not mismatches, {"rows": rows, "mismatches": mismatches})


def check_crossover(config: Config) -> ReproCheck:
    estimate = estimate_tau(
        four_state_generator(), config.grid_points, config.width, config.tolerances,
        config.horizon, config.certify_samples,
    )
    lo, hi = TAU_RANGE
    passed = (
        estimate.verdict is TauVerdict.FINITE
        and lo <= estimate.tau_lo < estimate.tau_hi <= hi
        and estimate.tau_hi - estimate.tau_lo <= TAU_MAX_WIDTH
    )
    return ReproCheck("crossover", passed, estimate.as_dict())


def check_spectrum(config: Config) -> ReproCheck:
    report = validate_generator(four_state_generator(), config.tolerances)
    got = sorted(report.spectrum, reverse=True)
    error = max(abs(a - b) for a, b in zip(got, FOUR_STATE_SPECTRUM))
    return ReproCheck(
        "spectrum",
        report.is_signed_laplacian and error <= SPECTRUM_ATOL,
        {"spectrum": got, "max_error": error, "is_signed_laplacian": report.is_signed_laplacian},
    )


# ------------------------------------------------------------------
# Rotation generator
# ------------------------------------------------------------------

def check_rotation(config: Config) -> ReproCheck:
    tol = config.tolerances
    m = rotation_generator()
    times = np.linspace(0.0, 4.0 * math.pi / math.sqrt(3.0), ROTATION_GRID_POINTS + 1)[1:]

    closed_form_error = max(
        float(np.max(np.abs(matrix_exponential(m, float(t), tol) - rotation_closed_form(float(t)))))
        for t in times
    )
    t1 = permutation_times(1)[0]
    _, backward = propagator_pair(m, t1, tol)
    permutation = is_cyclic_permutation(backward.matrix, PERMUTATION_ATOL)
    tau = estimate_tau(m, config.grid_points, config.width, tol, config.horizon, config.certify_samples)

    basis = default_basis(m.n, config.delta, tol)
    forward_conclusive = [
        float(t) for t in times
        if aot_verdict(fit_propagators(basis, simulate_experiment(m, basis, float(t))), tol, float(t)).kind
        is VerdictKind.FORWARD_CONCLUSIVE
    ]
    passed = (
        closed_form_error <= ROTATION_ATOL
        and permutation
        and tau.verdict is TauVerdict.NOT_EVENTUALLY_POSITIVE
        and not forward_conclusive
    )
    return ReproCheck("rotation", passed, {
        "closed_form_error": closed_form_error,
        "backward_is_permutation": permutation,
        "tau_verdict": tau.verdict.value,
        "forward_conclusive_times": forward_conclusive,
    })


# ------------------------------------------------------------------
# Random generators
# ------------------------------------------------------------------

def check_reliability(config: Config) -> ReproCheck:
    """Знаки F и B, строки и диагональ B, вердикт протокола на случайных генераторах."""
    tol = config.tolerances
    violations: List[dict] = []
    for seed in range(PROPERTY_GENERATORS):
        n = 3 + seed % 6
        m = random_signed_laplacian(n, seed)
        spectral = spectral_decompose(m, tol)
        for t in PROPERTY_TIMES:
            forward, backward = propagator_pair(m, t, tol, spectral)
            f_class = classify_signs(forward.matrix, tol)
            b_class = classify_signs(backward.matrix, tol)
            failed = []
            if f_class.strictly_positive and not b_class.has_negative:
                failed.append("forward_positive_backward_nonnegative")
            if not np.all(rows_with_negative_entry(backward.matrix, tol)):
                failed.append("row_without_negative")
            if not diagonal_dominance_check(backward, spectral, tol):
                failed.append("diagonal_not_above_one")
            verdict = run_aot_protocol(m, t, config, with_tau=False).verdict
            if verdict.kind is VerdictKind.ANOMALOUS_BACKWARD_POSITIVE:
                failed.append("anomalous_verdict")
            if failed:
                violations.append({"seed": seed, "n": n, "t": t, "failed": failed})
    return ReproCheck("reliability", not violations, {
        "generators": PROPERTY_GENERATORS,
        "times": len(PROPERTY_TIMES),
        "violations": violations,
    })


def check_psd_oracle(config: Config) -> ReproCheck:
    disagreements = []
    for seed in range(ORACLE_MATRICES):
        n = 3 + seed % 6
        negative_modes = min(seed % 3, n - 1)
        laplacian = random_corank1_symmetric(n, seed, negative_modes=negative_modes)
        if not psd_equivalence_oracle(laplacian, config.tolerances):
            disagreements.append({"seed": seed, "n": n, "negative_modes": negative_modes})
    return ReproCheck("psd_oracle", not disagreements, {"matrices": ORACLE_MATRICES, "disagreements": disagreements})


def check_second_law(config: Config) -> ReproCheck:
    tol = config.tolerances
    fd_error = 0.0
    worst_increment = 0.0
    for seed in range(12):
        n = 3 + seed % 6
        m = random_signed_laplacian(n, seed)
        rng = np.random.default_rng(seed)
        r = rng.standard_normal(n)
        p = SignedDistribution(np.full(n, 1.0 / n) + 0.3 * (r - r.mean()))
        fd_error = max(fd_error, abs(entropy_derivative(m, p) - finite_difference_derivative(m, p, config.fd_step, tol)))

        vertex = np.zeros(n)
        vertex[0] = 1.0
        trajectory = evolve_trajectory(m, SignedDistribution(vertex), np.linspace(0.0, 3.0, 61), tol)
        worst_increment = min(worst_increment, trajectory.min_entropy_increment)

    rotation = evolve_trajectory(
        rotation_generator(), SignedDistribution(np.array([1.0, 0.0, 0.0])), np.linspace(0.0, 10.0, 101), tol
    )
    rotation_drift = float(np.max(np.abs(np.asarray(rotation.entropies) - rotation.entropies[0])))
    passed = fd_error <= FD_ATOL and worst_increment >= -ENTROPY_ATOL and rotation_drift <= ENTROPY_ATOL
    return ReproCheck("second_law", passed, {
        "fd_max_error": fd_error,
        "min_entropy_increment": worst_increment,
        "rotation_entropy_drift": rotation_drift,
    })


# ------------------------------------------------------------------
# Classical baseline and fits
# ------------------------------------------------------------------

def check_classical(config: Config) -> ReproCheck:
    tol = config.tolerances
    m = cycle_laplacian(3)
    positive = {t: classify_signs(matrix_exponential(m, t, tol), tol).strictly_positive for t in CLASSICAL_TIMES}
    tau = estimate_tau(m, config.grid_points, config.width, tol, config.horizon, config.certify_samples)
    passed = all(positive.values()) and tau.tau_hi is not None and tau.tau_hi <= CLASSICAL_TAU_MAX
    return ReproCheck("classical", passed, {
        "strictly_positive": {repr(t): v for t, v in positive.items()},
        "tau_hi": tau.tau_hi,
    })


def check_fit(config: Config) -> ReproCheck:
    tol = config.tolerances
    generators = {"four_state": four_state_generator(), "rotation": rotation_generator()}
    worst = 0.0
    for name, m in generators.items():
        for delta in FIT_DELTAS:
            basis = default_basis(m.n, delta, tol)
            for t in FIT_TIMES[name]:
                fit = fit_propagators(basis, simulate_experiment(m, basis, t))
                worst = max(worst, float(np.max(np.abs(fit.f_hat - matrix_exponential(m, t, tol)))))
    return ReproCheck("fit", worst <= FIT_ATOL, {"max_error": worst})


CHECKS: Tuple[Callable[[Config], ReproCheck], ...] = (
    check_extrema_table,
    check_crossover,
    check_spectrum,
    check_rotation,
    check_reliability,
    check_psd_oracle,
    check_second_law,
    check_classical,
    check_fit,
)


def run_repro(config: Config) -> List[ReproCheck]:
    """Выполняет все проверки; исключение внутри проверки делает её проваленной."""
    results = []
    for check in CHECKS:
        try:
            result = check(config)
        except AotError as exc:
            result = ReproCheck(check.__name__.removeprefix("check_"), False, {"error": str(exc)})
        if result.passed:
            logger.success("✅ {}", result.name)
        else:
            logger.error("❌ {}: {}", result.name, result.detail)
        results.append(result)
    passed = sum(r.passed for r in results)
    logger.info("Итог: {}/{} проверок пройдено", passed, len(results))
    return results
