"""
Мезоскопический протокол проверки стрелы времени.

Экспериментатор готовит n линейно независимых знаковых распределений
(столбцы S), через время t измеряет их образы (столбцы O = e^{tΛ}S),
восстанавливает F̂ из F̂·S = O и B̂ из B̂·O = S и сравнивает знаки.
Генератор Λ экспериментатору не известен.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np
import scipy.linalg
from loguru import logger

from config import Config, ToleranceConfig
from entropy.renyi import SignedDistribution
from model.errors import EigensolverError, PreconditionError, SingularObservationError, UnusableFitError
from model.generator import GeneratorMatrix, ValidationReport, validate_generator
from positivity.tau import TauEstimate, estimate_tau
from propagator.exponential import matrix_exponential
from propagator.signs import SignClassification, classify_signs

_MACHINE_EPS = float(np.finfo(float).eps)


class VerdictKind(str, Enum):
    FORWARD_CONCLUSIVE = "ForwardConclusive"
    INCONCLUSIVE = "Inconclusive"
    ANOMALOUS_BACKWARD_POSITIVE = "AnomalousBackwardPositive"


@dataclass(frozen=True, eq=False)
class PreparationBasis:
    """Столбцы S — подготовленные распределения; rank S = n, каждый столбец суммируется в 1."""

    matrix: np.ndarray
    delta: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def columns(self) -> List[SignedDistribution]:
        return [SignedDistribution(self.matrix[:, k]) for k in range(self.n)]


@dataclass(frozen=True, eq=False)
class FitResult:
    """
    residual_* — max|F̂S − O| и max|B̂O − S|; relative_residual_* — те же
    невязки в ∞-норме, отнесённые к ‖F̂‖‖S‖ + ‖O‖ (соответственно ‖B̂‖‖O‖ + ‖S‖).
    """

    f_hat: np.ndarray
    b_hat: np.ndarray
    residual_f: float
    residual_b: float
    relative_residual_f: float
    relative_residual_b: float
    condition_s: float
    condition_o: float
    inverse_residual: float

    def as_dict(self) -> dict:
        return {
            "F_hat": self.f_hat.tolist(),
            "B_hat": self.b_hat.tolist(),
            "residual_F": self.residual_f,
            "residual_B": self.residual_b,
            "relative_residual_F": self.relative_residual_f,
            "relative_residual_B": self.relative_residual_b,
            "condition_S": self.condition_s,
            "condition_O": self.condition_o,
            "inverse_residual": self.inverse_residual,
        }


@dataclass(frozen=True)
class AotVerdict:
    kind: VerdictKind
    f_class: SignClassification
    b_class: SignClassification
    test_time: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "F_class": self.f_class.as_dict(),
            "B_class": self.b_class.as_dict(),
            "test_time": self.test_time,
        }


@dataclass(frozen=True, eq=False)
class ProtocolReport:
    validation: ValidationReport
    basis: PreparationBasis
    observed: np.ndarray
    fit: FitResult
    verdict: AotVerdict
    noise_sigma: float
    seed: int
    tau: Optional[TauEstimate] = None
    reached_tau: Optional[bool] = None
    converse_consistent: Optional[bool] = None

    def as_dict(self) -> dict:
        return {
            "validation": self.validation.as_dict(),
            "basis": {"S": self.basis.matrix.tolist(), "delta": self.basis.delta},
            "observed": self.observed.tolist(),
            "noise_sigma": self.noise_sigma,
            "seed": self.seed,
            "fit": self.fit.as_dict(),
            "verdict": self.verdict.as_dict(),
            "tau": self.tau.as_dict() if self.tau else None,
            "reached_tau": self.reached_tau,
            "converse_consistent": self.converse_consistent,
        }


# ------------------------------------------------------------------
# Preparation and measurement
# ------------------------------------------------------------------

def _singular_values(a: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.svdvals(a)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"SVD не сошлось: {exc}") from exc


def default_basis(n: int, delta: float, tol: Optional[ToleranceConfig] = None) -> PreparationBasis:
    """
    Столбец k равен (1+δ)·e_k − (δ/n)·1: сумма 1, внедиагональные элементы −δ/n.

    Raises:
        PreconditionError: n < 2, δ вне (0, 1) или численная вырожденность S.
    """
    tol = tol or ToleranceConfig()
    if n < 2:
        raise PreconditionError(f"Нужно n ≥ 2, получено {n}")
    if not 0 < delta < 1:
        raise PreconditionError(f"delta должно лежать в (0, 1), получено {delta}")
    s = (1.0 + delta) * np.eye(n) - (delta / n) * np.ones((n, n))
    singular = _singular_values(s)
    if singular[-1] <= tol.eps_eig * singular[0]:
        raise PreconditionError(f"Базис вырожден: σ_min = {singular[-1]:.3e}")
    s.setflags(write=False)
    return PreparationBasis(matrix=s, delta=delta)


def simulate_experiment(
    m: GeneratorMatrix,
    basis: PreparationBasis,
    t: float,
    noise_sigma: float = 0.0,
    seed: int = 0,
    tol: Optional[ToleranceConfig] = None,
) -> np.ndarray:
    """
    O = e^{tΛ}·S; при noise_sigma > 0 к каждому элементу добавляется
    независимый гауссов шум, после чего каждый столбец сдвигается так,
    чтобы его сумма снова была 1. Результат детерминирован при данном seed.
    """
    if t < 0:
        raise PreconditionError(f"Время эксперимента должно быть неотрицательным, получено {t}")
    if noise_sigma < 0:
        raise PreconditionError(f"noise_sigma должно быть неотрицательным, получено {noise_sigma}")
    observed = matrix_exponential(m, t, tol) @ basis.matrix
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        observed = observed + rng.normal(0.0, noise_sigma, size=observed.shape)
        observed = observed - (observed.sum(axis=0) - 1.0) / basis.n
    return observed


def _inf_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, np.inf))


def _relative(residual: np.ndarray, product_scale: float, target: np.ndarray) -> float:
    scale = product_scale + _inf_norm(target)
    return _inf_norm(residual) / scale if scale > 0 else 0.0


def fit_propagators(basis: PreparationBasis, observed: np.ndarray) -> FitResult:
    """
    F̂ из F̂·S = O и B̂ из B̂·O = S решением линейных систем по столбцам
    (без явного обращения).

    O считается вырожденной, если σ_min(O) ≤ n·ε_machine·σ_max(O).

    Raises:
        SingularObservationError: O численно вырождена.
    """
    s = basis.matrix
    o = np.asarray(observed, dtype=float)
    n = basis.n

    singular_o = _singular_values(o)
    if singular_o[-1] <= n * _MACHINE_EPS * singular_o[0]:
        raise SingularObservationError(
            float(singular_o[-1]),
            f"Матрица наблюдений вырождена: σ_min = {singular_o[-1]:.3e}, σ_max = {singular_o[0]:.3e}",
        )
    singular_s = _singular_values(s)

    try:
        f_hat = scipy.linalg.solve(s.T, o.T).T
        b_hat = scipy.linalg.solve(o.T, s.T).T
    except scipy.linalg.LinAlgError as exc:
        raise SingularObservationError(float(singular_o[-1]), f"Система не решается: {exc}") from exc

    res_f = f_hat @ s - o
    res_b = b_hat @ o - s
    fit = FitResult(
        f_hat=f_hat,
        b_hat=b_hat,
        residual_f=float(np.max(np.abs(res_f))),
        residual_b=float(np.max(np.abs(res_b))),
        relative_residual_f=_relative(res_f, _inf_norm(f_hat) * _inf_norm(s), o),
        relative_residual_b=_relative(res_b, _inf_norm(b_hat) * _inf_norm(o), s),
        condition_s=float(singular_s[0] / singular_s[-1]),
        condition_o=float(singular_o[0] / singular_o[-1]),
        inverse_residual=float(np.max(np.abs(b_hat @ f_hat - np.eye(n)))),
    )
    logger.debug(
        "Подгонка: невязки F {:.2e}, B {:.2e}; cond S = {:.3g}, cond O = {:.3g}",
        fit.residual_f, fit.residual_b, fit.condition_s, fit.condition_o,
    )
    return fit


# ------------------------------------------------------------------
# Verdict
# ------------------------------------------------------------------

def aot_verdict(fit: FitResult, tol: ToleranceConfig, t: float) -> AotVerdict:
    """
    ForwardConclusive — F̂ строго положительна, в B̂ есть отрицательный элемент.
    AnomalousBackwardPositive — наоборот; для знаковых лапласианов корана 1
    это невозможно, поэтому вердикт сопровождается предупреждением в логе.
    Иначе Inconclusive (в том числе при нулевых минимальных элементах).

    Raises:
        UnusableFitError: относительные невязки подгонки больше eps_fit.
    """
    worst = max(fit.relative_residual_f, fit.relative_residual_b)
    if worst > tol.eps_fit:
        raise UnusableFitError(f"Невязка подгонки {worst:.3e} больше eps_fit = {tol.eps_fit:.1e}")

    f_class = classify_signs(fit.f_hat, tol)
    b_class = classify_signs(fit.b_hat, tol)
    if f_class.strictly_positive and b_class.has_negative:
        kind = VerdictKind.FORWARD_CONCLUSIVE
    elif b_class.strictly_positive and f_class.has_negative:
        kind = VerdictKind.ANOMALOUS_BACKWARD_POSITIVE
        logger.warning(
            "⚠️ B̂ строго положительна, а F̂ имеет отрицательный элемент при t = {}: "
            "нарушены предположения о генераторе или подгонка зашумлена",
            t,
        )
    else:
        kind = VerdictKind.INCONCLUSIVE
    return AotVerdict(kind=kind, f_class=f_class, b_class=b_class, test_time=t)


def run_aot_protocol(
    m: GeneratorMatrix,
    t: float,
    config: Config,
    with_tau: bool = True,
) -> ProtocolReport:
    """
    default_basis → simulate_experiment → fit_propagators → aot_verdict.

    Для генератора с симметрией, нулевыми суммами строк и корангом 1
    дополнительно оценивается τ и отмечается, достигнуто ли t ≥ tau_hi.
    """
    tol = config.tolerances
    validation = validate_generator(m, tol)
    basis = default_basis(m.n, config.delta, tol)
    observed = simulate_experiment(m, basis, t, config.noise_sigma, config.seed, tol)
    fit = fit_propagators(basis, observed)
    verdict = aot_verdict(fit, tol, t)
    logger.info("Протокол при t = {}: {}", t, verdict.kind.value)

    tau = None
    reached = None
    if with_tau and validation.is_signed_laplacian:
        tau = estimate_tau(m, config.grid_points, config.width, tol, config.horizon, config.certify_samples)
        if tau.tau_hi is not None:
            reached = t >= tau.tau_hi

    converse = None
    if validation.is_symmetric and validation.rowsums_zero and verdict.kind is VerdictKind.FORWARD_CONCLUSIVE:
        # Пройденный тест для симметричного Λ с нулевыми суммами строк влечёт коранг 1 и NSD.
        converse = validation.corank == 1 and validation.is_nsd
        if not converse:
            logger.warning("Тест пройден, но генератор не NSD корана 1, проверьте входные данные")

    return ProtocolReport(
        validation=validation,
        basis=basis,
        observed=observed,
        fit=fit,
        verdict=verdict,
        noise_sigma=config.noise_sigma,
        seed=config.seed,
        tau=tau,
        reached_tau=reached,
        converse_consistent=converse,
    )
