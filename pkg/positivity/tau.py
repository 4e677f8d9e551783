"""
Оценка времени детектирования τ = inf{t > 0 : e^{sΛ} > 0 для всех s ≥ t}.

Симметричный путь (знаковый лапласиан корана 1, NSD): сетка по [0, T*],
последний переход min-элемента через eps_pos, уточнение бисекцией,
сертификат выборочными проверками на [tau_hi, T*] плюс аналитическая
граница за T*. Монотонность min-элемента не предполагается.

Общий путь: сетка по [0, horizon], проверка на horizon·{1.1, …, 2.0}
и спектральный критерий Перрона–Фробениуса.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.linalg
from loguru import logger

from config import ToleranceConfig
from model.errors import EigensolverError, PreconditionError
from model.generator import GeneratorMatrix, spectral_decompose, validate_generator
from propagator.exponential import exponential_from_spectrum
from .bound import positivity_time_bound
from .perron import PfVerdict, default_horizon, shifted_min_entry, spectral_pf_test

MIN_GRID_POINTS = 16
_EXTENSION_FACTORS = tuple(round(1.0 + 0.1 * k, 1) for k in range(1, 11))
_MAX_REFINEMENTS = 16
_MAX_NUDGES = 20


class TauVerdict(str, Enum):
    FINITE = "Finite"
    NOT_EVENTUALLY_POSITIVE = "NotEventuallyPositive"
    UNDETERMINED_WITHIN_HORIZON = "UndeterminedWithinHorizon"


@dataclass(frozen=True)
class TauEstimate:
    """
    При verdict = Finite: 0 ≤ tau_lo < tau_hi ≤ horizon,
    min e^{tau_hi·Λ} > eps_pos, min e^{tau_lo·Λ} ≤ eps_pos.

    certified_bound — аналитическая T* (bound_is_analytic; при n = 2 это 0)
    либо наибольшее проверенное время общего пути. Сертификат выборочный,
    а не доказательство в машинной точности.
    """

    verdict: TauVerdict
    horizon: float
    tau_lo: Optional[float] = None
    tau_hi: Optional[float] = None
    certified_bound: Optional[float] = None
    bound_is_analytic: bool = False
    crossings: List[Tuple[float, float]] = field(default_factory=list)
    certificate_samples: int = 0
    pf_verdict: Optional[PfVerdict] = None

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "tau_lo": self.tau_lo,
            "tau_hi": self.tau_hi,
            "certified_bound": self.certified_bound,
            "bound_is_analytic": self.bound_is_analytic,
            "horizon": self.horizon,
            "crossings": [list(c) for c in self.crossings],
            "certificate_samples": self.certificate_samples,
            "pf_verdict": self.pf_verdict.value if self.pf_verdict else None,
        }


# ------------------------------------------------------------------
# Scan helpers
# ------------------------------------------------------------------

def _crossings(times: np.ndarray, positive: np.ndarray) -> List[Tuple[float, float]]:
    """Все скобки соседних узлов сетки со сменой знака."""
    change = np.flatnonzero(positive[1:] != positive[:-1])
    return [(float(times[k]), float(times[k + 1])) for k in change]


def _last_rise(times: np.ndarray, positive: np.ndarray) -> Optional[Tuple[float, float]]:
    """Последняя скобка «не положительна → положительна», если дальше всё положительно."""
    if not positive[-1]:
        return None
    not_positive = np.flatnonzero(~positive)
    if not_positive.size == 0:
        return None
    k = int(not_positive[-1])
    return float(times[k]), float(times[k + 1])


def bisect_bracket(
    is_positive: Callable[[float], bool],
    lo: float,
    hi: float,
    width: float,
) -> Tuple[float, float]:
    """Бисекция скобки (lo не положительна, hi положительна) до ширины ≤ width."""
    steps = 0
    while hi - lo > width:
        middle = 0.5 * lo + 0.5 * hi
        if is_positive(middle):
            hi = middle
        else:
            lo = middle
        steps += 1
    logger.debug("Бисекция: {} шагов, скобка [{:.6g}, {:.6g}]", steps, lo, hi)
    return lo, hi


def _check_arguments(grid_points: int, width: float) -> None:
    if grid_points < MIN_GRID_POINTS:
        raise PreconditionError(f"grid_points должно быть не меньше {MIN_GRID_POINTS}, получено {grid_points}")
    if not width > 0:
        raise PreconditionError(f"width должно быть положительным, получено {width}")


# ------------------------------------------------------------------
# Paths
# ------------------------------------------------------------------

def _symmetric_path(
    m: GeneratorMatrix,
    grid_points: int,
    width: float,
    tol: ToleranceConfig,
    certify_samples: int,
) -> TauEstimate:
    spectral = spectral_decompose(m, tol)
    t_star = positivity_time_bound(spectral, tol)

    def is_positive(t: float) -> bool:
        return float(np.min(exponential_from_spectrum(spectral, t))) > tol.eps_pos

    end = max(t_star, width)
    nudges = 0
    while not is_positive(end):
        if nudges >= _MAX_NUDGES:
            raise EigensolverError(f"F(t) не положительна за границей T* = {t_star:.6g}")
        end *= 1.01
        nudges += 1
    if nudges:
        logger.warning("Граница T* сдвинута до {:.6g} ({} шагов) из-за округления", end, nudges)

    times = np.linspace(0.0, end, grid_points)
    positive = np.array([is_positive(float(t)) for t in times])
    crossings = _crossings(times, positive)
    bracket = _last_rise(times, positive)
    if bracket is None:
        raise EigensolverError("На сетке не найден переход к строгой положительности")

    samples = 0
    for _ in range(_MAX_REFINEMENTS):
        tau_lo, tau_hi = bisect_bracket(is_positive, bracket[0], bracket[1], width)
        checks = np.linspace(tau_hi, end, certify_samples + 1)[1:]
        samples += checks.size
        failed = [float(t) for t in checks if not is_positive(float(t))]
        if not failed:
            break
        # Повторный переход между узлами сетки: берём последнюю неудачную точку.
        last = max(failed)
        after = [float(t) for t in checks if t > last]
        bracket = (last, after[0] if after else end)
        crossings.append(bracket)
        logger.warning("Повторный переход через ноль после t = {:.6g}, уточняем скобку", last)
    else:
        raise EigensolverError("Не удалось сертифицировать положительность после τ")

    logger.info("τ ∈ [{:.6g}, {:.6g}], T* = {:.6g}", tau_lo, tau_hi, t_star)
    return TauEstimate(
        verdict=TauVerdict.FINITE,
        horizon=end,
        tau_lo=tau_lo,
        tau_hi=tau_hi,
        certified_bound=end if nudges else t_star,
        bound_is_analytic=True,
        crossings=crossings,
        certificate_samples=samples,
    )


def _general_path(
    m: GeneratorMatrix,
    grid_points: int,
    width: float,
    tol: ToleranceConfig,
    horizon: Optional[float],
) -> TauEstimate:
    try:
        eigenvalues = scipy.linalg.eigvals(m.entries)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"Собственные значения не сошлись: {exc}") from exc
    threshold = tol.eig_threshold(float(np.max(np.abs(eigenvalues))))
    if horizon is None:
        horizon = default_horizon(eigenvalues.real, threshold)
    shift = float(np.max(eigenvalues.real))

    def is_positive(t: float) -> bool:
        return shifted_min_entry(m.entries, t, shift) > tol.eps_pos

    times = np.linspace(0.0, horizon, grid_points)
    positive = np.array([is_positive(float(t)) for t in times])
    crossings = _crossings(times, positive)
    extended = all(is_positive(horizon * factor) for factor in _EXTENSION_FACTORS)
    pf = spectral_pf_test(m, tol)
    logger.debug("Общий путь: горизонт {:.4g}, критерий ПФ {}, положительна в конце: {}", horizon, pf.value, extended)

    if pf is PfVerdict.CERTIFIED_NOT:
        return TauEstimate(
            verdict=TauVerdict.NOT_EVENTUALLY_POSITIVE,
            horizon=horizon,
            crossings=crossings,
            pf_verdict=pf,
        )

    bracket = _last_rise(times, positive)
    if pf is PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE and extended and bracket is not None:
        tau_lo, tau_hi = bisect_bracket(is_positive, bracket[0], bracket[1], width)
        return TauEstimate(
            verdict=TauVerdict.FINITE,
            horizon=horizon,
            tau_lo=tau_lo,
            tau_hi=tau_hi,
            certified_bound=horizon * _EXTENSION_FACTORS[-1],
            bound_is_analytic=False,
            crossings=crossings,
            certificate_samples=len(_EXTENSION_FACTORS),
            pf_verdict=pf,
        )

    return TauEstimate(
        verdict=TauVerdict.UNDETERMINED_WITHIN_HORIZON,
        horizon=horizon,
        crossings=crossings,
        pf_verdict=pf,
    )


# ------------------------------------------------------------------
# Public API
# ------------------------------------------------------------------

def estimate_tau(
    m: GeneratorMatrix,
    grid_points: int,
    width: float,
    tol: ToleranceConfig,
    horizon: Optional[float] = None,
    certify_samples: int = 64,
) -> TauEstimate:
    """
    Оценивает τ для генератора m.

    Args:
        m: Генератор Λ.
        grid_points: Число узлов сетки (≥ 16).
        width: Требуемая ширина скобки τ.
        tol: Допуски.
        horizon: Горизонт общего пути; по умолчанию 50/min|Re λ| (или 100).
        certify_samples: Число выборочных проверок на [tau_hi, T*].

    Raises:
        PreconditionError: grid_points < 16 или width ≤ 0.
    """
    _check_arguments(grid_points, width)
    report = validate_generator(m, tol)
    if report.is_signed_laplacian and report.is_nsd:
        return _symmetric_path(m, grid_points, width, tol, certify_samples)
    logger.debug("Генератор не является знаковым лапласианом корана 1, общий путь")
    return _general_path(m, grid_points, width, tol, horizon)
