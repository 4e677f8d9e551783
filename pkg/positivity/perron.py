"""
Спектральный критерий eventual exponential positivity и сверка
«L PSD ⟺ −L eventually exponentially positive» для лапласианов корана 1.

M eventually exponentially positive тогда и только тогда, когда собственное
значение с наибольшей вещественной частью вещественно, просто, строго
доминирует и его правый и левый собственные векторы можно сделать строго
положительными.
"""

from enum import Enum
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from loguru import logger

from config import ToleranceConfig
from model.errors import EigensolverError, PreconditionError
from model.generator import GeneratorMatrix, spectral_decompose, validate_generator
from .bound import positivity_time_bound


class PfVerdict(str, Enum):
    CERTIFIED_EVENTUALLY_POSITIVE = "CertifiedEventuallyPositive"
    CERTIFIED_NOT = "CertifiedNot"
    INCONCLUSIVE = "Inconclusive"


# Множитель горизонта: e^{−50} пренебрежимо мало на фоне O(1/n).
_HORIZON_FACTOR = 50.0
_SIDE_B_SAMPLES = 16


def _sign_normalized(vector: np.ndarray) -> np.ndarray:
    v = np.real(vector)
    v = v / np.linalg.norm(v)
    return -v if v.sum() < 0 else v


def spectral_pf_test(m: GeneratorMatrix, tol: ToleranceConfig) -> PfVerdict:
    """
    CertifiedNot — доминирующая вещественная часть достигается комплексным
    собственным значением или собственные векторы знакопеременны.
    Inconclusive — вещественные собственные значения слишком близки
    (нет простоты) или в собственном векторе есть нули в пределах eps_pos.
    """
    try:
        eigenvalues, left, right = scipy.linalg.eig(m.entries, left=True, right=True)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"Собственные значения не сошлись: {exc}") from exc

    margin = tol.eig_threshold(float(np.max(np.abs(eigenvalues))))
    k = int(np.argmax(eigenvalues.real))
    top = float(eigenvalues.real[k])
    tie = np.flatnonzero(eigenvalues.real >= top - margin)

    if np.any(np.abs(eigenvalues.imag[tie]) > margin):
        logger.debug("Доминирующая вещественная часть {:.3e} достигается комплексной парой", top)
        return PfVerdict.CERTIFIED_NOT
    if tie.size > 1:
        logger.debug("Доминирующее собственное значение {:.3e} не простое (кратность {})", top, tie.size)
        return PfVerdict.INCONCLUSIVE

    v = _sign_normalized(right[:, k])
    w = _sign_normalized(left[:, k])
    worst = min(float(v.min()), float(w.min()))
    logger.debug("Доминирующее λ = {:.3e}, минимальный элемент собственных векторов {:.3e}", top, worst)
    if worst > tol.eps_pos:
        return PfVerdict.CERTIFIED_EVENTUALLY_POSITIVE
    if worst < -tol.eps_pos:
        return PfVerdict.CERTIFIED_NOT
    return PfVerdict.INCONCLUSIVE


def default_horizon(real_parts: np.ndarray, threshold: float) -> float:
    """50/min|Re λ| по ненулевым вещественным частям; 100, если все нулевые."""
    nonzero = np.abs(real_parts[np.abs(real_parts) > threshold])
    if nonzero.size == 0:
        return 100.0
    return _HORIZON_FACTOR / float(nonzero.min())


def shifted_min_entry(a: np.ndarray, t: float, shift: float) -> float:
    """min элемент e^{t(A − shift·I)}; знаки совпадают со знаками e^{tA}."""
    shifted = a - shift * np.eye(a.shape[0])
    return float(np.min(scipy.linalg.expm(t * shifted)))


def psd_equivalence_sides(
    laplacian: GeneratorMatrix,
    tol: ToleranceConfig,
    horizon: Optional[float] = None,
) -> Tuple[bool, bool]:
    """
    Две независимо вычисленные стороны эквивалентности для L корана 1:

    A — L положительно полуопределена (по собственным значениям);
    B — e^{−tL} строго положительна во всех контрольных точках на [t₀, horizon],
        где t₀ = 1.01·T* (оценка времени положительности), если A верно,
        иначе horizon/2.

    Raises:
        PreconditionError: L не симметрична, суммы строк не нулевые или коранг ≠ 1.
    """
    report = validate_generator(laplacian, tol)
    if not report.is_signed_laplacian:
        raise PreconditionError("Нужна симметричная L с нулевыми суммами строк и корангом 1")

    eigenvalues = scipy.linalg.eigvalsh(laplacian.symmetric_part)
    threshold = tol.eig_threshold(float(np.max(np.abs(eigenvalues))))
    side_a = bool(eigenvalues.min() >= -threshold)

    generator = -laplacian.symmetric_part
    if horizon is None:
        horizon = default_horizon(-eigenvalues, threshold)
    shift = float(-eigenvalues.min())

    start = horizon / 2.0
    if side_a:
        generator_matrix = GeneratorMatrix.from_array(generator)
        t_star = positivity_time_bound(spectral_decompose(generator_matrix, tol), tol)
        start = min(1.01 * t_star, horizon) if t_star > 0 else horizon / 2.0
    times = np.linspace(start, horizon, _SIDE_B_SAMPLES)
    side_b = all(shifted_min_entry(generator, float(t), shift) > tol.eps_pos for t in times)
    logger.debug("Сверка PSD ⟺ EEP: A={}, B={}, горизонт {:.3g}", side_a, side_b, horizon)
    return side_a, side_b


def psd_equivalence_oracle(
    laplacian: GeneratorMatrix,
    tol: ToleranceConfig,
    horizon: Optional[float] = None,
) -> bool:
    """Истинно, если обе стороны эквивалентности совпали."""
    side_a, side_b = psd_equivalence_sides(laplacian, tol, horizon)
    return side_a == side_b
