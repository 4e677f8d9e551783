"""
Прямой и обратный пропагаторы F(t) = e^{tΛ}, B(t) = e^{−tΛ}.

Симметричный генератор экспоненцируется через спектральное разложение
U·diag(e^{tλ})·Uᵀ; несимметричный — через scaling-and-squaring с
аппроксимантом Паде степени 13 (scipy.linalg.expm). B(t) всегда считается
как экспонента от −tΛ, а не обращением F(t).
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg
from loguru import logger

from config import ToleranceConfig
from model.errors import EigensolverError, NonFiniteError, PreconditionError, PropagatorOverflowError
from model.generator import GeneratorMatrix, SpectralDecomposition, spectral_decompose

# ln(максимальное double): e^x конечно при x < _LOG_MAX.
_LOG_MAX = math.log(np.finfo(float).max)


class Direction(str, Enum):
    FORWARD = "Forward"
    BACKWARD = "Backward"


class Method(str, Enum):
    SPECTRAL_EXP = "SpectralExp"
    SCALING_SQUARING = "ScalingSquaring"
    CLOSED_FORM_ROTATION = "ClosedFormRotation"


@dataclass(frozen=True, eq=False)
class Propagator:
    matrix: np.ndarray
    time: float
    direction: Direction
    method: Method
    rowsum_residual: float
    inverse_residual: Optional[float] = None


# ------------------------------------------------------------------
# Exponentials
# ------------------------------------------------------------------

def exponential_from_spectrum(spectral: SpectralDecomposition, t: float) -> np.ndarray:
    """U·diag(e^{tλ_k})·Uᵀ для готового разложения."""
    exponents = t * spectral.eigenvalues
    if float(np.max(exponents)) >= _LOG_MAX:
        raise PropagatorOverflowError(
            f"e^{{tλ}} переполняется: t·max λ = {float(np.max(exponents)):.1f} ≥ {_LOG_MAX:.1f}"
        )
    u = spectral.eigenvectors
    return (u * np.exp(exponents)) @ u.T


def _scaling_squaring(m: GeneratorMatrix, t: float) -> np.ndarray:
    try:
        real_parts = scipy.linalg.eigvals(m.entries).real
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"Собственные значения не сошлись: {exc}") from exc
    growth = float(np.max(t * real_parts))
    if growth >= _LOG_MAX:
        raise PropagatorOverflowError(f"e^{{tΛ}} переполняется: t·max Re λ = {growth:.1f}")
    result = scipy.linalg.expm(t * m.entries)
    if not np.all(np.isfinite(result)):
        raise PropagatorOverflowError(f"expm вернула неконечные элементы при t = {t}")
    return result


def _exponential(
    m: GeneratorMatrix,
    t: float,
    tol: ToleranceConfig,
    spectral: Optional[SpectralDecomposition] = None,
) -> Tuple[np.ndarray, Method]:
    if not math.isfinite(t):
        raise NonFiniteError(f"Время должно быть конечным, получено {t}")
    if t == 0:
        symmetric = spectral is not None or m.symmetry_residual() <= tol.eps_sym
        return np.eye(m.n), Method.SPECTRAL_EXP if symmetric else Method.SCALING_SQUARING
    if spectral is not None:
        return exponential_from_spectrum(spectral, t), Method.SPECTRAL_EXP
    if m.symmetry_residual() <= tol.eps_sym:
        return exponential_from_spectrum(spectral_decompose(m, tol), t), Method.SPECTRAL_EXP
    return _scaling_squaring(m, t), Method.SCALING_SQUARING


def matrix_exponential(
    m: GeneratorMatrix,
    t: float,
    tol: Optional[ToleranceConfig] = None,
    spectral: Optional[SpectralDecomposition] = None,
) -> np.ndarray:
    """
    e^{tM}; отрицательное t даёт обратный пропагатор.

    Args:
        m: Генератор.
        t: Время (конечное, любого знака). При t = 0 — ровно единичная матрица.
        tol: Допуски; по умолчанию ToleranceConfig().
        spectral: Готовое разложение симметричного M, чтобы не считать его заново.

    Raises:
        PropagatorOverflowError: если результат не помещается в double.
    """
    matrix, _ = _exponential(m, t, tol or ToleranceConfig(), spectral)
    return matrix


def scaling_squaring_exponential(m: GeneratorMatrix, t: float) -> np.ndarray:
    """Путь Паде-13 независимо от симметрии (для сверки двух методов)."""
    if t == 0:
        return np.eye(m.n)
    return _scaling_squaring(m, t)


def _make(matrix: np.ndarray, t: float, direction: Direction, method: Method) -> Propagator:
    residual = float(np.max(np.abs(matrix.sum(axis=1) - 1.0)))
    return Propagator(matrix=matrix, time=t, direction=direction, method=method, rowsum_residual=residual)


def propagator_pair(
    m: GeneratorMatrix,
    t: float,
    tol: ToleranceConfig,
    spectral: Optional[SpectralDecomposition] = None,
) -> Tuple[Propagator, Propagator]:
    """
    (F(t), B(t)) при t > 0; невязка F·B − I записывается в оба пропагатора.
    """
    if not t > 0:
        raise PreconditionError(f"Для пары пропагаторов нужно t > 0, получено {t}")
    f_matrix, method = _exponential(m, t, tol, spectral)
    b_matrix, _ = _exponential(m, -t, tol, spectral)
    inverse_residual = float(np.max(np.abs(f_matrix @ b_matrix - np.eye(m.n))))
    if inverse_residual > tol.eps_fit:
        logger.warning("F·B отличается от I на {:.2e} (> eps_fit) при t = {}", inverse_residual, t)

    forward = _make(f_matrix, t, Direction.FORWARD, method)
    backward = _make(b_matrix, t, Direction.BACKWARD, method)
    return (
        replace(forward, inverse_residual=inverse_residual),
        replace(backward, inverse_residual=inverse_residual),
    )


# ------------------------------------------------------------------
# Rotation generator
# ------------------------------------------------------------------

def rotation_closed_form(t: float) -> np.ndarray:
    """R(θ) при θ = √3·t: вращение вокруг оси 1, точная формула для 3×3."""
    theta = math.sqrt(3.0) * t
    c, s = math.cos(theta), math.sqrt(3.0) * math.sin(theta)
    d, p, q = 1 + 2 * c, 1 - c + s, 1 - c - s
    return np.array([
        [d, p, q],
        [q, d, p],
        [p, q, d],
    ]) / 3.0


def rotation_propagator(t: float, direction: Direction = Direction.FORWARD) -> Propagator:
    """F(t) = R(θ), B(t) = R(−θ)."""
    sign = 1.0 if direction is Direction.FORWARD else -1.0
    return _make(rotation_closed_form(sign * t), t, direction, Method.CLOSED_FORM_ROTATION)


def permutation_times(k_max: int) -> List[float]:
    """t_k = 2πk/(3√3), k = 1..k_max: пропагаторы вращения — циклические перестановки."""
    return [2.0 * math.pi * k / (3.0 * math.sqrt(3.0)) for k in range(1, k_max + 1)]


# ------------------------------------------------------------------
# Reliability
# ------------------------------------------------------------------

def backward_diagonal(spectral: SpectralDecomposition, t: float) -> np.ndarray:
    """(B(t))_ii = 1/n + Σ_{k≥2} e^{−tλ_k} u_ki²."""
    u = spectral.eigenvectors[:, 1:]
    weights = np.exp(-t * spectral.eigenvalues[1:])
    return 1.0 / spectral.n + (u ** 2) @ weights


def diagonal_dominance_check(
    backward: Propagator,
    spectral: SpectralDecomposition,
    tol: ToleranceConfig,
) -> bool:
    """
    Истинно, если каждый диагональный элемент B(t) больше 1 + eps_pos.

    Поскольку строки B(t) суммируются в 1, такая диагональ вынуждает
    отрицательный элемент в каждой строке. Диагональ берётся из матрицы
    и из спектральной формулы; должны выполняться обе.

    Raises:
        PreconditionError: не обратный пропагатор, t ≤ 0 или генератор
            не симметричный NSD корана 1.
    """
    if backward.direction is not Direction.BACKWARD:
        raise PreconditionError("Ожидается обратный пропагатор")
    if not backward.time > 0:
        raise PreconditionError(f"Нужно t > 0, получено {backward.time}")
    if spectral.corank != 1 or np.any(spectral.eigenvalues[1:] >= 0):
        raise PreconditionError("Нужен генератор корана 1 с отрицательными λ₂..λₙ")

    from_matrix = np.diag(backward.matrix)
    from_spectrum = backward_diagonal(spectral, backward.time)
    mismatch = float(np.max(np.abs(from_matrix - from_spectrum)))
    if mismatch > tol.eps_fit * max(1.0, float(np.max(np.abs(from_spectrum)))):
        logger.warning("Диагональ B(t) расходится со спектральной формулой на {:.2e}", mismatch)
    threshold = 1.0 + tol.eps_pos
    return bool(np.all(from_matrix > threshold) and np.all(from_spectrum > threshold))
