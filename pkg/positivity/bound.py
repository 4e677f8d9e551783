"""
Аналитическая граница времени положительности T* = ln(n−1)/|λ₂|.

Для симметричного NSD генератора корана 1
    F(t)_ij = 1/n + Σ_{k≥2} e^{tλ_k} u_ki u_kj,
а по неравенству Коши–Буняковского и Σ_{k≥2} u_ki² = 1 − 1/n
    |Σ_{k≥2} e^{tλ_k} u_ki u_kj| ≤ e^{tλ₂}(1 − 1/n),
поэтому F(t) > 0 при всех t > T*.
"""

import math

from loguru import logger

from config import ToleranceConfig
from model.errors import DegenerateGapError, PreconditionError
from model.generator import SpectralDecomposition


def positivity_time_bound(spectral: SpectralDecomposition, tol: ToleranceConfig) -> float:
    """
    Raises:
        PreconditionError: коранг разложения не равен 1.
        DegenerateGapError: λ₂ ≥ 0 в пределах допуска.
    """
    if spectral.corank != 1:
        raise PreconditionError(f"Нужен коранг 1, получен {spectral.corank}")
    lambda_2 = float(spectral.eigenvalues[1])
    if lambda_2 >= -tol.eig_threshold(spectral.spectral_radius):
        raise DegenerateGapError(f"Нет спектральной щели: λ₂ = {lambda_2:.3e}")
    bound = math.log(spectral.n - 1) / abs(lambda_2)
    logger.debug("T* = ln({})/{:.6g} = {:.6g}", spectral.n - 1, abs(lambda_2), bound)
    return bound
