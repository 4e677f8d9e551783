"""
Эталонные генераторы: четырёхуровневый знаковый лапласиан, вращение, лапласиан цикла
и случайные знаковые лапласианы с заданным спектром (для property-тестов).
"""

from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .generator import GeneratorMatrix

# Целочисленная матрица четырёхуровневого генератора; генератор равен ей, умноженной на 1/3.
FOUR_STATE_INTEGER_MATRIX: Tuple[Tuple[int, ...], ...] = (
    (-7, -1, 2, 6),
    (-1, -7, 2, 6),
    (2, 2, -10, 6),
    (6, 6, 6, -18),
)
FOUR_STATE_SPECTRUM: Tuple[float, ...] = (0.0, -2.0, -4.0, -8.0)

# Вращение вокруг оси 1 с угловой скоростью √3.
ROTATION_MATRIX: Tuple[Tuple[int, ...], ...] = (
    (0, 1, -1),
    (-1, 0, 1),
    (1, -1, 0),
)


def four_state_generator() -> GeneratorMatrix:
    """Симметричный знаковый лапласиан 4×4 со спектром {0, −2, −4, −8}."""
    return GeneratorMatrix.from_array(np.array(FOUR_STATE_INTEGER_MATRIX, dtype=float) / 3.0)


def rotation_generator() -> GeneratorMatrix:
    """Антисимметричный генератор 3×3: всё, кроме симметрии, выполнено, τ = +∞."""
    return GeneratorMatrix.from_array(ROTATION_MATRIX)


def cycle_laplacian(n: int = 3, weight: float = 1.0) -> GeneratorMatrix:
    """Λ = −L для беззнакового лапласиана n-цикла (классический случай, τ = 0⁺)."""
    adjacency = np.zeros((n, n))
    for i in range(n):
        adjacency[i, (i + 1) % n] = weight
        adjacency[(i + 1) % n, i] = weight
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    return GeneratorMatrix.from_array(-laplacian)


def uniform_kernel_basis(n: int, rng: np.random.Generator) -> np.ndarray:
    """Случайный ортонормированный базис, первый столбец которого (1/√n)·1."""
    seed_matrix = np.column_stack([np.ones(n), rng.standard_normal((n, n - 1))])
    q, r = scipy.linalg.qr(seed_matrix)
    q = q * np.sign(np.diag(r))
    return q


def from_spectrum(basis: np.ndarray, eigenvalues: Sequence[float]) -> np.ndarray:
    """U·diag(λ)·Uᵀ, симметризованная от ошибок округления."""
    a = (basis * np.asarray(eigenvalues, dtype=float)) @ basis.T
    return (a + a.T) / 2.0


def random_signed_laplacian(
    n: int,
    seed: int,
    gap: Tuple[float, float] = (0.5, 4.0),
) -> GeneratorMatrix:
    """
    Случайный генератор, удовлетворяющий условиям знакового лапласиана корана 1:
    симметричный, суммы строк 0, ядро натянуто на 1, остальные λ_k ∈ [−gap[1], −gap[0]].
    """
    rng = np.random.default_rng(seed)
    basis = uniform_kernel_basis(n, rng)
    negatives = -rng.uniform(gap[0], gap[1], size=n - 1)
    return GeneratorMatrix.from_array(from_spectrum(basis, np.concatenate([[0.0], negatives])))


def random_corank1_symmetric(
    n: int,
    seed: int,
    negative_modes: int = 0,
    magnitude: Tuple[float, float] = (0.5, 4.0),
) -> GeneratorMatrix:
    """
    Случайная симметричная L с ядром 1 и суммами строк 0.

    negative_modes собственных значений L отрицательны (L не PSD),
    остальные положительны. Возвращается сама L, а не Λ = −L.
    """
    if not 0 <= negative_modes <= n - 1:
        raise ValueError(f"negative_modes должно лежать в [0, {n - 1}], получено {negative_modes}")
    rng = np.random.default_rng(seed)
    basis = uniform_kernel_basis(n, rng)
    magnitudes = rng.uniform(magnitude[0], magnitude[1], size=n - 1)
    signs = np.ones(n - 1)
    signs[:negative_modes] = -1.0
    return GeneratorMatrix.from_array(from_spectrum(basis, np.concatenate([[0.0], signs * magnitudes])))


def flipped_four_state_laplacian(basis: Optional[np.ndarray] = None) -> GeneratorMatrix:
    """
    L = U·diag(0, 2, 4, −8)·Uᵀ в собственном базисе четырёхуровневого генератора:
    знаковый лапласиан корана 1 с одним отрицательным собственным значением.
    """
    if basis is None:
        basis = np.column_stack([
            np.full(4, 0.5),
            np.array([1.0, -1.0, 0.0, 0.0]) / np.sqrt(2.0),
            np.array([1.0, 1.0, -2.0, 0.0]) / np.sqrt(6.0),
            np.array([1.0, 1.0, 1.0, -3.0]) / np.sqrt(12.0),
        ])
    return GeneratorMatrix.from_array(from_spectrum(basis, (0.0, 2.0, 4.0, -8.0)))
