"""
Генератор динамики и его проверка.

GeneratorMatrix — плотная вещественная матрица Λ, p(t) = e^{tΛ} p₀.
validate_generator проверяет условия знакового лапласиана корана 1
(симметрия, нулевые суммы строк, коранг), spectral_decompose даёт
ортонормированный собственный базис, check_second_law — отрицательную
полуопределённость симметричной части.
"""

from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np
import scipy.linalg
from loguru import logger

from config import ToleranceConfig
from .errors import AsymmetricGeneratorError, EigensolverError, GeneratorShapeError, NonFiniteError

ArrayLike = Union[np.ndarray, Sequence[Sequence[float]]]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Плотная вещественная n×n матрица Λ; n ≥ 2, все элементы конечны."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        data = np.array(self.entries, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise GeneratorShapeError(f"Ожидается квадратная матрица, получена форма {data.shape}")
        if data.shape[0] < 2:
            raise GeneratorShapeError("Размерность генератора должна быть не меньше 2")
        if not np.all(np.isfinite(data)):
            raise NonFiniteError("Генератор содержит NaN или бесконечность")
        object.__setattr__(self, "entries", _frozen(data))

    @classmethod
    def from_array(cls, data: ArrayLike) -> "GeneratorMatrix":
        return cls(np.asarray(data, dtype=float))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def symmetric_part(self) -> np.ndarray:
        return (self.entries + self.entries.T) / 2.0

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.T)))

    def rowsum_residual(self) -> float:
        return float(np.max(np.abs(self.entries.sum(axis=1))))


@dataclass(frozen=True)
class ValidationReport:
    """
    Результат проверки генератора.

    Для несимметричного генератора spectrum содержит вещественные части
    собственных значений (spectrum_is_real = False).
    """

    is_symmetric: bool
    rowsums_zero: bool
    corank: int
    is_nsd: bool
    spectrum: List[float]
    spectrum_is_real: bool
    symmetry_residual: float
    rowsum_residual: float

    @property
    def is_signed_laplacian(self) -> bool:
        return self.is_symmetric and self.rowsums_zero and self.corank == 1

    @property
    def second_law_holds(self) -> bool:
        return self.is_nsd

    def as_dict(self) -> dict:
        return {
            "is_symmetric": self.is_symmetric,
            "rowsums_zero": self.rowsums_zero,
            "corank": self.corank,
            "is_nsd": self.is_nsd,
            "spectrum": list(self.spectrum),
            "spectrum_is_real": self.spectrum_is_real,
            "is_signed_laplacian": self.is_signed_laplacian,
            "second_law_holds": self.second_law_holds,
            "symmetry_residual": self.symmetry_residual,
            "rowsum_residual": self.rowsum_residual,
        }


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """
    Λ = U·diag(λ)·Uᵀ.

    Порядок: собственное значение, ближайшее к нулю (λ₁ = 0 при коранге 1),
    первым; остальные по убыванию. Столбец U[:, k] соответствует λ_k.
    При коранге 1 и нулевых суммах строк первый столбец равен (1/√n)·1.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    corank: int

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T


# ------------------------------------------------------------------
# Helpers
# ------------------------------------------------------------------

def _symmetric_eigenvalues(a: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.eigvalsh(a)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"Собственные значения не сошлись: {exc}") from exc


def _nsd_margin(m: GeneratorMatrix, tol: ToleranceConfig) -> tuple[float, float]:
    """(наибольшее собственное значение симметричной части, порог нуля)."""
    eigenvalues = _symmetric_eigenvalues(m.symmetric_part)
    radius = float(np.max(np.abs(eigenvalues)))
    return float(eigenvalues[-1]), tol.eig_threshold(radius)


def _zero_first_order(eigenvalues: np.ndarray, threshold: float) -> np.ndarray:
    """Индексы: нулевой кластер (по |λ|) первым, остальные по убыванию."""
    zero = [i for i in np.argsort(np.abs(eigenvalues), kind="stable") if abs(eigenvalues[i]) <= threshold]
    rest = [i for i in np.argsort(-eigenvalues, kind="stable") if abs(eigenvalues[i]) > threshold]
    return np.array(zero + rest, dtype=int)


# ------------------------------------------------------------------
# Operations
# ------------------------------------------------------------------

def validate_generator(m: GeneratorMatrix, tol: ToleranceConfig) -> ValidationReport:
    """
    Проверяет условия знакового лапласиана корана 1 и знак квадратичной формы.

    Коранг считается по собственным значениям (симметричный случай) или по
    сингулярным числам (несимметричный) с порогом eps_eig × спектральный радиус.
    """
    sym_res = m.symmetry_residual()
    row_res = m.rowsum_residual()
    is_symmetric = sym_res <= tol.eps_sym

    if is_symmetric:
        eigenvalues = _symmetric_eigenvalues(m.symmetric_part)
        threshold = tol.eig_threshold(float(np.max(np.abs(eigenvalues))))
        corank = int(np.sum(np.abs(eigenvalues) <= threshold))
        spectrum = sorted((float(x) for x in eigenvalues), reverse=True)
        spectrum_is_real = True
    else:
        try:
            singular = scipy.linalg.svdvals(m.entries)
            eigenvalues = scipy.linalg.eigvals(m.entries)
        except scipy.linalg.LinAlgError as exc:
            raise EigensolverError(f"Разложение не сошлось: {exc}") from exc
        corank = int(np.sum(singular <= tol.eig_threshold(float(singular[0]))))
        spectrum = sorted((float(x) for x in eigenvalues.real), reverse=True)
        spectrum_is_real = bool(np.all(np.abs(eigenvalues.imag) <= tol.eig_threshold(float(np.max(np.abs(eigenvalues))))))

    top, nsd_threshold = _nsd_margin(m, tol)
    report = ValidationReport(
        is_symmetric=is_symmetric,
        rowsums_zero=row_res <= tol.eps_rowsum,
        corank=corank,
        is_nsd=top <= nsd_threshold,
        spectrum=spectrum,
        spectrum_is_real=spectrum_is_real,
        symmetry_residual=sym_res,
        rowsum_residual=row_res,
    )
    logger.debug(
        "Проверка генератора n={}: симметрия={}, суммы строк={}, коранг={}, NSD={}",
        m.n, report.is_symmetric, report.rowsums_zero, report.corank, report.is_nsd,
    )
    return report


def spectral_decompose(m: GeneratorMatrix, tol: ToleranceConfig) -> SpectralDecomposition:
    """
    Спектральное разложение симметричного генератора.

    Raises:
        AsymmetricGeneratorError: если max|M − Mᵀ| > eps_sym.
        EigensolverError: если разложение не сошлось или не прошло самопроверку.
    """
    if m.symmetry_residual() > tol.eps_sym:
        raise AsymmetricGeneratorError(
            f"Генератор несимметричен: max|M − Mᵀ| = {m.symmetry_residual():.3e} > {tol.eps_sym:.1e}"
        )
    sym = m.symmetric_part
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(sym)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"Собственные векторы не сошлись: {exc}") from exc

    radius = float(np.max(np.abs(eigenvalues)))
    threshold = tol.eig_threshold(radius)
    order = _zero_first_order(eigenvalues, threshold)
    eigenvalues = eigenvalues[order].copy()
    eigenvectors = eigenvectors[:, order].copy()
    corank = int(np.sum(np.abs(eigenvalues) <= threshold))

    if corank == 1:
        eigenvalues[0] = 0.0
        kernel = eigenvectors[:, 0]
        if kernel.sum() < 0:
            kernel = -kernel
        uniform = np.full(m.n, 1.0 / np.sqrt(m.n))
        if np.max(np.abs(kernel - uniform)) <= tol.eps_eig:
            kernel = uniform
        eigenvectors[:, 0] = kernel

    decomposition = SpectralDecomposition(
        eigenvalues=_frozen(eigenvalues),
        eigenvectors=_frozen(eigenvectors),
        corank=corank,
    )

    check = max(threshold, tol.eps_eig) * 10
    orth = float(np.max(np.abs(eigenvectors.T @ eigenvectors - np.eye(m.n))))
    recon = float(np.max(np.abs(decomposition.reconstruct() - sym)))
    if orth > check or recon > check:
        raise EigensolverError(
            f"Самопроверка разложения не пройдена: |UᵀU − I| = {orth:.2e}, |UDUᵀ − M| = {recon:.2e}"
        )
    logger.debug("Спектр: {}", np.round(eigenvalues, 12).tolist())
    return decomposition


def check_second_law(m: GeneratorMatrix, tol: ToleranceConfig) -> bool:
    """
    Истинно, если симметричная часть M отрицательно полуопределена.

    Для симметричного Λ с нулевыми суммами строк это эквивалентно
    неубыванию энтропии Реньи-2 вдоль всех траекторий: производная
    H₂ равна −2pᵀΛp / (ln 2·‖p‖²). Без этих предположений флаг означает
    только знак квадратичной формы.
    """
    top, threshold = _nsd_margin(m, tol)
    return top <= threshold
