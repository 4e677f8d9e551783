"""
Энтропия Реньи-2 знаковых распределений и её производная вдоль динамики.

H₂(p) = −log₂ Σ p_i², dH₂/dt = −2 pᵀΛp / (ln 2 · ‖p‖²).
Второе начало: H₂ не убывает вдоль любой траектории p(t) = e^{tΛ} p₀.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from config import ToleranceConfig
from model.errors import NonFiniteError, PreconditionError
from model.generator import GeneratorMatrix, spectral_decompose
from propagator.exponential import matrix_exponential

_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class SignedDistribution:
    """Вещественный вектор с суммой 1; элементы могут быть отрицательными или больше 1."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1:
            raise PreconditionError(f"Ожидается вектор, получена форма {w.shape}")
        if not np.all(np.isfinite(w)):
            raise NonFiniteError("Распределение содержит NaN или бесконечность")
        if not np.any(w):
            raise PreconditionError("Распределение не может быть нулевым вектором")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_weights(cls, weights: Sequence[float], tol: ToleranceConfig) -> "SignedDistribution":
        """Строит распределение, проверяя, что сумма равна 1 с точностью eps_rowsum."""
        p = cls(np.asarray(weights, dtype=float))
        excess = abs(float(p.weights.sum()) - 1.0)
        if excess > tol.eps_rowsum:
            raise PreconditionError(f"Сумма весов должна быть 1, отклонение {excess:.3e}")
        return p

    @classmethod
    def uniform(cls, n: int) -> "SignedDistribution":
        return cls(np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class TrajectoryReport:
    times: List[float]
    states: List[SignedDistribution]
    entropies: List[float]
    derivatives: List[float]
    min_entropy_increment: float

    def rows(self) -> List[dict]:
        return [
            {"t": t, "H2_bits": h, "dH2_dt": d}
            for t, h, d in zip(self.times, self.entropies, self.derivatives)
        ]

    def as_dict(self) -> dict:
        return {
            "times": list(self.times),
            "states": [s.weights.tolist() for s in self.states],
            "entropies": list(self.entropies),
            "derivatives": list(self.derivatives),
            "min_entropy_increment": self.min_entropy_increment,
        }


# ------------------------------------------------------------------
# Entropy
# ------------------------------------------------------------------

def _h2(weights: np.ndarray) -> float:
    return -math.log2(float(np.dot(weights, weights)))


def renyi2_entropy(p: SignedDistribution) -> float:
    """H₂(p) в битах."""
    return _h2(p.weights)


def entropy_derivative(m: GeneratorMatrix, p: SignedDistribution) -> float:
    """Аналитическая dH₂/dt в точке p, бит на единицу времени."""
    w = p.weights
    return -2.0 * float(w @ m.entries @ w) / (_LN2 * float(np.dot(w, w)))


def finite_difference_derivative(
    m: GeneratorMatrix,
    p: SignedDistribution,
    h: float,
    tol: Optional[ToleranceConfig] = None,
) -> float:
    """Центральная разность H₂ вдоль траектории через p с шагом h."""
    tol = tol or ToleranceConfig()
    ahead = matrix_exponential(m, h, tol) @ p.weights
    behind = matrix_exponential(m, -h, tol) @ p.weights
    return (_h2(ahead) - _h2(behind)) / (2.0 * h)


# ------------------------------------------------------------------
# Trajectories
# ------------------------------------------------------------------

def evolve_trajectory(
    m: GeneratorMatrix,
    p0: SignedDistribution,
    times: Sequence[float],
    tol: Optional[ToleranceConfig] = None,
) -> TrajectoryReport:
    """
    Состояния e^{tΛ}p₀ для каждого t, вычисленные независимо от p₀.

    Raises:
        PreconditionError: times пусты, не возрастают или times[0] < 0;
            размерность p₀ не совпадает с генератором.
    """
    tol = tol or ToleranceConfig()
    grid = [float(t) for t in times]
    if not grid:
        raise PreconditionError("Нужно хотя бы одно время")
    if grid[0] < 0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise PreconditionError("Времена должны возрастать и начинаться с t ≥ 0")
    if p0.n != m.n:
        raise PreconditionError(f"Размерность p₀ = {p0.n} не совпадает с n = {m.n}")

    spectral = spectral_decompose(m, tol) if m.symmetry_residual() <= tol.eps_sym else None
    states = [SignedDistribution(matrix_exponential(m, t, tol, spectral) @ p0.weights) for t in grid]
    entropies = [renyi2_entropy(s) for s in states]
    derivatives = [entropy_derivative(m, s) for s in states]
    increments = np.diff(entropies)
    min_increment = float(increments.min()) if increments.size else 0.0
    if min_increment < 0:
        logger.debug("Наименьшее приращение H₂ вдоль траектории: {:.3e}", min_increment)
    return TrajectoryReport(
        times=grid,
        states=states,
        entropies=entropies,
        derivatives=derivatives,
        min_entropy_increment=min_increment,
    )


def signed_perturbations(
    n: int,
    scale: float = 0.5,
    seed: int = 0,
    per_vertex: int = 2,
) -> List[SignedDistribution]:
    """
    Допустимые начальные состояния: вершины симплекса e_k и их знаковые
    возмущения e_k + scale·(r − mean r), сумма которых остаётся равной 1.
    """
    rng = np.random.default_rng(seed)
    result = []
    for k in range(n):
        vertex = np.zeros(n)
        vertex[k] = 1.0
        result.append(SignedDistribution(vertex))
        for _ in range(per_vertex):
            r = rng.standard_normal(n)
            result.append(SignedDistribution(vertex + scale * (r - r.mean())))
    return result
