"""
Классификация знаков элементов пропагатора.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from config import ToleranceConfig


class SignKind(str, Enum):
    STRICTLY_POSITIVE = "StrictlyPositive"
    HAS_NEGATIVE_ENTRY = "HasNegativeEntry"
    NONNEGATIVE_WITH_ZERO = "NonnegativeWithZero"


@dataclass(frozen=True)
class SignClassification:
    """
    kind определяется минимальным элементом с запасом eps_pos:
    > eps_pos — строго положительна, < −eps_pos — есть отрицательный элемент,
    иначе — неотрицательна с нулём.
    """

    kind: SignKind
    min_entry: float
    max_entry: float
    argmin: Tuple[int, int]

    @property
    def strictly_positive(self) -> bool:
        return self.kind is SignKind.STRICTLY_POSITIVE

    @property
    def has_negative(self) -> bool:
        return self.kind is SignKind.HAS_NEGATIVE_ENTRY

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "min_entry": self.min_entry,
            "max_entry": self.max_entry,
            "argmin": list(self.argmin),
        }


def classify_signs(a: np.ndarray, tol: ToleranceConfig) -> SignClassification:
    a = np.asarray(a, dtype=float)
    flat = int(np.argmin(a))
    i, j = np.unravel_index(flat, a.shape)
    min_entry = float(a[i, j])
    if min_entry > tol.eps_pos:
        kind = SignKind.STRICTLY_POSITIVE
    elif min_entry < -tol.eps_pos:
        kind = SignKind.HAS_NEGATIVE_ENTRY
    else:
        kind = SignKind.NONNEGATIVE_WITH_ZERO
    return SignClassification(kind=kind, min_entry=min_entry, max_entry=float(np.max(a)), argmin=(int(i), int(j)))


def rows_with_negative_entry(a: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Булев вектор: в строке i есть элемент < −eps_pos."""
    return np.any(np.asarray(a, dtype=float) < -tol.eps_pos, axis=1)


def is_cyclic_permutation(a: np.ndarray, atol: float) -> bool:
    """Матрица циклического сдвига координат (в любую сторону, кроме тождественного)."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    identity = np.eye(n)
    for shift in range(1, n):
        if np.allclose(a, np.roll(identity, shift, axis=1), rtol=0.0, atol=atol):
            return True
    return False
