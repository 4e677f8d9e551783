"""
Экстремальные элементы F(t) и B(t) и вердикт по знакам: строка таблицы.
"""

from dataclasses import dataclass
from typing import Optional

from config import ToleranceConfig
from model.generator import GeneratorMatrix, SpectralDecomposition
from .exponential import matrix_exponential
from .signs import SignClassification, classify_signs

DISPLAY_DECIMALS = 3


@dataclass(frozen=True)
class ExtremaRow:
    t: float
    forward: SignClassification
    backward: SignClassification

    @property
    def conclusive(self) -> bool:
        """Ровно один пропагатор строго положителен, а другой имеет отрицательный элемент."""
        return (self.forward.strictly_positive and self.backward.has_negative) or (
            self.backward.strictly_positive and self.forward.has_negative
        )

    @property
    def verdict(self) -> str:
        return "conclusive" if self.conclusive else "inconclusive"

    def rounded(self, decimals: int = DISPLAY_DECIMALS) -> dict:
        """Округление только для отображения (round-half-even)."""
        return {
            "t": self.t,
            "min_F": round(self.forward.min_entry, decimals),
            "max_F": round(self.forward.max_entry, decimals),
            "min_B": round(self.backward.min_entry, decimals),
            "max_B": round(self.backward.max_entry, decimals),
            "verdict": self.verdict,
        }

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "min_F": self.forward.min_entry,
            "max_F": self.forward.max_entry,
            "min_B": self.backward.min_entry,
            "max_B": self.backward.max_entry,
            "verdict": self.verdict,
        }


def extrema_row(
    m: GeneratorMatrix,
    t: float,
    tol: ToleranceConfig,
    spectral: Optional[SpectralDecomposition] = None,
) -> ExtremaRow:
    forward = matrix_exponential(m, t, tol, spectral)
    backward = matrix_exponential(m, -t, tol, spectral)
    return ExtremaRow(t=t, forward=classify_signs(forward, tol), backward=classify_signs(backward, tol))
