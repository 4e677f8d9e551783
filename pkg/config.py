"""
Конфигурация приложения.

Допуски и параметры запуска задаются через ToleranceConfig и Config, а не константами в модулях.
Переменные окружения не читаются: всё задаётся флагами командной строки.
"""

import math
from dataclasses import dataclass, fields, replace
from typing import Optional


@dataclass(frozen=True)
class ToleranceConfig:
    """
    Численные допуски.

    eps_eig относительный: порог нуля для собственных значений равен
    eps_eig × (оценка спектрального радиуса), см. eig_threshold().
    Остальные допуски абсолютные.
    """

    eps_sym: float = 1e-10
    eps_rowsum: float = 1e-10
    eps_eig: float = 1e-9
    eps_pos: float = 1e-12
    eps_fit: float = 1e-8

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise ValueError(f"Допуск {f.name} должен быть конечным положительным числом, получено {value!r}")

    def eig_threshold(self, spectral_radius: float) -> float:
        """Порог нуля для собственных значений матрицы с данным спектральным радиусом."""
        if spectral_radius > 0:
            return self.eps_eig * spectral_radius
        return self.eps_eig

    def with_overrides(self, **overrides: Optional[float]) -> "ToleranceConfig":
        """Копия с заменой заданных (не None) допусков."""
        given = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **given)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class Config:
    """
    Параметры запуска по умолчанию.

    Instantiate один раз в точке входа и передавайте в команды через конструктор.
    """

    def __init__(
        self,
        tolerances: Optional[ToleranceConfig] = None,
        grid_points: int = 512,
        width: float = 1e-4,
        horizon: Optional[float] = None,
        certify_samples: int = 64,
        delta: float = 0.1,
        noise_sigma: float = 0.0,
        seed: int = 0,
        fd_step: float = 1e-5,
    ) -> None:
        self.tolerances: ToleranceConfig = tolerances or ToleranceConfig()
        self.grid_points: int = grid_points
        self.width: float = width
        self.horizon: Optional[float] = horizon
        self.certify_samples: int = certify_samples
        self.delta: float = delta
        self.noise_sigma: float = noise_sigma
        self.seed: int = seed
        self.fd_step: float = fd_step

        self._validate()

    def _validate(self) -> None:
        """Выбрасывает ValueError, если параметры вне допустимых диапазонов."""
        if self.grid_points < 16:
            raise ValueError(f"grid_points должно быть не меньше 16, получено {self.grid_points}")
        if not self.width > 0:
            raise ValueError(f"width должно быть положительным, получено {self.width}")
        if self.horizon is not None and not self.horizon > 0:
            raise ValueError(f"horizon должно быть положительным, получено {self.horizon}")
        if self.certify_samples < 1:
            raise ValueError(f"certify_samples должно быть не меньше 1, получено {self.certify_samples}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta должно лежать в (0, 1), получено {self.delta}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise должно быть неотрицательным, получено {self.noise_sigma}")
        if not self.fd_step > 0:
            raise ValueError(f"fd_step должно быть положительным, получено {self.fd_step}")

    def as_dict(self) -> dict:
        """Эхо конфигурации для отчётов: все допуски и сиды."""
        return {
            "tolerances": self.tolerances.as_dict(),
            "grid_points": self.grid_points,
            "width": self.width,
            "horizon": self.horizon,
            "certify_samples": self.certify_samples,
            "delta": self.delta,
            "noise_sigma": self.noise_sigma,
            "seed": self.seed,
            "fd_step": self.fd_step,
        }
