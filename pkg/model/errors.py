"""
Исключения предметной области.

Все ошибки библиотеки наследуются от AotError, поэтому точка входа
может перехватить их одним except и вернуть ненулевой код выхода.
"""

from typing import Optional


class AotError(Exception):
    """Базовая ошибка библиотеки."""


class GeneratorShapeError(AotError, ValueError):
    """Матрица не квадратная или слишком мала (n < 2)."""


class NonFiniteError(AotError, ValueError):
    """Во входных данных есть NaN или бесконечность."""


class AsymmetricGeneratorError(AotError, ValueError):
    """Операция требует симметричного генератора."""


class PreconditionError(AotError, ValueError):
    """Нарушено предусловие операции."""


class DegenerateGapError(PreconditionError):
    """λ₂ ≥ 0: нет спектральной щели, оценка времени положительности невозможна."""


class EigensolverError(AotError, RuntimeError):
    """Собственные значения не сошлись."""


class PropagatorOverflowError(AotError, OverflowError):
    """Экспонента выходит за пределы чисел с плавающей точкой."""


class SingularObservationError(AotError, ValueError):
    """Матрица наблюдений вырождена."""

    def __init__(self, smallest_singular_value: float, message: str) -> None:
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


class UnusableFitError(AotError, ValueError):
    """Невязки подгонки пропагаторов выше eps_fit."""


class MatrixFileError(AotError, ValueError):
    """Ошибка разбора файла матрицы; line/column указывают место (с 1)."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        where = ""
        if line is not None:
            where = f" (строка {line}" + (f", позиция {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column
