"""
Чтение и запись файлов матриц.

Поддерживаются JSON ({"n": 4, "entries": [...], "name": "..."}, элементы
построчно) и CSV (n строк по n чисел через запятую). Масштаб вида "1/3"
применяется точно через fractions.Fraction.
"""

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ValidationError, field_validator, model_validator

from model.errors import MatrixFileError
from model.generator import GeneratorMatrix

SUPPORTED_EXTENSIONS: frozenset[str] = frozenset({".json", ".csv"})


class MatrixFile(BaseModel):
    n: int
    entries: List[float]
    name: Optional[str] = None

    @field_validator("entries")
    @classmethod
    def _finite(cls, entries: List[float]) -> List[float]:
        for k, value in enumerate(entries):
            if not math.isfinite(value):
                raise ValueError(f"элемент {k} не конечен: {value}")
        return entries

    @model_validator(mode="after")
    def _square(self) -> "MatrixFile":
        if self.n < 1 or len(self.entries) != self.n * self.n:
            raise ValueError(f"ожидается n² = {self.n * self.n} элементов, получено {len(self.entries)}")
        return self

    def to_generator(self) -> GeneratorMatrix:
        return GeneratorMatrix.from_array(np.array(self.entries, dtype=float).reshape(self.n, self.n))

    @classmethod
    def from_generator(cls, m: GeneratorMatrix, name: Optional[str] = None) -> "MatrixFile":
        return cls(n=m.n, entries=[float(x) for x in m.entries.ravel()], name=name)


# ------------------------------------------------------------------
# Parsing
# ------------------------------------------------------------------

def parse_scale(text: Optional[str]) -> Optional[Fraction]:
    """'1/3' → Fraction(1, 3); None → None."""
    if text is None:
        return None
    try:
        scale = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixFileError(f"Некорректный масштаб '{text}': {exc}") from exc
    return scale


def parse_json(text: str) -> MatrixFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"Некорректный JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    try:
        return MatrixFile.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<корень>"
        raise MatrixFileError(f"Некорректный файл матрицы: {where}: {first['msg']}") from exc


def parse_csv(text: str, name: Optional[str] = None) -> MatrixFile:
    rows: List[List[float]] = []
    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        values = []
        for col_no, cell in enumerate(row, start=1):
            try:
                values.append(float(cell))
            except ValueError as exc:
                raise MatrixFileError(f"Не число: '{cell.strip()}'", line=line_no, column=col_no) from exc
        if rows and len(values) != len(rows[0]):
            raise MatrixFileError(
                f"Ожидается {len(rows[0])} элементов в строке, получено {len(values)}", line=line_no
            )
        rows.append(values)
    if not rows:
        raise MatrixFileError("Файл матрицы пуст")
    if len(rows) != len(rows[0]):
        raise MatrixFileError(f"Матрица не квадратная: {len(rows)} строк по {len(rows[0])} элементов")
    try:
        return MatrixFile(n=len(rows), entries=[x for row in rows for x in row], name=name)
    except ValidationError as exc:
        raise MatrixFileError(f"Некорректная матрица: {exc.errors()[0]['msg']}") from exc


def apply_scale(matrix: MatrixFile, scale: Optional[Fraction]) -> MatrixFile:
    """Умножает элементы на рациональный масштаб с одним округлением на элемент."""
    if scale is None:
        return matrix
    entries = [float(Fraction(x) * scale) for x in matrix.entries]
    return MatrixFile(n=matrix.n, entries=entries, name=matrix.name)


def load_matrix(path: Union[str, Path], scale: Optional[Fraction] = None) -> MatrixFile:
    """
    Читает файл матрицы по расширению (.json или .csv).

    Raises:
        MatrixFileError: файл не читается, формат неизвестен или содержимое некорректно.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in SUPPORTED_EXTENSIONS:
        raise MatrixFileError(f"Неподдерживаемый формат '{suffix}', ожидается один из {sorted(SUPPORTED_EXTENSIONS)}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"Не удалось прочитать {path}: {exc}") from exc

    matrix = parse_json(text) if suffix == ".json" else parse_csv(text, name=path.stem)
    logger.debug("Загружена матрица '{}' ({}×{}) из {}", matrix.name or path.stem, matrix.n, matrix.n, path)
    return apply_scale(matrix, scale)


def dump_matrix(matrix: MatrixFile) -> str:
    return matrix.model_dump_json(indent=2)


def save_matrix(matrix: MatrixFile, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_matrix(matrix) + "\n", encoding="utf-8")
