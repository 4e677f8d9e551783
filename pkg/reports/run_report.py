"""
Отчёт о запуске команды: эхо команды и конфигурации, результаты, версия.
"""

import csv
import io
from typing import Any, Dict, List, Sequence

from pydantic import BaseModel

ARTIFACT_VERSION = "1.0.0"


class RunReport(BaseModel):
    """Детерминирован при фиксированных входных данных и seed: без отметок времени."""

    command: List[str]
    config: Dict[str, Any]
    results: Dict[str, Any]
    version: str = ARTIFACT_VERSION

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def rows_to_csv(rows: Sequence[Dict[str, Any]]) -> str:
    """CSV с заголовком из ключей первой строки; пустой список — пустая строка."""
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buffer.getvalue()
