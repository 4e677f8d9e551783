from .matrix_file import (
    SUPPORTED_EXTENSIONS,
    MatrixFile,
    apply_scale,
    dump_matrix,
    load_matrix,
    parse_csv,
    parse_json,
    parse_scale,
    save_matrix,
)
from .run_report import ARTIFACT_VERSION, RunReport, rows_to_csv

__all__ = [
    "ARTIFACT_VERSION",
    "MatrixFile",
    "RunReport",
    "SUPPORTED_EXTENSIONS",
    "apply_scale",
    "dump_matrix",
    "load_matrix",
    "parse_csv",
    "parse_json",
    "parse_scale",
    "rows_to_csv",
    "save_matrix",
]
