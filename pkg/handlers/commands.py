"""
Подкоманды командной строки.

CommandHandlers регистрирует подкоманды в argparse и делегирует работу
модулям model, propagator, positivity, entropy и experiment.
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from config import Config
from entropy import SignedDistribution, evolve_trajectory
from experiment import run_aot_protocol
from model import GeneratorMatrix, PreconditionError, spectral_decompose, validate_generator
from positivity import estimate_tau
from propagator import extrema_row
from reports import RunReport, load_matrix, parse_scale
from .repro import run_repro

DEFAULT_TABLE_TIMES: tuple[float, ...] = (0.05, 0.20)
DEFAULT_T_MAX = 2.0
DEFAULT_STEPS = 200


@dataclass
class CommandOutcome:
    """Отчёт команды, строки для CSV (если команда их даёт) и код выхода."""

    report: RunReport
    csv_rows: Optional[List[dict]] = None
    exit_code: int = 0


class CommandHandlers:
    """
    Выполняет подкоманды, зарегистрированные в argparse.
    Конфигурация и эхо команды передаются в __init__, глобального состояния нет.
    """

    def __init__(self, config: Config, command: Sequence[str] = ()) -> None:
        self._config = config
        self._command = list(command)

    def dispatch(self, args: argparse.Namespace) -> CommandOutcome:
        """Выполняет подкоманду, выбранную register_commands()."""
        routes: Dict[str, Callable[[argparse.Namespace], CommandOutcome]] = {
            "validate": self._on_validate,
            "extrema": self._on_extrema,
            "table1": self._on_extrema,
            "tau": self._on_tau,
            "aot": self._on_aot,
            "entropy-trace": self._on_entropy_trace,
            "repro": self._on_repro,
        }
        logger.debug("Подкоманда {}", args.command)
        return routes[args.command](args)

    # ------------------------------------------------------------------
    # Argument adapters
    # ------------------------------------------------------------------

    def _on_validate(self, args: argparse.Namespace) -> CommandOutcome:
        return self.cmd_validate(_require_matrix(args), parse_scale(args.scale))

    def _on_extrema(self, args: argparse.Namespace) -> CommandOutcome:
        return self.cmd_extrema(_require_matrix(args), args.t or list(DEFAULT_TABLE_TIMES), parse_scale(args.scale))

    def _on_tau(self, args: argparse.Namespace) -> CommandOutcome:
        return self.cmd_tau(_require_matrix(args), parse_scale(args.scale))

    def _on_aot(self, args: argparse.Namespace) -> CommandOutcome:
        if not args.t:
            raise PreconditionError("Для aot нужен хотя бы один --t")
        return self.cmd_aot(_require_matrix(args), args.t, parse_scale(args.scale))

    def _on_entropy_trace(self, args: argparse.Namespace) -> CommandOutcome:
        p0 = _parse_weights(args.p0) if args.p0 else None
        return self.cmd_entropy_trace(_require_matrix(args), p0, args.t_max, args.steps, parse_scale(args.scale))

    def _on_repro(self, args: argparse.Namespace) -> CommandOutcome:
        return self.cmd_repro()

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def _load(self, matrix_path: Path, scale: Optional[Fraction]) -> GeneratorMatrix:
        return load_matrix(matrix_path, scale).to_generator()

    def _report(self, results: dict) -> RunReport:
        return RunReport(command=self._command, config=self._config.as_dict(), results=results)

    def cmd_validate(self, matrix_path: Path, scale: Optional[Fraction] = None) -> CommandOutcome:
        m = self._load(matrix_path, scale)
        report = validate_generator(m, self._config.tolerances)
        logger.info(
            "Генератор {}×{}: симметрия {}, суммы строк {}, коранг {}, NSD {}",
            m.n, m.n, report.is_symmetric, report.rowsums_zero, report.corank, report.is_nsd,
        )
        return CommandOutcome(self._report({"validation": report.as_dict()}))

    def cmd_extrema(
        self,
        matrix_path: Path,
        times: Sequence[float],
        scale: Optional[Fraction] = None,
    ) -> CommandOutcome:
        tol = self._config.tolerances
        m = self._load(matrix_path, scale)
        if not validate_generator(m, tol).is_signed_laplacian:
            raise PreconditionError("Нужен симметричный генератор с нулевыми суммами строк и корангом 1")
        spectral = spectral_decompose(m, tol)
        rows = [extrema_row(m, float(t), tol, spectral) for t in times]
        for row in rows:
            logger.info("t = {}: {}", row.t, row.verdict)
        return CommandOutcome(
            self._report({
                "rows": [row.as_dict() for row in rows],
                "display": [row.rounded() for row in rows],
            }),
            csv_rows=[row.rounded() for row in rows],
        )

    def cmd_tau(self, matrix_path: Path, scale: Optional[Fraction] = None) -> CommandOutcome:
        c = self._config
        estimate = estimate_tau(
            self._load(matrix_path, scale), c.grid_points, c.width, c.tolerances, c.horizon, c.certify_samples
        )
        logger.info("τ: {} [{}, {}]", estimate.verdict.value, estimate.tau_lo, estimate.tau_hi)
        return CommandOutcome(self._report({"tau": estimate.as_dict()}))

    def cmd_aot(
        self,
        matrix_path: Path,
        times: Sequence[float],
        scale: Optional[Fraction] = None,
    ) -> CommandOutcome:
        m = self._load(matrix_path, scale)
        runs = [run_aot_protocol(m, float(t), self._config) for t in times]
        rows = [
            {
                "t": run.verdict.test_time,
                "verdict": run.verdict.kind.value,
                "min_F_hat": run.verdict.f_class.min_entry,
                "min_B_hat": run.verdict.b_class.min_entry,
                "reached_tau": run.reached_tau,
            }
            for run in runs
        ]
        return CommandOutcome(self._report({"runs": [run.as_dict() for run in runs]}), csv_rows=rows)

    def cmd_entropy_trace(
        self,
        matrix_path: Path,
        p0: Optional[Sequence[float]] = None,
        t_max: float = DEFAULT_T_MAX,
        steps: int = DEFAULT_STEPS,
        scale: Optional[Fraction] = None,
    ) -> CommandOutcome:
        """По умолчанию p₀ — первая вершина симплекса."""
        tol = self._config.tolerances
        m = self._load(matrix_path, scale)
        if not t_max > 0 or steps < 1:
            raise PreconditionError(f"Нужно t_max > 0 и steps ≥ 1, получено {t_max} и {steps}")
        if p0 is None:
            p0 = [1.0] + [0.0] * (m.n - 1)
        start = SignedDistribution.from_weights(p0, tol)
        trajectory = evolve_trajectory(m, start, np.linspace(0.0, t_max, steps + 1), tol)
        logger.info("Наименьшее приращение H₂: {:.3e}", trajectory.min_entropy_increment)
        return CommandOutcome(self._report({"trajectory": trajectory.as_dict()}), csv_rows=trajectory.rows())

    def cmd_repro(self) -> CommandOutcome:
        checks = run_repro(self._config)
        failed = [c.name for c in checks if not c.passed]
        results = {"checks": [c.as_dict() for c in checks], "passed": not failed, "failed": failed}
        rows = [{"name": c.name, "passed": c.passed} for c in checks]
        return CommandOutcome(self._report(results), csv_rows=rows, exit_code=1 if failed else 0)


# ------------------------------------------------------------------
# Registration
# ------------------------------------------------------------------

COMMANDS: Dict[str, str] = {
    "validate": "Проверить генератор: симметрия, суммы строк, коранг, спектр",
    "extrema": "Экстремумы F(t) и B(t) и вердикт по знакам",
    "tau": "Оценить время положительности τ",
    "aot": "Протокол стрелы времени при заданном t",
    "entropy-trace": "Траектория H₂ и dH₂/dt",
    "repro": "Все проверки на эталонных примерах",
}

# Синонимы подкоманд.
ALIASES: Dict[str, List[str]] = {"extrema": ["table1"]}


def register_commands(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    """Регистрирует все подкоманды; общие флаги берутся из parent."""
    for name, help_text in COMMANDS.items():
        subparsers.add_parser(
            name, aliases=ALIASES.get(name, []), parents=[parent], help=help_text, description=help_text
        )


# ------------------------------------------------------------------
# Helpers
# ------------------------------------------------------------------

def _require_matrix(args: argparse.Namespace) -> Path:
    if args.matrix is None:
        raise PreconditionError("Нужен --matrix PATH")
    return Path(args.matrix)


def _parse_weights(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise PreconditionError(f"Некорректное p0 '{text}': ожидаются числа через запятую") from exc
