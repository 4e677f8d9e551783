"""
Точка входа командной строки.

Собирает конфигурацию из флагов, настраивает loguru и выполняет подкоманду.
Коды выхода: 0 — успех, 1 — ошибка вычислений или проваленная проверка,
2 — некорректные аргументы.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from loguru import logger

from config import Config, ToleranceConfig
from handlers import CommandHandlers, CommandOutcome, register_commands
from handlers.commands import DEFAULT_STEPS, DEFAULT_T_MAX
from model import AotError
from reports import rows_to_csv

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# ------------------------------------------------------------------
# Loguru configuration
# ------------------------------------------------------------------

def configure_logging(verbose: bool = False) -> None:
    logger.remove()  # убираем дефолтный handler
    logger.add(
        sys.stderr,
        format=(
            "<green>{time:HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<level>{message}</level>"
        ),
        level="DEBUG" if verbose else "INFO",
        colorize=True,
    )


# ------------------------------------------------------------------
# Arguments
# ------------------------------------------------------------------

def _common_flags() -> argparse.ArgumentParser:
    defaults = Config()
    tol = defaults.tolerances
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--matrix", metavar="PATH", help="Файл матрицы (.json или .csv)")
    parent.add_argument("--scale", metavar="P/Q", help="Точный рациональный множитель элементов, например 1/3")
    parent.add_argument("--t", type=float, action="append", metavar="FLOAT", help="Время (можно повторять)")
    parent.add_argument("--grid", type=int, default=defaults.grid_points, help="Число узлов сетки для τ")
    parent.add_argument("--width", type=float, default=defaults.width, help="Ширина скобки τ")
    parent.add_argument("--horizon", type=float, default=defaults.horizon, help="Горизонт общего пути")
    parent.add_argument("--delta", type=float, default=defaults.delta, help="Параметр базиса подготовки")
    parent.add_argument("--noise", type=float, default=defaults.noise_sigma, help="σ гауссова шума измерений")
    parent.add_argument("--seed", type=int, default=defaults.seed, help="Сид генератора шума")
    parent.add_argument("--p0", metavar="W1,W2,...", help="Начальное распределение (сумма 1)")
    parent.add_argument("--t-max", type=float, default=DEFAULT_T_MAX, help="Конец траектории")
    parent.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="Число шагов траектории")
    parent.add_argument("--tol-sym", type=float, default=tol.eps_sym)
    parent.add_argument("--tol-rowsum", type=float, default=tol.eps_rowsum)
    parent.add_argument("--tol-eig", type=float, default=tol.eps_eig)
    parent.add_argument("--tol-pos", type=float, default=tol.eps_pos)
    parent.add_argument("--tol-fit", type=float, default=tol.eps_fit)
    parent.add_argument("--format", choices=("json", "csv"), default="json", help="Формат вывода")
    parent.add_argument("--out", metavar="PATH", help="Файл вывода (по умолчанию stdout)")
    parent.add_argument("--verbose", action="store_true", help="Подробный лог (DEBUG)")
    return parent


def build_config(args: argparse.Namespace) -> Config:
    """Raises ValueError при недопустимых значениях флагов."""
    tolerances = ToleranceConfig(
        eps_sym=args.tol_sym,
        eps_rowsum=args.tol_rowsum,
        eps_eig=args.tol_eig,
        eps_pos=args.tol_pos,
        eps_fit=args.tol_fit,
    )
    return Config(
        tolerances=tolerances,
        grid_points=args.grid,
        width=args.width,
        horizon=args.horizon,
        delta=args.delta,
        noise_sigma=args.noise,
        seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aot",
        description="Стрела времени для динамики знаковых лапласианов",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_commands(subparsers, _common_flags())
    return parser


def _write(outcome: CommandOutcome, fmt: str, out: Optional[str]) -> None:
    if fmt == "csv" and outcome.csv_rows is not None:
        text = rows_to_csv(outcome.csv_rows)
    else:
        if fmt == "csv":
            logger.warning("Команда не даёт табличного вывода, используется JSON")
        text = outcome.report.to_json() + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("Результат записан в {}", out)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------
# Entry point
# ------------------------------------------------------------------

def main(argv: Optional[Sequence[str]] = None) -> int:
    arguments: List[str] = list(sys.argv[1:] if argv is None else argv)
    configure_logging()

    try:
        args = build_parser().parse_args(arguments)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        config = build_config(args)
    except ValueError as exc:
        logger.error("Некорректные параметры: {}", exc)
        return EXIT_USAGE

    try:
        outcome = CommandHandlers(config, command=arguments).dispatch(args)
    except AotError as exc:
        logger.error("{}: {}", type(exc).__name__, exc)
        return EXIT_FAILURE

    _write(outcome, args.format, args.out)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
