from .commands import COMMANDS, CommandHandlers, CommandOutcome, register_commands
from .repro import CHECKS, ReproCheck, run_repro

__all__ = ["CHECKS", "COMMANDS", "CommandHandlers", "CommandOutcome", "ReproCheck", "register_commands", "run_repro"]
