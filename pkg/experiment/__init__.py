from .protocol import (
    AotVerdict,
    FitResult,
    PreparationBasis,
    ProtocolReport,
    VerdictKind,
    aot_verdict,
    default_basis,
    fit_propagators,
    run_aot_protocol,
    simulate_experiment,
)

__all__ = [
    "AotVerdict",
    "FitResult",
    "PreparationBasis",
    "ProtocolReport",
    "VerdictKind",
    "aot_verdict",
    "default_basis",
    "fit_propagators",
    "run_aot_protocol",
    "simulate_experiment",
]
