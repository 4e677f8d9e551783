from .errors import (
    AotError,
    AsymmetricGeneratorError,
    DegenerateGapError,
    EigensolverError,
    GeneratorShapeError,
    MatrixFileError,
    NonFiniteError,
    PreconditionError,
    PropagatorOverflowError,
    SingularObservationError,
    UnusableFitError,
)
from .generator import (
    GeneratorMatrix,
    SpectralDecomposition,
    ValidationReport,
    check_second_law,
    spectral_decompose,
    validate_generator,
)

__all__ = [
    "AotError",
    "AsymmetricGeneratorError",
    "DegenerateGapError",
    "EigensolverError",
    "GeneratorMatrix",
    "GeneratorShapeError",
    "MatrixFileError",
    "NonFiniteError",
    "PreconditionError",
    "PropagatorOverflowError",
    "SingularObservationError",
    "SpectralDecomposition",
    "UnusableFitError",
    "ValidationReport",
    "check_second_law",
    "spectral_decompose",
    "validate_generator",
]
