"""Exception hierarchy.

Each class carries the CLI exit code it maps to.
"""


class NoncyclicError(Exception):
    exit_code = 1


class SchemaError(NoncyclicError, ValueError):
    """Malformed input file, config block or model parameter."""

    exit_code = 2


class DomainError(SchemaError):
    """Parameter outside the domain of a model (e.g. R <= 0)."""


class UndefinedPhaseError(NoncyclicError):
    """Overlap too close to zero for its argument to mean anything."""

    exit_code = 3


class DegeneracyError(NoncyclicError):
    """Spectral gap of the tracked level fell below the threshold."""

    exit_code = 4


class AntipodalError(NoncyclicError):
    """Endpoints are antipodal, so the shortest geodesic is not unique."""

    exit_code = 5


class ResolutionError(NoncyclicError):
    """Sampling or step size too coarse for the requested computation."""

    exit_code = 6


class StepSizeError(ResolutionError):
    pass


class NormDriftError(ResolutionError):
    pass


class MeshError(ResolutionError):
    pass
