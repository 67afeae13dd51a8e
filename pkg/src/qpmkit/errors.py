"""Exception hierarchy shared by all qpmkit modules."""


class QpmKitError(Exception):
    """Base class for all qpmkit errors."""


class CrystalNotFoundError(QpmKitError):
    """Requested crystal id is not present in the database directory."""


class SchemaError(QpmKitError):
    """Crystal-database document is malformed or violates a load-time invariant."""


class WindowError(QpmKitError):
    """Wavelength or temperature outside a model's validity window.

    Raised eagerly instead of extrapolating: Sellmeier fits evaluated outside
    their window silently produce wrong phase-matching predictions.
    """


class PerfectPhaseMatchError(QpmKitError):
    """Index-difference denominator below 1e-12: no grating is needed."""


class DegenerateCurvesError(QpmKitError):
    """The two grating-period curves are identical over the scan grid."""


class NoSolutionInWindowError(QpmKitError):
    """No root/crossing exists inside the requested search window."""


class AmbiguousSolutionError(QpmKitError):
    """More than one solution inside the search window; narrow it."""


class ConvergenceError(QpmKitError):
    """Iterative refinement or least-squares fit failed to converge."""
