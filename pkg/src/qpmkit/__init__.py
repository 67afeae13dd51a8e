"""qpmkit: quasi-phase-matching design toolkit for periodically poled crystals."""

__version__ = "0.1.0"

from .coincide import (  # noqa: F401
    Coincidence,
    PulsedOverlapReport,
    find_multiway,
    find_pairwise,
    pulsed_overlap,
    tune_temperature,
)
from .dispersion import (  # noqa: F401
    DispersionModel,
    SellmeierForm,
    ThermoOpticForm,
    index,
    index_derivative,
    list_crystals,
    load_crystal,
    load_model,
    resolve_db_dir,
)
from .entangle import (  # noqa: F401
    ConcurrenceGraph,
    CovarianceState,
    Mode,
    adjacency_matrix,
    build_quadripartite,
    evolve_vacuum,
    ppt_min_eigenvalue,
)
from .errors import (  # noqa: F401
    AmbiguousSolutionError,
    ConvergenceError,
    CrystalNotFoundError,
    DegenerateCurvesError,
    NoSolutionInWindowError,
    PerfectPhaseMatchError,
    QpmKitError,
    SchemaError,
    WindowError,
)
from .qpm import (  # noqa: F401
    CrystalSpec,
    ProcessSpec,
    QpmSolution,
    SampledSpectrum,
    effective_nonlinearity,
    grating_period_curve,
    grating_period_for_order,
    match_wavelength,
    phase_mismatch,
    poling_period,
    tuning_curve,
    wavevector,
)
from .spectra import (  # noqa: F401
    PeakFit,
    PredictedCenter,
    PumpSpectrum,
    fit_peak,
    predicted_centers,
    sh_spectrum,
    spectrum_to_csv,
)
