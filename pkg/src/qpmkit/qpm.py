"""Quasi-phase-matching kinematics.

Wavevectors, required poling periods, phase mismatch at a fixed grating,
sinc^2 tuning curves and effective nonlinearities. A process is labelled by
its polarization triple: first letter the harmonic/sum field, last two the
fundamentals, all referred to crystal axes (propagation along X, so every
polarization is Y or Z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionModel, index
from .errors import (
    AmbiguousSolutionError,
    ConvergenceError,
    NoSolutionInWindowError,
    PerfectPhaseMatchError,
)

TWO_PI = 2.0 * math.pi

# below this index-difference magnitude the formula denominator is treated as
# zero (no grating needed); below double-precision meaningfulness
PERFECT_PHASE_MATCH_THRESHOLD = 1e-12

# refinement targets
SOLVER_TOLERANCE_RAD_PER_UM = 1e-9
PERIOD_TOLERANCE_UM = 1e-6

_ALLOWED_POLS = ("Y", "Z")


@dataclass(frozen=True)
class ProcessSpec:
    """One chi^(2) interaction: polarization triple, QPM order, optional d."""

    pol_sh: str
    pol_f1: str
    pol_f2: str
    order: int = 1
    d_element_pm_per_v: float | None = None

    def __post_init__(self):
        for pol in (self.pol_sh, self.pol_f1, self.pol_f2):
            if pol not in _ALLOWED_POLS:
                raise ValueError(
                    f"polarization must be Y or Z for propagation along X, got {pol!r}"
                )
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"QPM order must be a positive integer, got {self.order!r}")

    @classmethod
    def from_triple(cls, triple: str, order: int = 1, d_element_pm_per_v=None):
        if len(triple) != 3:
            raise ValueError(f"polarization triple must have three letters, got {triple!r}")
        a, b, c = triple.upper()
        return cls(a, b, c, order=order, d_element_pm_per_v=d_element_pm_per_v)

    @property
    def triple(self) -> str:
        return self.pol_sh + self.pol_f1 + self.pol_f2

    @property
    def label(self) -> str:
        return f"{self.triple}:{self.order}"


@dataclass(frozen=True)
class CrystalSpec:
    """Poled-crystal geometry: interaction length, physical grating period, duty cycle."""

    length_mm: float
    grating_period_um: float
    duty_cycle: float = 0.5

    def __post_init__(self):
        if self.length_mm <= 0.0:
            raise ValueError("crystal length must be positive")
        if self.grating_period_um <= 0.0:
            raise ValueError("grating period must be positive")
        if not (0.0 < self.duty_cycle < 1.0):
            raise ValueError("duty cycle must lie in (0, 1)")

    @property
    def length_um(self) -> float:
        return self.length_mm * 1000.0


@dataclass(frozen=True)
class QpmSolution:
    """A solved phase-matching point for one process at a fixed grating."""

    lam_fund_um: float
    temp_c: float
    grating_period_um: float
    order: int
    residual_delta_k: float


class SampledSpectrum:
    """Strictly increasing wavelength grid (um) with nonnegative intensities."""

    __slots__ = ("lam_grid_um", "intensity")

    def __init__(self, lam_grid_um, intensity):
        lam = np.asarray(lam_grid_um, dtype=float)
        inten = np.asarray(intensity, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("wavelength grid must be a nonempty 1-D array")
        if inten.shape != lam.shape:
            raise ValueError("intensity and wavelength grids must have equal length")
        if not np.all(np.diff(lam) > 0.0):
            raise ValueError("wavelength grid must be strictly increasing")
        if not np.all(inten >= 0.0):
            raise ValueError("intensities must be nonnegative")
        lam = lam.copy()
        inten = inten.copy()
        lam.setflags(write=False)
        inten.setflags(write=False)
        self.lam_grid_um = lam
        self.intensity = inten

    def __len__(self):
        return self.lam_grid_um.size

    def normalized(self) -> "SampledSpectrum":
        """Rescale so the maximum sample is exactly 1."""
        peak = float(self.intensity.max())
        if peak <= 0.0:
            raise ValueError("cannot normalize an all-zero spectrum")
        return SampledSpectrum(self.lam_grid_um, self.intensity / peak)


def wavevector(model: DispersionModel, axis: str, lam_um, temp_c: float):
    """k = 2 pi n(lambda, T) / lambda in rad/um."""
    k = TWO_PI * np.asarray(index(model, axis, lam_um, temp_c)) / np.asarray(lam_um, dtype=float)
    return float(k) if np.isscalar(lam_um) else k


def _denominator(model: DispersionModel, process: ProcessSpec, lam_um, temp_c: float):
    """2 n_i(lambda/2) - n_j(lambda) - n_k(lambda), vectorized."""
    lam = np.asarray(lam_um, dtype=float)
    n_sh = index(model, process.pol_sh, lam / 2.0, temp_c)
    n_f1 = index(model, process.pol_f1, lam, temp_c)
    n_f2 = index(model, process.pol_f2, lam, temp_c)
    return 2.0 * np.asarray(n_sh) - np.asarray(n_f1) - np.asarray(n_f2)


def poling_period(
    model: DispersionModel,
    process: ProcessSpec,
    lam_um: float,
    temp_c: float,
    signed: bool = False,
) -> float:
    """First-order poling period lambda / [2 n_i(lambda/2) - n_j(lambda) - n_k(lambda)] in um.

    Returns the positive physical magnitude by default; the raw formula value
    (negative when the harmonic index falls below the mean fundamental index,
    the anomalous ordering flagged by anomalous_ordering()) via signed=True.
    """
    denom = float(_denominator(model, process, lam_um, temp_c))
    if abs(denom) < PERFECT_PHASE_MATCH_THRESHOLD:
        raise PerfectPhaseMatchError(
            f"{process.triple} at {lam_um} um / {temp_c} C is phase-matched without a grating"
        )
    period = lam_um / denom
    return period if signed else abs(period)


def anomalous_ordering(
    model: DispersionModel, process: ProcessSpec, lam_um: float, temp_c: float
) -> bool:
    """True when the harmonic index lies below the mean fundamental index.

    The formula period is negative there; the physical grating compensates
    the mismatch through its -m Fourier order.
    """
    return float(_denominator(model, process, lam_um, temp_c)) < 0.0


def grating_period_for_order(
    model: DispersionModel, process: ProcessSpec, lam_um: float, temp_c: float
) -> float:
    """Physical grating period m * Lambda_ijk that matches the process at order m."""
    return process.order * poling_period(model, process, lam_um, temp_c)


def grating_period_curve(
    model: DispersionModel, process: ProcessSpec, lam_grid_um, temp_c: float
) -> np.ndarray:
    """grating_period_for_order sampled over a wavelength grid.

    Grid points within the perfect-phase-match threshold evaluate to +inf
    rather than raising, so curves remain plottable across a pole.
    """
    denom = _denominator(model, process, lam_grid_um, temp_c)
    lam = np.asarray(lam_grid_um, dtype=float)
    out = np.full(lam.shape, np.inf)
    ok = np.abs(denom) >= PERFECT_PHASE_MATCH_THRESHOLD
    out[ok] = process.order * np.abs(lam[ok] / denom[ok])
    return out


def _mismatch(model, process, lam1_um, lam2_um, grating_period_um, temp_c):
    lam3 = 1.0 / (1.0 / lam1_um + 1.0 / lam2_um)
    k3 = TWO_PI * np.asarray(index(model, process.pol_sh, lam3, temp_c)) / lam3
    k1 = TWO_PI * np.asarray(index(model, process.pol_f1, lam1_um, temp_c)) / lam1_um
    k2 = TWO_PI * np.asarray(index(model, process.pol_f2, lam2_um, temp_c)) / lam2_um
    return np.abs(k3 - k1 - k2) - TWO_PI * process.order / grating_period_um


def phase_mismatch(
    model: DispersionModel,
    process: ProcessSpec,
    lam1_um: float,
    lam2_um: float,
    crystal: CrystalSpec,
    temp_c: float,
) -> float:
    """Signed residual mismatch |k_sh - k_f1 - k_f2| - 2 pi m / Lambda_g in rad/um.

    The grating supplies +/-m Fourier orders, so the material term enters as a
    magnitude; the value is invariant under swapping the two fundamental
    (polarization, wavelength) pairs. 1/lambda_sum = 1/lambda_1 + 1/lambda_2.
    """
    return float(
        _mismatch(model, process, lam1_um, lam2_um, crystal.grating_period_um, temp_c)
    )


def conversion_efficiency(delta_k_rad_per_um, length_mm: float):
    """Plane-wave low-conversion efficiency sinc^2(delta_k L / 2), in [0, 1]."""
    x = np.asarray(delta_k_rad_per_um, dtype=float) * (length_mm * 1000.0) / 2.0
    val = np.square(np.sinc(x / np.pi))
    return float(val) if np.isscalar(delta_k_rad_per_um) else val


def tuning_curve(
    model: DispersionModel,
    process: ProcessSpec,
    crystal: CrystalSpec,
    temp_c: float,
    lam_grid_um,
) -> SampledSpectrum:
    """Degenerate-SHG tuning curve sinc^2(delta_k L / 2) over a fundamental grid."""
    lam = np.asarray(lam_grid_um, dtype=float)
    if lam.size == 0:
        raise ValueError("wavelength grid must not be empty")
    dk = _mismatch(model, process, lam, lam, crystal.grating_period_um, temp_c)
    return SampledSpectrum(lam, conversion_efficiency(dk, crystal.length_mm))


def effective_nonlinearity(
    d_pm_per_v: float, order: int, duty_cycle: float = 0.5
) -> float:
    """Effective QPM coefficient magnitude 2 d |sin(pi m D)| / (pi m), pm/V.

    At 50% duty cycle this is exactly 2d/(pi m) for odd m and 0 for even m.
    """
    if not isinstance(order, int) or order < 1:
        raise ValueError("QPM order must be a positive integer")
    if not (0.0 < duty_cycle < 1.0):
        raise ValueError("duty cycle must lie in (0, 1)")
    if duty_cycle == 0.5:
        if order % 2 == 0:
            return 0.0
        return 2.0 * d_pm_per_v / (math.pi * order)
    return 2.0 * d_pm_per_v * abs(math.sin(math.pi * order * duty_cycle)) / (math.pi * order)


def match_wavelength(
    model: DispersionModel,
    process: ProcessSpec,
    grating_period_um: float,
    temp_c: float,
    lam_window_um: tuple[float, float],
    scan_points: int = 512,
) -> QpmSolution:
    """Solve grating_period_for_order(lambda) = Lambda_g for lambda in a window.

    Scans the window, brackets every sign change of the period difference and
    refines by bisection until |delta_k| <= 1e-9 rad/um. Exactly one solution
    must exist in the window: zero raises NoSolutionInWindow, several raise
    AmbiguousSolution (narrow the window).
    """
    lo, hi = float(lam_window_um[0]), float(lam_window_um[1])
    if not lo < hi:
        raise ValueError("wavelength window must satisfy min < max")
    if scan_points < 16:
        raise ValueError("scan_points must be at least 16")
    grid = np.linspace(lo, hi, scan_points)
    f = grating_period_curve(model, process, grid, temp_c) - grating_period_um

    roots: list[float] = []
    for i in range(len(grid) - 1):
        a, b, fa, fb = grid[i], grid[i + 1], f[i], f[i + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if fa == 0.0:
            roots.append(float(a))
            continue
        if fa * fb < 0.0:
            roots.append(
                _bisect_period(model, process, grating_period_um, temp_c, a, b, fa, fb)
            )
    if f[-1] == 0.0:
        roots.append(float(grid[-1]))

    roots = sorted(set(roots))
    if not roots:
        raise NoSolutionInWindowError(
            f"{process.label}: no wavelength in [{lo}, {hi}] um matches "
            f"{grating_period_um} um at {temp_c} C"
        )
    if len(roots) > 1:
        raise AmbiguousSolutionError(
            f"{process.label}: {len(roots)} wavelengths match {grating_period_um} um "
            f"in [{lo}, {hi}] um: {roots}; narrow the window"
        )
    lam = roots[0]
    residual = float(_mismatch(model, process, lam, lam, grating_period_um, temp_c))
    if abs(residual) > SOLVER_TOLERANCE_RAD_PER_UM:
        raise ConvergenceError(
            f"{process.label}: residual mismatch {residual:.3e} rad/um above tolerance"
        )
    return QpmSolution(
        lam_fund_um=lam,
        temp_c=temp_c,
        grating_period_um=grating_period_um,
        order=process.order,
        residual_delta_k=residual,
    )


def _bisect_period(model, process, grating_period_um, temp_c, a, b, fa, fb) -> float:
    """Bisect on the period difference until the mismatch meets tolerance."""
    for _ in range(200):
        mid = 0.5 * (a + b)
        if abs(float(_mismatch(model, process, mid, mid, grating_period_um, temp_c))) \
                <= SOLVER_TOLERANCE_RAD_PER_UM:
            return float(mid)
        fm = float(grating_period_curve(model, process, np.array([mid]), temp_c)[0]) \
            - grating_period_um
        if fm == 0.0:
            return float(mid)
        if fa * fm < 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    raise ConvergenceError("bisection failed to reach the mismatch tolerance")
