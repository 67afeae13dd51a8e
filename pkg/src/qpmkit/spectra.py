"""Broadband-pump second-harmonic spectra and peak extraction.

An undepleted plane-wave model with flat spectral phase: every SHG/SFG pair
inside the pump envelope contributes coherently, weighted by the sinc of its
own mismatch. Peak *centers* are the meaningful output; measured widths from
a depleted pump are out of scope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .dispersion import DispersionModel
from .errors import ConvergenceError
from .qpm import CrystalSpec, ProcessSpec, SampledSpectrum, _mismatch, match_wavelength

DEFAULT_QUADRATURE_NODES = 401
PUMP_COVERAGE_SIGMAS = 3.0

_2SQRT2LN2 = 2.0 * math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class PumpSpectrum:
    """Gaussian pump amplitude envelope.

    fwhm_nm is the *intensity* FWHM in wavelength (the amplitude envelope is
    sqrt(2) wider); the envelope is Gaussian in optical frequency.
    """

    center_um: float
    fwhm_nm: float
    shape: str = "gaussian"

    def __post_init__(self):
        if self.fwhm_nm <= 0.0:
            raise ValueError("pump FWHM must be positive")
        if self.shape != "gaussian":
            raise ValueError(f"unsupported pump shape {self.shape!r}")

    @property
    def amplitude_sigma_inv_um(self) -> float:
        """Amplitude-envelope sigma in 1/um (frequency units up to 2 pi c)."""
        du_fwhm = (self.fwhm_nm * 1e-3) / self.center_um**2
        return du_fwhm / (2.0 * math.sqrt(math.log(2.0)))


@dataclass(frozen=True)
class PeakFit:
    amplitude: float
    center_nm: float
    sigma_nm: float
    fwhm_nm: float
    residual_rms: float


@dataclass(frozen=True)
class PredictedCenter:
    """CW phase-matched SH wavelength of one process at a fixed grating."""

    process: ProcessSpec
    lam_fund_um: float
    sh_center_nm: float


def sh_spectrum(
    model: DispersionModel,
    process: ProcessSpec,
    crystal: CrystalSpec,
    temp_c: float,
    pump: PumpSpectrum,
    sh_grid_um,
    nodes: int = DEFAULT_QUADRATURE_NODES,
    normalize: bool = True,
) -> SampledSpectrum:
    """SH/SF intensity over an SH wavelength grid for a broadband Gaussian pump.

    I(U) ~ |integral A(u) A(U-u) sinc(delta_k(u, U-u) L/2) du|^2 with u the
    fundamental optical frequency (1/um), integrated by composite Simpson over
    +/-3 sigma of the pump amplitude with `nodes` points (odd, >= 401; the
    result is invariant to 1e-9 under node doubling). Peak normalized to 1
    unless normalize=False, which returns raw quadrature units for sweeps.
    """
    if nodes < DEFAULT_QUADRATURE_NODES:
        raise ValueError(f"quadrature needs at least {DEFAULT_QUADRATURE_NODES} nodes")
    if nodes % 2 == 0:
        raise ValueError("composite Simpson needs an odd node count")
    sh = np.asarray(sh_grid_um, dtype=float)
    if sh.size == 0:
        raise ValueError("SH grid must not be empty")

    u0 = 1.0 / pump.center_um
    s = pump.amplitude_sigma_inv_um
    u = np.linspace(u0 - PUMP_COVERAGE_SIGMAS * s, u0 + PUMP_COVERAGE_SIGMAS * s, nodes)
    h = u[1] - u[0]
    w = np.ones(nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    lam1 = 1.0 / u

    out = np.empty(sh.shape)
    half_length_um = crystal.length_um / 2.0
    for i, lam_sh in enumerate(sh):
        u2 = 1.0 / lam_sh - u
        lam2 = 1.0 / u2
        amp = np.exp(-((u - u0) ** 2) / (2.0 * s * s)) * np.exp(
            -((u2 - u0) ** 2) / (2.0 * s * s)
        )
        dk = _mismatch(model, process, lam1, lam2, crystal.grating_period_um, temp_c)
        x = dk * half_length_um
        field = (h / 3.0) * np.sum(w * amp * np.sinc(x / np.pi))
        out[i] = field * field

    spectrum = SampledSpectrum(sh, out)
    return spectrum.normalized() if normalize else spectrum


def _gaussian(lam_nm, amplitude, center_nm, sigma_nm):
    return amplitude * np.exp(-((lam_nm - center_nm) ** 2) / (2.0 * sigma_nm**2))


def fit_peak(spectrum: SampledSpectrum, max_evaluations: int = 2000) -> PeakFit:
    """Least-squares Gaussian fit (amplitude, center, width), center in nm.

    Initialized from the maximum sample and the second-moment width. The
    global maximum must be unique and away from the grid edges.
    """
    lam_nm = spectrum.lam_grid_um * 1000.0
    inten = spectrum.intensity
    peak = float(inten.max())
    peak_indices = np.flatnonzero(inten == peak)
    if peak_indices.size != 1:
        raise ValueError("spectrum has no unique global maximum")
    idx = int(peak_indices[0])
    if idx == 0 or idx == inten.size - 1:
        raise ValueError("spectrum peak sits at the grid boundary")

    total = float(inten.sum())
    mean = float((lam_nm * inten).sum()) / total
    var = float(((lam_nm - mean) ** 2 * inten).sum()) / total
    p0 = (peak, float(lam_nm[idx]), max(math.sqrt(var), 1e-9))
    try:
        popt, _ = curve_fit(_gaussian, lam_nm, inten, p0=p0, maxfev=max_evaluations)
    except RuntimeError as exc:
        raise ConvergenceError(f"Gaussian peak fit did not converge: {exc}") from exc
    amplitude, center_nm, sigma_nm = float(popt[0]), float(popt[1]), abs(float(popt[2]))
    residual = float(np.sqrt(np.mean((_gaussian(lam_nm, *popt) - inten) ** 2)))
    return PeakFit(
        amplitude=amplitude,
        center_nm=center_nm,
        sigma_nm=sigma_nm,
        fwhm_nm=_2SQRT2LN2 * sigma_nm,
        residual_rms=residual,
    )


def predicted_centers(
    model: DispersionModel,
    crystal: CrystalSpec,
    temp_c: float,
    processes,
    lam_window_um: tuple[float, float],
    scan_points: int = 512,
) -> tuple[PredictedCenter, ...]:
    """CW phase-matched SH wavelength per process at the crystal's grating period."""
    out = []
    for process in processes:
        sol = match_wavelength(
            model, process, crystal.grating_period_um, temp_c, lam_window_um, scan_points
        )
        out.append(
            PredictedCenter(
                process=process,
                lam_fund_um=sol.lam_fund_um,
                sh_center_nm=sol.lam_fund_um / 2.0 * 1000.0,
            )
        )
    return tuple(out)


def spectrum_to_csv(spectrum: SampledSpectrum) -> str:
    """Two-column CSV (wavelength_nm, intensity) at full double precision."""
    lines = ["wavelength_nm,intensity"]
    for lam_um, inten in zip(spectrum.lam_grid_um, spectrum.intensity):
        lines.append(f"{lam_um * 1000.0:.17g},{inten:.17g}")
    return "\n".join(lines) + "\n"
