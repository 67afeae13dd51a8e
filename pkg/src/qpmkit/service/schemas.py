"""Pydantic request/response models for the qpmkit service."""
from __future__ import annotations

from pydantic import BaseModel, Field

from ..qpm import CrystalSpec, ProcessSpec


class ProcessIn(BaseModel):
    """Polarization triple (harmonic, fundamental, fundamental) plus QPM order."""

    triple: str = Field(pattern=r"^[YZyz]{3}$")
    order: int = Field(default=1, ge=1)
    d_pm_per_v: float | None = None

    def to_spec(self) -> ProcessSpec:
        return ProcessSpec.from_triple(self.triple, order=self.order, d_element_pm_per_v=self.d_pm_per_v)


class CrystalGeomIn(BaseModel):
    """Poled-crystal geometry; length only matters for mismatch/spectrum requests."""

    grating_period_um: float = Field(gt=0.0)
    length_mm: float = Field(default=7.0, gt=0.0)
    duty_cycle: float = Field(default=0.5, gt=0.0, lt=1.0)

    def to_spec(self) -> CrystalSpec:
        return CrystalSpec(
            length_mm=self.length_mm,
            grating_period_um=self.grating_period_um,
            duty_cycle=self.duty_cycle,
        )


class CrystalListOut(BaseModel):
    crystals: list[str]


class CrystalInfoOut(BaseModel):
    crystal_id: str
    reference_temperature_c: float
    wavelength_window_um: tuple[float, float]
    temperature_window_c: tuple[float, float]
    provenance: str
    axes: list[str]
    thermo_optic_axes: list[str]


class IndexIn(BaseModel):
    crystal: str
    axis: str = Field(pattern=r"^[XYZxyz]$")
    lam_um: float
    temp_c: float


class IndexOut(BaseModel):
    n: float


class DerivativeIn(IndexIn):
    method: str = "analytic"


class DerivativeOut(BaseModel):
    dn_dlam_per_um: float


class PeriodIn(BaseModel):
    crystal: str
    process: ProcessIn
    lam_um: float
    temp_c: float


class PeriodOut(BaseModel):
    poling_period_um: float
    grating_period_um: float
    anomalous_ordering: bool


class MismatchIn(BaseModel):
    crystal: str
    process: ProcessIn
    crystal_spec: CrystalGeomIn
    lam1_um: float
    lam2_um: float
    temp_c: float


class MismatchOut(BaseModel):
    delta_k_rad_per_um: float


class TuningCurveIn(BaseModel):
    crystal: str
    process: ProcessIn
    crystal_spec: CrystalGeomIn
    temp_c: float
    lam_min_um: float
    lam_max_um: float
    samples: int = Field(default=201, ge=2)


class SpectrumOut(BaseModel):
    lam_um: list[float]
    lam_nm: list[float]
    intensity: list[float]


class CurvesIn(BaseModel):
    crystal: str
    processes: list[ProcessIn] = Field(min_length=1)
    temp_c: float
    lam_min_um: float
    lam_max_um: float
    samples: int = Field(default=200, ge=2)
    mark_period_um: float | None = None


class CurveSeriesOut(BaseModel):
    label: str
    grating_period_um: list[float]


class CurvesOut(BaseModel):
    lam_um: list[float]
    series: list[CurveSeriesOut]
    mark_period_um: float | None


class EffectiveNonlinearityIn(BaseModel):
    d_pm_per_v: float
    order: int = Field(ge=1)
    duty_cycle: float = Field(default=0.5, gt=0.0, lt=1.0)


class EffectiveNonlinearityOut(BaseModel):
    d_eff_pm_per_v: float


class PairwiseIn(BaseModel):
    crystal: str
    a: ProcessIn
    b: ProcessIn
    lam_min_um: float
    lam_max_um: float
    temp_c: float
    scan_points: int = Field(default=512, ge=16)


class CoincidenceOut(BaseModel):
    participants: list[str]
    lam_star_um: float
    temp_c: float
    common_period_um: float
    spread_um: float
    kind: str


class PairwiseOut(BaseModel):
    coincidences: list[CoincidenceOut]


class MultiwayIn(BaseModel):
    crystal: str
    processes: list[ProcessIn] = Field(min_length=3)
    lam_min_um: float
    lam_max_um: float
    temp_c: float
    scan_points: int = Field(default=512, ge=16)


class MultiwayOut(BaseModel):
    coincidence: CoincidenceOut


class TemperatureTuneIn(BaseModel):
    crystal: str
    a: ProcessIn
    b: ProcessIn
    lam_target_um: float
    temp_min_c: float
    temp_max_c: float


class TemperatureTuneOut(BaseModel):
    temp_c: float
    coincidence: CoincidenceOut


class PulsedOverlapIn(BaseModel):
    crystal: str
    processes: list[ProcessIn] = Field(min_length=1)
    crystal_spec: CrystalGeomIn
    temp_c: float
    bandwidth_nm: float = Field(ge=0.0)
    lam_min_um: float
    lam_max_um: float


class OverlapEntryOut(BaseModel):
    process: str
    lam_fund_um: float
    sh_center_nm: float


class PulsedOverlapOut(BaseModel):
    entries: list[OverlapEntryOut]
    grating_period_um: float
    temp_c: float
    fundamental_span_nm: float
    sh_span_nm: float
    bandwidth_nm: float
    passes: bool


class PumpIn(BaseModel):
    center_um: float = Field(gt=0.0)
    fwhm_nm: float = Field(gt=0.0)


class ShSpectrumIn(BaseModel):
    crystal: str
    process: ProcessIn
    crystal_spec: CrystalGeomIn
    temp_c: float
    pump: PumpIn
    sh_min_um: float
    sh_max_um: float
    samples: int = Field(default=201, ge=2)
    nodes: int = Field(default=401, ge=401)
    normalize: bool = True
    fit: bool = False


class PeakFitOut(BaseModel):
    amplitude: float
    center_nm: float
    sigma_nm: float
    fwhm_nm: float
    residual_rms: float


class ShSpectrumOut(SpectrumOut):
    fit: PeakFitOut | None = None


class CentersIn(BaseModel):
    crystal: str
    processes: list[ProcessIn] = Field(min_length=1)
    grating_period_um: float = Field(gt=0.0)
    temp_c: float
    lam_min_um: float
    lam_max_um: float


class CenterRowOut(BaseModel):
    process: str
    lam_fund_um: float
    sh_center_nm: float
    observed_nm: float | None = None


class CentersOut(BaseModel):
    grating_period_um: float
    temp_c: float
    centers: list[CenterRowOut]


class FitPeakIn(BaseModel):
    lam_um: list[float] = Field(min_length=3)
    intensity: list[float] = Field(min_length=3)


class ModeKeyIn(BaseModel):
    label: str
    polarization: str = Field(pattern=r"^[YZyz]$")


class AssignmentEntryIn(BaseModel):
    a: ModeKeyIn
    b: ModeKeyIn
    pump: str
    process: str = Field(pattern=r"^[YZyz]{3}$")


class EntangleIn(BaseModel):
    kappa_zzz: float = Field(default=1.0, ge=0.0)
    kappa_yzy: float = Field(default=1.0, ge=0.0)
    kappa_zyy: float = Field(default=1.0, ge=0.0)
    r: float = Field(ge=0.0)
    assignment: list[AssignmentEntryIn] | None = None


class ModeOut(BaseModel):
    label: str
    polarization: str


class EdgeOut(BaseModel):
    a: int
    b: int
    kappa: float
    pump: str
    process: str


class PptRowOut(BaseModel):
    subset: list[int]
    value: float


class EntangleOut(BaseModel):
    modes: list[ModeOut]
    edges: list[EdgeOut]
    adjacency: list[list[float]]
    connected: bool
    r: float
    ppt: list[PptRowOut]
