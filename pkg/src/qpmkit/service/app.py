"""FastAPI application wrapping the core package.

Every endpoint is a thin serialization layer over a library call; the service
performs no arithmetic of its own beyond unit bookkeeping done in the library.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__, coincide, dispersion, entangle, qpm, spectra
from ..errors import (
    AmbiguousSolutionError,
    ConvergenceError,
    CrystalNotFoundError,
    DegenerateCurvesError,
    NoSolutionInWindowError,
    PerfectPhaseMatchError,
    SchemaError,
    WindowError,
)
from . import schemas as sc

_STATUS_BY_ERROR = (
    (CrystalNotFoundError, 404),
    (WindowError, 422),
    (SchemaError, 422),
    (ValueError, 422),
    (PerfectPhaseMatchError, 409),
    (DegenerateCurvesError, 409),
    (NoSolutionInWindowError, 409),
    (AmbiguousSolutionError, 409),
    (ConvergenceError, 409),
    (OSError, 500),
)


def _coincidence_out(c: coincide.Coincidence) -> sc.CoincidenceOut:
    return sc.CoincidenceOut(
        participants=[p.label for p in c.participants],
        lam_star_um=c.lam_star_um,
        temp_c=c.temp_c,
        common_period_um=c.common_period_um,
        spread_um=c.spread_um,
        kind=c.kind,
    )


def _spectrum_fields(spectrum: qpm.SampledSpectrum) -> dict:
    lam = spectrum.lam_grid_um
    return {
        "lam_um": lam.tolist(),
        "lam_nm": (lam * 1000.0).tolist(),
        "intensity": spectrum.intensity.tolist(),
    }


def create_app(db_dir=None) -> FastAPI:
    """Build the service; db_dir falls back to $QPM_CRYSTAL_DB, then ./crystals."""
    app = FastAPI(title="qpmkit", version=__version__)
    app.state.db_dir = dispersion.resolve_db_dir(str(db_dir) if db_dir else None)

    def _model(crystal_id: str) -> dispersion.DispersionModel:
        return dispersion.load_crystal(app.state.db_dir, crystal_id)

    for err_cls, status in _STATUS_BY_ERROR:
        def _handler(request, exc, _status=status):
            return JSONResponse(
                status_code=_status,
                content={"error": type(exc).__name__, "message": str(exc)},
            )

        app.add_exception_handler(err_cls, _handler)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.get("/crystals", response_model=sc.CrystalListOut)
    def crystals():
        return sc.CrystalListOut(crystals=dispersion.list_crystals(app.state.db_dir))

    @app.get("/crystals/{crystal_id}", response_model=sc.CrystalInfoOut)
    def crystal_info(crystal_id: str):
        model = _model(crystal_id)
        return sc.CrystalInfoOut(
            crystal_id=model.crystal_id,
            reference_temperature_c=model.reference_temperature_c,
            wavelength_window_um=model.wavelength_window_um,
            temperature_window_c=model.temperature_window_c,
            provenance=model.provenance,
            axes=list(model.axes),
            thermo_optic_axes=sorted(model.thermo_optic),
        )

    @app.post("/dispersion/index", response_model=sc.IndexOut)
    def dispersion_index(req: sc.IndexIn):
        n = dispersion.index(_model(req.crystal), req.axis.upper(), req.lam_um, req.temp_c)
        return sc.IndexOut(n=n)

    @app.post("/dispersion/derivative", response_model=sc.DerivativeOut)
    def dispersion_derivative(req: sc.DerivativeIn):
        value = dispersion.index_derivative(
            _model(req.crystal), req.axis.upper(), req.lam_um, req.temp_c, method=req.method
        )
        return sc.DerivativeOut(dn_dlam_per_um=value)

    @app.post("/qpm/period", response_model=sc.PeriodOut)
    def qpm_period(req: sc.PeriodIn):
        model = _model(req.crystal)
        process = req.process.to_spec()
        period = qpm.poling_period(model, process, req.lam_um, req.temp_c)
        return sc.PeriodOut(
            poling_period_um=period,
            grating_period_um=process.order * period,
            anomalous_ordering=qpm.anomalous_ordering(model, process, req.lam_um, req.temp_c),
        )

    @app.post("/qpm/mismatch", response_model=sc.MismatchOut)
    def qpm_mismatch(req: sc.MismatchIn):
        value = qpm.phase_mismatch(
            _model(req.crystal),
            req.process.to_spec(),
            req.lam1_um,
            req.lam2_um,
            req.crystal_spec.to_spec(),
            req.temp_c,
        )
        return sc.MismatchOut(delta_k_rad_per_um=value)

    @app.post("/qpm/tuning-curve", response_model=sc.SpectrumOut)
    def qpm_tuning_curve(req: sc.TuningCurveIn):
        grid = np.linspace(req.lam_min_um, req.lam_max_um, req.samples)
        spectrum = qpm.tuning_curve(
            _model(req.crystal), req.process.to_spec(), req.crystal_spec.to_spec(),
            req.temp_c, grid,
        )
        return sc.SpectrumOut(**_spectrum_fields(spectrum))

    @app.post("/qpm/curves", response_model=sc.CurvesOut)
    def qpm_curves(req: sc.CurvesIn):
        model = _model(req.crystal)
        grid = np.linspace(req.lam_min_um, req.lam_max_um, req.samples)
        series = []
        for proc_in in req.processes:
            process = proc_in.to_spec()
            values = qpm.grating_period_curve(model, process, grid, req.temp_c)
            series.append(
                sc.CurveSeriesOut(label=process.label, grating_period_um=values.tolist())
            )
        return sc.CurvesOut(
            lam_um=grid.tolist(), series=series, mark_period_um=req.mark_period_um
        )

    @app.post("/qpm/effective-nonlinearity", response_model=sc.EffectiveNonlinearityOut)
    def qpm_effective_nonlinearity(req: sc.EffectiveNonlinearityIn):
        value = qpm.effective_nonlinearity(req.d_pm_per_v, req.order, req.duty_cycle)
        return sc.EffectiveNonlinearityOut(d_eff_pm_per_v=value)

    @app.post("/coincide/pairwise", response_model=sc.PairwiseOut)
    def coincide_pairwise(req: sc.PairwiseIn):
        found = coincide.find_pairwise(
            _model(req.crystal),
            req.a.to_spec(),
            req.b.to_spec(),
            (req.lam_min_um, req.lam_max_um),
            req.temp_c,
            req.scan_points,
        )
        return sc.PairwiseOut(coincidences=[_coincidence_out(c) for c in found])

    @app.post("/coincide/multiway", response_model=sc.MultiwayOut)
    def coincide_multiway(req: sc.MultiwayIn):
        found = coincide.find_multiway(
            _model(req.crystal),
            [p.to_spec() for p in req.processes],
            (req.lam_min_um, req.lam_max_um),
            req.temp_c,
            req.scan_points,
        )
        return sc.MultiwayOut(coincidence=_coincidence_out(found))

    @app.post("/coincide/temperature", response_model=sc.TemperatureTuneOut)
    def coincide_temperature(req: sc.TemperatureTuneIn):
        temp, found = coincide.tune_temperature(
            _model(req.crystal),
            req.a.to_spec(),
            req.b.to_spec(),
            req.lam_target_um,
            (req.temp_min_c, req.temp_max_c),
        )
        return sc.TemperatureTuneOut(temp_c=temp, coincidence=_coincidence_out(found))

    @app.post("/coincide/pulsed-overlap", response_model=sc.PulsedOverlapOut)
    def coincide_pulsed_overlap(req: sc.PulsedOverlapIn):
        report = coincide.pulsed_overlap(
            _model(req.crystal),
            [p.to_spec() for p in req.processes],
            req.crystal_spec.to_spec(),
            req.temp_c,
            req.bandwidth_nm,
            (req.lam_min_um, req.lam_max_um),
        )
        return sc.PulsedOverlapOut(
            entries=[
                sc.OverlapEntryOut(
                    process=e.process.label,
                    lam_fund_um=e.lam_fund_um,
                    sh_center_nm=e.sh_center_nm,
                )
                for e in report.entries
            ],
            grating_period_um=report.grating_period_um,
            temp_c=report.temp_c,
            fundamental_span_nm=report.fundamental_span_nm,
            sh_span_nm=report.sh_span_nm,
            bandwidth_nm=report.bandwidth_nm,
            passes=report.passes,
        )

    @app.post("/spectra/sh", response_model=sc.ShSpectrumOut)
    def spectra_sh(req: sc.ShSpectrumIn):
        grid = np.linspace(req.sh_min_um, req.sh_max_um, req.samples)
        spectrum = spectra.sh_spectrum(
            _model(req.crystal),
            req.process.to_spec(),
            req.crystal_spec.to_spec(),
            req.temp_c,
            spectra.PumpSpectrum(center_um=req.pump.center_um, fwhm_nm=req.pump.fwhm_nm),
            grid,
            nodes=req.nodes,
            normalize=req.normalize,
        )
        fit = None
        if req.fit:
            peak = spectra.fit_peak(spectrum)
            fit = sc.PeakFitOut(
                amplitude=peak.amplitude,
                center_nm=peak.center_nm,
                sigma_nm=peak.sigma_nm,
                fwhm_nm=peak.fwhm_nm,
                residual_rms=peak.residual_rms,
            )
        return sc.ShSpectrumOut(fit=fit, **_spectrum_fields(spectrum))

    @app.post("/spectra/centers", response_model=sc.CentersOut)
    def spectra_centers(req: sc.CentersIn):
        crystal = qpm.CrystalSpec(length_mm=7.0, grating_period_um=req.grating_period_um)
        rows = spectra.predicted_centers(
            _model(req.crystal),
            crystal,
            req.temp_c,
            [p.to_spec() for p in req.processes],
            (req.lam_min_um, req.lam_max_um),
        )
        return sc.CentersOut(
            grating_period_um=req.grating_period_um,
            temp_c=req.temp_c,
            centers=[
                sc.CenterRowOut(
                    process=row.process.label,
                    lam_fund_um=row.lam_fund_um,
                    sh_center_nm=row.sh_center_nm,
                )
                for row in rows
            ],
        )

    @app.post("/spectra/fit-peak", response_model=sc.PeakFitOut)
    def spectra_fit_peak(req: sc.FitPeakIn):
        peak = spectra.fit_peak(qpm.SampledSpectrum(req.lam_um, req.intensity))
        return sc.PeakFitOut(
            amplitude=peak.amplitude,
            center_nm=peak.center_nm,
            sigma_nm=peak.sigma_nm,
            fwhm_nm=peak.fwhm_nm,
            residual_rms=peak.residual_rms,
        )

    @app.post("/entangle/quadripartite", response_model=sc.EntangleOut)
    def entangle_quadripartite(req: sc.EntangleIn):
        if req.assignment is None:
            assignment = entangle.DEFAULT_QUADRIPARTITE_ASSIGNMENT
        else:
            assignment = tuple(
                (
                    (e.a.label, e.a.polarization.upper()),
                    (e.b.label, e.b.polarization.upper()),
                    e.pump,
                    e.process.upper(),
                )
                for e in req.assignment
            )
        graph = entangle.build_quadripartite(
            req.kappa_zzz, req.kappa_yzy, req.kappa_zyy, assignment=assignment
        )
        g = entangle.adjacency_matrix(graph)
        state = entangle.evolve_vacuum(g, req.r)
        ppt = [
            sc.PptRowOut(
                subset=list(cut), value=entangle.ppt_min_eigenvalue(state, cut)
            )
            for cut in entangle.canonical_bipartitions(graph.n_modes)
        ]
        return sc.EntangleOut(
            modes=[
                sc.ModeOut(label=m.label, polarization=m.polarization) for m in graph.modes
            ],
            edges=[
                sc.EdgeOut(a=e.a, b=e.b, kappa=e.kappa, pump=e.pump, process=e.process)
                for e in graph.edges
            ],
            adjacency=g.tolist(),
            connected=entangle.is_connected(graph),
            r=req.r,
            ppt=ppt,
        )

    return app
