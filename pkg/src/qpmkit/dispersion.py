"""Refractive-index models for biaxial crystals.

Evaluates n(lambda, T) per crystal axis from a general rational-plus-polynomial
Sellmeier form with an optional additive thermo-optic correction, loaded from
JSON documents in a crystal database directory.

Units are fixed throughout the package: wavelengths in um, temperatures in
deg C, poling periods in um, wavevectors in rad/um.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import CrystalNotFoundError, SchemaError, WindowError

AXES = ("X", "Y", "Z")
RESONANCE_SHAPES = ("lambda2_over", "inverse")

# finite-difference step for the derivative cross-check path, um
FD_STEP_UM = 1e-4

# load-time validation grid: wavelength x temperature samples
VALIDATION_GRID_SHAPE = (201, 5)


@dataclass(frozen=True)
class SellmeierForm:
    """n^2(lambda) = constant + sum(resonances) + sum(polynomial terms).

    Resonance terms are (p, q, shape) with shape "lambda2_over" contributing
    p*lambda^2/(lambda^2 - q) and "inverse" contributing p/(lambda^2 - q);
    polynomial terms are (coeff, power) with even nonnegative power.
    lambda in um everywhere.
    """

    constant: float
    resonance_terms: tuple[tuple[float, float, str], ...] = ()
    polynomial_terms: tuple[tuple[float, int], ...] = ()

    def n_squared(self, lam_um):
        l2 = np.square(lam_um)
        total = self.constant + np.zeros_like(l2)
        for p, q, shape in self.resonance_terms:
            if shape == "lambda2_over":
                total = total + p * l2 / (l2 - q)
            else:
                total = total + p / (l2 - q)
        for coeff, power in self.polynomial_terms:
            total = total + coeff * np.power(lam_um, power)
        return total

    def n_squared_derivative(self, lam_um):
        """d(n^2)/dlambda, analytic."""
        lam = np.asarray(lam_um, dtype=float)
        l2 = np.square(lam)
        total = np.zeros_like(lam)
        for p, q, shape in self.resonance_terms:
            if shape == "lambda2_over":
                total = total - 2.0 * p * q * lam / np.square(l2 - q)
            else:
                total = total - 2.0 * p * lam / np.square(l2 - q)
        for coeff, power in self.polynomial_terms:
            if power != 0:
                total = total + coeff * power * np.power(lam, power - 1)
        return total


@dataclass(frozen=True)
class ThermoOpticForm:
    """Additive index correction dn(lambda, T) = P1(1/lambda)*dT + P2(1/lambda)*dT^2.

    P1 and P2 are polynomials in 1/lambda with ascending coefficient arrays,
    dT = T - reference temperature; the correction vanishes identically at the
    reference temperature.
    """

    linear_poly: tuple[float, ...]
    quadratic_poly: tuple[float, ...] = ()

    def delta_n(self, lam_um, temp_c, reference_temperature_c):
        u = 1.0 / np.asarray(lam_um, dtype=float)
        dt = temp_c - reference_temperature_c
        dn = npoly.polyval(u, self.linear_poly) * dt
        if self.quadratic_poly:
            dn = dn + npoly.polyval(u, self.quadratic_poly) * dt * dt
        return dn

    def delta_n_derivative(self, lam_um, temp_c, reference_temperature_c):
        """d(dn)/dlambda, analytic (chain rule through u = 1/lambda)."""
        lam = np.asarray(lam_um, dtype=float)
        u = 1.0 / lam
        dt = temp_c - reference_temperature_c
        out = npoly.polyval(u, npoly.polyder(self.linear_poly)) * dt
        if self.quadratic_poly:
            out = out + npoly.polyval(u, npoly.polyder(self.quadratic_poly)) * dt * dt
        return out * (-u * u)


@dataclass(frozen=True)
class DispersionModel:
    """Validated per-axis dispersion description of one crystal."""

    crystal_id: str
    axis_models: dict[str, SellmeierForm]
    thermo_optic: dict[str, ThermoOpticForm]
    reference_temperature_c: float
    wavelength_window_um: tuple[float, float]
    temperature_window_c: tuple[float, float]
    provenance: str
    validation_grid_shape: tuple[int, int] = field(default=VALIDATION_GRID_SHAPE)

    @property
    def axes(self) -> tuple[str, ...]:
        return tuple(ax for ax in AXES if ax in self.axis_models)


def _require(condition, message):
    if not condition:
        raise SchemaError(message)


def _parse_sellmeier(axis, raw) -> SellmeierForm:
    _require(isinstance(raw, dict), f"axis {axis}: expected an object")
    _require("constant" in raw, f"axis {axis}: missing required field 'constant'")
    resonances = []
    for i, term in enumerate(raw.get("resonance_terms", [])):
        for key in ("p", "q", "shape"):
            _require(key in term, f"axis {axis} resonance_terms[{i}]: missing '{key}'")
        _require(
            term["shape"] in RESONANCE_SHAPES,
            f"axis {axis} resonance_terms[{i}]: unknown shape {term['shape']!r}",
        )
        resonances.append((float(term["p"]), float(term["q"]), str(term["shape"])))
    polynomials = []
    for i, term in enumerate(raw.get("polynomial_terms", [])):
        for key in ("coeff", "power"):
            _require(key in term, f"axis {axis} polynomial_terms[{i}]: missing '{key}'")
        power = term["power"]
        _require(
            isinstance(power, int) and power >= 0 and power % 2 == 0,
            f"axis {axis} polynomial_terms[{i}]: power must be an even nonnegative integer",
        )
        polynomials.append((float(term["coeff"]), power))
    return SellmeierForm(float(raw["constant"]), tuple(resonances), tuple(polynomials))


def _parse_thermo(axis, raw) -> ThermoOpticForm:
    _require(isinstance(raw, dict), f"thermo_optic {axis}: expected an object")
    _require("linear_poly" in raw, f"thermo_optic {axis}: missing 'linear_poly'")
    linear = tuple(float(c) for c in raw["linear_poly"])
    quadratic = tuple(float(c) for c in raw.get("quadratic_poly", []))
    _require(len(linear) >= 1, f"thermo_optic {axis}: empty 'linear_poly'")
    return ThermoOpticForm(linear, quadratic)


def load_model(source) -> DispersionModel:
    """Load and validate a crystal document (dict, JSON text, or file path).

    Raises SchemaError for malformed documents, resonance poles inside the
    wavelength window, or n <= 1 anywhere on the validation grid.
    """
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = source
    _require(isinstance(doc, dict), "crystal document must be an object")

    for key in (
        "crystal_id",
        "reference_temperature_c",
        "wavelength_window_um",
        "temperature_window_c",
        "provenance",
        "axes",
    ):
        _require(key in doc, f"missing required field '{key}'")

    lam_window = tuple(float(v) for v in doc["wavelength_window_um"])
    temp_window = tuple(float(v) for v in doc["temperature_window_c"])
    _require(len(lam_window) == 2, "wavelength_window_um must have two entries")
    _require(len(temp_window) == 2, "temperature_window_c must have two entries")
    _require(lam_window[0] < lam_window[1], "wavelength window must satisfy min < max")
    t_ref = float(doc["reference_temperature_c"])
    _require(
        temp_window[0] <= t_ref <= temp_window[1],
        "reference temperature must lie inside the temperature window",
    )

    axes_raw = doc["axes"]
    _require(isinstance(axes_raw, dict), "'axes' must be an object keyed X/Y/Z")
    for ax in axes_raw:
        _require(ax in AXES, f"unknown axis key {ax!r}")
    for ax in ("Y", "Z"):
        _require(ax in axes_raw, f"missing axis {ax}")
    axis_models = {ax: _parse_sellmeier(ax, axes_raw[ax]) for ax in axes_raw}

    thermo = {}
    for ax, raw in (doc.get("thermo_optic") or {}).items():
        _require(ax in axis_models, f"thermo_optic references unknown axis {ax!r}")
        thermo[ax] = _parse_thermo(ax, raw)

    # no resonance pole may fall inside [lam_min^2, lam_max^2]
    lo2, hi2 = lam_window[0] ** 2, lam_window[1] ** 2
    for ax, form in axis_models.items():
        for _, q, _ in form.resonance_terms:
            _require(
                not (lo2 <= q <= hi2),
                f"axis {ax}: resonance pole at lambda^2 = {q} lies inside the validity window",
            )

    model = DispersionModel(
        crystal_id=str(doc["crystal_id"]),
        axis_models=axis_models,
        thermo_optic=thermo,
        reference_temperature_c=t_ref,
        wavelength_window_um=lam_window,
        temperature_window_c=temp_window,
        provenance=str(doc["provenance"]),
        validation_grid_shape=VALIDATION_GRID_SHAPE,
    )

    # dense validation grid: n must be real and > 1 everywhere
    lam_grid = np.linspace(lam_window[0], lam_window[1], VALIDATION_GRID_SHAPE[0])
    temp_grid = np.linspace(temp_window[0], temp_window[1], VALIDATION_GRID_SHAPE[1])
    for ax, form in axis_models.items():
        n2 = form.n_squared(lam_grid)
        _require(
            bool(np.all(np.isfinite(n2)) and np.all(n2 > 0.0)),
            f"axis {ax}: n^2 <= 0 or nonfinite on the validation grid",
        )
        base = np.sqrt(n2)
        for temp in temp_grid:
            n = base
            if ax in thermo:
                n = base + thermo[ax].delta_n(lam_grid, float(temp), t_ref)
            _require(
                bool(np.all(np.isfinite(n)) and np.all(n > 1.0)),
                f"axis {ax}: n <= 1 on the validation grid at T = {temp:g} C",
            )
    return model


def _check_window(model: DispersionModel, lam_um, temp_c):
    lo, hi = model.wavelength_window_um
    tlo, thi = model.temperature_window_c
    lam = np.asarray(lam_um, dtype=float)
    if np.any(lam < lo) or np.any(lam > hi):
        raise WindowError(
            f"wavelength outside validity window [{lo}, {hi}] um of '{model.crystal_id}'"
        )
    if np.any(np.asarray(temp_c, dtype=float) < tlo) or np.any(
        np.asarray(temp_c, dtype=float) > thi
    ):
        raise WindowError(
            f"temperature outside validity window [{tlo}, {thi}] C of '{model.crystal_id}'"
        )


def _axis_form(model: DispersionModel, axis: str) -> SellmeierForm:
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if axis not in model.axis_models:
        raise ValueError(f"model '{model.crystal_id}' has no axis {axis}")
    return model.axis_models[axis]


def index(model: DispersionModel, axis: str, lam_um, temp_c: float):
    """Refractive index n(lambda, T). Accepts scalar or array wavelengths.

    Hard error outside the validity windows; never extrapolates.
    """
    form = _axis_form(model, axis)
    _check_window(model, lam_um, temp_c)
    n2 = form.n_squared(np.asarray(lam_um, dtype=float))
    if np.any(n2 <= 0.0):
        raise WindowError(f"n^2 <= 0 at lambda = {lam_um} for axis {axis}")
    n = np.sqrt(n2)
    if axis in model.thermo_optic:
        n = n + model.thermo_optic[axis].delta_n(
            lam_um, temp_c, model.reference_temperature_c
        )
    if np.any(n <= 1.0):
        raise WindowError(f"index <= 1 at lambda = {lam_um} for axis {axis}")
    if np.ndim(n) == 0:
        return float(n)
    return n


def index_derivative(
    model: DispersionModel, axis: str, lam_um: float, temp_c: float, method: str = "analytic"
) -> float:
    """dn/dlambda in 1/um, analytic by default or central-difference ("fd").

    lambda must sit strictly inside the window (the fd stencil needs room on
    both sides; agreement between the two paths is within 1e-6).
    """
    form = _axis_form(model, axis)
    lo, hi = model.wavelength_window_um
    if not (lo + FD_STEP_UM <= lam_um <= hi - FD_STEP_UM):
        raise WindowError(
            f"lambda = {lam_um} um too close to the window boundary for a derivative"
        )
    _check_window(model, lam_um, temp_c)
    if method == "fd":
        up = index(model, axis, lam_um + FD_STEP_UM, temp_c)
        dn = index(model, axis, lam_um - FD_STEP_UM, temp_c)
        return (up - dn) / (2.0 * FD_STEP_UM)
    if method != "analytic":
        raise ValueError(f"method must be 'analytic' or 'fd', got {method!r}")
    n2 = float(form.n_squared(lam_um))
    out = float(form.n_squared_derivative(lam_um)) / (2.0 * np.sqrt(n2))
    if axis in model.thermo_optic:
        out += float(
            model.thermo_optic[axis].delta_n_derivative(
                lam_um, temp_c, model.reference_temperature_c
            )
        )
    return out


# --- crystal database directory ---

ENV_DB_VAR = "QPM_CRYSTAL_DB"
DEFAULT_DB_DIR = "crystals"


def resolve_db_dir(explicit: str | None = None) -> Path:
    """Database directory: explicit argument, then $QPM_CRYSTAL_DB, then ./crystals."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_DB_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_DB_DIR)


def list_crystals(db_dir) -> list[str]:
    """Sorted crystal ids found in the database directory."""
    path = Path(db_dir)
    if not path.is_dir():
        raise CrystalNotFoundError(f"crystal database directory not found: {path}")
    ids = []
    for doc_path in sorted(path.glob("*.json")):
        try:
            with open(doc_path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            ids.append(str(doc["crystal_id"]))
        except (OSError, ValueError, KeyError):
            continue
    return sorted(ids)


def load_crystal(db_dir, crystal_id: str) -> DispersionModel:
    """Load a crystal by id: <id>.json preferred, else scan document contents."""
    path = Path(db_dir)
    direct = path / f"{crystal_id}.json"
    if direct.is_file():
        model = load_model(direct)
        if model.crystal_id == crystal_id:
            return model
    if path.is_dir():
        for doc_path in sorted(path.glob("*.json")):
            try:
                with open(doc_path, "r", encoding="utf-8") as fh:
                    doc = json.load(fh)
            except (OSError, ValueError):
                continue
            if doc.get("crystal_id") == crystal_id:
                return load_model(doc)
    raise CrystalNotFoundError(f"crystal not found: {crystal_id!r} in {path}")
