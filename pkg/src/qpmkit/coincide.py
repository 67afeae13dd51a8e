"""Coincidence search between grating-period curves of distinct processes.

A coincidence is two or more processes quasi-phase-matched by the same
physical grating period at the same wavelength and temperature. Pairwise
crossings are bracketed on a scan grid and refined by bisection (robust near
tangency, where Newton is not); multi-way coincidences are reported as the
minimum of the period spread, never as an assumed exact root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionModel
from .errors import DegenerateCurvesError, NoSolutionInWindowError, WindowError
from .qpm import (
    PERIOD_TOLERANCE_UM,
    CrystalSpec,
    ProcessSpec,
    grating_period_curve,
    grating_period_for_order,
    match_wavelength,
)

DEFAULT_SCAN_POINTS = 512
MULTIWAY_MIN_GRID = 512
LAMBDA_RESOLUTION_UM = 1e-6

# absorbs root-refinement float noise when comparing spans against a
# requested bandwidth (1e-6 nm = 1 fm, far below any physical resolution)
SPAN_FLOAT_TOLERANCE_NM = 1e-6

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Coincidence:
    """A common phase-matching point of several processes.

    kind "exact" marks a refined pairwise root (spread <= 1e-6 um);
    kind "approximate" marks a multi-way spread minimum with the achieved
    spread reported.
    """

    participants: tuple[ProcessSpec, ...]
    lam_star_um: float
    temp_c: float
    common_period_um: float
    spread_um: float
    kind: str

    def __post_init__(self):
        if len(self.participants) < 2:
            raise ValueError("a coincidence needs at least two participants")
        if self.spread_um < 0.0:
            raise ValueError("spread must be nonnegative")
        if self.kind not in ("exact", "approximate"):
            raise ValueError(f"unknown coincidence kind {self.kind!r}")


@dataclass(frozen=True)
class PulsedOverlapEntry:
    process: ProcessSpec
    lam_fund_um: float
    sh_center_nm: float


@dataclass(frozen=True)
class PulsedOverlapReport:
    """Where each process meets the fixed grating, and whether a pulse covers all of them."""

    entries: tuple[PulsedOverlapEntry, ...]
    grating_period_um: float
    temp_c: float
    fundamental_span_nm: float
    sh_span_nm: float
    bandwidth_nm: float
    passes: bool


def _check_search_window(model: DispersionModel, lam_window_um):
    lo, hi = float(lam_window_um[0]), float(lam_window_um[1])
    if not lo < hi:
        raise ValueError("wavelength window must satisfy min < max")
    mlo, mhi = model.wavelength_window_um
    if lo < 2.0 * mlo or hi > mhi:
        raise WindowError(
            f"search window [{lo}, {hi}] um leaves dispersion validity of "
            f"'{model.crystal_id}' (need lambda/2 >= {mlo} um and lambda <= {mhi} um)"
        )
    return lo, hi


def _difference(model, a, b, lam, temp_c):
    grid = np.atleast_1d(np.asarray(lam, dtype=float))
    d = grating_period_curve(model, a, grid, temp_c) - grating_period_curve(
        model, b, grid, temp_c
    )
    return d if not np.isscalar(lam) else float(d[0])


def _bisect_difference(model, a, b, temp_c, x0, x1, f0, f1):
    """Drive a bracketed sign change of the period difference to the float limit.

    Returns (wavelength, |difference| there) for the best midpoint seen; a
    bracket that closes on a pole simply reports a large residual and is
    rejected by the caller's tolerance.
    """
    best_x, best_f = 0.5 * (x0 + x1), np.inf
    for _ in range(200):
        mid = 0.5 * (x0 + x1)
        fm = _difference(model, a, b, mid, temp_c)
        if np.isfinite(fm) and abs(fm) < best_f:
            best_x, best_f = mid, abs(fm)
        if best_f == 0.0 or x1 - x0 < 1e-15 * max(1.0, abs(mid)):
            break
        if np.isfinite(fm) and f0 * fm < 0.0:
            x1, f1 = mid, fm
        else:
            x0, f0 = mid, fm
    return float(best_x), float(best_f)


def find_pairwise(
    model: DispersionModel,
    a: ProcessSpec,
    b: ProcessSpec,
    lam_window_um: tuple[float, float],
    temp_c: float,
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> list[Coincidence]:
    """All crossings of the two grating-period curves inside the window, sorted by lambda.

    Every sign change of the difference on the scan grid is bracketed and
    bisected to |difference| <= 1e-6 um. Identical curves raise
    DegenerateCurves rather than reporting infinitely many roots. Low scan
    densities can skip near-tangent double roots; raise scan_points if in doubt.
    """
    lo, hi = _check_search_window(model, lam_window_um)
    if scan_points < 16:
        raise ValueError("scan_points must be at least 16")
    grid = np.linspace(lo, hi, scan_points)
    f = _difference(model, a, b, grid, temp_c)

    finite = np.isfinite(f)
    if np.all(finite) and np.all(np.abs(f) <= 1e-9):
        raise DegenerateCurvesError(
            f"{a.label} and {b.label} produce identical grating-period curves "
            f"over [{lo}, {hi}] um"
        )

    roots: list[float] = []
    for i in range(scan_points - 1):
        if not (finite[i] and finite[i + 1]):
            continue
        if f[i] == 0.0:
            roots.append(float(grid[i]))
        elif f[i] * f[i + 1] < 0.0:
            refined, residual = _bisect_difference(
                model, a, b, temp_c, float(grid[i]), float(grid[i + 1]), float(f[i]), float(f[i + 1])
            )
            if residual <= PERIOD_TOLERANCE_UM:
                roots.append(refined)
    if finite[-1] and f[-1] == 0.0:
        roots.append(float(grid[-1]))

    out = []
    for lam in sorted(roots):
        pa = grating_period_for_order(model, a, lam, temp_c)
        pb = grating_period_for_order(model, b, lam, temp_c)
        out.append(
            Coincidence(
                participants=(a, b),
                lam_star_um=lam,
                temp_c=temp_c,
                common_period_um=0.5 * (pa + pb),
                spread_um=abs(pa - pb),
                kind="exact",
            )
        )
    return out


def _spread(model, participants, lam, temp_c):
    grid = np.atleast_1d(np.asarray(lam, dtype=float))
    curves = np.vstack([grating_period_curve(model, p, grid, temp_c) for p in participants])
    s = np.max(curves, axis=0) - np.min(curves, axis=0)
    s[~np.all(np.isfinite(curves), axis=0)] = np.inf
    return s if not np.isscalar(lam) else float(s[0])


def find_multiway(
    model: DispersionModel,
    participants,
    lam_window_um: tuple[float, float],
    temp_c: float,
    scan_points: int = MULTIWAY_MIN_GRID,
) -> Coincidence:
    """Wavelength minimizing the period spread max_i - min_i of >= 3 processes.

    Coarse grid (>= 512 points), golden-section refinement to 1e-6 um, then a
    polish pass that bisects the two extreme curves' crossing and keeps
    whichever candidate has the smaller spread. Reports the achieved spread;
    exactness is measured, never assumed.
    """
    participants = tuple(participants)
    if len(participants) < 3:
        raise ValueError("find_multiway needs at least three participants")
    lo, hi = _check_search_window(model, lam_window_um)
    points = max(scan_points, MULTIWAY_MIN_GRID)
    grid = np.linspace(lo, hi, points)
    s = _spread(model, participants, grid, temp_c)
    if not np.any(np.isfinite(s)):
        raise NoSolutionInWindowError(
            "period spread is nowhere finite inside the search window"
        )
    i0 = int(np.argmin(s))
    x_lo = grid[max(i0 - 1, 0)]
    x_hi = grid[min(i0 + 1, points - 1)]

    # golden-section minimization of the spread
    x1 = x_hi - _GOLDEN * (x_hi - x_lo)
    x2 = x_lo + _GOLDEN * (x_hi - x_lo)
    f1 = _spread(model, participants, x1, temp_c)
    f2 = _spread(model, participants, x2, temp_c)
    while x_hi - x_lo > LAMBDA_RESOLUTION_UM:
        if f1 <= f2:
            x_hi, x2, f2 = x2, x1, f1
            x1 = x_hi - _GOLDEN * (x_hi - x_lo)
            f1 = _spread(model, participants, x1, temp_c)
        else:
            x_lo, x1, f1 = x1, x2, f2
            x2 = x_lo + _GOLDEN * (x_hi - x_lo)
            f2 = _spread(model, participants, x2, temp_c)
    lam_star = 0.5 * (x_lo + x_hi)
    best = _spread(model, participants, lam_star, temp_c)

    # polish: a true multi-way crossing is a root of the extreme curves' difference
    periods = np.array(
        [grating_period_for_order(model, p, lam_star, temp_c) for p in participants]
    )
    p_max = participants[int(np.argmax(periods))]
    p_min = participants[int(np.argmin(periods))]
    if p_max is not p_min:
        w = max(hi - lo, 1.0) * 1e-3
        a, b = max(lo, lam_star - w), min(hi, lam_star + w)
        fa = _difference(model, p_max, p_min, a, temp_c)
        fb = _difference(model, p_max, p_min, b, temp_c)
        if np.isfinite(fa) and np.isfinite(fb) and fa * fb < 0.0:
            refined, residual = _bisect_difference(model, p_max, p_min, temp_c, a, b, fa, fb)
            if np.isfinite(residual):
                cand = _spread(model, participants, refined, temp_c)
                if cand < best:
                    lam_star, best = refined, cand

    periods = np.array(
        [grating_period_for_order(model, p, lam_star, temp_c) for p in participants]
    )
    return Coincidence(
        participants=participants,
        lam_star_um=float(lam_star),
        temp_c=temp_c,
        common_period_um=float(np.mean(periods)),
        spread_um=float(np.max(periods) - np.min(periods)),
        kind="approximate",
    )


def tune_temperature(
    model: DispersionModel,
    a: ProcessSpec,
    b: ProcessSpec,
    lam_target_um: float,
    temp_window_c: tuple[float, float],
    scan_points: int = 64,
) -> tuple[float, Coincidence]:
    """Temperature at which the two curves cross exactly at lam_target.

    1-D root in T of the period difference at the pinned wavelength
    (temperature is the single extra tuning knob; the wavelength stays put),
    bisected to |difference| <= 1e-6 um. Raises NoSolutionInWindow when the
    difference never changes sign in the window and is nowhere already below
    tolerance.
    """
    t_lo, t_hi = float(temp_window_c[0]), float(temp_window_c[1])
    if not t_lo < t_hi:
        raise ValueError("temperature window must satisfy min < max")
    m_lo, m_hi = model.temperature_window_c
    if t_lo < m_lo or t_hi > m_hi:
        raise WindowError(
            f"temperature window [{t_lo}, {t_hi}] C leaves model validity "
            f"[{m_lo}, {m_hi}] C"
        )
    _check_search_window(model, (lam_target_um * 0.999, lam_target_um * 1.001))

    def diff_at(temp):
        return _difference(model, a, b, lam_target_um, float(temp))

    grid = np.linspace(t_lo, t_hi, max(scan_points, 16))
    f = np.array([diff_at(t) for t in grid])

    temp_solved = None
    for i in range(len(grid) - 1):
        if not (np.isfinite(f[i]) and np.isfinite(f[i + 1])):
            continue
        if f[i] == 0.0:
            temp_solved = float(grid[i])
            break
        if f[i] * f[i + 1] < 0.0:
            x0, x1, f0, f1 = float(grid[i]), float(grid[i + 1]), float(f[i]), float(f[i + 1])
            for _ in range(200):
                mid = 0.5 * (x0 + x1)
                fm = diff_at(mid)
                if abs(fm) <= PERIOD_TOLERANCE_UM:
                    temp_solved = mid
                    break
                if f0 * fm < 0.0:
                    x1, f1 = mid, fm
                else:
                    x0, f0 = mid, fm
            if temp_solved is not None:
                break
    if temp_solved is None:
        finite = np.isfinite(f)
        if np.any(finite) and np.min(np.abs(f[finite])) <= PERIOD_TOLERANCE_UM:
            temp_solved = float(grid[finite][int(np.argmin(np.abs(f[finite])))])
        else:
            raise NoSolutionInWindowError(
                f"{a.label} and {b.label} do not cross at {lam_target_um} um for "
                f"T in [{t_lo}, {t_hi}] C"
            )

    pa = grating_period_for_order(model, a, lam_target_um, temp_solved)
    pb = grating_period_for_order(model, b, lam_target_um, temp_solved)
    coincidence = Coincidence(
        participants=(a, b),
        lam_star_um=lam_target_um,
        temp_c=temp_solved,
        common_period_um=0.5 * (pa + pb),
        spread_um=abs(pa - pb),
        kind="exact",
    )
    return temp_solved, coincidence


def pulsed_overlap(
    model: DispersionModel,
    participants,
    crystal: CrystalSpec,
    temp_c: float,
    bandwidth_nm: float,
    lam_window_um: tuple[float, float],
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> PulsedOverlapReport:
    """Do all processes meet the fixed grating within one pump bandwidth?

    Solves grating_period = crystal.grating_period_um per participant, then
    checks that the solution wavelengths fit inside a common window of width
    bandwidth_nm (at the fundamental, where the pulse spectrum lives).
    """
    participants = tuple(participants)
    if not participants:
        raise ValueError("pulsed_overlap needs at least one participant")
    if bandwidth_nm < 0.0:
        raise ValueError("bandwidth must be nonnegative")
    entries = []
    for p in participants:
        sol = match_wavelength(
            model, p, crystal.grating_period_um, temp_c, lam_window_um, scan_points
        )
        entries.append(
            PulsedOverlapEntry(
                process=p,
                lam_fund_um=sol.lam_fund_um,
                sh_center_nm=sol.lam_fund_um / 2.0 * 1000.0,
            )
        )
    lams = [e.lam_fund_um for e in entries]
    span_nm = (max(lams) - min(lams)) * 1000.0
    return PulsedOverlapReport(
        entries=tuple(entries),
        grating_period_um=crystal.grating_period_um,
        temp_c=temp_c,
        fundamental_span_nm=span_nm,
        sh_span_nm=span_nm / 2.0,
        bandwidth_nm=bandwidth_nm,
        passes=span_nm <= bandwidth_nm + SPAN_FLOAT_TOLERANCE_NM,
    )
