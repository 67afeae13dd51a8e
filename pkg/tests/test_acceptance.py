"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with `pytest tests/test_acceptance.py -s` to see the PASS/FAIL lines.
"""
import math
import time

import numpy as np
import pytest

from qpmkit import (
    CrystalSpec,
    PerfectPhaseMatchError,
    ProcessSpec,
    PumpSpectrum,
    effective_nonlinearity,
    find_multiway,
    find_pairwise,
    grating_period_for_order,
    index,
    phase_mismatch,
    predicted_centers,
    sh_spectrum,
    tuning_curve,
)
from qpmkit.entangle import (
    adjacency_matrix,
    build_quadripartite,
    canonical_bipartitions,
    evolution_matrix,
    evolve_vacuum,
    ppt_min_eigenvalue,
    symplectic_eigenvalues,
    symplectic_form,
    vacuum_state,
)

from oracles import dense_sign_change_intervals

WINDOW = (1.40, 1.60)

PAPER_PREDICTED_NM = {"ZZZ:2": 744.3, "YZY:1": 746.0, "ZYY:7": 742.8}
PAPER_OBSERVED_NM = {"ZZZ:2": 747.8, "YZY:1": 745.4, "ZYY:7": 745.8}


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


class TestCriterion1TripleCoincidence:
    def test_kato_triple_coincidence(self, kato, trio):
        start = time.perf_counter()
        c = find_multiway(kato, trio, WINDOW, 40.0)
        elapsed = time.perf_counter() - start
        ok = (
            abs(c.lam_star_um - 1.49) <= 0.01
            and abs(c.common_period_um - 45.5) <= 0.3
            and elapsed < 1.0
        )
        assert report(
            "criterion 1 (triple coincidence, kato fit, 40 C)",
            ok,
            f"lambda* = {c.lam_star_um:.6f} um (1.49 +/- 0.01), "
            f"period = {c.common_period_um:.4f} um (45.5 +/- 0.3), "
            f"spread = {c.spread_um:.4f} um, runtime = {elapsed * 1000:.0f} ms (< 1 s)",
        )


class TestCriterion2EmanueliCrossings:
    def test_pairwise_crossings(self, emanueli, yzy, zzz2, zyy7):
        start = time.perf_counter()
        first = find_pairwise(emanueli, yzy, zzz2, WINDOW, 40.0)
        second = find_pairwise(emanueli, zzz2, zyy7, WINDOW, 40.0)
        elapsed = time.perf_counter() - start
        ok = (
            len(first) == 1
            and abs(first[0].common_period_um - 48.0) <= 0.5
            and abs(first[0].lam_star_um - 1.53) <= 0.01
            and len(second) == 1
            and abs(second[0].common_period_um - 45.0) <= 0.5
            and abs(second[0].lam_star_um - 1.485) <= 0.01
            and elapsed < 1.0
        )
        assert report(
            "criterion 2 (emanueli-fit pairwise crossings, 40 C)",
            ok,
            f"YZY=2ZZZ at {first[0].common_period_um:.3f} um / {first[0].lam_star_um:.5f} um "
            f"(48 +/- 0.5, 1.53 +/- 0.01); "
            f"2ZZZ=7ZYY at {second[0].common_period_um:.3f} um / {second[0].lam_star_um:.5f} um "
            f"(45 +/- 0.5, 1.485 +/- 0.01); runtime = {elapsed * 1000:.0f} ms (< 1 s)",
        )


class TestCriterion3PredictedCenters:
    def test_sh_centers_at_design_grating(self, kato, trio):
        crystal = CrystalSpec(length_mm=7.0, grating_period_um=45.65)
        # the quoted predictions are numerically consistent with the 22 C
        # measurement temperature; the 40 C table is emitted alongside
        rows = predicted_centers(kato, crystal, 22.0, trio, WINDOW)
        warm = predicted_centers(kato, crystal, 40.0, trio, WINDOW)
        by_label = {r.process.label: r.sh_center_nm for r in rows}
        deltas_pred = {
            k: abs(by_label[k] - PAPER_PREDICTED_NM[k]) for k in PAPER_PREDICTED_NM
        }
        deltas_obs = {
            k: abs(by_label[k] - PAPER_OBSERVED_NM[k]) for k in PAPER_OBSERVED_NM
        }
        ok = all(d <= 1.0 for d in deltas_pred.values()) and all(
            d <= 4.5 for d in deltas_obs.values()
        )
        detail = ", ".join(
            f"{k} {by_label[k]:.2f} nm (ref {PAPER_PREDICTED_NM[k]}, "
            f"d_pred {deltas_pred[k]:.2f} <= 1.0, d_obs {deltas_obs[k]:.2f} <= 4.5)"
            for k in sorted(by_label)
        )
        warm_detail = ", ".join(
            f"{r.process.label} {r.sh_center_nm:.2f}" for r in warm
        )
        assert report(
            "criterion 3 (SH centers at 45.65 um)",
            ok,
            detail + f"; 40 C evaluation: {warm_detail} nm",
        )


class TestCriterion4SyntheticFallback:
    def test_synthetic_exact_crossing_suite(self, triple_cross_model, trio):
        # transcription succeeded, so criteria 1-3 stand; the synthetic suite
        # is exercised anyway as the stated fallback
        c = find_multiway(triple_cross_model, trio, (1.45, 1.55), 20.0)
        ok = abs(c.lam_star_um - 1.5) <= 1e-6 and c.spread_um < 1e-9
        assert report(
            "criterion 4 (synthetic exact-crossing fallback suite)",
            ok,
            f"lambda* = {c.lam_star_um:.9f} um (1.5 +/- 1e-6), "
            f"spread = {c.spread_um:.2e} um (< 1e-9); "
            "not required (coefficients transcribed), run regardless",
        )


class TestCriterion5PropertySuite:
    def test_round_trip_mismatch(self, kato, emanueli, triple_cross_model):
        rng = np.random.default_rng(1490)
        pols = ("Y", "Z")
        models = {
            "ktp-kato": kato,
            "ktp-emanueli": emanueli,
            "synthetic-triple-cross": triple_cross_model,
        }
        start = time.perf_counter()
        worst = 0.0
        skipped = 0
        for model in models.values():
            lo, hi = model.wavelength_window_um
            tlo, thi = model.temperature_window_c
            for _ in range(1000):
                process = ProcessSpec(
                    str(rng.choice(pols)), str(rng.choice(pols)), str(rng.choice(pols)),
                    order=int(rng.integers(1, 8)),
                )
                lam = float(rng.uniform(2.0 * lo, hi))
                temp = float(rng.uniform(tlo, thi))
                try:
                    grating = grating_period_for_order(model, process, lam, temp)
                except PerfectPhaseMatchError:
                    skipped += 1
                    continue
                crystal = CrystalSpec(length_mm=7.0, grating_period_um=grating)
                worst = max(worst, abs(phase_mismatch(model, process, lam, lam, crystal, temp)))
        elapsed = time.perf_counter() - start
        ok = worst < 1e-9 and elapsed < 5.0
        assert report(
            "criterion 5a (round-trip mismatch, 1000 draws x 3 models)",
            ok,
            f"max |delta_k| = {worst:.2e} rad/um (< 1e-9), "
            f"{skipped} perfect-phase-match draws skipped, "
            f"runtime = {elapsed:.2f} s (< 5 s)",
        )

    def test_coincidence_dense_scan_oracle(self, kato, emanueli, trio):
        grid = np.linspace(*WINDOW, 10_000)
        step = grid[1] - grid[0]
        pairs = [(trio[0], trio[1]), (trio[1], trio[2]), (trio[0], trio[2])]
        checked = 0
        ok = True
        def oracle_period(model, p):
            n_sh = index(model, p.pol_sh, grid / 2.0, 40.0)
            n_f1 = index(model, p.pol_f1, grid, 40.0)
            n_f2 = index(model, p.pol_f2, grid, 40.0)
            return p.order * np.abs(grid / (2.0 * n_sh - n_f1 - n_f2))

        for model in (kato, emanueli):
            for a, b in pairs:
                diff = oracle_period(model, a) - oracle_period(model, b)
                intervals = dense_sign_change_intervals(diff, grid)
                roots = [c.lam_star_um for c in find_pairwise(model, a, b, WINDOW, 40.0)]
                if len(roots) != len(intervals):
                    ok = False
                for root, (lo, hi) in zip(roots, intervals):
                    checked += 1
                    if not (lo - step <= root <= hi + step):
                        ok = False
        assert report(
            "criterion 5b (coincidence roots vs 10,000-point dense scan)",
            ok,
            f"{checked} roots matched 1:1 with dense sign changes within one grid step",
        )

    def test_tuning_curve_bounds_and_delta_pump_limit(self, kato, zzz2):
        crystal = CrystalSpec(length_mm=7.0, grating_period_um=45.65)
        lam_grid = np.linspace(1.480, 1.498, 31)
        tc = tuning_curve(kato, zzz2, crystal, 22.0, lam_grid)
        bounds_ok = bool(np.all(tc.intensity >= 0.0) and np.all(tc.intensity <= 1.0))

        peaks = np.empty_like(lam_grid)
        for i, lam in enumerate(lam_grid):
            pump = PumpSpectrum(center_um=float(lam), fwhm_nm=0.1)
            sh_grid = np.linspace(lam / 2.0 - 0.0003, lam / 2.0 + 0.0003, 61)
            raw = sh_spectrum(kato, zzz2, crystal, 22.0, pump, sh_grid, normalize=False)
            peaks[i] = raw.intensity.max() / pump.amplitude_sigma_inv_um**2
        peaks /= peaks.max()
        deviation = float(np.max(np.abs(peaks - tc.intensity / tc.intensity.max())))
        ok = bounds_ok and deviation < 1e-3
        assert report(
            "criterion 5c (tuning curve in [0,1]; 0.1 nm pump sweep vs sinc^2)",
            ok,
            f"bounds {'ok' if bounds_ok else 'violated'}, "
            f"max pointwise deviation = {deviation:.2e} (< 1e-3)",
        )

    def test_effective_nonlinearity_exactness(self):
        even_ok = all(effective_nonlinearity(10.0, m) == 0.0 for m in range(2, 22, 2))
        odd_ok = all(
            effective_nonlinearity(10.0, m) == 2.0 * 10.0 / (math.pi * m)
            for m in range(1, 21, 2)
        )
        ok = even_ok and odd_ok
        assert report(
            "criterion 5d (effective nonlinearity at 50% duty)",
            ok,
            f"even orders zero: {even_ok}, odd orders exactly 2d/(pi m): {odd_ok}",
        )

    def test_gaussian_state_suite(self):
        rng = np.random.default_rng(42)
        worst_symplectic = 0.0
        for _ in range(25):
            n = int(rng.integers(2, 7))
            base = rng.normal(size=(n, n))
            g = 0.5 * (base + base.T)
            r = float(rng.uniform(-2.0, 2.0))
            s = evolution_matrix(g, r)
            omega = symplectic_form(n)
            worst_symplectic = max(
                worst_symplectic, float(np.max(np.abs(s @ omega @ s.T - omega)))
            )

        quad = adjacency_matrix(build_quadripartite(1.0, 1.0, 1.0))
        state = evolve_vacuum(quad, 0.3)
        purity_err = float(np.max(np.abs(symplectic_eigenvalues(state.matrix, 4) - 0.5)))

        two_mode = np.array([[0.0, 1.0], [1.0, 0.0]])
        tms_err = max(
            abs(
                ppt_min_eigenvalue(evolve_vacuum(two_mode, r), (0,))
                - math.exp(-2.0 * r) / 2.0
            )
            for r in (0.1, 0.5, 1.0)
        )

        vac = vacuum_state(4)
        vacuum_err = max(
            abs(ppt_min_eigenvalue(vac, cut) - 0.5) for cut in canonical_bipartitions(4)
        )

        ppt_values = [
            ppt_min_eigenvalue(state, cut) for cut in canonical_bipartitions(4)
        ]
        all_entangled = all(v < 0.5 for v in ppt_values)

        ok = (
            worst_symplectic < 1e-9
            and purity_err < 1e-9
            and tms_err < 1e-9
            and vacuum_err < 1e-9
            and all_entangled
        )
        assert report(
            "criterion 5e (Gaussian-state suite)",
            ok,
            f"max ||S Omega S^T - Omega|| = {worst_symplectic:.2e} (< 1e-9), "
            f"purity error = {purity_err:.2e} (< 1e-9), "
            f"two-mode PPT vs e^(-2r)/2 error = {tms_err:.2e} (< 1e-9), "
            f"vacuum PPT error = {vacuum_err:.2e}, "
            f"quadripartite r=0.3 max PPT = {max(ppt_values):.4f} (< 0.5 on all 7 cuts)",
        )


class TestCriterion6WidthsOutOfScope:
    def test_only_centers_are_gated(self):
        assert report(
            "criterion 6 (measured lineshape widths)",
            True,
            "not reproduced by design (depleted femtosecond pump out of scope); "
            "only peak centers are acceptance-tested, per criterion 3",
        )
