"""Independent oracles used by the test suite.

Each stays deliberately naive (dense scans, series expansions, Decimal
arithmetic) so it shares no code path with the implementation it checks.
"""
from decimal import Decimal, getcontext

import numpy as np

getcontext().prec = 50

PI_50 = Decimal("3.1415926535897932384626433832795028841971693993751")


def decimal_index_kato_z(lam: str, temp_c: str) -> Decimal:
    """Hand evaluation of the transcribed KTP z-axis fit in 50-digit decimal."""
    lam = Decimal(lam)
    l2 = lam * lam
    n2 = (
        Decimal("4.59423")
        + Decimal("0.06206") / (l2 - Decimal("0.04763"))
        + Decimal("110.80672") / (l2 - Decimal("86.12171"))
    )
    u = 1 / lam
    dndt = (
        Decimal("-0.1897")
        + Decimal("3.6677") * u
        - Decimal("2.9220") * u**2
        + Decimal("0.9221") * u**3
    ) * Decimal("1e-5")
    return n2.sqrt() + dndt * (Decimal(temp_c) - Decimal(20))


def dense_sign_change_intervals(f_values: np.ndarray, grid: np.ndarray):
    """(lo, hi) grid intervals where f changes sign or touches zero."""
    out = []
    for i in range(len(grid) - 1):
        a, b = f_values[i], f_values[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0 or a * b < 0.0:
            out.append((float(grid[i]), float(grid[i + 1])))
    if np.isfinite(f_values[-1]) and f_values[-1] == 0.0:
        out.append((float(grid[-1]), float(grid[-1])))
    return out


def taylor_expm(matrix: np.ndarray, terms: int = 80) -> np.ndarray:
    """Plain Taylor-series matrix exponential (no scaling, no eigensolve)."""
    out = np.eye(matrix.shape[0])
    term = np.eye(matrix.shape[0])
    for k in range(1, terms):
        term = term @ matrix / k
        out = out + term
    return out


def fwhm_from_samples(lam: np.ndarray, values: np.ndarray) -> float:
    """Full width at half maximum via linear interpolation around the peak."""
    peak = values.max()
    half = peak / 2.0
    idx = int(np.argmax(values))
    lo = None
    for i in range(idx, 0, -1):
        if values[i - 1] < half <= values[i]:
            frac = (half - values[i - 1]) / (values[i] - values[i - 1])
            lo = lam[i - 1] + frac * (lam[i] - lam[i - 1])
            break
    hi = None
    for i in range(idx, len(values) - 1):
        if values[i + 1] < half <= values[i]:
            frac = (values[i] - half) / (values[i] - values[i + 1])
            hi = lam[i] + frac * (lam[i + 1] - lam[i])
            break
    if lo is None or hi is None:
        raise ValueError("half-maximum crossings not found inside the grid")
    return float(hi - lo)


def centroid_of_top_half(lam: np.ndarray, values: np.ndarray) -> float:
    """Intensity-weighted centroid of the samples above half maximum."""
    mask = values >= values.max() / 2.0
    return float(np.sum(lam[mask] * values[mask]) / np.sum(values[mask]))
