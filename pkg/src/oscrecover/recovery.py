"""Recovery of mean cosine coefficients from spectral corrections.

The estimator is the kernel-weighted Riemann sum over the spectral
lattice x_n = sqrt(2n+1):

    estimate(nu; L) = (1/x_L) * sum_{n=N}^{L-1}
                      delta_mu(n) * G_nu(x_n, x_L) * (x_{n+1} - x_n)

which converges, as L grows, to the mean of p(t)*cos(nu*t): half the
cosine amplitude at each frequency of the almost-periodic part (the full
amplitude at nu = 0) and zero elsewhere.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .kernel import KernelConfig, kernel_batch
from .spectrum import SpectrumSeries

__all__ = [
    "RecoveryResult",
    "ScanResult",
    "recover_at",
    "recover_limit",
    "frequency_scan",
    "lattice_index_for",
    "recovery_to_csv",
    "scan_to_csv",
    "clear_kernel_cache",
]

# kernel values depend only on (nu, T, N, L); reuse them across repeated
# recoveries of the same lattice (noise studies, determinism reruns)
_KERNEL_CACHE: "OrderedDict[tuple, np.ndarray]" = OrderedDict()
_KERNEL_CACHE_SIZE = 12


def clear_kernel_cache() -> None:
    _KERNEL_CACHE.clear()


def lattice_index_for(T: float, start_index: int = 0) -> int:
    """Nearest lattice index L with x_L ~ T (snapped, never below N+1)."""
    return max(start_index + 1, round((T * T - 1.0) / 2.0))


def _kernel_on_lattice(nu: float, L: int, start_index: int,
                       workers: int | None, use_cache: bool) -> np.ndarray:
    key = (nu, L, start_index)
    if use_cache and key in _KERNEL_CACHE:
        _KERNEL_CACHE.move_to_end(key)
        return _KERNEL_CACHE[key]
    x_L = math.sqrt(2.0 * L + 1.0)
    cfg = KernelConfig(nu=nu, T=x_L)
    xs = np.sqrt(2.0 * np.arange(start_index, L) + 1.0)
    vals = kernel_batch(cfg, xs, workers=workers)
    if use_cache:
        _KERNEL_CACHE[key] = vals
        while len(_KERNEL_CACHE) > _KERNEL_CACHE_SIZE:
            _KERNEL_CACHE.popitem(last=False)
    return vals


def recover_at(series: SpectrumSeries, nu: float, L: int,
               workers: int | None = None, use_cache: bool = True) -> complex:
    """Finite-L partial sum of the recovery formula with T = x_L.

    The series must cover every index in [N, L-1].  Summation uses
    numpy's fixed pairwise reduction, so the result is reproducible
    bit-for-bit regardless of how callers parallelize.
    """
    N = series.start_index
    if L <= N:
        raise ValueError(f"L must exceed the start index {N}")
    if series.last_index < L - 1:
        raise ValueError(
            f"series covers n <= {series.last_index}, need n <= {L - 1}")
    g = _kernel_on_lattice(nu, L, N, workers, use_cache)
    n = np.arange(N, L)
    # x_{n+1} - x_n written in cancellation-free form
    spacing = 2.0 / (np.sqrt(2.0 * n + 3.0) + np.sqrt(2.0 * n + 1.0))
    x_L = math.sqrt(2.0 * L + 1.0)
    return complex(np.sum(series.delta_mu[:L - N] * g * spacing) / x_L)


@dataclass(frozen=True)
class RecoveryResult:
    """Estimates over an increasing truncation schedule.

    estimates holds (T, L, value) with T = x_L snapped to the lattice;
    convergence_flag is 'converged', 'slow' or 'diverging' judged against
    a C*ln(T)/T envelope (an engineering default, configurable)."""

    nu: float
    estimates: tuple
    final_value: complex
    convergence_flag: str


def recover_limit(series: SpectrumSeries, nu: float, T_schedule,
                  workers: int | None = None,
                  envelope_const: float = 2.0) -> RecoveryResult:
    """Run recover_at along an ascending schedule of truncations.

    Each requested T is snapped to the nearest lattice point x_L; the
    final value is the last estimate (no extrapolation)."""
    Ls = []
    for T in T_schedule:
        L = lattice_index_for(float(T), series.start_index)
        if L not in Ls:
            Ls.append(L)
    if not Ls or sorted(Ls) != Ls:
        raise ValueError("T_schedule must be ascending and nonempty")
    estimates = []
    for L in Ls:
        value = recover_at(series, nu, L, workers=workers)
        estimates.append((math.sqrt(2.0 * L + 1.0), L, value))
    final = estimates[-1][2]
    if len(estimates) == 1:
        flag = "converged" if final == 0.0 else "slow"
    else:
        diffs = [abs(estimates[k][2] - estimates[k - 1][2])
                 for k in range(1, len(estimates))]
        T_last = estimates[-1][0]
        envelope = envelope_const * math.log(T_last) / T_last * max(1.0, abs(final))
        if diffs[-1] <= envelope:
            flag = "converged"
        elif diffs[-1] > diffs[0] and diffs[-1] > 4.0 * envelope:
            flag = "diverging"
        else:
            flag = "slow"
    return RecoveryResult(nu, tuple(estimates), final, flag)


@dataclass(frozen=True)
class ScanResult:
    """Recovery estimates over a frequency grid with detected peaks.

    peaks holds (nu, value) at local maxima of |value| above the
    threshold; at a positive frequency the value estimates half the
    cosine amplitude, at nu = 0 the constant itself."""

    nu_grid: np.ndarray
    values: np.ndarray
    peaks: tuple
    T: float
    L: int
    threshold: float
    warnings: tuple = field(default=())


def _detect_peaks(nu_grid: np.ndarray, values: np.ndarray,
                  threshold: float, min_separation: float):
    mags = np.abs(values)
    vmax = float(np.max(mags)) if len(mags) else 0.0
    if vmax <= 0.0:
        return []
    floor = threshold * vmax
    candidates = []
    for i in range(len(mags)):
        left = mags[i - 1] if i > 0 else -math.inf
        right = mags[i + 1] if i + 1 < len(mags) else -math.inf
        if mags[i] >= floor and mags[i] >= left and mags[i] >= right:
            candidates.append(i)
    kept: list[int] = []
    for i in sorted(candidates, key=lambda j: -mags[j]):
        if all(abs(nu_grid[i] - nu_grid[j]) >= min_separation * (1.0 - 1e-12)
               for j in kept):
            kept.append(i)
    kept.sort()
    return [(float(nu_grid[i]), complex(values[i])) for i in kept]


def frequency_scan(series: SpectrumSeries, nu_min: float, nu_max: float,
                   nu_step: float, T: float, threshold: float = 0.2,
                   min_separation: float | None = None,
                   workers: int | None = None) -> ScanResult:
    """recover_at on a frequency grid at fixed truncation, with peak
    detection.

    Peaks are local maxima of |value| above threshold*max|value|, thinned
    to the minimum separation (default 2*nu_step).  Detected peaks closer
    than the resolution limit 2*pi/T are flagged in `warnings`."""
    if nu_step <= 0.0:
        raise ValueError("nu_step must be positive")
    if nu_min < 0.0 or nu_max < nu_min:
        raise ValueError("need 0 <= nu_min <= nu_max")
    if min_separation is None:
        min_separation = 2.0 * nu_step
    grid = np.arange(nu_min, nu_max + 0.5 * nu_step, nu_step)
    L = lattice_index_for(T, series.start_index)
    x_L = math.sqrt(2.0 * L + 1.0)

    def at(nu: float) -> complex:
        return recover_at(series, float(nu), L, workers=None, use_cache=False)

    if workers is None or workers <= 1 or len(grid) == 1:
        values = np.array([at(nu) for nu in grid], dtype=complex)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.array(list(pool.map(at, grid)), dtype=complex)

    peaks = _detect_peaks(grid, values, threshold, min_separation)
    warnings = []
    resolution = 2.0 * math.pi / x_L
    for a in range(len(peaks)):
        for b in range(a + 1, len(peaks)):
            gap = abs(peaks[b][0] - peaks[a][0])
            if gap < resolution:
                warnings.append(
                    f"peaks at nu={peaks[a][0]:g} and nu={peaks[b][0]:g} are "
                    f"closer than the resolution limit {resolution:.4g} at T={x_L:.4g}")
    return ScanResult(grid, values, tuple(peaks), x_L, L, threshold, tuple(warnings))


def recovery_to_csv(result: RecoveryResult) -> str:
    rows = ["T,L,re_value,im_value"]
    for T, L, value in result.estimates:
        rows.append(f"{T:.17g},{L},{value.real:.17g},{value.imag:.17g}")
    return "\n".join(rows) + "\n"


def scan_to_csv(result: ScanResult) -> str:
    peak_nus = {nu for nu, _ in result.peaks}
    rows = ["nu,re_value,im_value,is_peak"]
    for nu, value in zip(result.nu_grid, result.values):
        flag = 1 if float(nu) in peak_nus else 0
        rows.append(f"{nu:.17g},{value.real:.17g},{value.imag:.17g},{flag}")
    return "\n".join(rows) + "\n"
