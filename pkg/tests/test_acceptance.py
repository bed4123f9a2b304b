"""Acceptance criteria, one test per criterion, each printing a
PASS/FAIL line with the measured quantities.

Run with `pytest tests/test_acceptance.py -v -s`.  Criterion 10 re-runs
every criterion's artifact pipeline at a different worker count and
byte-compares the outputs, so each criterion below builds its artifacts
through the shared `ARTIFACTS` registry.
"""

import math
import time

import numpy as np

from oscrecover.kernel import KernelConfig, hard_cutoff_kernel, kernel_batch
from oscrecover.numerics import bessel_j0
from oscrecover.perturbation import DecayTerm, PerturbationSpec
from oscrecover.recovery import clear_kernel_cache, lattice_index_for, recover_at, recover_limit
from oscrecover.schlomilch import (
    decay_audit,
    forward_transform,
    kernel_transform_integral,
    roundtrip_residual,
)
from oscrecover.spectrum import (
    EigenSolverConfig,
    asymptotic_corrections,
    eigenvalues_raw,
    inject_admissible_noise,
)
from oscrecover.validate import bound_audit_corpus

CRITERION_SPEC = PerturbationSpec.from_cosines(
    [(2.0, 1.0), (1.0 + 1.0j, 2.2)], decay=[DecayTerm("rational", 1.0, 1.0)])
TWO_TONE = PerturbationSpec.from_cosines([(1.0, 1.3), (0.5, 2.7)])
UNIT_COS = PerturbationSpec.from_cosines([(1.0, 1.0)])

_memo = {}


def report(number, ok, detail):
    print(f"\nCRITERION {number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {number}: {detail}"


def table(rows, header):
    return ("\n".join([header] + rows) + "\n").encode()


# ----------------------------------------------------------------------
# per-criterion artifact pipelines (worker-count must not change bytes)
# ----------------------------------------------------------------------

def artifacts_c1(workers):
    xs = np.linspace(0.0, 50.0, 50)
    start = time.perf_counter()
    vals = [forward_transform(UNIT_COS, float(x)) for x in xs]
    elapsed = time.perf_counter() - start
    refs = bessel_j0(xs)
    devs = [abs(v - r) for v, r in zip(vals, refs)]
    rows = [f"{x:.17g},{v.real:.17g},{r:.17g}" for x, v, r in zip(xs, vals, refs)]
    return {"bessel.csv": table(rows, "x,transform,j0")}, {
        "max_dev": max(devs), "elapsed": elapsed}


def artifacts_c2(workers):
    rows = []
    start = time.perf_counter()
    worst = 0.0
    for T in (50.0, 100.0, 200.0):
        for nu in (0.0, 1.3, 2.7):
            r = roundtrip_residual(TWO_TONE, nu, T)
            worst = max(worst, r)
            rows.append(f"{nu},{T},{r:.17g}")
    elapsed = time.perf_counter() - start
    return {"roundtrip.csv": table(rows, "nu,T,residual")}, {
        "max_residual": worst, "elapsed": elapsed}


def artifacts_c3(workers):
    cfg = EigenSolverConfig.for_index_range(100, step=0.0042)
    coarse = eigenvalues_raw(PerturbationSpec(), cfg)
    fine = eigenvalues_raw(PerturbationSpec(), cfg.refined())
    rich = (4.0 * fine - coarse) / 3.0
    exact = 2.0 * np.arange(101) + 1.0
    max_err = float(np.max(np.abs(rich - exact)))
    order = math.log2(float(np.max(np.abs(coarse - exact)))
                      / float(np.max(np.abs(fine - exact))))
    rows = [f"{n},{mu:.17g}" for n, mu in enumerate(rich)]
    return {"eigen_unperturbed.csv": table(rows, "n,mu")}, {
        "max_err": max_err, "order": order, "stencil": cfg.stencil_order}


def artifacts_c4(workers):
    cfg = EigenSolverConfig.for_index_range(200, step=0.006)
    coarse = eigenvalues_raw(UNIT_COS, cfg)
    fine = eigenvalues_raw(UNIT_COS, cfg.refined())
    mus = (4.0 * fine - coarse) / 3.0
    n = np.arange(20, 201)
    x = np.sqrt(2.0 * n + 1.0)
    rho = np.abs(mus[20:201] - (2.0 * n + 1.0) - bessel_j0(x))
    weighted = float(np.max(rho * n ** (1.0 / 3.0)))
    edges = np.unique(np.logspace(math.log10(20), math.log10(201), 9).astype(int))
    block_n, block_v = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        sel = (n >= a) & (n < b)
        if sel.any():
            block_n.append(math.exp(float(np.mean(np.log(n[sel])))))
            block_v.append(float(rho[sel].max()))
    slope = float(np.polyfit(np.log(block_n), np.log(block_v), 1)[0])
    rows = [f"{ni},{ri:.17g}" for ni, ri in zip(n, rho)]
    return {"residuals.csv": table(rows, "n,abs_residual")}, {
        "weighted_max": weighted, "slope": slope}


def _series_c5():
    if "series_c5" not in _memo:
        _memo["series_c5"] = asymptotic_corrections(
            CRITERION_SPEC, 0, lattice_index_for(1000.0) - 1)
    return _memo["series_c5"]


def artifacts_c5(workers):
    series = _series_c5()
    start = time.perf_counter()
    smoke = {nu: recover_at(series, nu, lattice_index_for(300.0), workers=workers)
             for nu in (1.0, 2.2)}
    smoke_elapsed = time.perf_counter() - start
    start = time.perf_counter()
    results = {nu: recover_limit(series, nu, [300.0, 1000.0], workers=workers)
               for nu in (1.0, 2.2)}
    off = recover_at(series, 1.6, lattice_index_for(1000.0), workers=workers)
    full_elapsed = time.perf_counter() - start
    rows = []
    for nu, res in results.items():
        for T, L, v in res.estimates:
            rows.append(f"{nu},{T:.17g},{L},{v.real:.17g},{v.imag:.17g}")
    rows.append(f"1.6,{math.sqrt(2*lattice_index_for(1000.0)+1):.17g},"
                f"{lattice_index_for(1000.0)},{off.real:.17g},{off.imag:.17g}")
    targets = {1.0: 1.0 + 0.0j, 2.2: 0.5 + 0.5j}
    rel = {}
    for nu, res in results.items():
        by_T = {round(T): v for T, _, v in res.estimates}
        rel[(nu, 300)] = abs(by_T[300] - targets[nu]) / abs(targets[nu])
        rel[(nu, 1000)] = abs(by_T[1000] - targets[nu]) / abs(targets[nu])
    return {"recovery.csv": table(rows, "nu,T,L,re,im")}, {
        "rel": rel, "off_mod": abs(off), "smoke": smoke,
        "smoke_elapsed": smoke_elapsed, "full_elapsed": full_elapsed,
        "results": results}


def artifacts_c6(workers):
    series = _series_c5()
    L = lattice_index_for(1000.0)
    targets = {1.0: 1.0 + 0.0j, 2.2: 0.5 + 0.5j}
    clean = {nu: recover_at(series, nu, L, workers=workers) for nu in targets}
    rows = []
    worst_shift_pct = 0.0
    for seed in range(5):
        noisy = inject_admissible_noise(series, 0.5, 0.3, seed=seed)
        for nu, target in targets.items():
            v = recover_at(noisy, nu, L, workers=workers)
            shift_pct = 100.0 * abs(v - clean[nu]) / abs(target)
            worst_shift_pct = max(worst_shift_pct, shift_pct)
            rows.append(f"{seed},{nu},{v.real:.17g},{v.imag:.17g},{shift_pct:.17g}")
    return {"noise.csv": table(rows, "seed,nu,re,im,shift_pct")}, {
        "worst_shift_pct": worst_shift_pct}


def artifacts_c7(workers):
    Ts = [50.0, 100.0, 200.0, 400.0]
    if "series_c7" not in _memo:
        _memo["series_c7"] = asymptotic_corrections(
            UNIT_COS, 0, lattice_index_for(Ts[-1]) - 1)
    series = _memo["series_c7"]
    gaps = []
    rows = []
    for T in Ts:
        L = lattice_index_for(T)
        x_L = math.sqrt(2.0 * L + 1.0)
        lattice = recover_at(series, 1.0, L, workers=workers)
        integral = kernel_transform_integral(UNIT_COS, 1.0, x_L) / x_L
        gaps.append(abs(lattice - integral))
        rows.append(f"{x_L:.17g},{gaps[-1]:.17g}")
    slope = float(np.polyfit(np.log(Ts), np.log(gaps), 1)[0])
    return {"riemann_gap.csv": table(rows, "T,gap")}, {"slope": slope, "gaps": gaps}


def artifacts_c8(workers):
    grid = np.linspace(1.0, 400.0, 400)
    rows = []
    worst_g = worst_gp = 0.0
    for name, spec in bound_audit_corpus():
        audit = decay_audit(spec, grid)
        worst_g = max(worst_g, audit.g_bound_ratio)
        worst_gp = max(worst_gp, audit.g_prime_bound_ratio)
        rows.append(f"{name},{audit.g_bound_ratio:.17g},{audit.g_prime_bound_ratio:.17g}")
    worst_k = worst_kp = 0.0
    h = 1e-3
    krows = []
    for T in (50.0, 100.0, 200.0):
        for nu in (0.0, 0.5, 1.0, 3.0):
            cfg = KernelConfig(nu=nu, T=T)
            xs = np.linspace(1.0, T, 201)
            vals = kernel_batch(cfg, xs, workers=workers)
            ratio = float(np.max(np.abs(vals) / ((1.0 + nu) * np.sqrt(xs))))
            xc = xs[(xs > 1.0 + h) & (xs < T - h)]
            deriv = (kernel_batch(cfg, xc + h, workers=workers)
                     - kernel_batch(cfg, xc - h, workers=workers)) / (2.0 * h)
            ratio_d = float(np.max(np.abs(deriv) / ((1.0 + nu) ** 2 * np.sqrt(xc))))
            worst_k = max(worst_k, ratio)
            worst_kp = max(worst_kp, ratio_d)
            krows.append(f"{T},{nu},{ratio:.17g},{ratio_d:.17g}")
    xs = np.linspace(100.0, 400.0, 6001)
    sharp = float(np.max(np.abs(bessel_j0(xs)) * np.sqrt(1.0 + xs)))
    return {
        "transform_bounds.csv": table(rows, "spec,g_ratio,g_prime_ratio"),
        "kernel_bounds.csv": table(krows, "T,nu,ratio,ratio_prime"),
    }, {"worst_g": worst_g, "worst_gp": worst_gp, "worst_k": worst_k,
        "worst_kp": worst_kp, "sharpness": sharp}


def artifacts_c9(workers):
    T, nu = 50.0, 1.0
    deltas = np.logspace(-3, math.log10(0.9), 25)
    vals = np.array([abs(hard_cutoff_kernel(nu, T, T - d)) for d in deltas])
    sel = deltas <= 0.1
    slope = float(np.polyfit(np.log(deltas[sel]), np.log(vals[sel]), 1)[0])
    rows = [f"{d:.17g},{v:.17g}" for d, v in zip(deltas, vals)]
    return {"hard_cutoff.csv": table(rows, "delta,abs_kernel")}, {"slope": slope}


ARTIFACTS = {
    1: artifacts_c1, 2: artifacts_c2, 3: artifacts_c3, 4: artifacts_c4,
    5: artifacts_c5, 6: artifacts_c6, 7: artifacts_c7, 8: artifacts_c8,
    9: artifacts_c9,
}


def run_once(number, workers=1):
    key = (number, workers)
    if key not in _memo:
        _memo[key] = ARTIFACTS[number](workers)
    return _memo[key]


# ----------------------------------------------------------------------
# criteria
# ----------------------------------------------------------------------

def test_criterion_1_bessel_golden():
    _, m = run_once(1)
    ok = m["max_dev"] < 1e-10 and m["elapsed"] < 1.0
    report(1, ok, f"transform(cos)=J0 max dev {m['max_dev']:.3e} < 1e-10 "
                  f"at 50 points, runtime {m['elapsed']:.3f}s < 1s")


def test_criterion_2_roundtrip_identity():
    _, m = run_once(2)
    ok = m["max_residual"] < 1e-6 and m["elapsed"] < 30.0
    report(2, ok, f"max residual {m['max_residual']:.3e} < 1e-6 over "
                  f"(nu,T) in {{0,1.3,2.7}}x{{50,100,200}}, runtime {m['elapsed']:.1f}s < 30s")


def test_criterion_3_unperturbed_spectrum():
    _, m = run_once(3)
    ok = m["max_err"] < 1e-6 and abs(m["order"] - m["stencil"]) < 0.2 * m["stencil"]
    report(3, ok, f"Richardson max error {m['max_err']:.3e} < 1e-6 for n<=100; "
                  f"refinement order {m['order']:.3f} vs stencil {m['stencil']} (within 20%)")


def test_criterion_4_asymptotics_validation():
    _, m = run_once(4)
    ok = np.isfinite(m["weighted_max"]) and m["slope"] <= -0.25
    report(4, ok, f"max |residual|*n^(1/3) = {m['weighted_max']:.4f} (reported), "
                  f"envelope slope {m['slope']:.3f} <= -0.25 over n in [20,200]")


def test_criterion_5_end_to_end_recovery():
    _, m = run_once(5)
    rel = m["rel"]
    ok = (rel[(1.0, 1000)] < 0.05 and rel[(2.2, 1000)] < 0.05
          and rel[(1.0, 300)] < 0.10 and rel[(2.2, 300)] < 0.10
          and m["off_mod"] < 0.05
          and m["smoke_elapsed"] < 60.0 and m["full_elapsed"] < 600.0)
    report(5, ok,
           f"rel err at T=1000: nu=1.0 {rel[(1.0, 1000)]:.4f}, nu=2.2 {rel[(2.2, 1000)]:.4f} (<5%); "
           f"at T=300: {rel[(1.0, 300)]:.4f}, {rel[(2.2, 300)]:.4f} (<10%); "
           f"off-spectrum |v(1.6)|={m['off_mod']:.4f} < 0.05; "
           f"smoke {m['smoke_elapsed']:.1f}s < 60s, full {m['full_elapsed']:.1f}s < 600s")


def test_criterion_6_noise_robustness():
    _, m = run_once(6)
    ok = m["worst_shift_pct"] < 3.0
    report(6, ok, f"worst estimate shift {m['worst_shift_pct']:.3f} percentage points "
                  f"< 3 across 5 seeds (sigma=0.5, beta=0.3)")


def test_criterion_7_riemann_sum_rate():
    _, m = run_once(7)
    ok = m["slope"] <= -0.8
    report(7, ok, f"lattice-sum vs integral gap slope {m['slope']:.3f} <= -0.8 "
                  f"over T in {{50,100,200,400}} (gaps {m['gaps'][0]:.2e} -> {m['gaps'][-1]:.2e})")


def test_criterion_8_bound_audits():
    _, m = run_once(8)
    ok = (m["worst_g"] < 1.0 and m["worst_gp"] < 1.0
          and m["worst_k"] < 3.0 and m["worst_kp"] < 7.0
          and m["sharpness"] > 0.5)
    report(8, ok, f"bound constants: transform {m['worst_g']:.3f}<1, "
                  f"transform' {m['worst_gp']:.3f}<1, kernel {m['worst_k']:.3f}<3, "
                  f"kernel' {m['worst_kp']:.3f}<7; sharpness {m['sharpness']:.3f}>0.5")


def test_criterion_9_cutoff_necessity():
    _, m = run_once(9)
    ok = abs(m["slope"] + 0.5) <= 0.1
    report(9, ok, f"hard-cutoff blow-up exponent {m['slope']:.3f} within -0.5 +/- 0.1")


def test_criterion_10_determinism_across_workers():
    mismatches = []
    for number in sorted(ARTIFACTS):
        base, _ = run_once(number, workers=1)
        clear_kernel_cache()
        again, _ = ARTIFACTS[number](4)
        clear_kernel_cache()
        for name in base:
            if base[name] != again[name]:
                mismatches.append(f"criterion {number}: {name}")
    ok = not mismatches
    report(10, ok, "all criterion outputs byte-identical across worker counts {1,4}"
           if ok else f"mismatched artifacts: {mismatches}")
