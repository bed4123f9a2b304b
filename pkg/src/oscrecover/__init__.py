"""Inverse spectral toolkit for the almost-periodically perturbed quantum
harmonic oscillator: forward transform and eigensolver to synthesize
first-order spectral corrections, and the kernel-weighted lattice sum
that recovers frequencies and mean cosine coefficients from them.
"""

__version__ = "0.1.0"

from .kernel import (
    KernelConfig,
    SmoothStep,
    hard_cutoff_kernel,
    kernel_batch,
    kernel_direct,
    kernel_fast,
    smoothstep,
    smoothstep_prime,
    smoothstep_second,
    windowed_cos,
    windowed_cos_prime,
    windowed_cos_second,
)
from .numerics import (
    DEFAULT_QUAD,
    QuadratureConfig,
    QuadratureError,
    bessel_j0,
    integrate,
    integrate_oscillatory_sin,
    integrate_sqrt_singular,
)
from .perturbation import (
    CosineTerm,
    DecayTerm,
    PerturbationSpec,
    SpecParseError,
    besicovitch_seminorm_estimate,
    bohr_coefficient,
    evaluate,
    format_spec,
    parse_spec,
    parse_spec_file,
    primitive,
    sup_norm_bounds,
)
from .recovery import (
    RecoveryResult,
    ScanResult,
    frequency_scan,
    lattice_index_for,
    recover_at,
    recover_limit,
)
from .schlomilch import (
    TransformAudit,
    abel_invert,
    decay_audit,
    forward_transform,
    forward_transform_batch,
    forward_transform_callable,
    kernel_transform_integral,
    roundtrip_residual,
    windowed_average_integral,
)
from .spectrum import (
    EigenSolverConfig,
    SpectrumSeries,
    asymptotic_corrections,
    delta_mu_from_eigenvalues,
    eigenvalues_direct,
    eigenvalues_raw,
    inject_admissible_noise,
    read_series_csv,
    write_series_csv,
)
from .validate import SUITE_NAMES, SuiteResult, run_suite

__all__ = [
    "__version__",
    "KernelConfig", "SmoothStep", "hard_cutoff_kernel", "kernel_batch",
    "kernel_direct", "kernel_fast", "smoothstep", "smoothstep_prime",
    "smoothstep_second", "windowed_cos", "windowed_cos_prime", "windowed_cos_second",
    "DEFAULT_QUAD", "QuadratureConfig", "QuadratureError", "bessel_j0",
    "integrate", "integrate_oscillatory_sin", "integrate_sqrt_singular",
    "CosineTerm", "DecayTerm", "PerturbationSpec", "SpecParseError",
    "besicovitch_seminorm_estimate", "bohr_coefficient", "evaluate",
    "format_spec", "parse_spec", "parse_spec_file", "primitive", "sup_norm_bounds",
    "RecoveryResult", "ScanResult", "frequency_scan", "lattice_index_for",
    "recover_at", "recover_limit",
    "TransformAudit", "abel_invert", "decay_audit", "forward_transform",
    "forward_transform_batch", "forward_transform_callable",
    "kernel_transform_integral", "roundtrip_residual", "windowed_average_integral",
    "EigenSolverConfig", "SpectrumSeries", "asymptotic_corrections",
    "delta_mu_from_eigenvalues", "eigenvalues_direct", "eigenvalues_raw",
    "inject_admissible_noise", "read_series_csv", "write_series_csv",
    "SUITE_NAMES", "SuiteResult", "run_suite",
]
