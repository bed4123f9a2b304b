"""Symbolic model of the perturbation: a finite sum of even cosines plus
decaying terms, with exact primitives and mean-value (Bohr-Fourier)
coefficients used as recovery ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .numerics import DEFAULT_QUAD, QuadratureConfig, integrate

__all__ = [
    "CosineTerm",
    "DecayTerm",
    "PerturbationSpec",
    "SpecParseError",
    "SupNormBounds",
    "evaluate",
    "derivative",
    "primitive",
    "bohr_coefficient",
    "besicovitch_seminorm_estimate",
    "sup_norm_bounds",
    "parse_spec",
    "parse_spec_file",
    "format_spec",
]

# sup_x |d/dx 1/(1+x^2)| and sup_x |d/dx exp(-x^2)|
_RATIONAL_DERIV_SUP = 9.0 / (8.0 * math.sqrt(3.0))
_GAUSS_DERIV_SUP = math.sqrt(2.0 / math.e)


@dataclass(frozen=True)
class CosineTerm:
    """One almost-periodic component a*cos(frequency*x); frequency 0 is the
    constant term."""

    amplitude: complex
    frequency: float

    def __post_init__(self):
        if not (self.frequency >= 0.0):
            raise ValueError(f"cosine frequency must be >= 0, got {self.frequency}")


@dataclass(frozen=True)
class DecayTerm:
    """Decaying component with zero mean modulus at infinity.

    kind "rational": c / (1 + (x/s)^2)
    kind "gaussian": c * exp(-(x/s)^2)
    """

    kind: str
    amplitude: complex
    scale: float

    def __post_init__(self):
        if self.kind not in ("rational", "gaussian"):
            raise ValueError(f"unknown decay kind {self.kind!r}")
        if not (self.scale > 0.0):
            raise ValueError(f"decay scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class PerturbationSpec:
    """Even perturbation q = (cosine sum) + (decaying remainder)."""

    cos_terms: tuple = ()
    decay_terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cos_terms", tuple(self.cos_terms))
        object.__setattr__(self, "decay_terms", tuple(self.decay_terms))
        freqs = [t.frequency for t in self.cos_terms]
        if len(freqs) != len(set(freqs)):
            raise ValueError("cosine frequencies must be pairwise distinct")

    @classmethod
    def from_cosines(cls, pairs, decay=()):
        """Build from (amplitude, frequency) pairs plus optional DecayTerms."""
        return cls(tuple(CosineTerm(a, nu) for a, nu in pairs), tuple(decay))

    @property
    def frequencies(self):
        return tuple(t.frequency for t in self.cos_terms)

    def is_real(self, tol: float = 0.0) -> bool:
        amps = [t.amplitude for t in self.cos_terms] + [t.amplitude for t in self.decay_terms]
        return all(abs(complex(a).imag) <= tol for a in amps)


def evaluate(spec: PerturbationSpec, x):
    """Value of the perturbation at x (scalar or array); even in x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for t in spec.cos_terms:
        out += t.amplitude * np.cos(t.frequency * x)
    for t in spec.decay_terms:
        u = x / t.scale
        if t.kind == "rational":
            out += t.amplitude / (1.0 + u * u)
        else:
            out += t.amplitude * np.exp(-u * u)
    return complex(out[()]) if out.ndim == 0 else out


def derivative(spec: PerturbationSpec, x):
    """Exact derivative of the perturbation at x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for t in spec.cos_terms:
        out += -t.amplitude * t.frequency * np.sin(t.frequency * x)
    for t in spec.decay_terms:
        u = x / t.scale
        if t.kind == "rational":
            out += t.amplitude * (-2.0 * u) / ((1.0 + u * u) ** 2) / t.scale
        else:
            out += t.amplitude * (-2.0 * u) * np.exp(-u * u) / t.scale
    return complex(out[()]) if out.ndim == 0 else out


def primitive(spec: PerturbationSpec, x):
    """Closed-form primitive int_0^x of the perturbation (zero at x = 0)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for t in spec.cos_terms:
        if t.frequency == 0.0:
            out += t.amplitude * x
        else:
            out += (t.amplitude / t.frequency) * np.sin(t.frequency * x)
    for t in spec.decay_terms:
        u = x / t.scale
        if t.kind == "rational":
            out += t.amplitude * t.scale * np.arctan(u)
        else:
            out += t.amplitude * t.scale * (math.sqrt(math.pi) / 2.0) * erf(u)
    return complex(out[()]) if out.ndim == 0 else out


def bohr_coefficient(spec: PerturbationSpec, nu: float) -> complex:
    """Mean value lim (1/T) int_0^T p(t) cos(nu*t) dt of the cosine part.

    Equals a/2 at a positive frequency of the spec, the constant amplitude
    at nu = 0, and 0 elsewhere; decay terms never contribute.
    """
    if nu < 0.0:
        raise ValueError("nu must be >= 0")
    for t in spec.cos_terms:
        if t.frequency == nu:
            return complex(t.amplitude) if nu == 0.0 else complex(t.amplitude) / 2.0
    return 0.0 + 0.0j


def besicovitch_seminorm_estimate(spec: PerturbationSpec, T: float,
                                  part: str = "decay_only",
                                  cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Mean of |decaying part| over [-T, T]; tends to 0 as T grows.

    Only the decaying remainder is supported (the almost-periodic part has
    a nonzero mean modulus by construction).
    """
    if part != "decay_only":
        raise ValueError("only part='decay_only' is supported")
    if not (T > 0.0):
        raise ValueError("T must be positive")
    if not spec.decay_terms:
        return 0.0
    decay_spec = PerturbationSpec((), spec.decay_terms)

    def modulus(x):
        return np.abs(evaluate(decay_spec, x))

    # integrand is even, so the symmetric mean reduces to [0, T]
    return float(integrate(modulus, 0.0, T, cfg)) / T


@dataclass(frozen=True)
class SupNormBounds:
    """Analytic sup-norm bounds derived from the coefficients."""

    value_sup: float
    derivative_sup: float
    primitive_sup: float
    primitive_unbounded: bool = False


def sup_norm_bounds(spec: PerturbationSpec) -> SupNormBounds:
    """Coefficient-level bounds on sup|q|, sup|q'| and sup|Q|, Q the primitive.

    A zero-frequency cosine makes the primitive grow linearly; that case is
    reported through the `primitive_unbounded` flag.
    """
    value = 0.0
    deriv = 0.0
    prim = 0.0
    unbounded = False
    for t in spec.cos_terms:
        a = abs(t.amplitude)
        value += a
        deriv += a * t.frequency
        if t.frequency == 0.0:
            if a > 0.0:
                unbounded = True
        else:
            prim += a / t.frequency
    for t in spec.decay_terms:
        c = abs(t.amplitude)
        value += c
        if t.kind == "rational":
            deriv += c * _RATIONAL_DERIV_SUP / t.scale
            prim += c * t.scale * math.pi / 2.0
        else:
            deriv += c * _GAUSS_DERIV_SUP / t.scale
            prim += c * t.scale * math.sqrt(math.pi) / 2.0
    return SupNormBounds(value, deriv, prim if not unbounded else math.inf, unbounded)


class SpecParseError(ValueError):
    """Malformed perturbation file; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_spec(text: str) -> PerturbationSpec:
    """Parse the one-term-per-line perturbation format.

    Lines are `cos <re> <im> <nu>`, `rational <re> <im> <scale>` or
    `gauss <re> <im> <scale>`; `#` starts a comment.  Negative
    frequencies and duplicate frequencies are rejected.
    """
    cos_terms = []
    decay_terms = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise SpecParseError(line_no, f"expected 4 fields, got {len(fields)}")
        kind = fields[0]
        try:
            re_part, im_part, last = (float(fields[1]), float(fields[2]), float(fields[3]))
        except ValueError as exc:
            raise SpecParseError(line_no, f"non-numeric field: {exc}") from None
        amplitude = complex(re_part, im_part)
        if kind == "cos":
            if last < 0.0:
                raise SpecParseError(line_no, f"negative frequency {last}")
            if last in seen:
                raise SpecParseError(line_no, f"duplicate frequency {last}")
            seen.add(last)
            cos_terms.append(CosineTerm(amplitude, last))
        elif kind in ("rational", "gauss"):
            if last <= 0.0:
                raise SpecParseError(line_no, f"scale must be > 0, got {last}")
            decay_terms.append(DecayTerm("gaussian" if kind == "gauss" else "rational",
                                         amplitude, last))
        else:
            raise SpecParseError(line_no, f"unknown term kind {kind!r}")
    return PerturbationSpec(tuple(cos_terms), tuple(decay_terms))


def parse_spec_file(path) -> PerturbationSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read())


def format_spec(spec: PerturbationSpec) -> str:
    """Serialize a spec in the same line format parse_spec reads."""
    lines = []
    for t in spec.cos_terms:
        a = complex(t.amplitude)
        lines.append(f"cos {a.real:.17g} {a.imag:.17g} {t.frequency:.17g}")
    for t in spec.decay_terms:
        a = complex(t.amplitude)
        word = "gauss" if t.kind == "gaussian" else "rational"
        lines.append(f"{word} {a.real:.17g} {a.imag:.17g} {t.scale:.17g}")
    return "\n".join(lines) + "\n"
