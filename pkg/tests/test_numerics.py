"""Quadrature primitives and the in-repo J0."""

import math

import numpy as np
import pytest

from oscrecover.numerics import (
    QuadratureConfig,
    QuadratureError,
    bessel_j0,
    integrate,
    integrate_oscillatory_sin,
    integrate_sqrt_singular,
)

ARCOSH_2 = 1.3169578969248166  # ln(2 + sqrt(3))


def test_integrate_constant():
    assert integrate(lambda t: np.ones_like(t), 0.0, 1.0) == pytest.approx(1.0, abs=1e-13)


def test_integrate_cosine_quarter_period():
    assert integrate(np.cos, 0.0, math.pi / 2.0) == pytest.approx(1.0, abs=1e-12)


def test_integrate_gaussian_moment():
    val = integrate(lambda t: t * np.exp(-t * t), 0.0, 10.0)
    assert val == pytest.approx(0.5, abs=1e-12)


def test_integrate_empty_and_reversed_range():
    assert integrate(np.cos, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        integrate(np.cos, 2.0, 1.0)


def test_integrate_linearity():
    rng = np.random.default_rng(42)
    cfg = QuadratureConfig(abs_tol=1e-11, rel_tol=1e-11)
    f = np.cos
    g = lambda t: np.exp(-0.5 * t)
    for _ in range(5):
        a, b = sorted(rng.uniform(0.0, 6.0, 2))
        if b - a < 1e-3:
            continue
        al, be = rng.uniform(-2.0, 2.0, 2)
        lhs = integrate(lambda t: al * f(t) + be * g(t), a, b, cfg)
        rhs = al * integrate(f, a, b, cfg) + be * integrate(g, a, b, cfg)
        assert abs(lhs - rhs) < 2.0 * max(cfg.abs_tol, cfg.rel_tol * abs(rhs)) + 1e-12


def test_integrate_complex_integrand():
    val = integrate(lambda t: np.exp(1j * t), 0.0, math.pi / 2.0)
    assert val == pytest.approx(1.0 + 1.0j, abs=1e-12)


def test_integrate_budget_exhaustion_carries_estimate():
    cfg = QuadratureConfig(max_subdivisions=8, abs_tol=1e-14, rel_tol=1e-14)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: np.abs(t - 1.0 / 3.0) ** -0.9, 0.0, 1.0, cfg)
    err = info.value
    assert np.isfinite(err.error_bound)
    assert np.isfinite(complex(err.estimate).real)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(base_panel_order=2)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)


def test_sqrt_singular_linear_numerator():
    # h(t) = t cancels the singularity: integral over [0, 1] is exactly 1
    val = integrate_sqrt_singular(lambda t: t, 0.0, 1.0)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_sqrt_singular_unit_numerator():
    val = integrate_sqrt_singular(lambda t: np.ones_like(t), 1.0, 2.0)
    assert val == pytest.approx(ARCOSH_2, abs=1e-12)


def test_sqrt_singular_empty_range():
    assert integrate_sqrt_singular(lambda t: t, 2.0, 2.0) == 0.0
    assert integrate_sqrt_singular(lambda t: t, 2.0, 1.0) == 0.0


def brute_force_sine_tail(x, periods=400):
    """Oracle: sum per-half-period pieces of int_x^B sin(t)/sqrt(t^2-x^2) dt
    and average consecutive partial sums to kill the alternation."""
    breaks = [x]
    k = math.ceil(x / math.pi)
    while len(breaks) < periods:
        edge = k * math.pi
        if edge > breaks[-1]:
            breaks.append(edge)
        k += 1
    partials = []
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if a == x:
            piece = integrate_sqrt_singular(np.sin, x, b)
        else:
            piece = integrate(lambda t: np.sin(t) / np.sqrt((t - x) * (t + x)), a, b)
        total += float(np.real(piece))
        partials.append(total)
    return 0.5 * (partials[-1] + partials[-2])


def test_sqrt_singular_sine_reaches_bessel_limit():
    # pins the constant in int_x^inf sin(t)/sqrt(t^2-x^2) dt = (pi/2) J0(x)
    limit = brute_force_sine_tail(1.0)
    expected = 0.5 * math.pi * bessel_j0(1.0)
    assert expected == pytest.approx(1.2019697153172066, abs=1e-12)
    assert limit == pytest.approx(expected, abs=1e-4)
    # and the finite-b values approach it
    near = float(np.real(integrate_sqrt_singular(np.sin, 1.0, 127.5 * math.pi)))
    far = float(np.real(integrate_sqrt_singular(np.sin, 1.0, 255.5 * math.pi)))
    assert abs(far - expected) < abs(near - expected)
    assert abs(far - expected) < 1e-4


def test_sqrt_singular_matches_epsilon_corrected_raw_integral():
    # raw integral on [x+eps, b] plus the leading analytic correction
    # h(x)*arcosh((x+eps)/x) converges like eps^(3/2); Richardson over
    # decades must agree with the substituted result
    x, b = 1.0, 3.0
    h = np.cos
    full = float(np.real(integrate_sqrt_singular(h, x, b)))

    def corrected(eps):
        raw = integrate(lambda t: h(t) / np.sqrt((t - x) * (t + x)), x + eps, b)
        return float(np.real(raw)) + h(x) * math.acosh((x + eps) / x)

    vals = [corrected(e) for e in (1e-2, 1e-3, 1e-4)]
    r = 10.0 ** -1.5
    extr1 = (vals[1] - r * vals[0]) / (1.0 - r)
    extr2 = (vals[2] - r * vals[1]) / (1.0 - r)
    assert abs(extr1 - extr2) < 1e-7
    assert abs(extr2 - full) < 1e-7


def test_oscillatory_full_period_vanishes():
    val = integrate_oscillatory_sin(lambda t: np.ones_like(t), 1.0, 0.0, 2.0 * math.pi)
    assert abs(val) < 1e-12


def test_oscillatory_half_period():
    val = integrate_oscillatory_sin(lambda t: np.ones_like(t), 1.0, 0.0, math.pi)
    assert val == pytest.approx(2.0, abs=1e-10)


def test_oscillatory_matches_adaptive_on_decaying_amplitude():
    w = lambda t: 1.0 / t
    a, b = math.pi, 100.0 * math.pi
    fast = integrate_oscillatory_sin(w, 1.0, a, b)
    slow = float(np.real(integrate(lambda t: np.sin(t) / t, a, b,
                                   QuadratureConfig(abs_tol=1e-12, rel_tol=1e-12,
                                                    max_subdivisions=20000))))
    assert fast == pytest.approx(slow, abs=1e-8)


def test_oscillatory_matches_adaptive_on_smooth_overlap():
    w = lambda t: np.exp(-t / 10.0)
    fast = integrate_oscillatory_sin(w, 2.5, 2.0, 37.0)
    slow = float(np.real(integrate(lambda t: w(t) * np.sin(2.5 * t), 2.0, 37.0)))
    assert fast == pytest.approx(slow, abs=1e-9)


def test_oscillatory_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        integrate_oscillatory_sin(lambda t: t, 0.0, 0.0, 1.0)


# ----------------------------------------------------------------------
# J0
# ----------------------------------------------------------------------

def j0_power_series(x, terms=60):
    """Independent slow oracle: plain power series, adequate below ~12."""
    z = 0.25 * x * x
    term, acc = 1.0, 1.0
    for k in range(1, terms):
        term *= -z / (k * k)
        acc += term
    return acc


def test_j0_at_zero():
    assert bessel_j0(0.0) == 1.0


def test_j0_first_zero_location():
    # bisection on the independent series oracle
    lo, hi = 2.0, 3.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if j0_power_series(lo) * j0_power_series(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    assert root == pytest.approx(2.4048255577, abs=1e-9)
    assert abs(bessel_j0(root)) < 1e-9


@pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 20.0, 50.0])
def test_j0_defining_integral_identity(x):
    ref = (2.0 / math.pi) * float(np.real(
        integrate(lambda th: np.cos(x * np.sin(th)), 0.0, math.pi / 2.0)))
    assert bessel_j0(x) == pytest.approx(ref, abs=1e-10)


def test_j0_branch_agreement_at_split():
    from oscrecover.numerics import _j0_hankel, _j0_series

    x = np.array([8.0])
    assert abs(float(_j0_series(x)[0]) - float(_j0_hankel(x)[0])) < 1e-14


def test_j0_vectorized_matches_scalar():
    xs = np.linspace(0.0, 40.0, 173)
    vec = bessel_j0(xs)
    assert vec.shape == xs.shape
    assert max(abs(vec[i] - bessel_j0(float(x))) for i, x in enumerate(xs)) == 0.0
