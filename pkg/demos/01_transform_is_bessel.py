"""The forward transform of a pure cosine is a Bessel function.

The angular average (2/pi) int_0^{pi/2} q(x sin theta) d theta maps
cos(nu*x) to J0(nu*x).  This is the leading-order link between a
perturbation and its spectral corrections, and the package's first
golden test: the quadrature route must reproduce the in-repo J0 to
1e-10.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from oscrecover import PerturbationSpec, bessel_j0, forward_transform

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

spec = PerturbationSpec.from_cosines([(1.0, 1.0)])
xs = np.linspace(0.0, 40.0, 161)
transform = np.array([forward_transform(spec, float(x)).real for x in xs])
reference = bessel_j0(xs)

worst = np.max(np.abs(transform - reference))
print(f"max |transform - J0| over [0, 40]: {worst:.3e}")

scaled = PerturbationSpec.from_cosines([(1.0, 2.2)])
val = forward_transform(scaled, 3.0).real
print(f"frequency scaling: transform of cos(2.2 x) at x=3 -> {val:.12f}")
print(f"                   J0(6.6)                        -> {bessel_j0(6.6):.12f}")

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
ax1.plot(xs, transform, lw=1.2, label="angular-average quadrature")
ax1.plot(xs, reference, "--", lw=1.0, label="series/asymptotic J0")
ax1.set_ylabel("value")
ax1.legend()
ax2.semilogy(xs, np.abs(transform - reference) + 1e-18, lw=1.0)
ax2.set_xlabel("x")
ax2.set_ylabel("|difference|")
fig.tight_layout()
fig.savefig(OUT / "transform_is_bessel.png", dpi=120)
print(f"wrote {OUT / 'transform_is_bessel.png'}")
