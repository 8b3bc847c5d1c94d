"""Decay shape follows the frequency weight.

A pair of ions dephases because the splitting between the two clock states
drifts from shot to shot.  The ensemble-averaged coherence factor k(t) is the
characteristic function of the frequency weight, so the weight's shape is
printed directly into the decay law: a Gaussian weight gives ln V quadratic
in t, a Lorentzian weight gives ln V linear in t.

Run:  python3 demos/field_noise_decay.py
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from iondecay import (
    Gaussian,
    Lorentzian,
    coherence_analytic,
    coherence_mc,
    coherence_quadrature,
    dfs_visibility_curve,
)

SIGMA = 1.0
HWHM = 0.5
TIMES = np.linspace(0.0, 3.0, 61)

gauss = Gaussian(0.0, SIGMA)
lorentz = Lorentzian(0.0, HWHM)

print("Three routes to the same coherence factor, Gaussian(0, 1) at t = 1:")
for name, k in (
    ("analytic  ", coherence_analytic(gauss, 1.0)),
    ("quadrature", coherence_quadrature(gauss, 1.0)),
    ("monte carlo", coherence_mc(gauss, 1.0, 200_000, seed=1)),
):
    print(f"  {name}  |k| = {abs(k.value):.6f}   (stderr {k.stderr:.2e})")
print(f"  closed form           exp(-1/2) = {np.exp(-0.5):.6f}")

curve_g = dfs_visibility_curve(gauss, TIMES)
curve_l = dfs_visibility_curve(lorentz, TIMES)

fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 3.6))
ax0.plot(TIMES, curve_g.visibility, label=f"Gaussian weight, sigma={SIGMA}")
ax0.plot(TIMES, curve_l.visibility, label=f"Lorentzian weight, hwhm={HWHM}")
ax0.set_xlabel("t")
ax0.set_ylabel("visibility V")
ax0.legend(fontsize=8)
ax0.set_title("curves look alike ...")

ax1.plot(TIMES, np.log(curve_g.visibility), label="ln V, Gaussian weight")
ax1.plot(TIMES, np.log(curve_l.visibility), label="ln V, Lorentzian weight")
ax1.set_xlabel("t")
ax1.set_ylabel("ln V")
ax1.legend(fontsize=8)
ax1.set_title("... until you take the log")

fig.tight_layout()
fig.savefig("field_noise_decay.png", dpi=130)
print("\nwrote field_noise_decay.png")
print("ln V is a parabola for the Gaussian weight and a straight line for")
print("the Lorentzian one; the sieve in modelfit tells them apart.")
