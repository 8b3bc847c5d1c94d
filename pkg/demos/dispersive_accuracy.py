"""How good is the dispersive shift formula?

The reservoir module models the laser through second-order Stark shifts,
valid when delta^2 >> g^2 (n+1).  Here we drive the exact truncated-ladder
propagator and the dispersive phase prediction side by side and watch the
phase discrepancy fall off linearly in the small parameter g^2 (n+1)/delta^2.

Run:  python3 demos/dispersive_accuracy.py
"""

import matplotlib

matplotlib.use("Agg")

import math

import matplotlib.pyplot as plt
import numpy as np

from iondecay import (
    FockRegister,
    FourLevelState,
    JcParams,
    check_dispersive_validity,
    full_jc_evolve,
)

S2 = 1.0 / math.sqrt(2.0)
TEST = FourLevelState(S2, 0.0, 0.0, S2)
G, N = 1.0, 1


def phase_error(delta: float) -> float:
    """Relative gap between exact and dispersive test-state phases at
    Omega t = pi."""
    p = JcParams.from_detuning(G, delta)
    reg = FockRegister.from_product(TEST, n_photons=N, n_max=4)
    t = math.pi / p.stark_shift
    out = full_jc_evolve(reg, p, t, dt_int=t / 300.0)
    resid = out.spin_coherence("uu", "dd") * np.exp(2j * p.omega * t)
    phi_disp = 2.0 * p.stark_shift * (2 * N + 1) * t
    dev = np.angle(resid * np.exp(1j * phi_disp))
    return abs(dev) / phi_disp


deltas = np.array([5.0, 10.0, 20.0, 40.0, 80.0])
errors = np.array([phase_error(d) for d in deltas])
ratios = np.array([check_dispersive_validity(JcParams.from_detuning(G, d), N)
                   for d in deltas])

print(" delta/g   g^2(n+1)/delta^2   phase rel err")
for d, r, e in zip(deltas, ratios, errors):
    print(f"  {d:6.1f}   {r:12.2e}     {e:12.2e}")

slope = np.polyfit(np.log(ratios), np.log(errors), 1)[0]
print(f"\nlog-log slope of error vs small parameter: {slope:.3f} (linear)")

fig, ax = plt.subplots(figsize=(5.0, 3.6))
ax.loglog(ratios, errors, "o-", label="measured phase error")
ax.loglog(ratios, errors[-1] * ratios / ratios[-1], "k--", lw=0.8,
          label="strictly linear reference")
ax.set_xlabel("g^2 (n+1) / delta^2")
ax.set_ylabel("relative phase error at Omega t = pi")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig("dispersive_accuracy.png", dpi=130)
print("wrote dispersive_accuracy.png")
