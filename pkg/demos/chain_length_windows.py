"""How the number of transparency windows follows the chain length.

Sweeps N = 2..4 with the standard parameter set, prints the window table
for each chain, and saves the three transmission curves to one figure.
Run from the repository root:

    python demos/chain_length_windows.py
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from omitchain import detect_windows, normalize, spectrum
from omitchain.presets import chain_config

fig, axes = plt.subplots(3, 1, figsize=(7, 9), sharex=True)

for ax, n in zip(axes, (2, 3, 4)):
    system = normalize(chain_config(n))
    spec = spectrum(system, -3.0, 3.0, 20001)
    report = detect_windows(spec)

    print(f"\nN = {n} cavities: {report.count} windows, "
          f"central feature {report.central_feature}")
    for w in report.windows:
        print(f"  center {w.center_x:+.4f}  depth {w.depth:.4f}  width {w.width:.4f}")

    ax.plot(spec.x_grid, np.abs(spec.eps_T), lw=1.0)
    for w in report.windows:
        ax.axvline(w.center_x, color="0.8", lw=0.6, zorder=0)
    ax.set_ylabel(r"$|\epsilon_T|$")
    ax.set_title(f"N = {n}", fontsize=10)

axes[-1].set_xlabel(r"$x / \kappa_N$")
fig.tight_layout()
fig.savefig("chain_length_windows.png", dpi=150)
print("\nsaved chain_length_windows.png")
