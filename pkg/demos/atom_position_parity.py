"""Window count and central-feature shape versus the atom's cavity index.

Placing a two-level atom in the chain either broadens the existing central
feature (odd-site placements, counted from the mechanical end) or splits
it and adds one more window (even-site placements).
"""

from omitchain import detect_windows, normalize, spectrum
from omitchain.presets import chain_config

for n in (3, 4):
    base = detect_windows(spectrum(normalize(chain_config(n)), -3.0, 3.0, 20001))
    print(f"\nN = {n}, no atom: {base.count} windows, {base.central_feature}")
    for pos in range(1, n + 1):
        system = normalize(chain_config(n, atom_position=pos))
        rep = detect_windows(spectrum(system, -3.0, 3.0, 20001))
        print(f"  atom in cavity {pos}: {rep.count} windows, {rep.central_feature}")
