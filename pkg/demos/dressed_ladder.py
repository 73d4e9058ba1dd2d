"""
Dressed-state ladder and where the peaks come from
==================================================

The coupling G a^dag b^2 + h.c. conserves 2 n + m. With Delta_m = Delta/2
each manifold is a small tridiagonal matrix, and its eigenvalues divided by
the number of photons absorbed predict every feature of the spectra.
"""

import numpy as np

from nrblockade.dressed import manifold, prediction_set, resonance_detunings
from nrblockade.sweep import find_extrema
from nrblockade.model import fig2_params
from nrblockade.observables import evaluate_observables

for pair in range(2, 6):
    m = manifold(pair)
    print(f"pair {pair}: basis {m.basis}, eigenvalues/G {np.round(m.eigenvalues(), 6)}")

for r in resonance_detunings(4):
    print(f"pair {r.pair} ({r.photon_order}-photon): Delta/G = {np.round(r.detunings, 6)}")
print("prediction set:", np.round(prediction_set(4), 6))

# A coarse T21 scan picks up the single-photon peaks close to +-sqrt2 G.
x = np.linspace(-3, 3, 61)
T21 = [evaluate_observables(fig2_params(float(v), cutoff_photon=5, cutoff_phonon=12), ("T21",))["T21"] for v in x]
for xv, yv, kind in find_extrema(x, T21):
    print(f"{kind} at Delta/G = {xv:+.4f} (T21 = {yv:.3e})")
