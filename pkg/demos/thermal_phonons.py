"""
Thermal phonons
===============

A warm mechanical bath populates odd manifolds, which opens the
thermally-activated resonance at +-sqrt6 G and slowly washes out the
antibunching. The blockade peak itself is fairly robust.
"""

import numpy as np

from nrblockade.model import fig2_params
from nrblockade.observables import transport

print(f"{'n_th':>5} {'Delta/G':>8} {'T21':>10} {'g2_21(0)':>10} {'isolation dB':>13}")
for n_th in (0.0, 0.1, 1.0):
    for x in (0.0, np.sqrt(2), np.sqrt(6)):
        r = transport(fig2_params(x, n_th=n_th, cutoff_photon=6, cutoff_phonon=12))
        print(f"{n_th:5.1f} {x:8.4f} {r.T21:10.4g} {r.g2_21_zero:10.4g} {r.isolation_db:13.2f}")
