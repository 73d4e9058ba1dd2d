"""
Nonreciprocal transmission spectrum
===================================

Probing port 1 drives the left mode, which exchanges photon pairs with the
mechanics; probing port 2 drives the right mode, which is a bare cavity.
The two spectra are therefore very different, and so is the isolation.
"""

import numpy as np

from nrblockade.model import fig2_params
from nrblockade.observables import transport

# G = 3, eps = 0.1, gamma_m = 0.01 and Delta_m = Delta/2 (all in units of gamma_c).
print(f"{'Delta/G':>8} {'T21':>11} {'T12':>11} {'isolation dB':>13}")
for x in np.linspace(-3, 3, 25):
    r = transport(fig2_params(float(x), cutoff_photon=5, cutoff_phonon=12))
    print(f"{x:8.2f} {r.T21:11.3e} {r.T12:11.3e} {r.isolation_db:13.2f}")

# Zoom on the blockade peak and the interference dip.
for x in (np.sqrt(2), 0.0):
    r = transport(fig2_params(x, cutoff_photon=6, cutoff_phonon=12))
    print(f"Delta = {x:.4f} G: T21 = {r.T21:.4g}, T12 = {r.T12:.4g}, isolation = {r.isolation_db:.1f} dB")
