"""
Antibunching and its time window
================================

The equal-time correlation of light leaving through port 2 (probe at port 1)
is strongly suppressed at the single-photon resonance and strongly enhanced
at the two-photon resonances. The delay dependence follows from the quantum
regression theorem.
"""

import numpy as np

from nrblockade.model import fig2_params
from nrblockade.observables import g2_tau, g2_zero, solve_port

for x in (0.0, 1.0, np.sqrt(2), 2.0, np.sqrt(6)):
    sol = solve_port(fig2_params(float(x), cutoff_photon=5, cutoff_phonon=12), 1)
    print(f"Delta/G = {x:6.4f}: g2_21(0) = {g2_zero(sol.rho, 'L'):.3e}")

# Delay dependence at the blockade point; tau is quoted in units of 2 pi / gamma_c.
sol = solve_port(fig2_params(np.sqrt(2), cutoff_photon=5, cutoff_phonon=12), 1)
tau = np.array([0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 3.18, 10, 20])
g = g2_tau(sol.liouvillian, sol.rho, "L", 2 * np.pi * tau)
for t, v in zip(tau, g):
    print(f"gamma_c tau / 2pi = {t:6.2f}: g2_21 = {v:.4f}")

# The long tail relaxes with the mechanical damping, not the optical one.
