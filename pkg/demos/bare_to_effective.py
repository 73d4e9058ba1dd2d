"""
From the bare resonator pair to the effective coupling
======================================================

Two tunnel-coupled resonators with a linear optomechanical coupling acquire
a quadratic coupling ``g = g0^2 / 2J`` near their anticrossing. A strong pump
on the left mode then produces the pair-exchange strength ``G = |g alpha_L| / 2``.
"""

import numpy as np

from nrblockade.model import (
    DerivationParams,
    normal_mode_frequencies,
    normal_mode_frequencies_taylor,
    thermal_occupation,
)

# All frequencies in units of the optical damping rate.
bare = DerivationParams(omega0=1e5, J=50.0, g0=1.0, omega_m=2.0, Omega=300.0, Delta_a=0.0)
print("validity: quasi-static", bare.quasi_static_ok, "| expansion", bare.expansion_ok,
      "| strong pump", bare.strong_pump_ok)

# How good is the quadratic expansion of the normal-mode splitting?
q = np.array([0.0, 5.0, 10.0, 20.0])
wp, wm = normal_mode_frequencies(bare, q)
err = normal_mode_frequencies_taylor(bare, q).abs_error
for qi, e in zip(q, err):
    print(f"q = {qi:5.1f}: Taylor error = {e:.3e}")

# The pump amplitude and the effective parameters.
print("alpha_L =", bare.alpha_L)
print("g =", bare.g, " G =", bare.G, " omega_m' =", bare.omega_m_eff)

# A probe detuned by delta from the pump sets Delta and Delta_m of the effective model.
sysp = bare.to_system(probe_detuning=-3.0, epsilon=0.1, gamma_m=0.01)
print(sysp)

# Thermal phonons: a 10 MHz mechanical mode at 1 mK.
print("n_th =", thermal_occupation(2 * np.pi * 10e6, 1e-3))
