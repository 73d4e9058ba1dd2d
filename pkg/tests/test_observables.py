import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nrblockade.errors import UndefinedObservableError
from nrblockade.fock import HilbertSpec
from nrblockade.liouvillian import DensityMatrix
from nrblockade.model import fig2_params
from nrblockade.observables import (
    OBSERVABLES,
    TransportResult,
    evaluate_observables,
    g2_tau,
    g2_zero,
    isolation,
    solve_port,
    transmission,
    transport,
)


def lorentzian(Delta, gamma_c=1.0):
    return gamma_c**2 / 4 / ((gamma_c / 2) ** 2 + Delta**2)


def linear(Delta):
    # port 2 only sees the bare cavity; the photon cutoff is what matters
    return fig2_params(cutoff_photon=6, cutoff_phonon=3).replace(Delta=Delta, Delta_m=Delta / 2)


def test_linear_path_peak_and_half_width():
    p0 = linear(0.0)
    T0 = transmission(solve_port(p0, 2).rho, p0, 12)
    assert T0 == pytest.approx(1.0, abs=1e-3)
    ph = linear(0.5)
    assert transmission(solve_port(ph, 2).rho, ph, 12) == pytest.approx(0.5, abs=1e-3)


@settings(max_examples=20, deadline=None)
@given(st.floats(-9, 9))
def test_linear_path_is_coherent(Delta):
    p = linear(Delta)
    rho = solve_port(p, 2).rho
    assert transmission(rho, p, 12) == pytest.approx(lorentzian(Delta), abs=1e-3)
    assert g2_zero(rho, "R") == pytest.approx(1.0, abs=1e-6)


def test_linear_path_g2_tau_flat():
    p = linear(0.3)
    sol = solve_port(p, 2)
    vals = g2_tau(sol.liouvillian, sol.rho, "R", np.linspace(0, 10, 21))
    np.testing.assert_allclose(vals, 1.0, atol=1e-5)


def test_transmission_requires_probe():
    p = linear(0.0).replace(epsilon=0.0)
    with pytest.raises(UndefinedObservableError):
        transmission(solve_port(p, 2).rho, p, 12)
    with pytest.raises(ValueError):
        transmission(solve_port(linear(0.0), 2).rho, linear(0.0), 11)


def test_isolation():
    assert isolation(0.3, 0.3) == 0.0
    assert isolation(1.0, 0.1) == pytest.approx(10.0)
    assert isolation(0.01, 1.0) == pytest.approx(-20.0)
    assert isolation(0.5, 0.0) == math.inf
    assert math.isnan(isolation(0.0, 0.0))
    assert isolation(0.0, 0.5) == -math.inf


def test_g2_of_fock_state_and_errors():
    space = HilbertSpec((4,), ("a_L",))
    one = np.zeros((4, 4), dtype=complex)
    one[1, 1] = 1
    assert g2_zero(DensityMatrix(space, one), "L") == 0.0
    two = np.zeros((4, 4), dtype=complex)
    two[2, 2] = 1
    assert g2_zero(DensityMatrix(space, two), "L") == pytest.approx(0.5)
    vac = np.zeros((4, 4), dtype=complex)
    vac[0, 0] = 1
    with pytest.raises(UndefinedObservableError):
        g2_zero(DensityMatrix(space, vac), "L")
    with pytest.raises(ValueError):
        g2_zero(DensityMatrix(space, one), "X")


@pytest.fixture(scope="module")
def fig2_peak():
    return solve_port(fig2_params(math.sqrt(2), cutoff_photon=5, cutoff_phonon=12), 1)


def test_blockade_point(fig2_peak):
    p = fig2_peak.setup.params
    T21 = transmission(fig2_peak.rho, p, 21)
    assert T21 == pytest.approx(0.78186, abs=1e-4)
    assert g2_zero(fig2_peak.rho, "L") < 0.1


def test_g2_tau_starts_at_g2_zero(fig2_peak):
    taus = np.linspace(0, 0.5, 6)
    vals = g2_tau(fig2_peak.liouvillian, fig2_peak.rho, "L", taus)
    assert vals[0] == pytest.approx(g2_zero(fig2_peak.rho, "L"), abs=1e-8)
    assert np.all(vals >= 0)
    bdf = g2_tau(fig2_peak.liouvillian, fig2_peak.rho, "L", taus, method="bdf", rtol=1e-10)
    np.testing.assert_allclose(vals, bdf, rtol=1e-5, atol=1e-9)
    with pytest.raises(ValueError):
        g2_tau(fig2_peak.liouvillian, fig2_peak.rho, "L", [-1.0])


def test_long_delay_factorisation_on_fast_mechanics():
    # with mechanical damping comparable to the optical one the memory is gone by gamma_c tau = 20
    p = fig2_params(math.sqrt(2), gamma_m=1.0, cutoff_photon=5, cutoff_phonon=12)
    sol = solve_port(p, 1)
    g = g2_tau(sol.liouvillian, sol.rho, "L", [20.0])[0]
    assert g == pytest.approx(1.0, abs=0.02)


def test_transport_result_invariants():
    res = transport(fig2_params(0.7, cutoff_photon=4, cutoff_phonon=8))
    res.check()
    assert res.isolation_db == pytest.approx(10 * math.log10(res.T21 / res.T12), abs=1e-12)
    assert res.residual_21 < 1e-10 and res.residual_12 < 1e-10
    bad = TransportResult(-1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(UndefinedObservableError):
        bad.check()


def test_transport_single_port():
    res = transport(fig2_params(0.0, cutoff_photon=4, cutoff_phonon=8), ports=(2,))
    assert math.isnan(res.T21) and math.isnan(res.isolation_db)
    assert res.T12 == pytest.approx(1.0, abs=1e-3)


def test_evaluate_observables_names():
    vals = evaluate_observables(fig2_params(1.0, cutoff_photon=3, cutoff_phonon=6), ("T12", "n_R"))
    assert set(vals) == {"T12", "n_R"}
    assert vals["T12"] == pytest.approx(vals["n_R"] / (4 * 0.1**2))
    with pytest.raises(ValueError):
        evaluate_observables(fig2_params(), ("T33",))
    assert "isolation_db" in OBSERVABLES


@pytest.mark.parametrize("x", [0.4, math.sqrt(2), 2.0, 2.6])
def test_detuning_reflection_symmetry(x):
    plus = evaluate_observables(fig2_params(x, cutoff_photon=5, cutoff_phonon=12), ("T21",))["T21"]
    minus = evaluate_observables(fig2_params(-x, cutoff_photon=5, cutoff_phonon=12), ("T21",))["T21"]
    assert plus == pytest.approx(minus, rel=1e-6)


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, math.sqrt(2), 1.7, 2.0, math.sqrt(6), 3.0])
def test_weak_probe_scaling(x):
    names = ("T21", "g2_21_zero")
    p = fig2_params(x, cutoff_photon=5, cutoff_phonon=12)
    full = evaluate_observables(p, names)
    half = evaluate_observables(p.replace(epsilon=p.epsilon / 2), names)
    assert abs(half["T21"] / full["T21"] - 1) < 0.01
    assert abs(half["g2_21_zero"] / full["g2_21_zero"] - 1) < 0.05
