"""Transmission, isolation and photon correlations from steady states.

Transmission uses the input-output normalisation ``a_in = eps / sqrt(gamma_c/2)``
and ``a_out = sqrt(gamma_c/2) a``, so that

    T = <a_out^dag a_out> / |a_in|^2 = gamma_c^2 <a^dag a> / (4 eps^2).

The square on ``eps`` is required for a dimensionless ratio and makes the
linear port-2 path peak at exactly one on resonance.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import UndefinedObservableError
from .fock import mode_operator
from .liouvillian import (
    DensityMatrix,
    Superoperator,
    build_liouvillian,
    evolve_many,
    steady_state,
)
from .model import SystemParams, probe_setup

__all__ = [
    "TransportResult",
    "PortSolution",
    "solve_port",
    "transmission",
    "isolation",
    "g2_zero",
    "g2_tau",
    "transport",
    "evaluate_observables",
    "OBSERVABLES",
]

OBSERVABLES = ("T21", "T12", "isolation_db", "g2_21_zero", "g2_12_zero", "n_L", "n_R")

_MODE_LABEL = {"L": "a_L", "R": "a_R", "a_L": "a_L", "a_R": "a_R"}
_DIRECTION_MODE = {21: "a_L", 12: "a_R", "21": "a_L", "12": "a_R"}


@dataclass(frozen=True)
class TransportResult:
    T21: float
    T12: float
    isolation_db: float
    g2_21_zero: float
    g2_12_zero: float
    n_L: float
    n_R: float
    amp_L: complex = complex("nan")
    amp_R: complex = complex("nan")
    residual_21: float = float("nan")
    residual_12: float = float("nan")

    def as_dict(self) -> dict:
        return asdict(self)

    def check(self) -> None:
        for name in ("T21", "T12", "n_L", "n_R", "g2_21_zero", "g2_12_zero"):
            v = getattr(self, name)
            if not v >= 0:
                raise UndefinedObservableError(f"{name} = {v} violates non-negativity")
        if self.T21 > 0 and self.T12 > 0 and not math.isfinite(self.isolation_db):
            raise UndefinedObservableError("isolation must be finite for positive transmissions")


def _mode_label(mode) -> str:
    try:
        return _MODE_LABEL[mode]
    except KeyError:
        raise ValueError(f"mode must be 'L' or 'R', got {mode!r}") from None


def _occupation(rho: DensityMatrix, label: str) -> float:
    a = mode_operator(rho.space, label)
    return rho.expect(a.dag() @ a).real


def transmission(rho_ss: DensityMatrix, params: SystemParams, direction) -> float:
    """``T21`` (direction 21, mode ``a_L``) or ``T12`` (direction 12, mode ``a_R``)."""
    try:
        label = _DIRECTION_MODE[direction]
    except KeyError:
        raise ValueError(f"direction must be 21 or 12, got {direction!r}") from None
    if params.epsilon == 0:
        raise UndefinedObservableError("transmission is undefined without a probe (epsilon = 0)")
    n = _occupation(rho_ss, label)
    return params.gamma_c**2 / (4.0 * params.epsilon**2) * n


def isolation(T21: float, T12: float) -> float:
    """``10 log10(T21 / T12)``; positive favours 1 -> 2.

    Returns ``+inf`` when ``T12 == 0`` (and ``nan`` if both vanish).
    """
    if T12 == 0:
        return math.inf if T21 > 0 else math.nan
    if T21 <= 0:
        return -math.inf
    return 10.0 * math.log10(T21 / T12)


def g2_zero(rho_ss: DensityMatrix, mode) -> float:
    """Equal-time ``<a^dag a^dag a a> / <a^dag a>^2``."""
    a = mode_operator(rho_ss.space, _mode_label(mode))
    ad = a.dag()
    n = rho_ss.expect(ad @ a).real
    if n <= 0:
        raise UndefinedObservableError(f"mean occupation {n} is not positive")
    return rho_ss.expect(ad @ ad @ a @ a).real / n**2


def g2_tau(L: Superoperator, rho_ss: DensityMatrix, mode, tau_grid,
           method: str = "expm", rtol: float = 1e-8) -> np.ndarray:
    """Two-time correlation by the quantum regression theorem.

    The conditioned matrix ``a rho_ss a^dag`` is propagated once over the
    whole grid; each point is ``tr(a^dag a . evolved) / <a^dag a>^2``.
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    if np.any(tau_grid < 0):
        raise ValueError("delays must be non-negative")
    a = mode_operator(rho_ss.space, _mode_label(mode))
    ad = a.dag()
    n = rho_ss.expect(ad @ a).real
    if n <= 0:
        raise UndefinedObservableError(f"mean occupation {n} is not positive")
    cond = a.data @ rho_ss.data @ ad.data.toarray()
    evolved = evolve_many(L, cond, tau_grid, method=method, rtol=rtol)
    num = ad @ a
    # tr(N X) for each slice
    Nd = num.data.toarray()
    vals = np.einsum("ij,tji->t", Nd, evolved).real
    return vals / n**2


@dataclass(frozen=True)
class PortSolution:
    setup: object
    liouvillian: Superoperator
    rho: DensityMatrix


def solve_port(params: SystemParams, probe_port: int, layout: str = "factorized") -> PortSolution:
    setup = probe_setup(params, probe_port, layout)
    L = build_liouvillian(setup.hamiltonian, setup.channels)
    return PortSolution(setup, L, steady_state(L))


def _g2_or_nan(rho, mode):
    try:
        return g2_zero(rho, mode)
    except UndefinedObservableError:
        return math.nan


def transport(params: SystemParams, layout: str = "factorized", ports=(1, 2)) -> TransportResult:
    """Solve both probe directions and collect every scalar observable.

    Ports not listed in ``ports`` are reported as ``nan``.
    """
    nan = math.nan
    T21 = T12 = g21 = g12 = nL = nR = r21 = r12 = nan
    ampL = ampR = complex(nan, nan)
    if 1 in ports:
        s1 = solve_port(params, 1, layout)
        nL = _occupation(s1.rho, "a_L")
        T21 = transmission(s1.rho, params, 21) if params.epsilon > 0 else nan
        g21 = _g2_or_nan(s1.rho, "L")
        ampL = s1.rho.expect(mode_operator(s1.rho.space, "a_L"))
        r21 = s1.rho.info["residual"]
    if 2 in ports:
        s2 = solve_port(params, 2, layout)
        nR = _occupation(s2.rho, "a_R")
        T12 = transmission(s2.rho, params, 12) if params.epsilon > 0 else nan
        g12 = _g2_or_nan(s2.rho, "R")
        ampR = s2.rho.expect(mode_operator(s2.rho.space, "a_R"))
        r12 = s2.rho.info["residual"]
    iso = isolation(T21, T12) if (1 in ports and 2 in ports and params.epsilon > 0) else nan
    return TransportResult(T21, T12, iso, g21, g12, nL, nR, ampL, ampR, r21, r12)


def evaluate_observables(params: SystemParams, names=OBSERVABLES, layout: str = "factorized") -> dict:
    """Scalar observables by name, solving only the probe ports they need."""
    unknown = set(names) - set(OBSERVABLES)
    if unknown:
        raise ValueError(f"unknown observables {sorted(unknown)}")
    ports = set()
    for k in names:
        if k in ("T21", "g2_21_zero", "n_L", "isolation_db"):
            ports.add(1)
        if k in ("T12", "g2_12_zero", "n_R", "isolation_db"):
            ports.add(2)
    res = transport(params, layout=layout, ports=tuple(sorted(ports)))
    return {k: getattr(res, k) for k in names}
