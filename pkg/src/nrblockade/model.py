"""Physical parameters, bare-to-effective maps and Hamiltonian builders.

Effective model (rotating frame of pump and probe)::

    H = D (aL^dag aL + aR^dag aR) + Dm b^dag b + G aL^dag b^2 + G* aL b^dag 2
        + eps (a_p^dag + a_p)

with ``a_p = aL`` for a probe entering port 1 and ``a_p = aR`` for port 2.
Dissipation: ``gamma_c`` on both optical modes, ``gamma_m (n_th + 1)`` on
``b`` and ``gamma_m n_th`` on ``b^dag``.

Since nothing couples ``aR`` to ``(aL, b)``, the default "factorized" layout
solves port-1 probing on ``aL (x) b`` and port-2 probing on ``aR`` alone.
The "full" layout ``aL (x) aR (x) b`` is kept for cross-checks.

The pump tone frequency is identified with the drive frequency appearing in
``Delta_a = omega_a - omega_d``, and the effective mechanical frequency uses
the pump amplitude ``alpha_L`` throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy import constants

from .errors import (
    ConfigurationError,
    DegenerateTunnelingError,
    InvalidFrequencyError,
    SingularPumpError,
)
from .fock import HilbertSpec, Operator, identity, mode_operator

__all__ = [
    "DerivationParams",
    "SystemParams",
    "ProbeSetup",
    "normal_mode_frequencies",
    "normal_mode_frequencies_taylor",
    "normal_mode_vectors",
    "quadratic_coupling",
    "pump_displacement",
    "effective_coupling",
    "effective_mech_freq",
    "thermal_occupation",
    "build_hamiltonian",
    "build_hamiltonian_pre_rwa",
    "collapse_operators",
    "probe_setup",
    "make_space",
    "fig2_params",
]

LAYOUTS = ("factorized", "full")


@dataclass(frozen=True)
class DerivationParams:
    """Bare-model quantities, all in one frequency unit (typically gamma_c)."""

    omega0: float
    J: float
    g0: float
    omega_m: float
    Omega: float
    Delta_a: float
    gamma_c: float = 1.0
    q_probe_range: float = 1.0
    quasi_static_ratio: float = 10.0
    expansion_ratio: float = 10.0
    strong_pump_ratio: float = 10.0

    def __post_init__(self):
        if self.J == 0:
            raise DegenerateTunnelingError("tunneling amplitude J must be nonzero")

    @property
    def quasi_static_ok(self) -> bool:
        return abs(self.J) >= self.quasi_static_ratio * abs(self.omega_m)

    @property
    def expansion_ok(self) -> bool:
        return abs(self.J) >= self.expansion_ratio * abs(self.g0) * abs(self.q_probe_range)

    @property
    def strong_pump_ok(self) -> bool:
        return abs(self.Omega) >= self.strong_pump_ratio * self.gamma_c

    @property
    def g(self) -> float:
        return quadratic_coupling(self.g0, self.J)

    @property
    def alpha_L(self) -> complex:
        return pump_displacement(self.Omega, self.gamma_c, self.Delta_a)

    @property
    def G(self) -> float:
        return effective_coupling(self.g, self.alpha_L)

    @property
    def omega_m_eff(self) -> float:
        return effective_mech_freq(self.omega_m, self.g, self.alpha_L)

    def to_system(self, probe_detuning: float, epsilon: float, gamma_m: float,
                  n_th: float = 0.0, cutoff_photon: int = 5,
                  cutoff_phonon: int = 12) -> "SystemParams":
        """Effective parameters for a probe at ``delta = omega_p - omega_d``."""
        return SystemParams(
            Delta=self.Delta_a - probe_detuning,
            Delta_m=self.omega_m_eff - probe_detuning / 2,
            G=self.G,
            epsilon=epsilon,
            gamma_c=self.gamma_c,
            gamma_m=gamma_m,
            n_th=n_th,
            cutoff_photon=cutoff_photon,
            cutoff_phonon=cutoff_phonon,
        )


@dataclass(frozen=True)
class SystemParams:
    """Effective-model parameters. Rates and detunings in units of gamma_c."""

    Delta: float
    Delta_m: float
    G: float
    epsilon: float = 0.1
    gamma_c: float = 1.0
    gamma_m: float = 0.01
    n_th: float = 0.0
    cutoff_photon: int = 5
    cutoff_phonon: int = 12

    def __post_init__(self):
        if not self.gamma_c > 0:
            raise ConfigurationError(f"gamma_c must be positive, got {self.gamma_c}")
        if self.gamma_m < 0:
            raise ConfigurationError(f"gamma_m must be >= 0, got {self.gamma_m}")
        if self.n_th < 0:
            raise ConfigurationError(f"n_th must be >= 0, got {self.n_th}")
        if self.epsilon < 0:
            raise ConfigurationError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.cutoff_photon < 2 or self.cutoff_phonon < 2:
            raise ConfigurationError("cutoffs must be >= 2")
        for name in ("Delta", "Delta_m", "G", "epsilon", "gamma_c", "gamma_m", "n_th"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")

    @classmethod
    def with_locked_mechanics(cls, Delta: float, **kwargs) -> "SystemParams":
        """Constructor enforcing ``Delta_m = Delta / 2``."""
        if "Delta_m" in kwargs:
            raise ConfigurationError("Delta_m is fixed to Delta/2 by this constructor")
        return cls(Delta=Delta, Delta_m=Delta / 2, **kwargs)

    @property
    def weak_probe(self) -> bool:
        return self.epsilon <= self.gamma_c / 4

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


def fig2_params(Delta_over_G: float = math.sqrt(2), **overrides) -> SystemParams:
    """Parameter set of the main-figure study: G = 3, eps = 1/10, gamma_m = 1/100."""
    G = overrides.pop("G", 3.0)
    kw = dict(G=G, epsilon=0.1, gamma_c=1.0, gamma_m=0.01, n_th=0.0)
    kw.update(overrides)
    return SystemParams.with_locked_mechanics(Delta_over_G * G, **kw)


# ---------------------------------------------------------------- bare model

def normal_mode_frequencies(params: DerivationParams, q):
    """Exact quasi-static normal-mode frequencies ``omega0 +- sqrt(J^2 + (g0 q)^2)``."""
    root = np.sqrt(params.J**2 + (params.g0 * np.asarray(q, dtype=float)) ** 2)
    return params.omega0 + root, params.omega0 - root


class TaylorComparison(NamedTuple):
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    abs_error: np.ndarray


def normal_mode_frequencies_taylor(params: DerivationParams, q) -> TaylorComparison:
    """Quadratic approximation ``omega0 +- (|J| + g0^2 q^2 / 2|J|)`` and its error.

    ``|J|`` is used so the expansion tracks the exact branches for either
    sign of the tunneling amplitude.
    """
    q = np.asarray(q, dtype=float)
    absJ = abs(params.J)
    shift = params.g0**2 / (2 * absJ) * q**2
    plus = params.omega0 + absJ + shift
    minus = params.omega0 - absJ - shift
    exact_plus, _ = normal_mode_frequencies(params, q)
    return TaylorComparison(plus, minus, np.abs(exact_plus - plus))


def normal_mode_vectors(params: DerivationParams, q: float):
    """Coefficients of the "+" and "-" normal modes on ``(a_1, a_2)``.

    Rows are ``(J, g0 q +- sqrt(J^2 + (g0 q)^2)) / D_+-``. For ``aL`` the pair
    is ``(a_1ccw, a_2cw)``; for ``aR`` it is ``(a_1cw, a_2ccw)``.
    """
    gq = params.g0 * q
    root = math.sqrt(params.J**2 + gq**2)
    out = []
    for s in (1.0, -1.0):
        v = np.array([params.J, gq + s * root], dtype=float)
        out.append(v / np.linalg.norm(v))
    return np.vstack(out)


def quadratic_coupling(g0: float, J: float) -> float:
    """``g = g0^2 / (2 J)``."""
    if J == 0:
        raise DegenerateTunnelingError("J = 0: the quadratic coupling is undefined")
    return g0**2 / (2.0 * J)


def pump_displacement(Omega: float, gamma_c: float, Delta_a: float) -> complex:
    """Mean pump amplitude ``-2i Omega / (gamma_c + 2i Delta_a)``."""
    den = complex(gamma_c, 2.0 * Delta_a)
    if den == 0:
        raise SingularPumpError("gamma_c and Delta_a both vanish")
    return -2j * Omega / den


def effective_coupling(g: float, alpha_L: complex) -> float:
    """``|g alpha_L| / 2``; the phase of ``g alpha_L`` is absorbed into ``aL``."""
    return abs(g * alpha_L) / 2.0


def effective_mech_freq(omega_m: float, g: float, alpha_L: complex) -> float:
    return omega_m + g * abs(alpha_L) ** 2


def thermal_occupation(omega_m: float, temperature: float) -> float:
    """Bose-Einstein occupation for angular frequency ``omega_m`` [rad/s] at ``temperature`` [K]."""
    if not omega_m > 0:
        raise InvalidFrequencyError(f"omega_m must be positive, got {omega_m}")
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    x = constants.hbar * omega_m / (constants.k * temperature)
    return 1.0 / math.expm1(x)


# ------------------------------------------------------------- operators

@dataclass(frozen=True)
class ProbeSetup:
    """Everything needed to solve one probe direction on one layout."""

    params: SystemParams
    probe_port: int
    layout: str
    space: HilbertSpec
    hamiltonian: Operator
    channels: list = field(default_factory=list)

    def mode(self, label: str) -> Operator:
        return mode_operator(self.space, label)

    @property
    def probed_mode(self) -> str:
        return "a_L" if self.probe_port == 1 else "a_R"


def _check_port(probe_port):
    if probe_port not in (1, 2):
        raise ConfigurationError(f"probe_port must be 1 or 2, got {probe_port!r}")


def _check_layout(layout):
    if layout not in LAYOUTS:
        raise ConfigurationError(f"layout must be one of {LAYOUTS}, got {layout!r}")


def make_space(params: SystemParams, probe_port: int = 1, layout: str = "full") -> HilbertSpec:
    _check_port(probe_port)
    _check_layout(layout)
    cp, cm = params.cutoff_photon, params.cutoff_phonon
    if layout == "full":
        return HilbertSpec((cp, cp, cm), ("a_L", "a_R", "b"))
    if probe_port == 1:
        return HilbertSpec((cp, cm), ("a_L", "b"))
    return HilbertSpec((cp,), ("a_R",))


def build_hamiltonian(params: SystemParams, probe_port: int = 1, layout: str = "full") -> Operator:
    """Effective Hamiltonian with the probe on ``probe_port``."""
    if params.cutoff_phonon < 3:
        raise ConfigurationError("cutoff_phonon must be >= 3 for b^2 to act")
    space = make_space(params, probe_port, layout)
    H = Operator(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))
    G = params.G
    if "a_L" in space.labels:
        aL = mode_operator(space, "a_L")
        b = mode_operator(space, "b")
        H = H + params.Delta * (aL.dag() @ aL) + params.Delta_m * (b.dag() @ b)
        pair = aL.dag() @ b @ b
        H = H + G * pair + np.conj(G) * pair.dag()
    if "a_R" in space.labels:
        aR = mode_operator(space, "a_R")
        H = H + params.Delta * (aR.dag() @ aR)
    probed = mode_operator(space, "a_L" if probe_port == 1 else "a_R")
    return H + params.epsilon * (probed + probed.dag())


def collapse_operators(params: SystemParams, probe_port: int = 1, layout: str = "full"):
    """Dissipation channels as ``(operator, rate)`` pairs.

    Full layout: ``aL, aR`` at ``gamma_c``, ``b`` at ``gamma_m (n_th + 1)`` and
    ``b^dag`` at ``gamma_m n_th``; the ``b^dag`` channel is dropped when its
    rate is zero. The factorized layouts keep the subset living on their space.
    """
    space = make_space(params, probe_port, layout)
    channels = []
    for label in ("a_L", "a_R"):
        if label in space.labels:
            channels.append((mode_operator(space, label), params.gamma_c))
    if "b" in space.labels:
        b = mode_operator(space, "b")
        channels.append((b, params.gamma_m * (params.n_th + 1)))
        if params.n_th > 0:
            channels.append((b.dag(), params.gamma_m * params.n_th))
    return channels


def probe_setup(params: SystemParams, probe_port: int = 1, layout: str = "factorized") -> ProbeSetup:
    if not params.weak_probe:
        warnings.warn(
            f"epsilon = {params.epsilon} exceeds gamma_c/4; weak-probe regime not satisfied",
            RuntimeWarning,
            stacklevel=2,
        )
    H = build_hamiltonian(params, probe_port, layout)
    return ProbeSetup(
        params=params,
        probe_port=probe_port,
        layout=layout,
        space=H.space,
        hamiltonian=H,
        channels=collapse_operators(params, probe_port, layout),
    )


def build_hamiltonian_pre_rwa(deriv: DerivationParams, cutoff_photon: int = 4,
                              cutoff_phonon: int = 12, include_photon_number_term: bool = True,
                              include_counter_rotating: bool = True) -> Operator:
    """Linearised Hamiltonian in the pump frame before the rotating-wave step.

    ::

        Delta_a (nL + nR) + omega_m b^dag b
        + g/2 (|alpha|^2 + nL + nR) (b^dag + b)^2
        + g/2 (alpha aL^dag + alpha* aL) (b^dag + b)^2

    on ``aL (x) aR (x) b`` without probe. Turning both flags off leaves the
    terms that survive the rotating-wave approximation plus ``g|alpha|^2
    b^dag b`` shifts, which is useful for error budgets against the effective
    model. The global phase of ``alpha`` is rotated away so that the
    ``aL^dag b^2`` coefficient is real and non-negative.
    """
    space = HilbertSpec((cutoff_photon, cutoff_photon, cutoff_phonon), ("a_L", "a_R", "b"))
    aL, aR, b = (mode_operator(space, s) for s in space.labels)
    g = deriv.g
    alpha = deriv.alpha_L
    phase = np.exp(-1j * np.angle(g * alpha)) if g * alpha != 0 else 1.0
    alpha_r = alpha * phase  # g * alpha_r is real >= 0 after absorbing the phase into aL
    nopt = aL.dag() @ aL + aR.dag() @ aR
    x2 = (b.dag() + b) @ (b.dag() + b)
    one = identity(space)
    H = deriv.Delta_a * nopt + deriv.omega_m * (b.dag() @ b)
    if include_counter_rotating:
        H = H + (g / 2 * abs(alpha) ** 2) * x2
    else:
        # only the number-conserving part of (b^dag + b)^2 = b^2 + b^dag2 + 2 b^dag b + 1
        H = H + (g / 2 * abs(alpha) ** 2) * (2 * (b.dag() @ b) + one)
    if include_photon_number_term:
        H = H + (g / 2) * (nopt @ x2)
    coup = (g / 2) * alpha_r * (aL.dag() @ x2)
    if not include_counter_rotating:
        coup = (g / 2) * alpha_r * (aL.dag() @ b @ b)
    return H + coup + coup.dag()
