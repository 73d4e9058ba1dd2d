"""Lindblad generator, steady states and time propagation.

Vectorization is column stacking: ``vec(A rho B) = (B^T kron A) vec(rho)``, so
the matrix element ``rho[i, j]`` sits at flat index ``i + j * d``
(``rho.reshape(-1, order="F")``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as sla
from scipy.integrate import solve_ivp

from .errors import (
    ConvergenceError,
    DegenerateSteadyStateError,
    IntegrationError,
    SpaceMismatchError,
)
from .fock import HilbertSpec, Operator

__all__ = [
    "DensityMatrix",
    "Superoperator",
    "build_liouvillian",
    "steady_state",
    "residual_norm",
    "evolve",
    "evolve_many",
    "converge_cutoffs",
    "vec",
    "unvec",
]

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-8
RESIDUAL_TOL = 1e-10


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


@dataclass(frozen=True)
class DensityMatrix:
    """Dense density matrix on ``space``; ``info`` carries solver diagnostics."""

    space: HilbertSpec
    data: np.ndarray
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        d = self.space.dim
        if self.data.shape != (d, d):
            raise SpaceMismatchError(f"state shape {self.data.shape} != ({d}, {d})")

    def expect(self, op: Operator) -> complex:
        if op.space != self.space:
            raise SpaceMismatchError(f"{op.space} vs {self.space}")
        # tr(O rho) = sum_ij O_ij rho_ji
        return complex((op.data.multiply(self.data.T)).sum())

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def hermiticity_error(self) -> float:
        return float(np.abs(self.data - self.data.conj().T).max())

    def min_eigenvalue(self) -> float:
        herm = (self.data + self.data.conj().T) / 2
        return float(la.eigvalsh(herm)[0])

    def invariant_report(self) -> dict:
        return {
            "hermiticity_error": self.hermiticity_error(),
            "trace_error": abs(self.trace - 1.0),
            "min_eigenvalue": self.min_eigenvalue(),
        }

    def satisfies_invariants(self) -> bool:
        r = self.invariant_report()
        return (
            r["hermiticity_error"] <= HERMITIAN_TOL
            and r["trace_error"] <= TRACE_TOL
            and r["min_eigenvalue"] >= POSITIVITY_TOL
        )

    def partial_trace(self, keep) -> np.ndarray:
        """Reduced matrix on the modes named (or indexed) in ``keep``."""
        if isinstance(keep, (str, int)):
            keep = [keep]
        keep = sorted(self.space.index_of(k) if isinstance(k, str) else k for k in keep)
        dims = self.space.mode_dims
        n = len(dims)
        t = self.data.reshape(dims + dims)
        traced = [k for k in range(n) if k not in keep]
        # contract traced pairs from the highest index down
        for k in sorted(traced, reverse=True):
            nk = t.ndim // 2
            t = np.trace(t, axis1=k, axis2=k + nk)
        dk = int(np.prod([dims[k] for k in keep]))
        return t.reshape(dk, dk)


@dataclass(frozen=True)
class Superoperator:
    space: HilbertSpec
    matrix: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.space.dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)

    def trace_row(self) -> np.ndarray:
        """Row vector ``t`` with ``t . vec(rho) = tr(rho)``."""
        d = self.dim
        t = np.zeros(d * d)
        t[np.arange(d) * (d + 1)] = 1.0
        return t


def build_liouvillian(H: Operator, channels) -> Superoperator:
    """Sparse generator of ``-i[H, rho] + sum_k r_k (o rho o^dag - {o^dag o, rho}/2)``."""
    space = H.space
    d = space.dim
    eye = sp.identity(d, format="csr", dtype=complex)
    h = H.data
    L = -1j * (sp.kron(eye, h, format="csr") - sp.kron(h.T, eye, format="csr"))
    for op, rate in channels:
        if op.space != space:
            raise SpaceMismatchError(f"channel on {op.space}, Hamiltonian on {space}")
        if rate < 0:
            raise ValueError(f"negative dissipation rate {rate}")
        if rate == 0:
            continue
        o = op.data
        odo = (o.conj().T @ o).tocsr()
        L = L + rate * (
            sp.kron(o.conj(), o, format="csr")
            - 0.5 * sp.kron(eye, odo, format="csr")
            - 0.5 * sp.kron(odo.T, eye, format="csr")
        )
    L = sp.csr_matrix(L)
    L.sum_duplicates()
    L.eliminate_zeros()
    L.sort_indices()
    return Superoperator(space, L)


def residual_norm(L: Superoperator, rho) -> float:
    """``||L vec(rho)||_2 / ||L||_F``."""
    data = rho.data if isinstance(rho, DensityMatrix) else rho
    return float(np.linalg.norm(L.matrix @ vec(data)) / sla.norm(L.matrix))


def _second_singular_value(M: sp.spmatrix):
    n = M.shape[0]
    if n > 2500:
        return None
    s = la.svdvals(M.toarray())
    return float(s[-2])


_LU_STRATEGIES = (
    dict(permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0, options=dict(SymmetricMode=True)),
    dict(permc_spec="COLAMD"),
)


def steady_state(L: Superoperator, residual_tol: float = RESIDUAL_TOL, refine: int = 2) -> DensityMatrix:
    """Kernel of ``L`` normalised to unit trace.

    The row of ``L`` belonging to the ``(0, 0)`` matrix element is replaced
    by the trace functional and the resulting system is solved by sparse LU
    followed by ``refine`` steps of iterative refinement.
    """
    d = L.dim
    A = L.matrix.tocsr(copy=True)
    A.data[A.indptr[0]:A.indptr[1]] = 0.0
    idx = np.arange(d) * (d + 1)
    trace_row = sp.csr_matrix(
        (np.ones(d, dtype=complex), (np.zeros(d, dtype=int), idx)), shape=A.shape
    )
    A = (A + trace_row).tocsc()
    A.eliminate_zeros()
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    normL = sla.norm(L.matrix)
    x, res = None, np.inf
    # fast symmetric-mode factorization first; partial pivoting as fallback
    for opts in _LU_STRATEGIES:
        try:
            lu = sla.splu(A, **opts)
        except RuntimeError as exc:
            last_exc = exc
            continue
        x = lu.solve(rhs)
        for _ in range(refine):
            x = x + lu.solve(rhs - A @ x)
        if not np.all(np.isfinite(x)):
            continue
        res = float(np.linalg.norm(L.matrix @ x) / normL)
        if res <= residual_tol:
            break
    if x is None:
        raise DegenerateSteadyStateError(
            f"steady-state system is singular: {last_exc}", _second_singular_value(L.matrix)
        )
    if not np.all(np.isfinite(x)):
        raise DegenerateSteadyStateError(
            "steady-state solve produced non-finite entries", _second_singular_value(L.matrix)
        )
    if res > residual_tol:
        raise DegenerateSteadyStateError(
            f"steady-state residual {res:.3e} exceeds {residual_tol:.1e}; kernel is not one-dimensional",
            _second_singular_value(L.matrix),
        )
    rho = unvec(x, d)
    return DensityMatrix(L.space, rho, info={"residual": res})


def _check_trace(out_traces, tr0, tol, label):
    scale = max(1.0, abs(tr0))
    err = float(np.max(np.abs(np.asarray(out_traces) - tr0))) / scale
    if err > tol:
        raise IntegrationError(
            f"{label}: trace drifted by {err:.2e} (allowed {tol:.1e})", achieved_tolerance=err
        )


def evolve_many(L: Superoperator, rho0, times, method: str = "expm",
                rtol: float = 1e-8, atol: float | None = None) -> np.ndarray:
    """``exp(L t) rho0`` for every ``t`` in ``times``; returns shape ``(n, d, d)``.

    ``method="expm"`` uses the truncated-Taylor action of the matrix
    exponential (exact up to round-off, fine for these dimensions);
    ``method="bdf"`` runs an adaptive stiff integrator with output at the
    requested times.
    """
    d = L.dim
    data = rho0.data if isinstance(rho0, DensityMatrix) else np.asarray(rho0, dtype=complex)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    order = np.argsort(times, kind="stable")
    ts = times[order]
    y0 = vec(data)
    tr0 = complex(np.trace(data))
    M = L.matrix

    if method == "expm":
        out = np.empty((len(ts), d * d), dtype=complex)
        steps = np.diff(np.concatenate(([0.0], ts)))
        uniform = len(ts) > 2 and ts[0] == 0.0 and np.allclose(steps[1:], steps[1], rtol=1e-12, atol=0)
        if uniform:
            out[:] = sla.expm_multiply(M, y0, start=0.0, stop=ts[-1], num=len(ts), endpoint=True)
            out[0] = y0
        else:
            y = y0
            for k, dt in enumerate(steps):
                if dt > 0:
                    y = sla.expm_multiply(M * dt, y)
                out[k] = y
    elif method == "bdf":
        if atol is None:
            atol = rtol * 1e-3 * max(np.abs(y0).max(), 1e-300)
        sol = solve_ivp(
            lambda t, y: M @ y,
            (0.0, float(ts[-1]) if ts[-1] > 0 else 1e-12),
            y0,
            method="BDF",
            t_eval=ts,
            jac=M,
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise IntegrationError(f"BDF integration failed: {sol.message}", achieved_tolerance=None)
        out = sol.y.T.copy()
        out[ts == 0.0] = y0
    else:
        raise ValueError(f"unknown method {method!r}")

    traces = out[:, np.arange(d) * (d + 1)].sum(axis=1)
    _check_trace(traces, tr0, 1e-8 if method == "expm" else max(1e-8, 10 * rtol), method)
    result = np.empty((len(ts), d, d), dtype=complex)
    result[order] = out.reshape(len(ts), d, d).transpose(0, 2, 1)
    return result


def evolve(L: Superoperator, rho0, t: float, method: str = "expm", rtol: float = 1e-8) -> np.ndarray:
    """Single-time version of :func:`evolve_many`."""
    if t < 0:
        raise ValueError("t must be non-negative")
    data = rho0.data if isinstance(rho0, DensityMatrix) else np.asarray(rho0, dtype=complex)
    if t == 0:
        return data.copy()
    return evolve_many(L, data, [t], method=method, rtol=rtol)[0]


def converge_cutoffs(params, observables=("T21", "g2_21_zero"), start=None,
                     max_cutoffs=(10, 24), tol: float = 1e-6, atol: float = 1e-15,
                     phonon_step: int = 2, layout: str = "factorized"):
    """Grow the truncation until every observable is stable to ``tol`` (relative).

    Coordinate ladder: from the current level, the photon cutoff (+1) and
    the phonon cutoff (+``phonon_step``) are each raised on trial, and the
    trial that changes the observables most is accepted while that change
    exceeds ``tol``. The returned level is the first one whose neighbours in
    both directions agree with it. ``atol`` is a floor for quantities that
    vanish (e.g. occupations of an undriven system).

    Returns
    -------
    (cutoff_photon, cutoff_phonon, table)
        ``table`` is a list of dicts, one per level evaluated.
    """
    from .observables import evaluate_observables

    cp, cm = start if start is not None else (params.cutoff_photon, params.cutoff_phonon)
    cp, cm = max(int(cp), 2), max(int(cm), 3)
    cache = {}
    table = []

    def at(p, m):
        if (p, m) not in cache:
            vals = evaluate_observables(params.replace(cutoff_photon=p, cutoff_phonon=m),
                                        observables, layout=layout)
            cache[(p, m)] = vals
            table.append({"cutoff_photon": p, "cutoff_phonon": m, **vals})
            log.debug("cutoffs (%d, %d): %s", p, m, vals)
        return cache[(p, m)]

    def change(u, v):
        """Largest change between two levels in units of the allowed tolerance."""
        worst = 0.0
        for k in observables:
            a, b = u[k], v[k]
            if not (np.isfinite(a) and np.isfinite(b)):
                if a != b:
                    return math.inf
                continue
            worst = max(worst, abs(a - b) / max(tol * max(abs(a), abs(b)), atol))
        return worst

    while True:
        here = at(cp, cm)
        moves = []
        if cp + 1 <= max_cutoffs[0]:
            moves.append((change(here, at(cp + 1, cm)), cp + 1, cm))
        if cm + phonon_step <= max_cutoffs[1]:
            moves.append((change(here, at(cp, cm + phonon_step)), cp, cm + phonon_step))
        # take the most influential move; ties favour the photon direction
        worst = max(moves, key=lambda mv: mv[0], default=None)
        if worst is not None and worst[0] > 1.0:
            _, cp, cm = worst
            continue
        # the level is only certified when both neighbours exist and agree
        if len(moves) < 2:
            raise ConvergenceError(
                f"no certified cutoffs below the maximum {max_cutoffs}", table=table
            )
        return cp, cm, table
