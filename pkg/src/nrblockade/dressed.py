"""Closed-form dressed-state ladder of the pair-exchange coupling.

``G aL^dag b^2 + h.c.`` conserves ``N = 2 n + m`` (``n`` photons, ``m``
phonons), so the coupled spectrum splits into finite manifolds. With
``Delta_m = Delta / 2`` the bare energy of every state in manifold ``N`` is
the same ``N Delta / 2``, and the manifold Hamiltonian reduces to a
tridiagonal matrix in units of ``G``.

A ``k``-photon resonance from the lowest state of the same parity
(``|0,0>`` for even ``N``, ``|0,1>`` for odd ``N``) into an eigenstate with
coupling energy ``lam G`` happens at ``Delta = -lam G / k`` with
``k = (N - N mod 2) / 2``. Spectra are symmetric, so the prediction sets
are quoted as ``+-|lam| / k``.

State labels ``|N_j>`` used in figures map to ``(pair=N, eigenvalue index j)``:
``|2_{+-1}>`` is pair 2 with eigenvalue ``+-sqrt(2)``, ``|4_0>`` and
``|4_{+-}>`` are pair 4 with eigenvalues ``0`` and ``+-4``, ``|1_0>`` is the
single state ``|0,1>`` and ``|3_{+-1}>`` is pair 3 with ``+-sqrt(6)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

__all__ = ["Manifold", "Resonance", "manifold", "resonance_detunings", "prediction_set"]


@dataclass(frozen=True)
class Manifold:
    pair_number: int
    basis: tuple
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        if len(self.basis) == 1:
            return np.array([float(self.matrix[0, 0])])
        diag = np.diag(self.matrix).copy()
        off = np.diag(self.matrix, 1).copy()
        return la.eigh_tridiagonal(diag, off, eigvals_only=True)


@dataclass(frozen=True)
class Resonance:
    pair: int
    photon_order: int
    detunings: tuple  # in units of G


def manifold(pair: int, cutoff_phonon: int | None = None, cutoff_photon: int | None = None) -> Manifold:
    """States ``(n, m)`` with ``2n + m = pair`` and the coupling matrix on them.

    Basis order is by decreasing photon number, e.g. ``((1, 0), (0, 2))``.
    Entry ``(k, k+1)`` couples ``(n, m)`` and ``(n+1, m-2)`` with
    ``sqrt((n+1) m (m-1))``.
    """
    if pair < 0:
        raise ValueError("pair number must be non-negative")
    basis = []
    for n in range(pair // 2, -1, -1):
        m = pair - 2 * n
        if cutoff_phonon is not None and m >= cutoff_phonon:
            continue
        if cutoff_photon is not None and n >= cutoff_photon:
            continue
        basis.append((n, m))
    size = len(basis)
    mat = np.zeros((size, size))
    pos = {s: k for k, s in enumerate(basis)}
    for (n, m), k in pos.items():
        up = (n + 1, m - 2)
        if up in pos:
            val = np.sqrt((n + 1) * m * (m - 1))
            mat[k, pos[up]] = mat[pos[up], k] = val
    return Manifold(pair, tuple(basis), mat)


def resonance_detunings(max_pair: int, cutoff_phonon: int | None = None) -> list:
    """Probe resonances (in units of G) for every manifold up to ``max_pair``."""
    if max_pair < 2:
        raise ValueError("max_pair must be at least 2 to contain a probe resonance")
    out = []
    for pair in range(2, max_pair + 1):
        k = (pair - pair % 2) // 2
        lam = manifold(pair, cutoff_phonon).eigenvalues()
        vals = np.concatenate((np.abs(lam), -np.abs(lam))) / k
        vals = np.unique(np.round(vals, 12))
        out.append(Resonance(pair, k, tuple(float(v) + 0.0 for v in vals)))
    return out


def prediction_set(max_pair: int = 4, include_thermal: bool = True, cutoff_phonon: int | None = None) -> np.ndarray:
    """Deduplicated, sorted resonance detunings ``Delta / G``.

    Odd manifolds start from a one-phonon state and only show up with a
    thermal phonon population; ``include_thermal=False`` drops them.
    """
    vals = []
    for r in resonance_detunings(max_pair, cutoff_phonon):
        if r.pair % 2 and not include_thermal:
            continue
        vals.extend(r.detunings)
    return np.unique(np.round(vals, 12)) + 0.0
