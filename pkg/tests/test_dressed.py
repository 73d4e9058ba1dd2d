import math

import numpy as np
import pytest

from nrblockade.dressed import manifold, prediction_set, resonance_detunings
from nrblockade.fock import basis_index
from nrblockade.model import SystemParams, build_hamiltonian

s2, s6 = math.sqrt(2), math.sqrt(6)


def test_pair_two():
    m = manifold(2)
    assert m.basis == ((1, 0), (0, 2))
    assert m.matrix[0, 1] == pytest.approx(s2, abs=1e-15)
    np.testing.assert_allclose(m.eigenvalues(), [-s2, s2], atol=1e-12)


def test_pair_three():
    m = manifold(3)
    assert m.basis == ((1, 1), (0, 3))
    np.testing.assert_allclose(m.eigenvalues(), [-s6, s6], atol=1e-12)


def test_pair_four():
    m = manifold(4)
    assert m.basis == ((2, 0), (1, 2), (0, 4))
    np.testing.assert_allclose([m.matrix[0, 1], m.matrix[1, 2]], [2.0, 2 * math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(m.eigenvalues(), [-4, 0, 4], atol=1e-12)


def test_small_manifolds_and_cutoffs():
    assert manifold(0).basis == ((0, 0),) and manifold(0).eigenvalues()[0] == 0
    assert manifold(1).basis == ((0, 1),)
    assert manifold(4, cutoff_phonon=4).basis == ((2, 0), (1, 2))
    with pytest.raises(ValueError):
        manifold(-1)


def test_resonance_detunings():
    r = {x.pair: x for x in resonance_detunings(4)}
    assert r[2].photon_order == 1
    np.testing.assert_allclose(r[2].detunings, [-s2, s2], atol=1e-12)
    np.testing.assert_allclose(r[3].detunings, [-s6, s6], atol=1e-12)
    assert r[4].photon_order == 2
    np.testing.assert_allclose(r[4].detunings, [-2, 0, 2], atol=1e-12)
    with pytest.raises(ValueError):
        resonance_detunings(1)


def test_prediction_set():
    np.testing.assert_allclose(prediction_set(4), [-s6, -2, -s2, 0, s2, 2, s6], atol=1e-12)
    np.testing.assert_allclose(prediction_set(4, include_thermal=False), [-2, -s2, 0, s2, 2], atol=1e-12)


@pytest.mark.parametrize("pair", range(0, 9))
def test_spectrum_symmetric(pair):
    ev = np.sort(manifold(pair).eigenvalues())
    np.testing.assert_allclose(ev, -ev[::-1], atol=1e-12)


@pytest.mark.parametrize("pair", range(0, 9))
def test_manifold_matches_dense_sector_of_hamiltonian(pair):
    """Project the undriven model Hamiltonian (G = 1, Delta_m = Delta/2 = 0) onto each sector."""
    cp, cm = 6, 10
    p = SystemParams(Delta=0.0, Delta_m=0.0, G=1.0, epsilon=0.0, cutoff_photon=cp, cutoff_phonon=cm)
    H = build_hamiltonian(p, 1, "factorized").toarray()
    idx = [basis_index_(n, m, cm) for n in range(cp) for m in range(cm) if 2 * n + m == pair]
    block = H[np.ix_(idx, idx)]
    # the sector is closed: no leakage to other pair numbers
    others = [i for i in range(H.shape[0]) if i not in idx]
    assert np.abs(H[np.ix_(idx, others)]).max(initial=0.0) == 0.0
    dense = np.linalg.eigvalsh(block)
    np.testing.assert_allclose(np.sort(manifold(pair, cm, cp).eigenvalues()), dense, atol=1e-12)


def basis_index_(n, m, cm):
    return n * cm + m


def test_sector_index_convention():
    from nrblockade.fock import HilbertSpec

    assert basis_index(HilbertSpec((6, 10)), (2, 3)) == basis_index_(2, 3, 10)


def test_locked_mechanics_makes_sector_degenerate():
    """With Delta_m = Delta/2 the bare energies of a manifold coincide, so G-eigenvalues shift rigidly."""
    D = 0.8
    p = SystemParams(Delta=D, Delta_m=D / 2, G=1.0, epsilon=0.0, cutoff_photon=4, cutoff_phonon=8)
    H = build_hamiltonian(p, 1, "factorized").toarray()
    idx = [basis_index_(n, m, 8) for n in range(4) for m in range(8) if 2 * n + m == 4]
    dense = np.linalg.eigvalsh(H[np.ix_(idx, idx)])
    np.testing.assert_allclose(dense, np.sort(manifold(4).eigenvalues()) + 4 * D / 2, atol=1e-12)
