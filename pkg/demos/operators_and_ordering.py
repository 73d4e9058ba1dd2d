"""
Operators on a truncated Fock space
===================================

A short tour of the operator layer: single-mode ladders, tensor placement
and the conventions every other module relies on.
"""

import numpy as np

from nrblockade.fock import HilbertSpec, annihilation, basis_index, commutator, embed, quadrature_p, quadrature_q

# A lowering operator on four levels has sqrt(n) on its first superdiagonal.
a = annihilation(4)
print(np.round(a.toarray().real, 4))

# Two-mode space: a photon mode with two levels and a phonon mode with three.
# Mode 0 is the slowest index, so |n, m> lives at n * 3 + m.
space = HilbertSpec((2, 3), labels=("a_L", "b"))
print("index of |1, 2> :", basis_index(space, (1, 2)))

aL = embed(annihilation(2), space, "a_L")
b = embed(annihilation(3), space, "b")

# The pair-exchange term a^dag b^2 turns two phonons into one photon.
pair = aL.dag() @ b @ b
print("<1,0| a^dag b^2 |0,2> =", pair.matrix_element((1, 0), (0, 2)).real)

# Operators on different factors commute exactly, not just to round-off.
print("[a_L, b] is zero:", commutator(aL, b).is_zero())

# Quadratures follow q = (b^dag + b)/sqrt2 and p = i(b^dag - b)/sqrt2.
# Truncation spoils [q, p] = i only on the top levels.
c = commutator(quadrature_q(12), quadrature_p(12)).toarray()
print("diag of [q, p]:", np.round(np.diag(c), 6))
