"""Sparse bosonic operators on truncated Fock spaces.

Tensor ordering: mode 0 is the slowest-varying index, i.e. a product state
``|n_0, n_1, ..., n_k>`` sits at flat index ``((n_0 * d_1 + n_1) * d_2 + ...)``.
This is the ordering produced by ``scipy.sparse.kron(A0, kron(A1, ...))`` and
every other module relies on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from numbers import Number

import numpy as np
import scipy.sparse as sp

from .errors import InvalidDimensionError, SpaceMismatchError

__all__ = [
    "HilbertSpec",
    "Operator",
    "annihilation",
    "creation",
    "number",
    "identity",
    "embed",
    "mode_operator",
    "quadrature_q",
    "quadrature_p",
    "commutator",
    "basis_index",
]


@dataclass(frozen=True)
class HilbertSpec:
    """Ordered tensor product of truncated single-mode spaces.

    Parameters
    ----------
    mode_dims : tuple of int
        Truncation dimension of each mode (every entry >= 2).
    labels : tuple of str, optional
        Mode names, e.g. ``("a_L", "b")``. Defaults to ``("m0", "m1", ...)``.
    """

    mode_dims: tuple
    labels: tuple = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.mode_dims)
        if not dims:
            raise InvalidDimensionError("a Hilbert space needs at least one mode")
        if any(d < 2 for d in dims):
            raise InvalidDimensionError(f"every mode dimension must be >= 2, got {dims}")
        labels = self.labels
        if labels is None:
            labels = tuple(f"m{k}" for k in range(len(dims)))
        labels = tuple(str(s) for s in labels)
        if len(labels) != len(dims):
            raise InvalidDimensionError("labels and mode_dims differ in length")
        if len(set(labels)) != len(labels):
            raise InvalidDimensionError(f"duplicate mode labels {labels}")
        object.__setattr__(self, "mode_dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return int(np.prod(self.mode_dims))

    @property
    def n_modes(self) -> int:
        return len(self.mode_dims)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no mode {label!r} in {self.labels}") from None


def _canonical(mat) -> sp.csr_matrix:
    # fixed CSR layout so repeated builds are bit-identical
    m = sp.csr_matrix(mat, dtype=np.complex128, copy=True)
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


class Operator:
    """Immutable sparse operator bound to a :class:`HilbertSpec`.

    Arithmetic (``+``, ``-``, ``@``) is only allowed between operators on
    equal spaces; scalars multiply with ``*``.
    """

    __slots__ = ("_space", "_data")

    def __init__(self, space: HilbertSpec, data):
        data = _canonical(data)
        if data.shape != (space.dim, space.dim):
            raise InvalidDimensionError(
                f"matrix shape {data.shape} does not match space dimension {space.dim}"
            )
        data.data.setflags(write=False)
        self._space = space
        self._data = data

    @property
    def space(self) -> HilbertSpec:
        return self._space

    @property
    def data(self) -> sp.csr_matrix:
        return self._data

    @property
    def shape(self):
        return self._data.shape

    @property
    def nnz(self) -> int:
        return self._data.nnz

    def toarray(self) -> np.ndarray:
        return self._data.toarray()

    def dag(self) -> "Operator":
        return Operator(self._space, self._data.conj().T)

    adjoint = dag

    def _check(self, other: "Operator"):
        if not isinstance(other, Operator):
            return NotImplemented
        if other._space != self._space:
            raise SpaceMismatchError(f"{self._space} vs {other._space}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Operator(self._space, self._data + other._data)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Operator(self._space, self._data - other._data)

    def __neg__(self):
        return Operator(self._space, -self._data)

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return Operator(self._space, self._data * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return Operator(self._space, self._data / scalar)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self._space, self._data @ other._data)
        return self._data @ other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = identity(self._space)
        for _ in range(n):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, Operator) or other._space != self._space:
            return False
        return (self._data != other._data).nnz == 0

    __hash__ = None

    def is_hermitian(self, atol: float = 0.0) -> bool:
        diff = self._data - self._data.conj().T
        if diff.nnz == 0:
            return True
        return bool(np.abs(diff.data).max() <= atol)

    def is_zero(self) -> bool:
        return self._data.nnz == 0

    def matrix_element(self, bra, ket) -> complex:
        """``<bra|O|ket>`` for product-state occupation tuples."""
        i = basis_index(self._space, bra)
        j = basis_index(self._space, ket)
        return complex(self._data[i, j])

    def __repr__(self):
        return f"Operator(space={self._space.mode_dims}, nnz={self.nnz})"


def basis_index(space: HilbertSpec, occupations) -> int:
    occupations = tuple(int(n) for n in occupations)
    if len(occupations) != space.n_modes:
        raise InvalidDimensionError(f"expected {space.n_modes} occupations, got {occupations}")
    idx = 0
    for n, d in zip(occupations, space.mode_dims):
        if not 0 <= n < d:
            raise InvalidDimensionError(f"occupation {n} outside [0, {d})")
        idx = idx * d + n
    return idx


def _single(dim) -> HilbertSpec:
    dim = int(dim)
    if dim < 2:
        raise InvalidDimensionError(f"mode dimension must be >= 2, got {dim}")
    return HilbertSpec((dim,))


def annihilation(dim: int) -> Operator:
    """Lowering operator with ``<n-1|a|n> = sqrt(n)``."""
    space = _single(dim)
    return Operator(space, sp.diags(np.sqrt(np.arange(1, space.dim)), 1))


def creation(dim: int) -> Operator:
    return annihilation(dim).dag()


def number(dim: int) -> Operator:
    space = _single(dim)
    return Operator(space, sp.diags(np.arange(space.dim, dtype=float)))


def identity(space: HilbertSpec) -> Operator:
    return Operator(space, sp.identity(space.dim, format="csr"))


def quadrature_q(dim: int) -> Operator:
    """Position quadrature ``(b^dag + b)/sqrt(2)``."""
    b = annihilation(dim)
    return (b.dag() + b) / np.sqrt(2.0)


def quadrature_p(dim: int) -> Operator:
    """Momentum quadrature ``i(b^dag - b)/sqrt(2)``."""
    b = annihilation(dim)
    return (b.dag() - b) * (1j / np.sqrt(2.0))


def embed(op: Operator, space: HilbertSpec, mode_index) -> Operator:
    """Place a single-mode operator on one factor of ``space``.

    ``mode_index`` may be an integer or a mode label.
    """
    if isinstance(mode_index, str):
        mode_index = space.index_of(mode_index)
    if not 0 <= mode_index < space.n_modes:
        raise IndexError(f"mode index {mode_index} out of range for {space.n_modes} modes")
    if op.space.n_modes != 1:
        raise SpaceMismatchError("embed expects a single-mode operator")
    if op.space.dim != space.mode_dims[mode_index]:
        raise SpaceMismatchError(
            f"operator dimension {op.space.dim} != mode dimension {space.mode_dims[mode_index]}"
        )
    factors = [sp.identity(d, format="csr") for d in space.mode_dims]
    factors[mode_index] = op.data
    return Operator(space, reduce(lambda x, y: sp.kron(x, y, format="csr"), factors))


def mode_operator(space: HilbertSpec, label) -> Operator:
    """Annihilation operator of mode ``label`` embedded in ``space``."""
    idx = space.index_of(label) if isinstance(label, str) else label
    return embed(annihilation(space.mode_dims[idx]), space, idx)


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a
