"""Exact dense linear algebra over prime fields.

Every dimension the library reports (ranks, kernels, subspace
intersections) comes out of the Gaussian elimination implemented here.
Elimination is deterministic: the pivot is always the first nonzero entry
in column order, so reduced forms and the bases derived from them are
reproducible across runs.  GF(2) uses packed integer bitsets for rows;
every other prime uses int64 residue arithmetic.  Both paths produce the
same (unique) reduced row echelon form and share one test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AmbientMismatch, ShapeMismatch, ValidationError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of integers mod a prime p."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError("field modulus must be prime", witness=self.p)

    def inv(self, x: int) -> int:
        return pow(int(x) % self.p, self.p - 2, self.p)


def _as_residues(entries, p: int) -> np.ndarray:
    a = np.asarray(entries, dtype=np.int64)
    if a.ndim != 2:
        raise ShapeMismatch("matrix entries must be two-dimensional", witness=a.shape)
    return a % p


class Matrix:
    """Immutable dense matrix over F_p with entries in [0, p)."""

    __slots__ = ("a", "p", "_rref")

    def __init__(self, entries, p: int):
        if not is_prime(p):
            raise ValidationError("field modulus must be prime", witness=p)
        a = _as_residues(entries, p)
        a.setflags(write=False)
        self.a = a
        self.p = p
        self._rref = None

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "Matrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple:
        return self.a.shape

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} mod {self.p})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p:
            raise AmbientMismatch("field mismatch", witness=(self.p, other.p))
        if self.cols != other.rows:
            raise ShapeMismatch(
                "inner dimensions disagree", witness=(self.shape, other.shape)
            )
        return Matrix((self.a @ other.a) % self.p, self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape or self.p != other.p:
            raise ShapeMismatch("shape mismatch", witness=(self.shape, other.shape))
        return Matrix((self.a + other.a) % self.p, self.p)

    def __neg__(self) -> "Matrix":
        return Matrix((-self.a) % self.p, self.p)

    def transpose(self) -> "Matrix":
        return Matrix(self.a.T, self.p)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.p != other.p:
            raise ShapeMismatch("row counts disagree", witness=(self.shape, other.shape))
        return Matrix(np.hstack([self.a, other.a]), self.p)

    def take_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.a[:, list(idx)].reshape(self.rows, len(list(idx))), self.p)

    def is_zero(self) -> bool:
        return not self.a.any()

    def rref(self) -> tuple["Matrix", tuple]:
        """Reduced row echelon form and pivot column indices."""
        if self._rref is None:
            if self.p == 2:
                R, piv = _rref_gf2(self.a)
            else:
                R, piv = _rref_modp(self.a, self.p)
            R.setflags(write=False)
            out = Matrix.__new__(Matrix)
            out.a = R
            out.p = self.p
            out._rref = None
            self._rref = (out, tuple(piv))
        return self._rref

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Subspace":
        """Basis of the null space, one column per free variable.

        Deterministic: free columns in ascending order; the basis vector
        for free column j has a 1 at j and -R[r, j] at each pivot column.
        """
        R, pivots = self.rref()
        m = self.cols
        free = [j for j in range(m) if j not in set(pivots)]
        basis = np.zeros((m, len(free)), dtype=np.int64)
        for k, j in enumerate(free):
            basis[j, k] = 1
            for r, pc in enumerate(pivots):
                basis[pc, k] = (-int(R.a[r, j])) % self.p
        return Subspace(m, Matrix(basis, self.p))

    def column_space(self) -> "Subspace":
        """Span of the columns; basis = original columns at pivot indices."""
        _, pivots = self.rref()
        return Subspace(self.rows, self.take_columns(pivots))

    def solve(self, rhs: "Matrix") -> "Matrix":
        """A particular X with self @ X = rhs; free variables set to 0.

        Raises ValidationError when the system is inconsistent.
        """
        if rhs.rows != self.rows:
            raise ShapeMismatch("rhs row count disagrees", witness=rhs.shape)
        aug = self.hstack(rhs)
        R, pivots = aug.rref()
        for pc in pivots:
            if pc >= self.cols:
                raise ValidationError("linear system is inconsistent")
        X = np.zeros((self.cols, rhs.cols), dtype=np.int64)
        for r, pc in enumerate(pivots):
            X[pc, :] = R.a[r, self.cols:]
        return Matrix(X, self.p)


def _rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list]:
    R = a.copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def _rref_gf2(a: np.ndarray) -> tuple[np.ndarray, list]:
    rows, cols = a.shape
    packed = []
    for i in range(rows):
        word = 0
        for j in np.flatnonzero(a[i]):
            word |= 1 << int(j)
        packed.append(word)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        bit = 1 << c
        pr = next((i for i in range(r, rows) if packed[i] & bit), None)
        if pr is None:
            continue
        packed[r], packed[pr] = packed[pr], packed[r]
        for i in range(rows):
            if i != r and packed[i] & bit:
                packed[i] ^= packed[r]
        pivots.append(c)
        r += 1
    R = np.zeros((rows, cols), dtype=np.int64)
    for i, word in enumerate(packed):
        while word:
            low = word & -word
            R[i, low.bit_length() - 1] = 1
            word ^= low
    return R, pivots


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n given by an n x dim matrix of independent
    basis columns."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise AmbientMismatch(
                "basis rows disagree with ambient dimension",
                witness=(self.basis.rows, self.ambient_dim),
            )
        if self.basis.rank() != self.basis.cols:
            raise ValidationError("basis columns are dependent")

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def p(self) -> int:
        return self.basis.p

    def contains(self, other: "Subspace") -> bool:
        joint = self.basis.hstack(other.basis)
        return joint.rank() == self.dim


def rank(M: Matrix) -> int:
    return M.rank()


def kernel_basis(M: Matrix) -> Subspace:
    return M.kernel_basis()


def column_space(M: Matrix) -> Subspace:
    return M.column_space()


def intersection_dim(U: Subspace, W: Subspace) -> int:
    """dim(U and W) = dim U + dim W - dim(U + W), the dimension of the
    pullback of the two inclusions into the shared ambient space."""
    if U.ambient_dim != W.ambient_dim:
        raise AmbientMismatch(
            "subspaces live in different ambient spaces",
            witness=(U.ambient_dim, W.ambient_dim),
        )
    if U.p != W.p:
        raise AmbientMismatch("field mismatch", witness=(U.p, W.p))
    return U.dim + W.dim - U.basis.hstack(W.basis).rank()


def complete_basis(inner: Subspace, outer: Subspace) -> Matrix:
    """Columns of ``outer`` that extend a basis of ``inner`` to a basis of
    inner + outer.  Deterministic via pivot positions of [inner | outer]."""
    if inner.ambient_dim != outer.ambient_dim:
        raise AmbientMismatch(
            "subspaces live in different ambient spaces",
            witness=(inner.ambient_dim, outer.ambient_dim),
        )
    joint = inner.basis.hstack(outer.basis)
    _, pivots = joint.rref()
    extra = [c - inner.dim for c in pivots if c >= inner.dim]
    return outer.basis.take_columns(extra)
