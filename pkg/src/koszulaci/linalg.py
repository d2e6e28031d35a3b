"""Dense linear algebra over F_p on numpy int64 arrays.

p^2 fits comfortably in int64, so a multiply-accumulate per row followed by
one reduction is exact.
"""

from __future__ import annotations

import numpy as np


def as_matrix(rows, width) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, width), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def rref(A: np.ndarray, p: int):
    """Reduced row echelon form.  Returns (R, pivot_columns); R has only the
    nonzero rows."""
    R = A.copy() % p
    m, n = R.shape
    pivots = []
    r = 0
    for j in range(n):
        if r == m:
            break
        col = R[r:, j]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = pow(int(R[r, j]), p - 2, p)
        R[r] = R[r] * inv % p
        other = np.nonzero(R[:, j])[0]
        other = other[other != r]
        if other.size:
            R[other] = (R[other] - np.outer(R[other, j], R[r])) % p
        pivots.append(j)
        r += 1
    return R[:r], pivots


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return rref(A, p)[0].shape[0]


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0}, from the RREF free columns."""
    m, n = A.shape
    R, pivots = rref(A, p)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for r, pj in enumerate(pivots):
            basis[k, pj] = (-R[r, j]) % p
    return basis


class RowSpan:
    """Incrementally maintained row space in RREF over F_p."""

    def __init__(self, width: int, p: int):
        self.width = width
        self.p = p
        self.rows = []  # normalized rows, each with a distinct pivot column
        self.pivot_of_row = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v % self.p
        for row, j in zip(self.rows, self.pivot_of_row):
            c = v[j]
            if c:
                v = (v - c * row) % self.p
        return v

    def add(self, v: np.ndarray) -> bool:
        """Add v to the span.  Returns True if the dimension grew."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        j = int(nz[0])
        v = v * pow(int(v[j]), self.p - 2, self.p) % self.p
        for i, row in enumerate(self.rows):
            c = row[j]
            if c:
                self.rows[i] = (row - c * v) % self.p
        self.rows.append(v)
        self.pivot_of_row.append(j)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))
