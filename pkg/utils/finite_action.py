"""
The semilinear action of a FrobModule over a finite field, as galois arrays.

Over F_{p^m} the map v -> A_r v^[Q] is only F_p-linear, so kernels are taken
after expanding every coordinate in the power basis of the field modulus:
vector index i*m + j holds the u^j digit of coordinate i. Subspaces are
handled as row matrices in reduced row echelon form.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from utils.errors import UnsupportedRing
from utils.matrix_util import Matrix
from utils.rings import RingDescriptor, RingScalar

logger = logging.getLogger(__name__)


def require_finite_field(ring: RingDescriptor):
    if not ring.is_finite_field:
        raise UnsupportedRing(f"{ring.describe()} is not a finite field")


def gf_matrix(A: Matrix, ring: RingDescriptor):
    return ring.gf([[int(c.payload) for c in row] for row in A])


def gf_rows(vectors, ring: RingDescriptor, n: int):
    """Vectors of RingScalars (or ints) as a k x n galois array."""
    data = [[int(c.payload) if isinstance(c, RingScalar) else int(c) for c in v] for v in vectors]
    return ring.gf(np.array(data, dtype=np.int64).reshape(len(data), n))


def to_scalars(row, ring: RingDescriptor):
    return tuple(RingScalar(ring, int(c)) for c in row.view(np.ndarray).reshape(-1))


def int_rows(rows) -> tuple:
    return tuple(tuple(int(c) for c in row) for row in rows.view(np.ndarray))


def frobenius_exponent(ring: RingDescriptor, twist: int) -> int:
    """Exponent Q with x^(p^twist) == x^Q on F_{p^m}."""
    return ring.p ** (twist % ring.field_degree)


@dataclass
class FiniteAction:
    """F^r of a module over F_{p^m}: rows R -> (R^Q) A_r^T."""

    ring: RingDescriptor
    n: int
    A_r: object
    Q: int

    @classmethod
    def of(cls, M, r: int = 1) -> "FiniteAction":
        require_finite_field(M.ring)
        A = gf_matrix(M.A, M.ring)
        A_r = A
        for k in range(1, r):
            A_r = A_r @ (A ** frobenius_exponent(M.ring, M.e * k))
        return cls(M.ring, M.n, A_r, frobenius_exponent(M.ring, M.e * r))

    def apply_rows(self, rows):
        if rows.shape[0] == 0:
            return rows
        return (rows ** self.Q) @ self.A_r.T

    @property
    def invertible(self) -> bool:
        return int(np.linalg.det(self.A_r)) != 0


def to_digits(rows, p: int, m: int) -> np.ndarray:
    """k x n field array -> k x (n*m) integer digit matrix, coordinate-major."""
    ints = rows.view(np.ndarray).astype(np.int64)
    digits = (ints[..., None] // (p ** np.arange(m, dtype=np.int64))) % p
    return digits.reshape(ints.shape[0], -1)


def from_digits(digits: np.ndarray, ring: RingDescriptor, n: int):
    m = ring.field_degree
    d = np.asarray(digits, dtype=np.int64).reshape(-1, n, m)
    ints = (d * (ring.p ** np.arange(m, dtype=np.int64))).sum(axis=-1)
    return ring.gf(ints)


def fp_basis(ring: RingDescriptor, n: int):
    """The n*m vectors u^j e_i as rows, in linearization order."""
    m = ring.field_degree
    ints = np.zeros((n * m, n), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            ints[i * m + j, i] = ring.p ** j
    return ring.gf(ints)


def additive_kernel(fn: Callable, ring: RingDescriptor, n: int):
    """Rows spanning {v : fn(v) == 0} over F_p, for an F_p-linear map on rows."""
    m = ring.field_degree
    basis = fp_basis(ring, n)
    images = fn(basis)
    GFp = ring.gf.prime_subfield
    if images.shape[1] == 0:
        return basis
    L = GFp(to_digits(images, ring.p, m).T)
    kernel = L.null_space()
    logger.debug(f"F_p-kernel of a {L.shape[0]}x{L.shape[1]} linearization has dimension {kernel.shape[0]}")
    if kernel.shape[0] == 0:
        return ring.gf(np.zeros((0, n), dtype=np.int64))
    return from_digits(kernel.view(np.ndarray), ring, n)


def rref(rows, ring: RingDescriptor, n: int):
    """Reduced row echelon form without zero rows."""
    if rows.shape[0] == 0:
        return ring.gf(np.zeros((0, n), dtype=np.int64))
    reduced = rows.row_reduce()
    keep = np.any(reduced.view(np.ndarray) != 0, axis=1)
    return reduced[keep]


def rank(rows) -> int:
    if rows.shape[0] == 0:
        return 0
    return int(np.linalg.matrix_rank(rows))


def stack(ring: RingDescriptor, n: int, *blocks):
    parts = [b for b in blocks if b.shape[0]]
    if not parts:
        return ring.gf(np.zeros((0, n), dtype=np.int64))
    return ring.gf(np.vstack([b.view(np.ndarray) for b in parts]))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def iter_subspaces(ring: RingDescriptor, n: int) -> Iterator:
    """Every subspace of F_q^n once, as an RREF row matrix, by pivot pattern."""
    q = ring.order
    yield ring.gf(np.zeros((0, n), dtype=np.int64))
    for k in range(1, n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n) if j not in pivots]
            for values in itertools.product(range(q), repeat=len(free)):
                ints = np.zeros((k, n), dtype=np.int64)
                for i, pc in enumerate(pivots):
                    ints[i, pc] = 1
                for (i, j), value in zip(free, values):
                    ints[i, j] = value
                yield ring.gf(ints)
