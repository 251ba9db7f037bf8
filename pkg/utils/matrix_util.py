"""
Matrices over RingScalar.

Matrices are tuples of row tuples so they can be hashed and shared. Only the
operations the Frobenius-module code needs are here: products, the entrywise
Frobenius bracket, Bareiss determinants and exact inverses.
"""

import logging
from typing import Callable, List, Sequence, Tuple

from utils.errors import DimensionMismatch, NotDivisible, SingularBasisChange
from utils.rings import RingDescriptor, RingKind, RingScalar, embed, rat_func_field

logger = logging.getLogger(__name__)

Vector = Tuple[RingScalar, ...]
Matrix = Tuple[Vector, ...]


def shape(A: Matrix) -> Tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(ring: RingDescriptor, n: int) -> Matrix:
    return tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n))


def zeros(ring: RingDescriptor, rows: int, cols: int) -> Matrix:
    return tuple(tuple(ring.zero for _ in range(cols)) for _ in range(rows))


def from_rows(ring: RingDescriptor, rows: Sequence[Sequence]) -> Matrix:
    """Build a matrix from rows of ints or RingScalars."""
    return tuple(tuple(c if isinstance(c, RingScalar) else ring.scalar(c) for c in row) for row in rows)


def from_flat(ring: RingDescriptor, n: int, entries: Sequence) -> Matrix:
    """Square n x n matrix from a row-major list."""
    if len(entries) != n * n:
        raise DimensionMismatch(f"expected {n * n} entries for a {n}x{n} matrix, got {len(entries)}")
    return from_rows(ring, [entries[i * n:(i + 1) * n] for i in range(n)])


def vector(ring: RingDescriptor, values: Sequence) -> Vector:
    return tuple(c if isinstance(c, RingScalar) else ring.scalar(c) for c in values)


def map_entries(A: Matrix, fn: Callable[[RingScalar], RingScalar]) -> Matrix:
    return tuple(tuple(fn(c) for c in row) for row in A)


def embed_matrix(A: Matrix, target: RingDescriptor) -> Matrix:
    return map_entries(A, lambda c: embed(c, target))


def bracket(A: Matrix, e: int) -> Matrix:
    """A^[p^e]: every entry raised to the p^e-th power."""
    return map_entries(A, lambda c: c.frobenius(e))


def bracket_vector(v: Vector, e: int) -> Vector:
    return tuple(c.frobenius(e) for c in v)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows, inner = shape(A)
    inner_b, cols = shape(B)
    if inner != inner_b:
        raise DimensionMismatch(f"cannot multiply {rows}x{inner} by {inner_b}x{cols}")
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            total = A[i][0] * B[0][j]
            for k in range(1, inner):
                total = total + A[i][k] * B[k][j]
            row.append(total)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(A: Matrix, v: Vector) -> Vector:
    rows, cols = shape(A)
    if cols != len(v):
        raise DimensionMismatch(f"cannot apply a {rows}x{cols} matrix to a vector of length {len(v)}")
    out = []
    for row in A:
        total = row[0] * v[0]
        for a, b in zip(row[1:], v[1:]):
            total = total + a * b
        out.append(total)
    return tuple(out)


def determinant(A: Matrix) -> RingScalar:
    """Fraction-free Bareiss elimination; every division is exact."""
    n, m = shape(A)
    if n != m:
        raise DimensionMismatch(f"determinant of a non-square {n}x{m} matrix")
    if n == 0:
        raise DimensionMismatch("determinant of an empty matrix")
    ring = A[0][0].ring
    M: List[List[RingScalar]] = [list(row) for row in A]
    sign = ring.one
    prev = ring.one
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return ring.zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _gauss_jordan_inverse(A: Matrix) -> Matrix:
    n, _ = shape(A)
    ring = A[0][0].ring
    M = [list(row) + [ring.one if i == j else ring.zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if M[i][col].is_unit()), None)
        if pivot is None:
            raise SingularBasisChange(f"matrix is not invertible over {ring.describe()}")
        M[col], M[pivot] = M[pivot], M[col]
        inv = M[col][col].inverse()
        M[col] = [inv * c for c in M[col]]
        for i in range(n):
            if i != col and not M[i][col].is_zero():
                factor = M[i][col]
                M[i] = [a - factor * b for a, b in zip(M[i], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def _pull_back_to_poly(A: Matrix, ring: RingDescriptor) -> Matrix:
    out = []
    for row in A:
        entries = []
        for c in row:
            num, den = c.payload
            if den.degree != 0:
                raise NotDivisible(f"entry {c} does not lie in {ring.describe()}")
            entries.append(RingScalar(ring, num))
        out.append(tuple(entries))
    return tuple(out)


def inverse(A: Matrix) -> Matrix:
    """Exact inverse; over F_p[x] computed in F_p(x) and pulled back."""
    n, m = shape(A)
    if n != m or n == 0:
        raise DimensionMismatch(f"cannot invert a {n}x{m} matrix")
    ring = A[0][0].ring
    if ring.kind == RingKind.POLY_RING:
        if not determinant(A).is_unit():
            raise SingularBasisChange("determinant is not a unit of F_p[x]")
        return _pull_back_to_poly(_gauss_jordan_inverse(embed_matrix(A, rat_func_field(ring.p))), ring)
    return _gauss_jordan_inverse(A)


def rank(A: Matrix) -> int:
    """Rank over a field (or over the fraction field of F_p[x])."""
    if not A:
        return 0
    ring = A[0][0].ring
    if ring.kind == RingKind.POLY_RING:
        A = embed_matrix(A, rat_func_field(ring.p))
    M = [list(row) for row in A]
    rows, cols = shape(A)
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if not M[i][col].is_zero()), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = M[r][col].inverse()
        for i in range(r + 1, rows):
            if not M[i][col].is_zero():
                factor = M[i][col] * inv
                M[i] = [a - factor * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def literals(A: Matrix) -> List[List[str]]:
    return [[str(c) for c in row] for row in A]
