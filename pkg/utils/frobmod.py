"""
Frobenius modules on free modules.

A FrobModule is a free module R^n with a p^e-linear map F(v) = A v^[q],
q = p^e. The columns of A are the images of the standard basis vectors.
This module holds the A_r calculus (iterated powers), base change, scalar
extension and the Frobenius functor on presentation matrices.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from utils.config_util import setting
from utils.errors import (
    DescriptorMismatch,
    DimensionMismatch,
    PowerBoundExceeded,
    SingularBasisChange,
    ValidationError,
)
from utils.matrix_util import (
    Matrix,
    Vector,
    bracket,
    bracket_vector,
    determinant,
    embed_matrix,
    from_rows,
    identity,
    inverse,
    literals,
    mat_mul,
    mat_vec,
    shape,
)
from utils.rings import RingDescriptor, RingScalar, poly_ring

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrobModule:
    """Free module of rank n over ``ring`` with F(v) = A v^[p^e]."""

    ring: RingDescriptor
    n: int
    e: int
    A: Matrix

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"rank must be positive, got {self.n}")
        if self.e < 1:
            raise ValidationError(f"twist must be positive, got {self.e}")
        if shape(self.A) != (self.n, self.n):
            raise ValidationError(f"structure matrix has shape {shape(self.A)}, expected {self.n}x{self.n}")
        for row in self.A:
            for c in row:
                if not isinstance(c, RingScalar) or c.ring != self.ring:
                    raise DescriptorMismatch(f"matrix entry {c!r} does not lie in {self.ring.describe()}")

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def q(self) -> int:
        return self.ring.p ** self.e

    @functools.cached_property
    def det(self) -> RingScalar:
        return determinant(self.A)

    @property
    def unit(self) -> bool:
        return self.det.is_unit()

    def describe(self) -> str:
        return f"rank {self.n} over {self.ring.describe()}, q = {self.p}^{self.e}"

    def to_dict(self) -> Dict:
        return {
            "ring": self.ring.describe(),
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "matrix": literals(self.A),
        }


@dataclass(frozen=True)
class FrobMatrixPower:
    r: int
    A_r: Matrix

    def to_dict(self) -> Dict:
        return {"r": self.r, "A_r": literals(self.A_r)}


@dataclass(frozen=True)
class CoefficientSequence:
    """a_r with a_{-1} = 0, a_0 = 1 and a_r = a_{r-2} + a_{r-1} x^(q^(r-1))."""

    p: int
    e: int
    r: int
    a_r: RingScalar

    def to_dict(self) -> Dict:
        return {"p": self.p, "e": self.e, "r": self.r, "a_r": str(self.a_r)}


@dataclass
class UnitReport:
    unit: bool
    det: RingScalar
    ring: str = ""

    def to_dict(self) -> Dict:
        return {"unit": self.unit, "det": str(self.det), "ring": self.ring}


def _check_power(r: int, max_power: Optional[int]):
    if r < 1:
        raise ValidationError(f"power index must be >= 1, got {r}")
    bound = max_power or setting("frobmod", "max_power")
    if r > bound:
        logger.warning(f"Requested A_{r} exceeds max_power {bound}")
        raise PowerBoundExceeded(f"r = {r} exceeds max_power = {bound}")


@functools.lru_cache(maxsize=256)
def _power_chain(M: FrobModule, r: int) -> Matrix:
    if r == 1:
        return M.A
    return mat_mul(_power_chain(M, r - 1), bracket(M.A, M.e * (r - 1)))


def power_matrix(M: FrobModule, r: int, max_power: Optional[int] = None) -> FrobMatrixPower:
    """
    Matrix of F^r through the recursion A_r = A_{r-1} A^[q^(r-1)]

    Args:
        M: Frobenius module
        r: Power of F, 1 <= r <= max_power
        max_power: Bound on r; the frobmod.max_power setting when omitted

    Returns:
        FrobMatrixPower holding r and A_r
    """
    _check_power(r, max_power)
    return FrobMatrixPower(r, _power_chain(M, r))


def direct_power_product(M: FrobModule, r: int, max_power: Optional[int] = None) -> Matrix:
    """A A^[q] ... A^[q^(r-1)] multiplied out left to right."""
    _check_power(r, max_power)
    product = M.A
    for i in range(1, r):
        product = mat_mul(product, bracket(M.A, M.e * i))
    return product


def apply(M: FrobModule, v: Sequence[RingScalar], r: int = 1, max_power: Optional[int] = None) -> Vector:
    """F^r(v) = A_r v^[q^r]."""
    if len(v) != M.n:
        raise DimensionMismatch(f"vector of length {len(v)} for a rank {M.n} module")
    A_r = power_matrix(M, r, max_power).A_r
    return mat_vec(A_r, bracket_vector(tuple(v), M.e * r))


@functools.lru_cache(maxsize=64)
def _coefficient_chain(p: int, e: int, r: int) -> List[RingScalar]:
    ring = poly_ring(p)
    q = p ** e
    chain = [ring.zero, ring.one]  # a_{-1}, a_0
    for k in range(1, r + 1):
        chain.append(chain[-2] + chain[-1] * ring.monomial(q ** (k - 1)))
    return chain


def coefficient_sequence(p: int, e: int, r: int) -> CoefficientSequence:
    if r < -1:
        raise ValidationError(f"coefficient index must be >= -1, got {r}")
    chain = _coefficient_chain(p, e, max(r, 0))
    return CoefficientSequence(p, e, r, chain[r + 1])


def change_basis(M: FrobModule, C: Matrix, r: int = 1, max_power: Optional[int] = None) -> Matrix:
    """
    Matrix of F^r in another basis: C^-1 A_r C^[q^r]

    Args:
        M: Frobenius module
        C: Invertible n x n matrix whose columns are the new basis
        r: Power of F

    Returns:
        The n x n matrix of F^r with respect to the columns of C
    """
    if shape(C) != (M.n, M.n):
        raise DimensionMismatch(f"basis change has shape {shape(C)}, expected {M.n}x{M.n}")
    if any(c.ring != M.ring for row in C for c in row):
        raise DescriptorMismatch(f"basis change must lie in {M.ring.describe()}")
    if not determinant(C).is_unit():
        raise SingularBasisChange(f"det C = {determinant(C)} is not a unit of {M.ring.describe()}")
    A_r = power_matrix(M, r, max_power).A_r
    return mat_mul(mat_mul(inverse(C), A_r), bracket(C, M.e * r))


def conjugate(M: FrobModule, C: Matrix) -> FrobModule:
    """The same module written in the basis given by the columns of C."""
    return FrobModule(M.ring, M.n, M.e, change_basis(M, C, 1))


def extend_scalars(M: FrobModule, target: RingDescriptor) -> FrobModule:
    if target == M.ring:
        return M
    extended = FrobModule(target, M.n, M.e, embed_matrix(M.A, target))
    logger.debug(f"Extended {M.ring.describe()} module to {target.describe()}")
    return extended


def frobenius_twist_presentation(G: Matrix, e: int) -> Matrix:
    """Presentation matrix of F^e* of coker G: every entry to the p^e-th power."""
    return bracket(G, e)


def compose_twist(M: FrobModule, r: int, max_power: Optional[int] = None) -> FrobModule:
    """M viewed as a module over R[F^(er)], structure matrix A_r."""
    if r == 1:
        return M
    return FrobModule(M.ring, M.n, M.e * r, power_matrix(M, r, max_power).A_r)


def is_unit(M: FrobModule) -> UnitReport:
    return UnitReport(unit=M.unit, det=M.det, ring=M.ring.describe())


def make_module(ring: RingDescriptor, e: int, rows: Sequence[Sequence]) -> FrobModule:
    """Convenience constructor from rows of ints or scalars."""
    A = from_rows(ring, rows)
    return FrobModule(ring, len(A), e, A)


def identity_module(ring: RingDescriptor, n: int, e: int = 1) -> FrobModule:
    return FrobModule(ring, n, e, identity(ring, n))
