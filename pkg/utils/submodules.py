"""
Finitely generated submodules of free Frobenius modules over F_p[x].

Generators are column vectors. The canonical form is a Hermite normal form:
the pivot (first nonzero coordinate) of each generator is monic, pivots
strictly increase, and every entry sitting in another generator's pivot
coordinate is reduced modulo that pivot. Two generator sets span the same
submodule exactly when their canonical forms agree.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import galois

from utils.config_util import setting
from utils.errors import (
    BoundExceeded,
    DegreeGuardExceeded,
    DescriptorMismatch,
    DimensionMismatch,
    NotUnit,
    RootCheckFailed,
    UnsupportedRing,
)
from utils.frobmod import FrobModule, power_matrix
from utils.polynomial import fp_inflate, fp_is_zero, fp_leading, fp_scale
from utils.rings import RingDescriptor, RingKind, RingScalar

logger = logging.getLogger(__name__)

Row = List[galois.Poly]


def _nonzero(row: Row) -> bool:
    return any(not fp_is_zero(c) for c in row)


def _combine(row: Row, factor: galois.Poly, other: Row) -> Row:
    return [a - factor * b for a, b in zip(row, other)]


def hermite_rows(rows: Sequence[Row], degree_guard: Optional[int] = None) -> List[Row]:
    """
    Hermite normal form of the F_p[x]-span of ``rows``

    Args:
        rows: Generators as rows of galois polynomials
        degree_guard: Largest degree allowed in a canonical entry; submodules.degree_guard when omitted

    Returns:
        Nonzero rows in Hermite form: monic pivots, entries above each pivot reduced modulo it
    """
    guard = degree_guard or setting("submodules", "degree_guard")
    remaining = [list(r) for r in rows if _nonzero(r)]
    if not remaining:
        return []
    width = len(remaining[0])
    result: List[Row] = []
    for col in range(width):
        active = [r for r in remaining if not fp_is_zero(r[col])]
        rest = [r for r in remaining if fp_is_zero(r[col])]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda r: int(r[col].degree))
            pivot = active[0]
            survivors = [pivot]
            for r in active[1:]:
                r = _combine(r, r[col] // pivot[col], pivot)
                if not fp_is_zero(r[col]):
                    survivors.append(r)
                elif _nonzero(r):
                    rest.append(r)
            active = survivors
        pivot = active[0]
        lead = fp_leading(pivot[col])
        if lead != 1:
            inv = int(pivot[col].field(lead) ** -1)
            pivot = [fp_scale(c, inv) for c in pivot]
        for k, prev in enumerate(result):
            factor = prev[col] // pivot[col]
            if not fp_is_zero(factor):
                result[k] = _combine(prev, factor, pivot)
        result.append(pivot)
        remaining = rest
    for row in result:
        for c in row:
            if not fp_is_zero(c) and c.degree > guard:
                logger.warning(f"Canonical entry of degree {c.degree} exceeds degree_guard {guard}")
                raise DegreeGuardExceeded(f"entry degree {c.degree} exceeds degree_guard = {guard}")
    return result


def _pivot(row: Row) -> int:
    return next(i for i, c in enumerate(row) if not fp_is_zero(c))


def _reduces_to_zero(v: Row, canonical: Sequence[Row]) -> bool:
    by_pivot = {_pivot(row): row for row in canonical}
    v = list(v)
    for col in range(len(v)):
        if fp_is_zero(v[col]):
            continue
        row = by_pivot.get(col)
        if row is None:
            return False
        factor, remainder = divmod(v[col], row[col])
        if not fp_is_zero(remainder):
            return False
        v = _combine(v, factor, row)
    return True


def kernel_rows(rows: Sequence[Row], degree_guard: Optional[int] = None) -> List[Row]:
    """Saturated basis of {a : sum a_i rows_i = 0} from the Hermite form of [rows | I]."""
    if not rows:
        return []
    k, width = len(rows), len(rows[0])
    field = rows[0][0].field
    one, zero = galois.Poly.One(field=field), galois.Poly.Zero(field=field)
    augmented = [list(r) + [one if i == j else zero for j in range(k)] for i, r in enumerate(rows)]
    reduced = hermite_rows(augmented, degree_guard)
    return [row[width:] for row in reduced if not _nonzero(row[:width])]


@dataclass(frozen=True, eq=False)
class Submodule:
    """Submodule of F_p[x]^n spanned by ``generators`` (columns)."""

    ring: RingDescriptor
    n: int
    generators: Tuple[Tuple[RingScalar, ...], ...]

    def __post_init__(self):
        if self.ring.kind != RingKind.POLY_RING:
            raise UnsupportedRing(f"submodules need F_p[x], not {self.ring.describe()}")
        for v in self.generators:
            if len(v) != self.n:
                raise DimensionMismatch(f"generator of length {len(v)} in a rank {self.n} module")
            if any(c.ring != self.ring for c in v):
                raise DescriptorMismatch(f"generator entries must lie in {self.ring.describe()}")

    @classmethod
    def generated(cls, ring: RingDescriptor, n: int, generators: Sequence[Sequence]) -> "Submodule":
        gens = tuple(tuple(c if isinstance(c, RingScalar) else ring.scalar(c) for c in v) for v in generators)
        return canonical_form(cls(ring, n, gens))

    @classmethod
    def from_rows(cls, ring: RingDescriptor, n: int, rows: Sequence[Row]) -> "Submodule":
        return cls(ring, n, tuple(tuple(RingScalar(ring, c) for c in row) for row in rows))

    @classmethod
    def full(cls, ring: RingDescriptor, n: int) -> "Submodule":
        return cls.generated(ring, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ring: RingDescriptor, n: int) -> "Submodule":
        return cls(ring, n, ())

    def rows(self) -> List[Row]:
        return [[c.payload for c in v] for v in self.generators]

    @functools.cached_property
    def canonical(self) -> Tuple[Tuple[RingScalar, ...], ...]:
        return tuple(tuple(RingScalar(self.ring, c) for c in row) for row in hermite_rows(self.rows()))

    def canonical_rows(self) -> List[Row]:
        return [[c.payload for c in v] for v in self.canonical]

    @property
    def rank(self) -> int:
        return len(self.canonical)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ring == other.ring and self.n == other.n and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.ring, self.n, self.canonical))

    def to_dict(self) -> Dict:
        return {"rank": self.rank, "columns": [[str(c) for c in v] for v in self.canonical]}


@dataclass
class RootReport:
    root: Submodule
    m_used: int
    verified: bool
    chain_verified: bool = False

    def to_dict(self) -> Dict:
        return {
            "m_used": self.m_used,
            "verified": self.verified,
            "chain_verified": self.chain_verified,
            "root": self.root.to_dict()["columns"],
        }


def _same_ambient(N1: Submodule, N2: Submodule):
    if N1.ring != N2.ring:
        raise DescriptorMismatch(f"{N1.ring.describe()} vs {N2.ring.describe()}")
    if N1.n != N2.n:
        raise DimensionMismatch(f"submodules of rank {N1.n} and {N2.n} ambients")


def _check_module(M: FrobModule, N: Optional[Submodule] = None):
    if M.ring.kind != RingKind.POLY_RING:
        raise UnsupportedRing(f"unit submodules need F_p[x], not {M.ring.describe()}")
    if N is not None:
        _same_ambient(N, Submodule.zero(M.ring, M.n))


def canonical_form(N: Submodule) -> Submodule:
    return Submodule(N.ring, N.n, N.canonical)


def membership(v: Sequence[RingScalar], N: Submodule) -> bool:
    if len(v) != N.n:
        raise DimensionMismatch(f"vector of length {len(v)} in a rank {N.n} module")
    return _reduces_to_zero([c.payload for c in v], N.canonical_rows())


def contains(N1: Submodule, N2: Submodule) -> bool:
    """N2 is a submodule of N1."""
    _same_ambient(N1, N2)
    rows = N1.canonical_rows()
    return all(_reduces_to_zero(row, rows) for row in N2.canonical_rows())


def sum_submodules(N1: Submodule, N2: Submodule) -> Submodule:
    _same_ambient(N1, N2)
    return Submodule.from_rows(N1.ring, N1.n, hermite_rows(N1.canonical_rows() + N2.canonical_rows()))


def intersect(N1: Submodule, N2: Submodule) -> Submodule:
    """N1 ∩ N2 from the syzygies of [G1; -G2], projected onto the G1 part."""
    _same_ambient(N1, N2)
    rows1, rows2 = N1.canonical_rows(), N2.canonical_rows()
    if not rows1 or not rows2:
        return Submodule.zero(N1.ring, N1.n)
    stacked = rows1 + [[-c for c in row] for row in rows2]
    combos = []
    for a in kernel_rows(stacked):
        combo = [galois.Poly.Zero(field=rows1[0][0].field)] * N1.n
        for coeff, row in zip(a[:len(rows1)], rows1):
            if not fp_is_zero(coeff):
                combo = [x + coeff * y for x, y in zip(combo, row)]
        combos.append(combo)
    return Submodule.from_rows(N1.ring, N1.n, hermite_rows(combos))


def kernel(G: Sequence[Sequence[RingScalar]]) -> List[Tuple[RingScalar, ...]]:
    """F_p[x]-basis of {a : sum a_i G_i = 0} for generator columns G_i."""
    if not G:
        return []
    ring = G[0][0].ring
    return [tuple(RingScalar(ring, c) for c in row) for row in kernel_rows([[c.payload for c in v] for v in G])]


def frob_image(M: FrobModule, N: Submodule, r: int = 1) -> Submodule:
    """Canonical span of A_r g^[q^r] over the generators g of N."""
    _check_module(M, N)
    A_r = [[c.payload for c in row] for row in power_matrix(M, r).A_r]
    k = M.p ** (M.e * r)
    images = []
    for row in N.canonical_rows():
        twisted = [fp_inflate(c, k) for c in row]
        image = []
        for A_row in A_r:
            total = A_row[0] * twisted[0]
            for a, b in zip(A_row[1:], twisted[1:]):
                total = total + a * b
            image.append(total)
        images.append(image)
    return Submodule.from_rows(M.ring, M.n, hermite_rows(images))


def is_root(M: FrobModule, N: Submodule) -> bool:
    """N is contained in F(N)."""
    return contains(frob_image(M, N), N)


def is_stable(M: FrobModule, N: Submodule) -> bool:
    """F(N) is contained in N."""
    return contains(N, frob_image(M, N))


def _require_unit(M: FrobModule):
    _check_module(M)
    if not M.unit:
        raise NotUnit(f"det A = {M.det} is not a unit of {M.ring.describe()}")


def root_from_generators(M: FrobModule, gens: Sequence[Sequence], m_max: Optional[int] = None) -> RootReport:
    """
    Root generated by ``gens``

    Args:
        M: Unit Frobenius module over F_p[x]
        gens: Generator columns
        m_max: Largest m tried; submodules.m_max when omitted

    Returns:
        RootReport with the least m such that gens lies in F(gens) + ... + F^m(gens),
        the root gens + F(gens) + ... + F^(m-1)(gens) and its checks
    """
    _require_unit(M)
    m_max = m_max or setting("submodules", "m_max")
    base = Submodule.generated(M.ring, M.n, gens)
    if base.rank == 0:
        return RootReport(root=base, m_used=0, verified=True, chain_verified=True)
    terms = [base]
    images = Submodule.zero(M.ring, M.n)
    for m in range(1, m_max + 1):
        terms.append(frob_image(M, terms[-1]))
        images = sum_submodules(images, terms[-1])
        logger.debug(f"m = {m}: sum of images has rank {images.rank}")
        if contains(images, base):
            root = Submodule.zero(M.ring, M.n)
            for term in terms[:m]:
                root = sum_submodules(root, term)
            verified = is_root(M, root)
            chain_verified = _ascending_chain(M, root, 3)
            logger.info(f"Root found with m_used = {m}, verified = {verified}")
            return RootReport(root=root, m_used=m, verified=verified, chain_verified=chain_verified)
    logger.warning(f"Generators not recovered from their Frobenius images within m_max = {m_max}")
    raise BoundExceeded(f"no m <= {m_max} with gens inside the sum of their Frobenius images")


def _ascending_chain(M: FrobModule, N: Submodule, steps: int) -> bool:
    current = N
    for _ in range(steps):
        nxt = frob_image(M, current)
        if not contains(nxt, current):
            return False
        current = nxt
    return True


def induced_root(M: FrobModule, rootM: Submodule, N_gens: Sequence[Sequence], m_max: Optional[int] = None) -> Submodule:
    """rootM ∩ N for the F-saturation N of N_gens; checked to be a root."""
    _require_unit(M)
    m_max = m_max or setting("submodules", "m_max")
    saturated = Submodule.generated(M.ring, M.n, N_gens)
    for step in range(m_max + 1):
        grown = sum_submodules(saturated, frob_image(M, saturated))
        if grown == saturated:
            break
        saturated = grown
    else:
        logger.warning(f"F-saturation did not stabilize within m_max = {m_max}")
        raise BoundExceeded(f"F-saturation of N_gens did not stabilize within {m_max} steps")
    result = intersect(rootM, saturated)
    if not is_root(M, result):
        raise RootCheckFailed("rootM ∩ N is not a root")
    logger.info(f"Induced root of rank {result.rank} after {step} saturation steps")
    return result
