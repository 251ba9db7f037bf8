"""
Stable structure of Frobenius modules over finite fields.

Fixed points, stable subspaces, simplicity, composition series, geometric
length, Dieudonne fixed bases and the descent preimage T = (F^r)^-1 on
subspaces. Everything here refuses infinite base rings.
"""

import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.config_util import setting
from utils.errors import (
    BoundExceeded,
    DimensionMismatch,
    DescriptorMismatch,
    EnumerationCapExceeded,
    NotUnit,
    UnsupportedRing,
    WitnessBoundExceeded,
)
from utils.finite_action import (
    FiniteAction,
    additive_kernel,
    gf_matrix,
    gf_rows,
    int_rows,
    iter_subspaces,
    rank,
    require_finite_field,
    rref,
    stack,
    subspace_count,
    to_digits,
    to_scalars,
)
from utils.frobmod import FrobModule, extend_scalars
from utils.matrix_util import literals
from utils.rings import RingDescriptor, RingScalar, field_descriptor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subspace:
    """Subspace of F_{p^m}^n, stored as RREF basis rows in galois integer form."""

    ring: RingDescriptor
    n: int
    basis: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_gf(cls, ring: RingDescriptor, n: int, rows) -> "Subspace":
        return cls(ring, n, int_rows(rref(rows, ring, n)))

    @classmethod
    def span(cls, ring: RingDescriptor, n: int, vectors: Sequence[Sequence]) -> "Subspace":
        require_finite_field(ring)
        for v in vectors:
            if len(v) != n:
                raise DimensionMismatch(f"vector of length {len(v)} in a rank {n} space")
        return cls.from_gf(ring, n, gf_rows(vectors, ring, n))

    @classmethod
    def zero(cls, ring: RingDescriptor, n: int) -> "Subspace":
        return cls(ring, n, ())

    @classmethod
    def full(cls, ring: RingDescriptor, n: int) -> "Subspace":
        return cls(ring, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_gf(self):
        return gf_rows(self.basis, self.ring, self.n)

    def vectors(self) -> List[Tuple[RingScalar, ...]]:
        return [tuple(RingScalar(self.ring, c) for c in row) for row in self.basis]

    def sort_key(self):
        return self.dim, self.basis

    def contains(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return rank(stack(self.ring, self.n, self.to_gf(), other.to_gf())) == self.dim

    def to_dict(self) -> Dict:
        return {"dim": self.dim, "basis": [[str(c) for c in v] for v in self.vectors()]}


@dataclass
class FixedSpace:
    """{v : A_r v^[q^r] = v}, a vector space over the fixed subfield."""

    ring: RingDescriptor
    n: int
    r: int
    basis: List[Tuple[RingScalar, ...]]
    fixed_subfield: RingDescriptor
    fp_dimension: int

    @property
    def count(self) -> int:
        return self.ring.p ** self.fp_dimension

    def to_dict(self) -> Dict:
        return {
            "r": self.r,
            "count": self.count,
            "fixed_subfield": self.fixed_subfield.describe(),
            "dimension_over_fixed_subfield": len(self.basis),
            "basis": [[str(c) for c in v] for v in self.basis],
        }


@dataclass
class CompositionSeries:
    chain: List[Subspace]
    quotient_data: List[FrobModule]
    length: int

    def to_dict(self) -> Dict:
        return {
            "length": self.length,
            "chain": [s.to_dict() for s in self.chain],
            "quotients": [literals(Q.A) for Q in self.quotient_data],
        }


@dataclass
class GeometricLength:
    length: int
    witness: int
    history: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"length": self.length, "witness_s": self.witness, "history": self.history}


@dataclass
class DieudonneBasis:
    s: int
    ring: RingDescriptor
    vectors: List[Tuple[RingScalar, ...]]
    verified: bool

    def to_dict(self) -> Dict:
        return {
            "s": self.s,
            "field": self.ring.describe(),
            "verified": self.verified,
            "basis": [[str(c) for c in v] for v in self.vectors],
        }


@dataclass
class CharacteristicPolynomial:
    coefficients: List[RingScalar]  # ascending in t
    irreducible: bool

    def __str__(self):
        parts = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if c.is_zero():
                continue
            text = str(c)
            if i and "+" in text:
                text = f"({text})"
            if i == 0:
                parts.append(text)
            elif text == "1":
                parts.append("t" if i == 1 else f"t^{i}")
            else:
                parts.append(f"{text}*t" if i == 1 else f"{text}*t^{i}")
        return "+".join(parts)

    def to_dict(self) -> Dict:
        return {"polynomial": str(self), "irreducible": self.irreducible}


@dataclass
class LengthChain:
    lengths: List[Tuple[int, int]]  # (r, length at twist e*r)
    rank: int

    @property
    def monotone(self) -> bool:
        values = [length for _, length in self.lengths] + [self.rank]
        return all(a <= b for a, b in zip(values, values[1:]))

    def to_dict(self) -> Dict:
        return {"lengths": {str(r): length for r, length in self.lengths}, "rank": self.rank,
                "monotone": self.monotone}


# ---------------------------------------------------------------------------
# fixed points and images
# ---------------------------------------------------------------------------

def _check_subspace(M: FrobModule, N: Subspace):
    if N.ring != M.ring:
        raise DescriptorMismatch(f"subspace over {N.ring.describe()}, module over {M.ring.describe()}")
    if N.n != M.n:
        raise DimensionMismatch(f"subspace of F^{N.n} in a rank {M.n} module")


def _subfield_basis(ring: RingDescriptor, g: int):
    """F_p-basis of the subfield F_{p^g} inside F_{p^m}."""
    GF = ring.gf
    m = ring.field_degree
    if g == m:
        return [GF(ring.p ** j) for j in range(m)]
    gamma = GF.primitive_element ** ((ring.p ** m - 1) // (ring.p ** g - 1))
    return [gamma ** j for j in range(g)]


def _basis_over_subfield(kernel, ring: RingDescriptor, n: int, g: int) -> list:
    """Greedy choice of kernel rows independent over F_{p^g}."""
    if g == 1:
        return list(kernel)
    scalars = _subfield_basis(ring, g)
    GFp = ring.gf.prime_subfield
    chosen, span = [], None
    for v in kernel:
        digits = GFp(to_digits(v.reshape(1, n), ring.p, ring.field_degree))
        if span is not None and rank(GFp(np.vstack([span.view(np.ndarray), digits.view(np.ndarray)]))) == rank(span):
            continue
        chosen.append(v)
        block = GFp(np.vstack([to_digits((c * v).reshape(1, n), ring.p, ring.field_degree) for c in scalars]))
        span = block if span is None else GFp(np.vstack([span.view(np.ndarray), block.view(np.ndarray)]))
    return chosen


def fixed_points(M: FrobModule, r: int = 1) -> FixedSpace:
    """
    Vectors with F^r(v) = v, found by F_p-linearization

    Args:
        M: Frobenius module over a finite field
        r: Power of F

    Returns:
        FixedSpace with the count of fixed vectors, a basis of the fixed space
        and the subfield it is a vector space over
    """
    action = FiniteAction.of(M, r)
    kernel = additive_kernel(lambda R: action.apply_rows(R) - R, M.ring, M.n)
    g = math.gcd(M.e * r, M.ring.field_degree)
    basis = _basis_over_subfield(kernel, M.ring, M.n, g)
    logger.debug(f"Fixed space of F^{r}: F_p-dimension {kernel.shape[0]}, {len(basis)} vectors over F_{M.p}^{g}")
    return FixedSpace(
        ring=M.ring,
        n=M.n,
        r=r,
        basis=[to_scalars(v, M.ring) for v in basis],
        fixed_subfield=field_descriptor(M.p, g),
        fp_dimension=int(kernel.shape[0]),
    )


def frobenius_image(M: FrobModule, N: Subspace, r: int = 1) -> Subspace:
    """The span of F^r(N)."""
    _check_subspace(M, N)
    action = FiniteAction.of(M, r)
    return Subspace.from_gf(M.ring, M.n, action.apply_rows(N.to_gf()))


def descent_preimage(M: FrobModule, N: Subspace, r: int = 1) -> Subspace:
    """
    Preimage T(N) = {v : A_r v^[q^r] in N}

    Args:
        M: Unit Frobenius module over a finite field
        N: Subspace of the same ambient space
        r: Power of F

    Returns:
        The subspace T(N); F^r(T(N)) = N
    """
    _check_subspace(M, N)
    action = FiniteAction.of(M, r)
    if not action.invertible:
        raise NotUnit(f"A_{r} is singular; descent needs a unit module")
    if N.dim == M.n:
        return Subspace.full(M.ring, M.n)
    annihilator = N.to_gf().null_space() if N.dim else M.ring.gf(np.eye(M.n, dtype=np.int64))
    kernel = additive_kernel(lambda R: action.apply_rows(R) @ annihilator.T, M.ring, M.n)
    return Subspace.from_gf(M.ring, M.n, kernel)


def is_stable(M: FrobModule, W: Subspace, r: int = 1) -> bool:
    _check_subspace(M, W)
    if W.dim == 0:
        return True
    action = FiniteAction.of(M, r)
    rows = W.to_gf()
    return rank(stack(M.ring, M.n, rows, action.apply_rows(rows))) == W.dim


# ---------------------------------------------------------------------------
# enumeration, simplicity, composition series
# ---------------------------------------------------------------------------

def enumerate_stable_subspaces(M: FrobModule, r: int = 1, cap: Optional[int] = None) -> List[Subspace]:
    """
    Every subspace W with F^r(W) contained in W

    Args:
        M: Frobenius module over a finite field
        r: Power of F
        cap: Largest number of subspaces to enumerate; stable_structure.enumeration_cap when omitted

    Returns:
        Stable subspaces sorted by (dim, basis), starting with 0 and ending with the full space
    """
    require_finite_field(M.ring)
    cap = cap if cap is not None else setting("stable_structure", "enumeration_cap")
    total = subspace_count(M.n, M.ring.order)
    if total > cap:
        logger.warning(f"{total} subspaces of F_{M.ring.order}^{M.n} exceed enumeration_cap {cap}")
        raise EnumerationCapExceeded(f"{total} subspaces exceed enumeration_cap = {cap}")
    action = FiniteAction.of(M, r)
    stable = []
    for rows in iter_subspaces(M.ring, M.n):
        k = rows.shape[0]
        if k == 0 or rank(stack(M.ring, M.n, rows, action.apply_rows(rows))) == k:
            stable.append(Subspace(M.ring, M.n, int_rows(rows)))
    stable.sort(key=Subspace.sort_key)
    logger.debug(f"{len(stable)} of {total} subspaces are F^{r}-stable")
    return stable


def is_simple(M: FrobModule, r: int = 1, cap: Optional[int] = None) -> bool:
    return len(enumerate_stable_subspaces(M, r, cap)) == 2


def _pivot(row) -> int:
    return int(np.flatnonzero(row.view(np.ndarray))[0])


def _quotient_module(M: FrobModule, action: FiniteAction, lower: Subspace, upper: Subspace, r: int) -> FrobModule:
    """Induced action on upper/lower.

    Coordinates live on the complement spanned by the standard vectors at the
    non-pivot columns of lower's echelon basis; the quotient basis is the RREF
    of upper's vectors in those coordinates.
    """
    ring, n = M.ring, M.n
    low = lower.to_gf()
    low_pivots = [_pivot(row) for row in low]
    free = [j for j in range(n) if j not in low_pivots]

    def complement_coordinates(rows):
        out = []
        for w in rows:
            w = w.copy()
            for row, pivot in zip(low, low_pivots):
                w = w - w[pivot] * row
            out.append(w.view(np.ndarray)[free])
        return ring.gf(np.array(out, dtype=np.int64).reshape(len(out), len(free)))

    basis = rref(complement_coordinates(upper.to_gf()), ring, len(free))
    k = basis.shape[0]
    lifted = ring.gf(np.zeros((k, n), dtype=np.int64))
    lifted[:, free] = basis
    images = complement_coordinates(action.apply_rows(lifted))
    # basis is in RREF, so the coefficient of basis row i is read off at its pivot
    pivots = [_pivot(row) for row in basis]
    A = tuple(tuple(RingScalar(ring, int(images[j, pivots[i]])) for j in range(k)) for i in range(k))
    return FrobModule(ring, k, M.e * r, A)


def _covers(stable: List[Subspace], W: Subspace) -> List[Subspace]:
    above = [U for U in stable if U.dim > W.dim and U.contains(W)]
    return [U for U in above if not any(X.dim < U.dim and U.contains(X) for X in above)]


def composition_series(M: FrobModule, r: int = 1, cap: Optional[int] = None) -> CompositionSeries:
    """Greedy maximal chain: at each step the least stable subspace strictly above."""
    stable = enumerate_stable_subspaces(M, r, cap)
    action = FiniteAction.of(M, r)
    chain = [stable[0]]
    quotients = []
    while chain[-1].dim < M.n:
        current = chain[-1]
        nxt = min(_covers(stable, current), key=Subspace.sort_key)
        quotients.append(_quotient_module(M, action, current, nxt, r))
        chain.append(nxt)
    logger.debug(f"Composition series of length {len(chain) - 1} for F^{r}")
    return CompositionSeries(chain=chain, quotient_data=quotients, length=len(chain) - 1)


def chain_lengths(M: FrobModule, r: int = 1, cap: Optional[int] = None) -> List[int]:
    """Lengths of all maximal chains of stable subspaces (one value by Jordan-Holder)."""
    stable = enumerate_stable_subspaces(M, r, cap)

    @functools.lru_cache(maxsize=None)
    def lengths_from(index: int) -> frozenset:
        W = stable[index]
        if W.dim == M.n:
            return frozenset({0})
        out = set()
        for U in _covers(stable, W):
            out |= {1 + length for length in lengths_from(stable.index(U))}
        return frozenset(out)

    return sorted(lengths_from(0))


# ---------------------------------------------------------------------------
# extensions: geometric length and Dieudonne bases
# ---------------------------------------------------------------------------

def _extension(M: FrobModule, s: int) -> FrobModule:
    return extend_scalars(M, field_descriptor(M.p, M.ring.field_degree * s))


def _spanning_fixed_vectors(M: FrobModule, r: int) -> Tuple[list, int]:
    fixed = fixed_points(M, r)
    ring = M.ring
    chosen, current = [], 0
    for v in fixed.basis:
        candidate = chosen + [v]
        k = rank(gf_rows(candidate, ring, M.n))
        if k > current:
            chosen, current = candidate, k
        if current == M.n:
            break
    return chosen, fixed.fp_dimension


def _extension_step(M: FrobModule, s: int, cap: int) -> Dict:
    Ms = _extension(M, s)
    vectors, fp_dim = _spanning_fixed_vectors(Ms, 1)
    spans = len(vectors) == M.n
    length = M.n if spans else None
    if length is None and subspace_count(M.n, Ms.ring.order) <= cap:
        length = composition_series(Ms, 1, cap).length
    logger.debug(f"s = {s}: fixed F_p-dimension {fp_dim}, spans = {spans}, length = {length}")
    return {"s": s, "fixed_fp_dimension": fp_dim, "spans": spans, "length": length}


def geometric_length(M: FrobModule, s_max: Optional[int] = None, parallel: bool = False,
                     enumeration_cap: Optional[int] = None) -> GeometricLength:
    """
    Length after extending scalars to F_{p^(ms)} for large enough s

    Args:
        M: Unit Frobenius module over a finite field
        s_max: Largest extension degree searched
        parallel: Examine every s concurrently; the reported witness is still the least one
        enumeration_cap: Largest subspace count for which the length is enumerated at a given s

    Returns:
        GeometricLength with the length, the least witnessing s and the per-s history
    """
    require_finite_field(M.ring)
    if not M.unit:
        raise NotUnit("geometric length needs a unit module")
    s_max = s_max or setting("stable_structure", "s_max")
    cap = enumeration_cap if enumeration_cap is not None else setting("stable_structure", "geometric_enumeration_cap")
    history: List[Dict] = []

    def done(step: Dict) -> bool:
        return step["spans"] or step["length"] == M.n

    if parallel:
        with ThreadPoolExecutor(max_workers=setting("cli", "batch_workers")) as pool:
            steps = list(pool.map(lambda s: _extension_step(M, s, cap), range(1, s_max + 1)))
        for step in steps:
            history.append(step)
            if done(step):
                break
    else:
        for s in range(1, s_max + 1):
            step = _extension_step(M, s, cap)
            history.append(step)
            if done(step):
                break
    if not history or not done(history[-1]):
        logger.warning(f"No Dieudonne witness up to s_max = {s_max}")
        raise WitnessBoundExceeded(f"no spanning fixed space for s <= {s_max}")
    witness, length = history[-1]["s"], history[-1]["length"]
    logger.info(f"Geometric length {length} witnessed at s = {witness}")
    return GeometricLength(length=length, witness=witness, history=history)


def dieudonne_basis(M: FrobModule, r: int = 1, s_max: Optional[int] = None) -> DieudonneBasis:
    """
    A basis of F^r-fixed vectors over the least F_{p^(ms)} that has one

    Args:
        M: Frobenius module over a finite field with A_r invertible
        r: Power of F
        s_max: Largest extension degree searched

    Returns:
        DieudonneBasis with s, the extension field, the fixed vectors and a verification flag
    """
    require_finite_field(M.ring)
    if not FiniteAction.of(M, r).invertible:
        raise NotUnit(f"A_{r} is singular")
    s_max = s_max or setting("stable_structure", "s_max")
    for s in range(1, s_max + 1):
        Ms = _extension(M, s)
        vectors, _ = _spanning_fixed_vectors(Ms, r)
        if len(vectors) == M.n:
            action = FiniteAction.of(Ms, r)
            rows = gf_rows(vectors, Ms.ring, M.n)
            verified = bool(np.all(action.apply_rows(rows) == rows))
            logger.info(f"Dieudonne basis for F^{r} found over {Ms.ring.describe()}")
            return DieudonneBasis(s=s, ring=Ms.ring, vectors=vectors, verified=verified)
    logger.warning(f"No Dieudonne basis up to s_max = {s_max}")
    raise WitnessBoundExceeded(f"no spanning fixed space for s <= {s_max}")


# ---------------------------------------------------------------------------
# supplementary invariants
# ---------------------------------------------------------------------------

def frobenius_order(M: FrobModule, r_bound: Optional[int] = None) -> int:
    """Least r with F^r = id: A_r = I and the field Frobenius p^(er) trivial."""
    require_finite_field(M.ring)
    r_bound = r_bound if r_bound is not None else setting("stable_structure", "order_bound")
    m = M.ring.field_degree
    A = gf_matrix(M.A, M.ring)
    identity = M.ring.gf(np.eye(M.n, dtype=np.int64))
    A_r = A
    for r in range(1, r_bound + 1):
        if (M.e * r) % m == 0 and np.array_equal(A_r, identity):
            return r
        A_r = A_r @ (A ** (M.p ** ((M.e * r) % m)))
    raise BoundExceeded(f"F^r != id for r <= {r_bound}")


def unit_frobenius_length(M: FrobModule, cap: Optional[int] = None) -> Tuple[int, int]:
    """(length, r) at the twist e*r where F^(er) = id."""
    r = frobenius_order(M)
    return composition_series(M, r, cap).length, r


def characteristic_polynomial(M: FrobModule) -> CharacteristicPolynomial:
    """Characteristic polynomial of A when F is linear (m divides e)."""
    require_finite_field(M.ring)
    if M.e % M.ring.field_degree:
        raise UnsupportedRing("F is only semilinear here; its characteristic polynomial is not defined")
    poly = gf_matrix(M.A, M.ring).characteristic_poly()
    coeffs = [RingScalar(M.ring, int(c)) for c in poly.coeffs[::-1]]
    return CharacteristicPolynomial(coefficients=coeffs, irreducible=bool(poly.is_irreducible()))


def length_chain(M: FrobModule, r_values: Sequence[int] = (1, 2), cap: Optional[int] = None) -> LengthChain:
    lengths = [(r, composition_series(M, r, cap).length) for r in r_values]
    return LengthChain(lengths=lengths, rank=M.n)
