"""
Shared test data: hypothesis strategies for ring elements, matrices and unit
modules, plus seeded module lists for the fixed-size acceptance loops.
"""

from typing import List, Sequence, Tuple

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from utils.frobmod import FrobModule
from utils.matrix_util import determinant, from_rows
from utils.rings import RingDescriptor, RingScalar, field_descriptor, poly_ring

SMALL_PRIMES = [2, 3, 5]


def primes():
    return st.sampled_from(SMALL_PRIMES)


@st.composite
def fp_polynomials(draw, p: int, max_degree: int = 4) -> RingScalar:
    coeffs = draw(st.lists(st.integers(0, p - 1), max_size=max_degree + 1))
    return poly_ring(p).from_coefficients(coeffs)


@st.composite
def field_elements(draw, ring: RingDescriptor) -> RingScalar:
    return RingScalar(ring, draw(st.integers(0, ring.order - 1)))


@st.composite
def square_matrices(draw, ring: RingDescriptor, n: int = 2, max_degree: int = 2):
    if ring.is_finite_field:
        entry = field_elements(ring)
    else:
        entry = fp_polynomials(ring.p, max_degree)
    return from_rows(ring, [[draw(entry) for _ in range(n)] for _ in range(n)])


@st.composite
def unit_modules(draw, fields=((2, 1), (3, 1), (2, 2)), n: int = 2, e: int = 1) -> FrobModule:
    """Modules over a small finite field with invertible structure matrix."""
    p, m = draw(st.sampled_from(list(fields)))
    ring = field_descriptor(p, m)
    A = draw(square_matrices(ring, n))
    assume(not determinant(A).is_zero())
    return FrobModule(ring, n, e, A)


@st.composite
def polynomial_modules(draw, p: int = 3, n: int = 2, max_degree: int = 2) -> FrobModule:
    ring = poly_ring(p)
    return FrobModule(ring, n, 1, draw(square_matrices(ring, n, max_degree)))


@st.composite
def generator_sets(draw, p: int = 3, n: int = 2, max_generators: int = 3, max_degree: int = 2):
    vector = st.lists(fp_polynomials(p, max_degree), min_size=n, max_size=n).map(tuple)
    return draw(st.lists(vector, min_size=1, max_size=max_generators))


def seeded_unit_modules(count: int, fields: Sequence[Tuple[int, int]], ranks: Sequence[int],
                        seed: int, e: int = 1) -> List[FrobModule]:
    """
    A fixed list of modules with invertible structure matrices.

    Args:
        count: Number of modules
        fields: (p, m) pairs to draw the coefficient field from
        ranks: Ranks n to draw from
        seed: Seed for numpy's generator; the same seed gives the same list

    Returns:
        List of FrobModules over finite fields
    """
    rng = np.random.default_rng(seed)
    modules = []
    while len(modules) < count:
        p, m = fields[int(rng.integers(len(fields)))]
        n = int(ranks[int(rng.integers(len(ranks)))])
        ring = field_descriptor(p, m)
        A = from_rows(ring, [[RingScalar(ring, int(rng.integers(ring.order))) for _ in range(n)] for _ in range(n)])
        if not determinant(A).is_zero():
            modules.append(FrobModule(ring, n, e, A))
    return modules
