#!/usr/bin/env python3
"""
Stable Structure Tests
Fixed points, descent, stable subspaces, composition series and geometric length over finite fields
"""

import itertools
import sys
import unittest
from pathlib import Path

from hypothesis import assume, given, settings
from hypothesis import strategies as st

# Add project root to Python path
project_root = Path(__file__).parent.parent.absolute()
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from tests.strategies import seeded_unit_modules, square_matrices, unit_modules
from utils.errors import (
    DescriptorMismatch,
    DimensionMismatch,
    EnumerationCapExceeded,
    NotUnit,
    UnsupportedRing,
    WitnessBoundExceeded,
)
from utils.finite_action import int_rows, iter_subspaces, subspace_count
from utils.frobmod import FrobModule, apply, conjugate, extend_scalars, identity_module, make_module
from utils.matrix_util import determinant, from_rows, inverse, mat_vec
from utils.rings import field_descriptor, poly_ring, prime_field_ring
from utils.stable_structure import (
    Subspace,
    chain_lengths,
    characteristic_polynomial,
    composition_series,
    descent_preimage,
    dieudonne_basis,
    enumerate_stable_subspaces,
    fixed_points,
    frobenius_image,
    frobenius_order,
    geometric_length,
    is_simple,
    is_stable,
    length_chain,
    unit_frobenius_length,
)


def f3_module() -> FrobModule:
    return make_module(prime_field_ring(3), 1, [[0, 1], [1, 1]])


def all_subspaces(M: FrobModule):
    return [Subspace(M.ring, M.n, int_rows(rows)) for rows in iter_subspaces(M.ring, M.n)]


def all_vectors(M: FrobModule):
    return list(itertools.product(M.ring.elements(), repeat=M.n))


def brute_force_stable(M: FrobModule, r: int = 1):
    """Stable subspaces found by applying F^r to every element of every subspace."""
    ring = M.ring
    found = []
    for W in all_subspaces(M):
        basis = W.vectors()
        stable = True
        for coeffs in itertools.product(ring.elements(), repeat=len(basis)):
            w = tuple(sum((c * v[i] for c, v in zip(coeffs, basis)), ring.zero) for i in range(M.n))
            if not W.contains(Subspace.span(ring, M.n, [apply(M, w, r)])):
                stable = False
                break
        if stable:
            found.append(W)
    return sorted(found, key=Subspace.sort_key)


def invertible_modules(ring, n: int):
    """Every n x n module over a finite field with invertible structure matrix."""
    modules = []
    for entries in itertools.product(ring.elements(), repeat=n * n):
        A = from_rows(ring, [entries[i * n:(i + 1) * n] for i in range(n)])
        if not determinant(A).is_zero():
            modules.append(FrobModule(ring, n, 1, A))
    return modules


class TestSubspace(unittest.TestCase):

    def test_span_is_canonical(self):
        """Different spanning sets of the same line give the same subspace"""
        F3 = prime_field_ring(3)
        self.assertEqual(Subspace.span(F3, 2, [[2, 1]]), Subspace.span(F3, 2, [[1, 2], [2, 1]]))
        self.assertEqual(Subspace.span(F3, 2, [[2, 1]]).basis, ((1, 2),))
        self.assertEqual(Subspace.span(F3, 2, [[0, 0]]), Subspace.zero(F3, 2))

    def test_contains(self):
        """The full space contains every line; a line contains only itself and 0"""
        F3 = prime_field_ring(3)
        line = Subspace.span(F3, 2, [[1, 1]])
        self.assertTrue(Subspace.full(F3, 2).contains(line))
        self.assertTrue(line.contains(Subspace.zero(F3, 2)))
        self.assertFalse(line.contains(Subspace.span(F3, 2, [[1, 0]])))

    def test_record(self):
        """Subspace records list basis rows as literals"""
        F3 = prime_field_ring(3)
        self.assertEqual(Subspace.span(F3, 2, [[1, 2]]).to_dict(), {"dim": 1, "basis": [["1", "2"]]})

    def test_checks(self):
        """Subspaces need a finite field and vectors of the right length"""
        with self.assertRaises(UnsupportedRing):
            Subspace.span(poly_ring(3), 2, [[1, 0]])
        with self.assertRaises(DimensionMismatch):
            Subspace.span(prime_field_ring(3), 2, [[1, 0, 0]])


class TestFixedPoints(unittest.TestCase):

    def test_identity_fixes_everything(self):
        """A = I over F_3: all 9 vectors are fixed"""
        fixed = fixed_points(identity_module(prime_field_ring(3), 2))
        self.assertEqual(fixed.count, 9)
        self.assertEqual(len(fixed.basis), 2)
        self.assertEqual(fixed.fixed_subfield, prime_field_ring(3))

    def test_f3_example_has_no_fixed_vector(self):
        """det(A - I) = -1, so only 0 is fixed; F^8 = id fixes all of F_3^2"""
        M = f3_module()
        self.assertEqual(fixed_points(M, 1).count, 1)
        self.assertEqual(fixed_points(M, 1).basis, [])
        self.assertEqual(fixed_points(M, 8).count, 9)

    def test_fixed_subfield(self):
        """For A = I over F_9, F fixes F_3^2 and F^2 fixes F_9^2 as an F_9-space"""
        M = identity_module(field_descriptor(3, 2), 2)
        once = fixed_points(M, 1)
        self.assertEqual(once.count, 9)
        self.assertEqual(once.fixed_subfield, prime_field_ring(3))
        twice = fixed_points(M, 2)
        self.assertEqual(twice.count, 81)
        self.assertEqual(twice.fixed_subfield, field_descriptor(3, 2))
        self.assertEqual(len(twice.basis), 2)

    def test_needs_finite_field(self):
        """Fixed points are refused over F_p[x]"""
        R = poly_ring(3)
        with self.assertRaises(UnsupportedRing):
            fixed_points(make_module(R, 1, [[0, 1], [1, R.gen]]))

    @settings(max_examples=20, deadline=None)
    @given(unit_modules(fields=((3, 1), (2, 2))), st.integers(1, 2))
    def test_count_matches_enumeration(self, M, r):
        """The fixed-point count equals a direct count over all vectors, and every basis vector is fixed"""
        fixed = fixed_points(M, r)
        direct = sum(1 for v in all_vectors(M) if apply(M, v, r) == v)
        self.assertEqual(fixed.count, direct)
        for v in fixed.basis:
            self.assertEqual(apply(M, v, r), v)


class TestDescent(unittest.TestCase):

    def test_f3_example(self):
        """T(span e_1) = span (1, 2), and F maps it back onto span e_1"""
        M = f3_module()
        F3 = M.ring
        N = Subspace.span(F3, 2, [[1, 0]])
        T = descent_preimage(M, N)
        self.assertEqual(T, Subspace.span(F3, 2, [[1, 2]]))
        self.assertEqual(frobenius_image(M, T), N)

    def test_trivial_cases(self):
        """T(full) = full and T(0) = 0 for invertible A"""
        M = f3_module()
        self.assertEqual(descent_preimage(M, Subspace.full(M.ring, 2)), Subspace.full(M.ring, 2))
        self.assertEqual(descent_preimage(M, Subspace.zero(M.ring, 2)), Subspace.zero(M.ring, 2))

    def test_needs_unit(self):
        """Singular A raises NotUnit"""
        M = make_module(prime_field_ring(3), 1, [[1, 0], [0, 0]])
        with self.assertRaises(NotUnit):
            descent_preimage(M, Subspace.full(M.ring, 2))

    def test_ring_mismatch(self):
        """Subspaces of another field are rejected"""
        M = f3_module()
        with self.assertRaises(DescriptorMismatch):
            descent_preimage(M, Subspace.full(prime_field_ring(5), 2))

    def test_descent_inverts_image(self):
        """F(T(N)) = N and T(F(N)) = N for every subspace, 20 matrices each over F_3 and F_4"""
        for field, seed in (((3, 1), 31), ((2, 2), 42)):
            for M in seeded_unit_modules(20, (field,), (2,), seed):
                for r in (1, 2):
                    for N in all_subspaces(M):
                        with self.subTest(A=M.to_dict()["matrix"], r=r, N=N.basis):
                            self.assertEqual(frobenius_image(M, descent_preimage(M, N, r), r), N)
                            self.assertEqual(descent_preimage(M, frobenius_image(M, N, r), r), N)


class TestStableSubspaces(unittest.TestCase):

    def test_f3_example_simple_for_f(self):
        """Only 0 and F_3^2 are F-stable"""
        M = f3_module()
        stable = enumerate_stable_subspaces(M, 1)
        self.assertEqual(stable, [Subspace.zero(M.ring, 2), Subspace.full(M.ring, 2)])
        self.assertTrue(is_simple(M, 1))

    def test_f3_example_not_simple_for_f4(self):
        """F^4 = -id, so all 6 subspaces are stable"""
        M = f3_module()
        self.assertEqual(len(enumerate_stable_subspaces(M, 4)), 6)
        self.assertFalse(is_simple(M, 4))

    def test_over_f9(self):
        """Over F_9 the example stays simple for F and splits for F^2"""
        M9 = extend_scalars(f3_module(), field_descriptor(3, 2))
        self.assertTrue(is_simple(M9, 1))
        self.assertFalse(is_simple(M9, 2))

    def test_rank_one_identity(self):
        """A = I over F_2 with n = 1 has exactly 0 and the whole line"""
        self.assertEqual(len(enumerate_stable_subspaces(identity_module(prime_field_ring(2), 1))), 2)

    def test_enumeration_cap(self):
        """Six subspaces exceed a cap of five"""
        with self.assertRaises(EnumerationCapExceeded):
            enumerate_stable_subspaces(f3_module(), 1, cap=5)
        self.assertEqual(subspace_count(2, 3), 6)

    def test_is_stable(self):
        """span (1, 1) is F^4-stable but not F-stable"""
        M = f3_module()
        W = Subspace.span(M.ring, 2, [[1, 1]])
        self.assertFalse(is_stable(M, W, 1))
        self.assertTrue(is_stable(M, W, 4))

    def test_matches_brute_force(self):
        """Enumeration agrees with applying F^r to every element, for every invertible 2 x 2 matrix over F_2 and F_3"""
        for p in (2, 3):
            modules = invertible_modules(prime_field_ring(p), 2)
            self.assertEqual(len(modules), {2: 6, 3: 48}[p])
            for M in modules:
                for r in (1, 2, 3):
                    with self.subTest(A=M.to_dict()["matrix"], r=r):
                        self.assertEqual(enumerate_stable_subspaces(M, r), brute_force_stable(M, r))

    @settings(max_examples=15, deadline=None)
    @given(st.data())
    def test_conjugation_invariance(self, data):
        """W is stable for M exactly when C^-1 W is stable for M written in the basis C"""
        M = data.draw(unit_modules(fields=((3, 1), (2, 2))))
        C = data.draw(square_matrices(M.ring))
        assume(not determinant(C).is_zero())
        conjugated = conjugate(M, C)
        C_inv = inverse(C)
        for W in all_subspaces(M):
            moved = Subspace.span(M.ring, M.n, [mat_vec(C_inv, v) for v in W.vectors()])
            self.assertEqual(is_stable(M, W), is_stable(conjugated, moved))


class TestCompositionSeries(unittest.TestCase):

    def test_simple_module(self):
        """A simple module has the chain (0, full) and its own matrix as quotient"""
        M = f3_module()
        series = composition_series(M, 1)
        self.assertEqual(series.length, 1)
        self.assertEqual(series.chain, [Subspace.zero(M.ring, 2), Subspace.full(M.ring, 2)])
        self.assertEqual(series.quotient_data[0].A, M.A)

    def test_identity_rank_three(self):
        """A = I over F_2 with n = 3 has length 3 along every maximal chain"""
        M = identity_module(prime_field_ring(2), 3)
        series = composition_series(M)
        self.assertEqual(series.length, 3)
        self.assertEqual([s.dim for s in series.chain], [0, 1, 2, 3])
        self.assertEqual(chain_lengths(M), [3])

    def test_over_f9_second_power(self):
        """Over F_9 the F^2-structure has length 2 with one-dimensional quotients"""
        M9 = extend_scalars(f3_module(), field_descriptor(3, 2))
        series = composition_series(M9, 2)
        self.assertEqual(series.length, 2)
        self.assertTrue(all(Q.n == 1 and Q.e == 2 for Q in series.quotient_data))
        self.assertEqual(composition_series(M9, 1).length, 1)

    def test_quotients_are_simple(self):
        """Every quotient in the series is itself simple"""
        M = f3_module()
        for Q in composition_series(M, 4).quotient_data:
            self.assertTrue(is_simple(Q))

    def test_quotients_of_jordan_block(self):
        """[[2, 1], [0, 2]] over F_3 has series 0 < span e_1 < full, and both quotients act by 2"""
        M = make_module(prime_field_ring(3), 1, [[2, 1], [0, 2]])
        series = composition_series(M, 1)
        self.assertEqual(series.chain, [Subspace.zero(M.ring, 2), Subspace.span(M.ring, 2, [[1, 0]]), Subspace.full(M.ring, 2)])
        for Q in series.quotient_data:
            self.assertEqual(Q.A, from_rows(M.ring, [[2]]))

    def test_quotient_on_non_pivot_complement(self):
        """The swap over F_3 splits as span (1, 1) with F = 1, then a quotient read on e_2 with F = 2"""
        M = make_module(prime_field_ring(3), 1, [[0, 1], [1, 0]])
        series = composition_series(M, 1)
        self.assertEqual(series.chain[1], Subspace.span(M.ring, 2, [[1, 1]]))
        self.assertEqual([Q.A for Q in series.quotient_data], [from_rows(M.ring, [[1]]), from_rows(M.ring, [[2]])])

    @settings(max_examples=15, deadline=None)
    @given(unit_modules(), st.integers(1, 2))
    def test_jordan_holder(self, M, r):
        """All maximal chains of stable subspaces have the same length"""
        lengths = chain_lengths(M, r)
        self.assertEqual(lengths, [composition_series(M, r).length])

    def test_length_is_monotone(self):
        """Length for F <= length for F^2 <= dim, for 50 unit modules over F_3 of rank up to 3"""
        for M in seeded_unit_modules(50, ((3, 1),), (1, 2, 3), seed=12):
            chain = length_chain(M, (1, 2))
            with self.subTest(A=M.to_dict()["matrix"]):
                self.assertTrue(chain.monotone)
                self.assertTrue(all(length <= M.n for _, length in chain.lengths))


class TestGeometricLength(unittest.TestCase):

    def test_identity(self):
        """A = I over F_3 has geometric length 2 at s = 1"""
        result = geometric_length(identity_module(prime_field_ring(3), 2))
        self.assertEqual((result.length, result.witness), (2, 1))

    def test_f3_example_fixed_basis_witness(self):
        """Without enumeration, the witness is the least s with A^s = I, here 8"""
        result = geometric_length(f3_module(), s_max=12, enumeration_cap=1)
        self.assertEqual(result.length, 2)
        self.assertEqual(result.witness, 8)
        self.assertTrue(result.history[-1]["spans"])

    def test_parallel_search_is_deterministic(self):
        """Threaded probing reports the same minimal witness"""
        result = geometric_length(f3_module(), s_max=10, parallel=True, enumeration_cap=1)
        self.assertEqual(result.witness, 8)

    def test_enumeration_can_stop_earlier(self):
        """With enumeration allowed the length reaches 2 no later than s = 8"""
        result = geometric_length(f3_module(), s_max=12, enumeration_cap=100)
        self.assertEqual(result.length, 2)
        self.assertLessEqual(result.witness, 8)

    def test_rank_one(self):
        """A rank-one unit module has length 1 already at s = 1"""
        result = geometric_length(make_module(prime_field_ring(3), 1, [[2]]))
        self.assertEqual((result.length, result.witness), (1, 1))

    def test_enumerated_witness_before_fixed_basis(self):
        """A = 2I over F_3: every line is stable at s = 1, while fixed vectors only span at s = 2"""
        M = make_module(prime_field_ring(3), 1, [[2, 0], [0, 2]])
        result = geometric_length(M, s_max=4)
        self.assertEqual((result.length, result.witness), (2, 1))
        self.assertFalse(result.history[-1]["spans"])
        self.assertEqual(dieudonne_basis(M, 1, s_max=4).s, 2)

    def test_bound_exceeded(self):
        """s_max = 4 is too small for the F_3 example"""
        with self.assertRaises(WitnessBoundExceeded):
            geometric_length(f3_module(), s_max=4, enumeration_cap=1)

    def test_needs_unit(self):
        """Singular modules are refused"""
        with self.assertRaises(NotUnit):
            geometric_length(make_module(prime_field_ring(3), 1, [[1, 0], [0, 0]]))

    def test_geometric_length_is_rank(self):
        """100 unit modules over F_2 and F_3 of rank up to 3 have geometric length n"""
        # GL_3(F_3) has elements of order 26
        for M in seeded_unit_modules(100, ((2, 1), (3, 1)), (1, 2, 3), seed=5):
            with self.subTest(A=M.to_dict()["matrix"], p=M.p):
                result = geometric_length(M, s_max=26, enumeration_cap=10)
                self.assertEqual(result.length, M.n)
                self.assertEqual(result.length, result.history[-1]["length"])
                basis = dieudonne_basis(M, 1, s_max=26)
                self.assertTrue(basis.verified)
                self.assertEqual(len(basis.vectors), M.n)


class TestDieudonneBasis(unittest.TestCase):

    def test_identity(self):
        """A = I is already spanned by fixed vectors over F_p"""
        basis = dieudonne_basis(identity_module(prime_field_ring(5), 2))
        self.assertEqual(basis.s, 1)
        self.assertEqual(len(basis.vectors), 2)
        self.assertTrue(basis.verified)

    def test_swap_over_f2(self):
        """A = [[0, 1], [1, 0]] over F_2 needs F_4"""
        M = make_module(prime_field_ring(2), 1, [[0, 1], [1, 0]])
        basis = dieudonne_basis(M)
        self.assertEqual(basis.s, 2)
        self.assertEqual(basis.ring, field_descriptor(2, 2))
        for v in basis.vectors:
            self.assertEqual(apply(extend_scalars(M, basis.ring), v), v)

    def test_f3_example(self):
        """The F_3 example is split by fixed vectors over F_(3^8)"""
        basis = dieudonne_basis(f3_module(), 1, s_max=12)
        self.assertEqual(basis.s, 8)
        self.assertTrue(basis.verified)

    def test_rank_one(self):
        """2 v^3 = v needs v^2 = -1, so s = 2"""
        self.assertEqual(dieudonne_basis(make_module(prime_field_ring(3), 1, [[2]])).s, 2)

    def test_bound(self):
        """s_max = 4 is too small for the F_3 example"""
        with self.assertRaises(WitnessBoundExceeded):
            dieudonne_basis(f3_module(), 1, s_max=4)


class TestOrderAndCharacteristicPolynomial(unittest.TestCase):

    def test_frobenius_order(self):
        """F^8 = id for the F_3 example; F^2 = id for A = I over F_9"""
        self.assertEqual(frobenius_order(f3_module()), 8)
        self.assertEqual(frobenius_order(identity_module(prime_field_ring(3), 2)), 1)
        self.assertEqual(frobenius_order(identity_module(field_descriptor(3, 2), 2)), 2)

    def test_unit_length(self):
        """At F^8 = id every subspace is stable, so the length is 2"""
        self.assertEqual(unit_frobenius_length(f3_module()), (2, 8))

    def test_characteristic_polynomial(self):
        """t^2 - t - 1 is irreducible over F_3"""
        chi = characteristic_polynomial(f3_module())
        self.assertEqual(str(chi), "t^2+2*t+2")
        self.assertTrue(chi.irreducible)
        with self.assertRaises(UnsupportedRing):
            characteristic_polynomial(extend_scalars(f3_module(), field_descriptor(3, 2)))

    def test_length_chain(self):
        """Length 1 for F and 2 for F^4"""
        chain = length_chain(f3_module(), (1, 4))
        self.assertEqual(chain.lengths, [(1, 1), (4, 2)])
        self.assertTrue(chain.monotone)


if __name__ == '__main__':
    unittest.main()
