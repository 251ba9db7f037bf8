#!/usr/bin/env python3
"""
Frobenius Module Tests
A_r calculus, coefficient sequence, base change, twists and unit checks
"""

import sys
import unittest
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

# Add project root to Python path
project_root = Path(__file__).parent.parent.absolute()
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from tests.strategies import polynomial_modules
from utils.errors import (
    DescriptorMismatch,
    DimensionMismatch,
    PowerBoundExceeded,
    SingularBasisChange,
    ValidationError,
)
from utils.frobmod import (
    FrobModule,
    apply,
    change_basis,
    coefficient_sequence,
    compose_twist,
    conjugate,
    direct_power_product,
    extend_scalars,
    frobenius_twist_presentation,
    identity_module,
    is_unit,
    make_module,
    power_matrix,
)
from utils.matrix_util import determinant, from_rows, vector
from utils.rings import field_descriptor, poly_degree, poly_ring, prime_field_ring, rat_func_field


def example_module(p: int, e: int = 1) -> FrobModule:
    R = poly_ring(p)
    return make_module(R, e, [[0, 1], [1, R.gen]])


def f3_module() -> FrobModule:
    return make_module(prime_field_ring(3), 1, [[0, 1], [1, 1]])


class TestPowerMatrix(unittest.TestCase):

    def test_second_power(self):
        """A_2 = [[1, x^3], [x, x^4 + 1]] for p = 3"""
        M = example_module(3)
        R = M.ring
        x = R.gen
        expected = from_rows(R, [[1, x ** 3], [x, x ** 4 + 1]])
        self.assertEqual(power_matrix(M, 2).A_r, expected)
        self.assertEqual(power_matrix(M, 1).A_r, M.A)

    def test_determinant_sign(self):
        """det A_r = (-1)^r for r <= 6 and p in {2, 3, 5}"""
        for p in (2, 3, 5):
            M = example_module(p)
            for r in range(1, 7):
                with self.subTest(p=p, r=r):
                    self.assertEqual(determinant(power_matrix(M, r).A_r), (-1) ** r)

    def test_bottom_left_entry(self):
        """The bottom-left entry of A_r is a_(r-1)"""
        M = example_module(2)
        for r in range(1, 5):
            self.assertEqual(power_matrix(M, r).A_r[1][0], coefficient_sequence(2, 1, r - 1).a_r)

    def test_power_bounds(self):
        """r = 0 is invalid and r beyond max_power is refused"""
        M = example_module(3)
        with self.assertRaises(ValidationError):
            power_matrix(M, 0)
        with self.assertRaises(PowerBoundExceeded):
            power_matrix(M, 13)
        with self.assertRaises(PowerBoundExceeded):
            power_matrix(M, 3, max_power=2)

    @settings(max_examples=15, deadline=None)
    @given(polynomial_modules(p=3), st.integers(1, 3))
    def test_recursive_matches_direct_product(self, M, r):
        """A_r from the recursion equals the product A A^[q] ... A^[q^(r-1)]"""
        self.assertEqual(power_matrix(M, r).A_r, direct_power_product(M, r))

    @settings(max_examples=15, deadline=None)
    @given(polynomial_modules(p=2), st.integers(1, 3))
    def test_determinant_is_multiplicative(self, M, r):
        """det A_r = det A * det A^q * ... * det A^(q^(r-1))"""
        expected = M.ring.one
        for i in range(r):
            expected = expected * M.det.frobenius(M.e * i)
        self.assertEqual(determinant(power_matrix(M, r).A_r), expected)


class TestApply(unittest.TestCase):

    def test_polynomial_module(self):
        """F(0, 1) = (1, x) for A = [[0, 1], [1, x]]"""
        M = example_module(3)
        R = M.ring
        self.assertEqual(apply(M, vector(R, [0, 1])), (R.one, R.gen))
        self.assertEqual(apply(M, vector(R, [1, 0])), (R.zero, R.one))

    def test_semilinear(self):
        """F(x v) = x^q F(v)"""
        M = example_module(3)
        R = M.ring
        x = R.gen
        v = (x + 1, R.one)
        scaled = apply(M, (x * v[0], x * v[1]))
        self.assertEqual(scaled, tuple(x ** 3 * c for c in apply(M, v)))

    def test_f3_example(self):
        """F(1, 2) = (2, 0) over F_3"""
        M = f3_module()
        F3 = M.ring
        self.assertEqual(apply(M, vector(F3, [1, 2])), vector(F3, [2, 0]))

    def test_powers_compose(self):
        """F^2(v) = F(F(v))"""
        M = example_module(2)
        v = (M.ring.gen, M.ring.one)
        self.assertEqual(apply(M, v, 2), apply(M, apply(M, v)))

    def test_wrong_length(self):
        """Vectors must match the rank"""
        M = example_module(3)
        with self.assertRaises(DimensionMismatch):
            apply(M, (M.ring.one,))


class TestCoefficientSequence(unittest.TestCase):

    def test_initial_terms(self):
        """a_-1 = 0, a_0 = 1, a_1 = x, a_2 = 1 + x^(q+1)"""
        R = poly_ring(3)
        x = R.gen
        self.assertTrue(coefficient_sequence(3, 1, -1).a_r.is_zero())
        self.assertEqual(coefficient_sequence(3, 1, 0).a_r, R.one)
        self.assertEqual(coefficient_sequence(3, 1, 1).a_r, x)
        self.assertEqual(coefficient_sequence(3, 1, 2).a_r, 1 + x ** 4)

    def test_degree_formula(self):
        """deg a_r = 1 + q + ... + q^(r-1)"""
        for p, e in ((2, 1), (3, 1), (2, 2), (5, 1)):
            q = p ** e
            for r in range(1, 5):
                with self.subTest(p=p, e=e, r=r):
                    self.assertEqual(poly_degree(coefficient_sequence(p, e, r).a_r), sum(q ** i for i in range(r)))

    def test_index_bound(self):
        """Indices below -1 are invalid"""
        with self.assertRaises(ValidationError):
            coefficient_sequence(3, 1, -2)


class TestBaseChange(unittest.TestCase):

    def test_f3_basis_change(self):
        """C = [[1, 1], [0, 1]] turns [[0, 1], [1, 1]] into [[2, 2], [1, 2]]"""
        M = f3_module()
        C = from_rows(M.ring, [[1, 1], [0, 1]])
        self.assertEqual(change_basis(M, C), from_rows(M.ring, [[2, 2], [1, 2]]))
        self.assertEqual(conjugate(M, C).A, from_rows(M.ring, [[2, 2], [1, 2]]))

    def test_identity_change(self):
        """The identity basis change returns A_r"""
        M = example_module(2)
        I = from_rows(M.ring, [[1, 0], [0, 1]])
        self.assertEqual(change_basis(M, I, 2), power_matrix(M, 2).A_r)

    def test_polynomial_change_over_fractions(self):
        """A non-unit C over F_p[x] is invertible once lifted to F_p(x)"""
        M = example_module(3)
        K = rat_func_field(3)
        x = K.gen
        MK = extend_scalars(M, K)
        C = from_rows(K, [[1, 0], [0, x]])
        B = change_basis(MK, C)
        self.assertEqual(B, from_rows(K, [[0, x ** 3], [1 / x, x ** 4 / x]]))

    def test_singular_change(self):
        """Singular C raises SingularBasisChange"""
        M = f3_module()
        with self.assertRaises(SingularBasisChange):
            change_basis(M, from_rows(M.ring, [[1, 1], [1, 1]]))
        R = poly_ring(3)
        with self.assertRaises(SingularBasisChange):
            change_basis(example_module(3), from_rows(R, [[R.gen, 0], [0, 1]]))

    def test_shape_and_ring_checks(self):
        """C must be n x n over the module's ring"""
        M = f3_module()
        with self.assertRaises(DimensionMismatch):
            change_basis(M, from_rows(M.ring, [[1]]))
        with self.assertRaises(DescriptorMismatch):
            change_basis(M, from_rows(prime_field_ring(5), [[1, 0], [0, 1]]))


class TestTwists(unittest.TestCase):

    def test_f3_fourth_power_is_minus_identity(self):
        """Composing the F_3 example four times gives -I with twist 4"""
        M = f3_module()
        M4 = compose_twist(M, 4)
        self.assertEqual(M4.e, 4)
        self.assertEqual(M4.A, from_rows(M.ring, [[2, 0], [0, 2]]))
        self.assertIs(compose_twist(M, 1), M)

    def test_presentation_twist(self):
        """F^e* of coker G raises every entry to the p^e-th power"""
        R = poly_ring(3)
        x = R.gen
        G = from_rows(R, [[x, 1], [x + 1, 0]])
        self.assertEqual(frobenius_twist_presentation(G, 1), from_rows(R, [[x ** 3, 1], [x ** 3 + 1, 0]]))
        self.assertEqual(frobenius_twist_presentation(G, 2), from_rows(R, [[x ** 9, 1], [x ** 9 + 1, 0]]))

    def test_extend_scalars(self):
        """Extending F_3 to F_9 keeps the matrix entries"""
        M = f3_module()
        F9 = field_descriptor(3, 2)
        M9 = extend_scalars(M, F9)
        self.assertEqual(M9.ring, F9)
        self.assertEqual(M9.A, from_rows(F9, [[0, 1], [1, 1]]))
        self.assertIs(extend_scalars(M, M.ring), M)


class TestUnits(unittest.TestCase):

    def test_example_is_unit(self):
        """det [[0, 1], [1, x]] = -1 is a unit of F_p[x]"""
        report = is_unit(example_module(3))
        self.assertTrue(report.unit)
        self.assertEqual(report.det, -1)

    def test_non_unit_over_polynomials(self):
        """diag(x, 1) is not unit over F_p[x] but is over F_p(x)"""
        R = poly_ring(3)
        M = make_module(R, 1, [[R.gen, 0], [0, 1]])
        self.assertFalse(is_unit(M).unit)
        self.assertTrue(is_unit(extend_scalars(M, rat_func_field(3))).unit)

    def test_identity_module(self):
        """The identity module is unit and fixes every vector"""
        M = identity_module(prime_field_ring(5), 3)
        self.assertTrue(M.unit)
        v = vector(M.ring, [1, 2, 3])
        self.assertEqual(apply(M, v), v)

    def test_construction_checks(self):
        """Rank and twist must be positive and entries must lie in the ring"""
        F3 = prime_field_ring(3)
        with self.assertRaises(ValidationError):
            make_module(F3, 1, [])
        with self.assertRaises(ValidationError):
            make_module(F3, 0, [[1]])
        with self.assertRaises(ValidationError):
            FrobModule(F3, 2, 1, from_rows(F3, [[1, 0]]))
        with self.assertRaises(DescriptorMismatch):
            FrobModule(F3, 1, 1, from_rows(prime_field_ring(5), [[1]]))


class TestDocumentation(unittest.TestCase):

    def test_entry_points_document_arguments(self):
        """The main library calls describe their arguments and results"""
        from utils import certifier, config_util, module_io, rings, stable_structure, submodules
        entry_points = [
            power_matrix, change_basis,
            stable_structure.fixed_points, stable_structure.descent_preimage,
            stable_structure.enumerate_stable_subspaces, stable_structure.geometric_length,
            stable_structure.dieudonne_basis,
            submodules.hermite_rows, submodules.root_from_generators,
            certifier.simplicity_certificate, certifier.adjoined_root_check,
            module_io.parse_module, rings.embed, config_util.use_config,
        ]
        for fn in entry_points:
            with self.subTest(fn=fn.__name__):
                self.assertIn("Args:", fn.__doc__)
                self.assertIn("Returns:", fn.__doc__)


if __name__ == '__main__':
    unittest.main()
