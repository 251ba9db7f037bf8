#!/usr/bin/env python3
"""
Ring Tests
Exact arithmetic in F_p, F_{p^m}, F_p[x], F_p(x), the perfect closure and quotient rings
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

from tests.strategies import field_elements, fp_polynomials, primes
from utils.certifier import adjoined_root_ring
from utils.errors import (
    DescriptorMismatch,
    DivisionByZero,
    NoCanonicalEmbedding,
    NotDivisible,
    ParseError,
    UnsupportedRing,
    ValidationError,
)
from utils.polynomial import NEG_INF, Poly
from utils.rings import (
    RingDescriptor,
    derivative,
    embed,
    field_descriptor,
    frobenius_power,
    p_th_root,
    parse_scalar,
    poly_degree,
    poly_ring,
    prime_field_ring,
    quotient_reduce,
    rat_func_field,
)


class TestFiniteFields(unittest.TestCase):

    def test_prime_field_wraps(self):
        """2 + 2 = 1 in F_3"""
        F3 = prime_field_ring(3)
        self.assertEqual(F3.scalar(2) + F3.scalar(2), F3.one)
        self.assertEqual(F3.scalar(2) * F3.scalar(2), 1)

    def test_ext_field_generator_squares_to_minus_one(self):
        """u*u = -1 in F_3[u]/(u^2+1), the default F_9"""
        F9 = field_descriptor(3, 2)
        self.assertEqual(F9.modulus, (1, 0, 1))
        u = F9.gen
        self.assertEqual(u * u, -1)
        self.assertEqual(str(u), "u")

    def test_frobenius_on_f9(self):
        """frobenius(u) = u^3 = -u in F_9, and F^2 is the identity"""
        u = field_descriptor(3, 2).gen
        self.assertEqual(frobenius_power(u, 1), -u)
        self.assertEqual(frobenius_power(u, 2), u)
        self.assertEqual(p_th_root(-u, 1), u)

    def test_inverse_and_division(self):
        """Every nonzero element of F_9 is invertible"""
        F9 = field_descriptor(3, 2)
        for a in F9.elements()[1:]:
            self.assertEqual(a * a.inverse(), F9.one)
        with self.assertRaises(DivisionByZero):
            F9.one / F9.zero

    def test_descriptor_validation(self):
        """Composite characteristics and reducible moduli are rejected"""
        with self.assertRaises(ValidationError):
            prime_field_ring(4)
        with self.assertRaises(ValidationError):
            RingDescriptor.ext_field(3, 2, modulus=(1, 0, 2))
        with self.assertRaises(ValidationError):
            RingDescriptor.ext_field(2, 40)

    def test_mixing_rings_fails(self):
        """Scalars of different rings never combine silently"""
        with self.assertRaises(DescriptorMismatch):
            prime_field_ring(3).one + prime_field_ring(5).one
        with self.assertRaises(DescriptorMismatch):
            prime_field_ring(3).one * field_descriptor(3, 2).one

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_frobenius_is_additive(self, data):
        """(a + b)^p = a^p + b^p in F_4 and F_9"""
        ring = data.draw(st.sampled_from([field_descriptor(2, 2), field_descriptor(3, 2)]))
        a = data.draw(field_elements(ring))
        b = data.draw(field_elements(ring))
        self.assertEqual((a + b).frobenius(1), a.frobenius(1) + b.frobenius(1))
        self.assertEqual(a.frobenius(1), a ** ring.p)


class TestPolynomials(unittest.TestCase):

    def test_degree(self):
        """Degrees are exact; the zero polynomial has degree -infinity"""
        R = poly_ring(3)
        self.assertEqual(poly_degree(parse_scalar("x^4+2*x+1", R)), 4)
        self.assertEqual(poly_degree(R.one), 0)
        self.assertIs(poly_degree(R.zero), NEG_INF)
        self.assertTrue(NEG_INF < 0)

    def test_exact_division(self):
        """x^2 / x = x, while x / (x + 1) is not divisible in F_p[x]"""
        R = poly_ring(3)
        x = R.gen
        self.assertEqual((x * x) / x, x)
        with self.assertRaises(NotDivisible):
            x / (x + 1)

    def test_p_th_root(self):
        """x^3 + 1 is the cube of x + 1 in F_3[x]; x has no cube root"""
        R = poly_ring(3)
        x = R.gen
        self.assertEqual(p_th_root(x ** 3 + 1, 1), x + 1)
        with self.assertRaises(UnsupportedRing):
            p_th_root(x, 1)

    def test_derivative(self):
        """d/dx (x^3 + x) = 1 in characteristic 3"""
        R = poly_ring(3)
        x = R.gen
        self.assertEqual(derivative(x ** 3 + x), R.one)
        with self.assertRaises(UnsupportedRing):
            derivative(rat_func_field(3).gen)

    def test_negative_twist_rejected(self):
        """Frobenius twists and root orders are non-negative"""
        x = poly_ring(2).gen
        with self.assertRaises(ValidationError):
            frobenius_power(x, -1)
        with self.assertRaises(ValidationError):
            p_th_root(x, -1)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_root_inverts_frobenius(self, data):
        """p_th_root(f^(p^e), e) recovers f"""
        p = data.draw(primes())
        f = data.draw(fp_polynomials(p))
        e = data.draw(st.integers(0, 2))
        self.assertEqual(p_th_root(frobenius_power(f, e), e), f)
        self.assertEqual(frobenius_power(f, 1), f ** p)


class TestRationalFunctions(unittest.TestCase):

    def test_fractions_are_reduced(self):
        """(x^2 - 1) / (x - 1) normalizes to x + 1"""
        K = rat_func_field(3)
        x = K.gen
        self.assertEqual((x * x - 1) / (x - 1), x + 1)
        self.assertEqual(str((x + 1) / x), "(x+1) / x")

    def test_roots_only_of_p_th_powers(self):
        """x^3 / (x^3 + 1) has a cube root in F_3(x); x does not"""
        K = rat_func_field(3)
        x = K.gen
        self.assertEqual(p_th_root(x ** 3 / (x ** 3 + 1), 1), x / (x + 1))
        with self.assertRaises(UnsupportedRing):
            p_th_root(x, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_field_inverse(self, data):
        """a * a^-1 = 1 for nonzero a in F_p(x)"""
        p = data.draw(primes())
        f = data.draw(fp_polynomials(p))
        a = embed(f + f.ring.gen ** 5, rat_func_field(p))
        self.assertEqual(a * a.inverse(), 1)


class TestPerfectClosure(unittest.TestCase):

    def test_every_element_has_roots(self):
        """x^(1/3) exists in the perfect closure and cubes back to x"""
        P = RingDescriptor.perfect_closure(3)
        x = P.gen
        root = p_th_root(x, 1)
        self.assertEqual(frobenius_power(root, 1), x)
        self.assertEqual(str(root), "(x, 1)")
        self.assertEqual(parse_scalar("(x, 1)", P), root)

    def test_levels_are_minimal(self):
        """(x^3)^(1/3) is stored as x at level 0"""
        P = RingDescriptor.perfect_closure(3)
        x = P.gen
        self.assertEqual(p_th_root(x ** 3, 1), x)
        self.assertEqual(p_th_root(x, 1) * p_th_root(x, 1) * p_th_root(x, 1), x)


class TestQuotientRings(unittest.TestCase):

    def test_reduce_top_power(self):
        """t^9 reduces to t - x*t^3 modulo t^9 + x*t^3 - t"""
        ring = adjoined_root_ring(3)
        K = ring.base
        t = ring.gen
        x = embed(K.gen, ring)
        top = quotient_reduce(Poly.monomial(K, 9, var="t"), ring)
        self.assertEqual(top, t - x * t ** 3)
        self.assertEqual(t ** 9, top)

    def test_reduce_needs_quotient_ring(self):
        """quotient_reduce refuses rings that are not quotients"""
        K = rat_func_field(3)
        with self.assertRaises(DescriptorMismatch):
            quotient_reduce(Poly.monomial(K, 2, var="t"), K)

    def test_frobenius_of_generator(self):
        """Frobenius in the quotient agrees with repeated multiplication"""
        ring = adjoined_root_ring(2)
        t = ring.gen
        self.assertEqual(t.frobenius(2), t ** 4)
        self.assertEqual(t.frobenius(1) * t.frobenius(1), t.frobenius(2))


class TestEmbeddings(unittest.TestCase):

    def test_prime_field_into_extension(self):
        """F_3 sits inside F_9"""
        F9 = field_descriptor(3, 2)
        self.assertEqual(embed(prime_field_ring(3).scalar(2), F9), F9.scalar(2))

    def test_subfield_generator(self):
        """The image of u in F_16 still satisfies u^2 + u + 1 = 0"""
        image = embed(field_descriptor(2, 2).gen, field_descriptor(2, 4))
        self.assertTrue((image * image + image + 1).is_zero())

    def test_no_embedding(self):
        """F_9 does not embed in F_27, and characteristics must agree"""
        with self.assertRaises(NoCanonicalEmbedding):
            embed(field_descriptor(3, 2).gen, field_descriptor(3, 3))
        with self.assertRaises(NoCanonicalEmbedding):
            embed(poly_ring(3).gen, rat_func_field(5))

    def test_polynomials_into_fractions(self):
        """F_p[x] maps into F_p(x) and the perfect closure"""
        x = poly_ring(5).gen
        self.assertEqual(embed(x, rat_func_field(5)), rat_func_field(5).gen)
        self.assertEqual(embed(x, RingDescriptor.perfect_closure(5)), RingDescriptor.perfect_closure(5).gen)


class TestLiterals(unittest.TestCase):

    def test_parse_polynomial(self):
        """x^2+2*x+1 is (x+1)^2 over F_3"""
        R = poly_ring(3)
        self.assertEqual(parse_scalar("x^2+2*x+1", R), (R.gen + 1) ** 2)
        self.assertEqual(parse_scalar("-1", R), R.scalar(2))

    def test_parse_ext_and_quotient(self):
        """u names the F_{p^m} generator; t and x live in the quotient ring"""
        F9 = field_descriptor(3, 2)
        self.assertEqual(parse_scalar("u^2", F9), -1)
        ring = adjoined_root_ring(3)
        self.assertEqual(parse_scalar("x*t", ring), embed(ring.base.gen, ring) * ring.gen)

    def test_malformed_literal(self):
        """Syntax errors raise ParseError carrying the position"""
        with self.assertRaises(ParseError) as ctx:
            parse_scalar("x^^2", poly_ring(3), line=4, column=2)
        self.assertEqual(ctx.exception.line, 4)

    def test_unknown_symbol_column(self):
        """An undefined symbol is reported at its own column"""
        with self.assertRaises(ParseError) as ctx:
            parse_scalar("2*y", poly_ring(3), line=3, column=5)
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.column, 7)
        with self.assertRaises(ParseError):
            parse_scalar("u", poly_ring(3))
        with self.assertRaises(ParseError):
            parse_scalar("", poly_ring(3))

    def test_nested_powers_are_bounded(self):
        """(x^1000)^1001 is refused before expanding; finite fields have no degree to bound"""
        with self.assertRaises(ParseError):
            parse_scalar("(x^1000)^1001", poly_ring(3))
        with self.assertRaises(ParseError):
            parse_scalar("(x^2/(x+1))^600000", rat_func_field(3))
        self.assertEqual(parse_scalar("(x^10)^3", poly_ring(3)), poly_ring(3).gen ** 30)
        F9 = field_descriptor(3, 2)
        self.assertEqual(parse_scalar("(u^1000000)^1000000", F9), F9.one)

    def test_division_by_zero_in_literal(self):
        """1/0 is a parse error at the offending operator"""
        with self.assertRaises(ParseError):
            parse_scalar("1/0", rat_func_field(3))


if __name__ == '__main__':
    unittest.main()
