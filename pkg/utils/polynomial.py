"""
Polynomial helpers.

Two kinds of polynomials live here:

* ``galois.Poly`` over a prime field GF(p) carries every polynomial in x with
  F_p coefficients (the payload of F_p[x], F_p(x) and perfect-closure scalars).
  The ``fp_*`` helpers below wrap the bits of its API we lean on.
* ``Poly`` is a small dense univariate polynomial over any ring whose elements
  support ``+ - *`` and ``inverse()``; it backs the quotient rings F_p(x)[t]/(P).

Degrees of zero polynomials are ``NEG_INF``, never an integer sentinel.
"""

import functools
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import galois

from utils.errors import DivisionByZero


@functools.total_ordering
class MinusInfinity:
    """Degree of the zero polynomial. Absorbs addition, compares below every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, MinusInfinity)

    def __lt__(self, other):
        return not isinstance(other, MinusInfinity)

    def __hash__(self):
        return hash("-inf")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int) and other > 0:
            return self
        raise ValueError(f"-inf * {other} is undefined")

    __rmul__ = __mul__

    def __repr__(self):
        return "-inf"

    __str__ = __repr__


NEG_INF = MinusInfinity()

Degree = Any  # int or MinusInfinity


# ---------------------------------------------------------------------------
# polynomials over F_p (galois)
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def prime_field(p: int):
    return galois.GF(p)


def fp_poly(p: int, coeffs_asc: Iterable[int]) -> galois.Poly:
    """Poly over GF(p) from ascending integer coefficients (reduced mod p)."""
    coeffs = [int(c) % p for c in coeffs_asc] or [0]
    return galois.Poly(coeffs[::-1], field=prime_field(p))


def fp_const(p: int, c: int) -> galois.Poly:
    return galois.Poly([int(c) % p], field=prime_field(p))


def fp_x(p: int) -> galois.Poly:
    return galois.Poly([1, 0], field=prime_field(p))


def fp_is_zero(f: galois.Poly) -> bool:
    return f.degree == 0 and int(f.coeffs[0]) == 0


def fp_is_one(f: galois.Poly) -> bool:
    return f.degree == 0 and int(f.coeffs[0]) == 1


def fp_degree(f: galois.Poly) -> Degree:
    return NEG_INF if fp_is_zero(f) else int(f.degree)


def fp_key(f: galois.Poly) -> Tuple[int, ...]:
    return tuple(int(c) for c in f.coeffs)


def fp_leading(f: galois.Poly) -> int:
    return int(f.coeffs[0])


def fp_scale(f: galois.Poly, c: int) -> galois.Poly:
    # multiply by a constant Poly; Poly * int means repeated addition in galois
    return f * galois.Poly([int(c) % f.field.characteristic], field=f.field)


def fp_monic(f: galois.Poly) -> Tuple[galois.Poly, int]:
    """Monic associate of f and the leading coefficient that was divided out."""
    lead = fp_leading(f)
    inv = int(f.field(lead) ** -1)
    return fp_scale(f, inv), lead


def fp_inflate(f: galois.Poly, k: int) -> galois.Poly:
    """f(x^k)."""
    if fp_is_zero(f) or k == 1:
        return f
    degrees = [int(d) * k for d in f.nonzero_degrees]
    return galois.Poly.Degrees(degrees, f.nonzero_coeffs, field=f.field)


def fp_deflate(f: galois.Poly, k: int) -> Optional[galois.Poly]:
    """g with g(x^k) = f, or None when some exponent of f is not divisible by k."""
    if fp_is_zero(f) or k == 1:
        return f
    degrees = [int(d) for d in f.nonzero_degrees]
    if any(d % k for d in degrees):
        return None
    return galois.Poly.Degrees([d // k for d in degrees], f.nonzero_coeffs, field=f.field)


def fp_derivative(f: galois.Poly) -> galois.Poly:
    if fp_is_zero(f) or f.degree == 0:
        return galois.Poly.Zero(field=f.field)
    return f.derivative()


def fp_format(f: galois.Poly, var: str = "x") -> str:
    """Descending terms ``c*x^k`` joined by ``+`` with coefficients in 0..p-1."""
    if fp_is_zero(f):
        return "0"
    return format_terms(zip((int(d) for d in f.nonzero_degrees), (int(c) for c in f.nonzero_coeffs)), var)


def format_terms(terms: Iterable[Tuple[int, int]], var: str) -> str:
    parts = []
    for degree, coeff in terms:
        if degree == 0:
            parts.append(str(coeff))
            continue
        power = var if degree == 1 else f"{var}^{degree}"
        parts.append(power if coeff == 1 else f"{coeff}*{power}")
    return "+".join(parts) if parts else "0"


def fp_from_int(p: int, value: int) -> galois.Poly:
    """Poly whose ascending coefficients are the base-p digits of value."""
    digits = []
    while value:
        value, d = divmod(value, p)
        digits.append(d)
    return fp_poly(p, digits)


# ---------------------------------------------------------------------------
# dense polynomials over an arbitrary ring
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over a ring, coefficients stored ascending.

    ``base`` must expose ``zero`` and ``one`` scalars. Trailing zeros are stripped,
    so two equal polynomials always have equal coefficient tuples.
    """

    __slots__ = ("base", "coeffs", "var")

    def __init__(self, base, coeffs: Sequence = (), var: str = "t"):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.base = base
        self.coeffs: Tuple = tuple(coeffs)
        self.var = var

    @classmethod
    def constant(cls, base, c, var: str = "t") -> "Poly":
        return cls(base, [c], var)

    @classmethod
    def monomial(cls, base, degree: int, c=None, var: str = "t") -> "Poly":
        c = base.one if c is None else c
        return cls(base, [base.zero] * degree + [c], var)

    def _like(self, coeffs) -> "Poly":
        return Poly(self.base, coeffs, self.var)

    @property
    def degree(self) -> Degree:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.base.zero

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.base.zero

    def __eq__(self, other):
        return isinstance(other, Poly) and self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like([self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __neg__(self) -> "Poly":
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return self._like([])
        out: List = [self.base.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return self._like(out)

    def scale(self, c) -> "Poly":
        return self._like([c * a for a in self.coeffs])

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise DivisionByZero(f"polynomial division by zero in {self.var}")
        lead_inv = other.leading().inverse()
        rem = list(self.coeffs)
        d = len(other.coeffs) - 1
        quot = [self.base.zero] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c.is_zero():
                continue
            factor = c * lead_inv
            quot[k - d] = factor
            for j, b in enumerate(other.coeffs):
                rem[k - d + j] = rem[k - d + j] - factor * b
        return self._like(quot), self._like(rem[:d])

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def monic(self) -> "Poly":
        return self.scale(self.leading().inverse()) if self.coeffs else self

    def map(self, fn) -> "Poly":
        return self._like([fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"Poly({self.var}, {[str(c) for c in self.coeffs]})"


def poly_egcd(a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g and g monic (or zero when both inputs are zero)."""
    one = Poly.constant(a.base, a.base.one, a.var)
    zero = Poly(a.base, [], a.var)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = r0.leading().inverse()
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_powmod(base: Poly, exponent: int, modulus: Poly) -> Poly:
    result = Poly.constant(base.base, base.base.one, base.var) % modulus
    square = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * square) % modulus
        exponent >>= 1
        if exponent:
            square = (square * square) % modulus
    return result
