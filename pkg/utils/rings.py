"""
Exact coefficient rings in characteristic p.

A ``RingDescriptor`` names a ring (F_p, F_{p^m}, F_p[x], F_p(x), F_p(x)[t]/(P)
or the truncated perfect closure of F_p(x)); a ``RingScalar`` is an immutable
(descriptor, payload) pair whose payload is always kept canonical, so equality
is structural. Each ring kind has a backend class doing the arithmetic; the
backends are looked up by kind.

Payloads:
    PrimeField       int in 0..p-1
    ExtField         int, the galois integer representation (base-p digits are
                     the power-basis coordinates in the generator u)
    PolyRing         galois.Poly over GF(p)
    RatFuncField     (num, den) galois Polys, coprime, den monic
    PerfectClosure   (num, den, level) meaning (num/den)(x^(1/p^level)), level minimal
    QuotientRing     Poly in t over F_p(x), reduced mod the modulus
"""

import ast
import functools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import galois

from utils.config_util import setting
from utils.errors import (
    DescriptorMismatch,
    DivisionByZero,
    FrobModError,
    NoCanonicalEmbedding,
    NotDivisible,
    ParseError,
    UnsupportedRing,
    ValidationError,
)
from utils.polynomial import (
    NEG_INF,
    Degree,
    Poly,
    fp_const,
    fp_deflate,
    fp_degree,
    fp_derivative,
    fp_format,
    fp_from_int,
    fp_inflate,
    fp_is_one,
    fp_is_zero,
    fp_key,
    fp_monic,
    fp_poly,
    fp_scale,
    fp_x,
    format_terms,
    poly_egcd,
    poly_powmod,
    prime_field,
)

logger = logging.getLogger(__name__)

MAX_LITERAL_EXPONENT = 1_000_000
MAX_LITERAL_DEGREE = 1_000_000


class RingKind(str, Enum):
    PRIME_FIELD = "PrimeField"
    EXT_FIELD = "ExtField"
    POLY_RING = "PolyRing"
    RAT_FUNC_FIELD = "RatFuncField"
    QUOTIENT_RING = "QuotientRing"
    PERFECT_CLOSURE = "PerfectClosure"


@functools.lru_cache(maxsize=None)
def _galois_field(p: int, m: int, modulus: Tuple[int, ...]):
    if m == 1:
        return galois.GF(p)
    irreducible = galois.Poly(list(modulus), field=prime_field(p))
    return galois.GF(p ** m, irreducible_poly=irreducible)


@dataclass(frozen=True)
class RingDescriptor:
    """Hashable name of a coefficient ring.

    ``modulus`` holds descending integer coefficients for ExtField and ascending
    F_p(x) scalars (monic in t) for QuotientRing; it is empty otherwise.
    """

    kind: RingKind
    p: int
    m: int = 1
    modulus: Tuple = ()

    def __post_init__(self):
        if not isinstance(self.p, int) or not galois.is_prime(self.p):
            raise ValidationError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise ValidationError(f"extension degree must be >= 1, got {self.m}")
        if self.kind == RingKind.EXT_FIELD:
            if len(self.modulus) != self.m + 1 or self.modulus[0] != 1:
                raise ValidationError(f"ExtField modulus must be monic of degree {self.m}")
            if not galois.Poly(list(self.modulus), field=prime_field(self.p)).is_irreducible():
                raise ValidationError(f"ExtField modulus {self.modulus} is not irreducible over F_{self.p}")
        elif self.kind == RingKind.QUOTIENT_RING:
            if len(self.modulus) < 2:
                raise ValidationError("QuotientRing modulus must have positive degree in t")
            for c in self.modulus:
                if not isinstance(c, RingScalar) or c.ring != rat_func_field(self.p):
                    raise ValidationError("QuotientRing modulus coefficients must lie in F_p(x)")
            if not self.modulus[-1].is_one():
                raise ValidationError("QuotientRing modulus must be monic in t")

    # -- constructors -----------------------------------------------------

    @classmethod
    def prime_field(cls, p: int) -> "RingDescriptor":
        return cls(RingKind.PRIME_FIELD, p)

    @classmethod
    def ext_field(cls, p: int, m: int, modulus: Optional[Sequence[int]] = None,
                  max_degree: Optional[int] = None) -> "RingDescriptor":
        max_degree = max_degree or setting("arithmetic", "max_extension_degree")
        if m > max_degree:
            raise ValidationError(f"extension degree {m} exceeds max_extension_degree {max_degree}")
        if modulus is None:
            modulus = least_irreducible(p, m)
        return cls(RingKind.EXT_FIELD, p, m, tuple(int(c) % p for c in modulus))

    @classmethod
    def poly_ring(cls, p: int) -> "RingDescriptor":
        return cls(RingKind.POLY_RING, p)

    @classmethod
    def rat_func_field(cls, p: int) -> "RingDescriptor":
        return cls(RingKind.RAT_FUNC_FIELD, p)

    @classmethod
    def perfect_closure(cls, p: int) -> "RingDescriptor":
        return cls(RingKind.PERFECT_CLOSURE, p)

    @classmethod
    def quotient_ring(cls, p: int, modulus) -> "RingDescriptor":
        """F_p(x)[t]/(modulus); modulus is a ``Poly`` in t or ascending F_p(x) coefficients."""
        coeffs = modulus.coeffs if isinstance(modulus, Poly) else tuple(modulus)
        return cls(RingKind.QUOTIENT_RING, p, 1, tuple(coeffs))

    # -- properties -------------------------------------------------------

    @property
    def backend(self) -> "_Backend":
        return _BACKENDS[self.kind]

    @property
    def is_finite_field(self) -> bool:
        return self.kind in (RingKind.PRIME_FIELD, RingKind.EXT_FIELD)

    @property
    def is_field(self) -> bool:
        return self.kind != RingKind.POLY_RING

    @property
    def field_degree(self) -> int:
        """m for F_{p^m}; 1 for every other kind."""
        return self.m if self.kind == RingKind.EXT_FIELD else 1

    @property
    def order(self) -> int:
        if not self.is_finite_field:
            raise UnsupportedRing(f"{self.describe()} is not a finite field")
        return self.p ** self.field_degree

    @property
    def gf(self):
        """The galois field class for finite-field descriptors."""
        if not self.is_finite_field:
            raise UnsupportedRing(f"{self.describe()} is not a finite field")
        return _galois_field(self.p, self.field_degree, self.modulus if self.modulus else (1, 0))

    @property
    def base(self) -> "RingDescriptor":
        """Coefficient field of a quotient ring."""
        if self.kind != RingKind.QUOTIENT_RING:
            raise UnsupportedRing(f"{self.describe()} has no coefficient field")
        return rat_func_field(self.p)

    @property
    def modulus_poly(self) -> Poly:
        return Poly(self.base, self.modulus, "t")

    @property
    def zero(self) -> "RingScalar":
        return RingScalar(self, self.backend.zero(self))

    @property
    def one(self) -> "RingScalar":
        return RingScalar(self, self.backend.one(self))

    @property
    def gen(self) -> "RingScalar":
        """x for polynomial-like rings, u for F_{p^m}, t for quotient rings."""
        return RingScalar(self, self.backend.gen(self))

    def scalar(self, n: int) -> "RingScalar":
        return RingScalar(self, self.backend.from_int(self, int(n)))

    def monomial(self, degree: int, c: int = 1) -> "RingScalar":
        """c*x^degree in F_p[x], F_p(x) or the perfect closure."""
        f = fp_inflate(fp_poly(self.p, [0, c]), degree) if degree else fp_const(self.p, c)
        return embed(RingScalar(poly_ring(self.p), f), self)

    def from_coefficients(self, coeffs_asc: Sequence[int]) -> "RingScalar":
        """Polynomial in x with the given ascending F_p coefficients."""
        return embed(RingScalar(poly_ring(self.p), fp_poly(self.p, coeffs_asc)), self)

    def elements(self):
        """All elements of a finite field, in integer-representation order."""
        return [RingScalar(self, self.backend.from_index(self, i)) for i in range(self.order)]

    def describe(self) -> str:
        if self.kind == RingKind.PRIME_FIELD:
            return f"F_{self.p}"
        if self.kind == RingKind.EXT_FIELD:
            mod = fp_format(galois.Poly(list(self.modulus), field=prime_field(self.p)), "u")
            return f"F_{self.p}[u]/({mod})"
        if self.kind == RingKind.POLY_RING:
            return f"F_{self.p}[x]"
        if self.kind == RingKind.RAT_FUNC_FIELD:
            return f"F_{self.p}(x)"
        if self.kind == RingKind.PERFECT_CLOSURE:
            return f"F_{self.p}(x)^(1/p^inf)"
        return f"F_{self.p}(x)[t]/({_format_quotient(self, self.modulus_poly)})"

    def __str__(self):
        return self.describe()


def prime_field_ring(p: int) -> RingDescriptor:
    return RingDescriptor.prime_field(p)


def poly_ring(p: int) -> RingDescriptor:
    return RingDescriptor.poly_ring(p)


def rat_func_field(p: int) -> RingDescriptor:
    return RingDescriptor.rat_func_field(p)


def least_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """Descending coefficients of the least monic irreducible of degree m (integer order)."""
    f = galois.irreducible_poly(p, m, method="min")
    return tuple(int(c) for c in f.coeffs)


def field_descriptor(p: int, m: int = 1) -> RingDescriptor:
    """F_p for m == 1, otherwise F_{p^m} with the least monic irreducible modulus."""
    if m == 1:
        return RingDescriptor.prime_field(p)
    return RingDescriptor.ext_field(p, m)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RingScalar:
    """Immutable ring element; arithmetic mixes freely with Python ints."""

    ring: RingDescriptor
    payload: Any

    @property
    def descriptor(self) -> RingDescriptor:
        return self.ring

    @property
    def _backend(self) -> "_Backend":
        return self.ring.backend

    def _coerce(self, other) -> "RingScalar":
        if isinstance(other, RingScalar):
            if other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring.describe()} vs {other.ring.describe()}")
            return other
        if isinstance(other, int):
            return self.ring.scalar(other)
        raise TypeError(f"cannot combine RingScalar with {type(other).__name__}")

    def _wrap(self, payload) -> "RingScalar":
        return RingScalar(self.ring, payload)

    def key(self) -> Any:
        return self._backend.key(self.ring, self.payload)

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = self.ring.scalar(other)
        if not isinstance(other, RingScalar):
            return NotImplemented
        return self.ring == other.ring and self.key() == other.key()

    def __hash__(self):
        return hash((self.ring, self.key()))

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap(self._backend.add(self.ring, self.payload, other.payload))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self._backend.neg(self.ring, self.payload))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return self._wrap(self._backend.mul(self.ring, self.payload, other.payload))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZero(f"division by zero in {self.ring.describe()}")
        return self._wrap(self._backend.div(self.ring, self.payload, other.payload))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, square = self.ring.one, self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def inverse(self) -> "RingScalar":
        if self.is_zero():
            raise DivisionByZero(f"zero has no inverse in {self.ring.describe()}")
        return self._wrap(self._backend.inv(self.ring, self.payload))

    def is_zero(self) -> bool:
        return self._backend.is_zero(self.ring, self.payload)

    def is_one(self) -> bool:
        return self == self.ring.one

    def is_unit(self) -> bool:
        if self.is_zero():
            return False
        if self.ring.kind == RingKind.POLY_RING:
            return self.payload.degree == 0
        if self.ring.kind == RingKind.QUOTIENT_RING:
            try:
                self.inverse()
            except FrobModError:
                return False
        return True

    def frobenius(self, e: int = 1) -> "RingScalar":
        """self^(p^e)."""
        return self._wrap(self._backend.frob(self.ring, self.payload, e))

    def root(self, e: int = 1) -> "RingScalar":
        """The unique b with b^(p^e) == self."""
        return self._wrap(self._backend.root(self.ring, self.payload, e))

    def __str__(self):
        return self._backend.fmt(self.ring, self.payload)

    def __repr__(self):
        return f"RingScalar({self.ring.describe()}, {self})"


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------

class _Backend:
    """Arithmetic on payloads of one ring kind."""

    @staticmethod
    def div(ring, a, b):
        backend = ring.backend
        return backend.mul(ring, a, backend.inv(ring, b))

    @staticmethod
    def gen(ring):
        raise UnsupportedRing(f"{ring.describe()} has no generator")

    @staticmethod
    def root(ring, a, e):
        raise UnsupportedRing(f"p^e-th roots are not available in {ring.describe()}")

    @staticmethod
    def from_index(ring, i):
        raise UnsupportedRing(f"{ring.describe()} is not finite")


class _PrimeFieldBackend(_Backend):

    @staticmethod
    def zero(ring):
        return 0

    @staticmethod
    def one(ring):
        return 1

    @staticmethod
    def from_int(ring, n):
        return n % ring.p

    from_index = from_int

    @staticmethod
    def add(ring, a, b):
        return (a + b) % ring.p

    @staticmethod
    def neg(ring, a):
        return (-a) % ring.p

    @staticmethod
    def mul(ring, a, b):
        return (a * b) % ring.p

    @staticmethod
    def inv(ring, a):
        return pow(a, ring.p - 2, ring.p)

    @staticmethod
    def is_zero(ring, a):
        return a == 0

    @staticmethod
    def key(ring, a):
        return a

    @staticmethod
    def frob(ring, a, e):
        return a

    @staticmethod
    def root(ring, a, e):
        return a

    @staticmethod
    def fmt(ring, a):
        return str(a)


class _ExtFieldBackend(_Backend):

    @staticmethod
    def zero(ring):
        return 0

    @staticmethod
    def one(ring):
        return 1

    @staticmethod
    def from_int(ring, n):
        return n % ring.p

    @staticmethod
    def from_index(ring, i):
        return i

    @staticmethod
    def add(ring, a, b):
        GF = ring.gf
        return int(GF(a) + GF(b))

    @staticmethod
    def neg(ring, a):
        return int(-ring.gf(a))

    @staticmethod
    def mul(ring, a, b):
        GF = ring.gf
        return int(GF(a) * GF(b))

    @staticmethod
    def inv(ring, a):
        return int(ring.gf(a) ** -1)

    @staticmethod
    def is_zero(ring, a):
        return a == 0

    @staticmethod
    def key(ring, a):
        return a

    @staticmethod
    def frob(ring, a, e):
        k = e % ring.m
        return a if k == 0 else int(ring.gf(a) ** (ring.p ** k))

    @staticmethod
    def root(ring, a, e):
        k = (-e) % ring.m
        return a if k == 0 else int(ring.gf(a) ** (ring.p ** k))

    @staticmethod
    def gen(ring):
        if ring.m == 1:
            return (-ring.modulus[-1]) % ring.p
        return ring.p

    @staticmethod
    def fmt(ring, a):
        return fp_format(fp_from_int(ring.p, a), "u")


class _PolyRingBackend(_Backend):

    @staticmethod
    def zero(ring):
        return fp_const(ring.p, 0)

    @staticmethod
    def one(ring):
        return fp_const(ring.p, 1)

    @staticmethod
    def from_int(ring, n):
        return fp_const(ring.p, n)

    @staticmethod
    def add(ring, a, b):
        return a + b

    @staticmethod
    def neg(ring, a):
        return -a

    @staticmethod
    def mul(ring, a, b):
        return a * b

    @staticmethod
    def inv(ring, a):
        if a.degree != 0:
            raise NotDivisible(f"{fp_format(a)} is not a unit in {ring.describe()}")
        return fp_const(ring.p, int(a.field(int(a.coeffs[0])) ** -1))

    @staticmethod
    def div(ring, a, b):
        q, r = divmod(a, b)
        if not fp_is_zero(r):
            raise NotDivisible(f"{fp_format(b)} does not divide {fp_format(a)}")
        return q

    @staticmethod
    def is_zero(ring, a):
        return fp_is_zero(a)

    @staticmethod
    def key(ring, a):
        return fp_key(a)

    @staticmethod
    def frob(ring, a, e):
        return fp_inflate(a, ring.p ** e)

    @staticmethod
    def root(ring, a, e):
        b = fp_deflate(a, ring.p ** e)
        if b is None:
            raise UnsupportedRing(f"{fp_format(a)} is not a p^{e}-th power in {ring.describe()}")
        return b

    @staticmethod
    def gen(ring):
        return fp_x(ring.p)

    @staticmethod
    def fmt(ring, a):
        return fp_format(a)


def _normalize_fraction(num, den):
    if fp_is_zero(den):
        raise DivisionByZero("zero denominator")
    if fp_is_zero(num):
        return num, fp_const(num.field.characteristic, 1)
    g = galois.gcd(num, den)
    if not fp_is_one(g):
        num, den = num // g, den // g
    den, lead = fp_monic(den)
    if lead != 1:
        num = fp_scale(num, int(num.field(lead) ** -1))
    return num, den


def _group(text: str) -> str:
    return f"({text})" if "+" in text else text


def _format_fraction(num, den) -> str:
    if fp_is_one(den):
        return fp_format(num)
    return f"{_group(fp_format(num))} / {_group(fp_format(den))}"


class _RatFuncBackend(_Backend):

    @staticmethod
    def zero(ring):
        return fp_const(ring.p, 0), fp_const(ring.p, 1)

    @staticmethod
    def one(ring):
        return fp_const(ring.p, 1), fp_const(ring.p, 1)

    @staticmethod
    def from_int(ring, n):
        return fp_const(ring.p, n), fp_const(ring.p, 1)

    @staticmethod
    def add(ring, a, b):
        return _normalize_fraction(a[0] * b[1] + b[0] * a[1], a[1] * b[1])

    @staticmethod
    def neg(ring, a):
        return -a[0], a[1]

    @staticmethod
    def mul(ring, a, b):
        return _normalize_fraction(a[0] * b[0], a[1] * b[1])

    @staticmethod
    def inv(ring, a):
        return _normalize_fraction(a[1], a[0])

    @staticmethod
    def is_zero(ring, a):
        return fp_is_zero(a[0])

    @staticmethod
    def key(ring, a):
        return fp_key(a[0]), fp_key(a[1])

    @staticmethod
    def frob(ring, a, e):
        k = ring.p ** e
        return fp_inflate(a[0], k), fp_inflate(a[1], k)

    @staticmethod
    def root(ring, a, e):
        k = ring.p ** e
        num, den = fp_deflate(a[0], k), fp_deflate(a[1], k)
        if num is None or den is None:
            raise UnsupportedRing(f"{_format_fraction(*a)} is not a p^{e}-th power in {ring.describe()}")
        return num, den

    @staticmethod
    def gen(ring):
        return fp_x(ring.p), fp_const(ring.p, 1)

    @staticmethod
    def fmt(ring, a):
        return _format_fraction(*a)


def _minimize_level(num, den, level: int, p: int):
    num, den = _normalize_fraction(num, den)
    if fp_is_zero(num):
        return num, den, 0
    while level > 0:
        dn, dd = fp_deflate(num, p), fp_deflate(den, p)
        if dn is None or dd is None:
            break
        num, den, level = dn, dd, level - 1
    return num, den, level


def _lift(a, level: int, p: int):
    k = p ** (level - a[2])
    return fp_inflate(a[0], k), fp_inflate(a[1], k)


class _PerfectClosureBackend(_Backend):

    @staticmethod
    def zero(ring):
        return fp_const(ring.p, 0), fp_const(ring.p, 1), 0

    @staticmethod
    def one(ring):
        return fp_const(ring.p, 1), fp_const(ring.p, 1), 0

    @staticmethod
    def from_int(ring, n):
        return fp_const(ring.p, n), fp_const(ring.p, 1), 0

    @staticmethod
    def _binary(ring, a, b, op):
        level = max(a[2], b[2])
        fa, fb = _lift(a, level, ring.p), _lift(b, level, ring.p)
        num, den = op(fa, fb)
        return _minimize_level(num, den, level, ring.p)

    @staticmethod
    def add(ring, a, b):
        return _PerfectClosureBackend._binary(ring, a, b, lambda f, g: (f[0] * g[1] + g[0] * f[1], f[1] * g[1]))

    @staticmethod
    def neg(ring, a):
        return -a[0], a[1], a[2]

    @staticmethod
    def mul(ring, a, b):
        return _PerfectClosureBackend._binary(ring, a, b, lambda f, g: (f[0] * g[0], f[1] * g[1]))

    @staticmethod
    def inv(ring, a):
        return _minimize_level(a[1], a[0], a[2], ring.p)

    @staticmethod
    def is_zero(ring, a):
        return fp_is_zero(a[0])

    @staticmethod
    def key(ring, a):
        return fp_key(a[0]), fp_key(a[1]), a[2]

    @staticmethod
    def frob(ring, a, e):
        num, den, level = a
        if level >= e:
            return num, den, level - e
        k = ring.p ** (e - level)
        return fp_inflate(num, k), fp_inflate(den, k), 0

    @staticmethod
    def root(ring, a, e):
        return _minimize_level(a[0], a[1], a[2] + e, ring.p)

    @staticmethod
    def gen(ring):
        return fp_x(ring.p), fp_const(ring.p, 1), 0

    @staticmethod
    def fmt(ring, a):
        text = _format_fraction(a[0], a[1])
        return text if a[2] == 0 else f"({text}, {a[2]})"


def _format_quotient(ring: RingDescriptor, f: Poly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c.is_zero():
            continue
        text = str(c)
        if i == 0:
            parts.append(text if "/" not in text else f"({text})")
            continue
        power = "t" if i == 1 else f"t^{i}"
        if text == "1":
            parts.append(power)
        elif "+" in text or "/" in text:
            parts.append(f"({text})*{power}")
        else:
            parts.append(f"{text}*{power}")
    return "+".join(parts)


class _QuotientRingBackend(_Backend):

    @staticmethod
    def zero(ring):
        return Poly(ring.base, [], "t")

    @staticmethod
    def one(ring):
        return Poly.constant(ring.base, ring.base.one, "t") % ring.modulus_poly

    @staticmethod
    def from_int(ring, n):
        return Poly.constant(ring.base, ring.base.scalar(n), "t") % ring.modulus_poly

    @staticmethod
    def add(ring, a, b):
        return a + b

    @staticmethod
    def neg(ring, a):
        return -a

    @staticmethod
    def mul(ring, a, b):
        return (a * b) % ring.modulus_poly

    @staticmethod
    def inv(ring, a):
        g, s, _ = poly_egcd(a, ring.modulus_poly)
        if g.degree != 0:
            raise NotDivisible(f"{_format_quotient(ring, a)} is a zero divisor in {ring.describe()}")
        return s % ring.modulus_poly

    @staticmethod
    def is_zero(ring, a):
        return a.is_zero()

    @staticmethod
    def key(ring, a):
        return a.coeffs

    @staticmethod
    def frob(ring, a, e):
        modulus = ring.modulus_poly
        t_power = poly_powmod(Poly.monomial(ring.base, 1, var="t"), ring.p ** e, modulus)
        result = Poly(ring.base, [], "t")
        for c in reversed(a.coeffs):
            result = (result * t_power + Poly.constant(ring.base, c.frobenius(e), "t")) % modulus
        return result

    @staticmethod
    def gen(ring):
        return Poly.monomial(ring.base, 1, var="t") % ring.modulus_poly

    @staticmethod
    def fmt(ring, a):
        return _format_quotient(ring, a)


_BACKENDS: Dict[RingKind, _Backend] = {
    RingKind.PRIME_FIELD: _PrimeFieldBackend(),
    RingKind.EXT_FIELD: _ExtFieldBackend(),
    RingKind.POLY_RING: _PolyRingBackend(),
    RingKind.RAT_FUNC_FIELD: _RatFuncBackend(),
    RingKind.PERFECT_CLOSURE: _PerfectClosureBackend(),
    RingKind.QUOTIENT_RING: _QuotientRingBackend(),
}


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def frobenius_power(a: RingScalar, e: int) -> RingScalar:
    """a^(p^e), computed without exponentiating where the ring allows."""
    if e < 0:
        raise ValidationError(f"Frobenius twist must be non-negative, got {e}")
    return a.frobenius(e)


def p_th_root(a: RingScalar, e: int) -> RingScalar:
    """b with b^(p^e) == a. F_p[x] and F_p(x) only succeed on actual p^e-th powers."""
    if e < 0:
        raise ValidationError(f"root order must be non-negative, got {e}")
    return a.root(e)


def quotient_reduce(expr: Poly, ring: RingDescriptor) -> RingScalar:
    """Canonical residue of a polynomial in t modulo the quotient ring's modulus."""
    if ring.kind != RingKind.QUOTIENT_RING:
        raise DescriptorMismatch(f"{ring.describe()} is not a quotient ring")
    if expr.base != ring.base:
        raise DescriptorMismatch(f"coefficients in {expr.base.describe()}, expected {ring.base.describe()}")
    return RingScalar(ring, Poly(ring.base, expr.coeffs, "t") % ring.modulus_poly)


def poly_degree(f) -> Degree:
    """Exact degree; NEG_INF for zero."""
    if isinstance(f, Poly):
        return f.degree
    if isinstance(f, RingScalar):
        if f.ring.kind != RingKind.POLY_RING:
            raise UnsupportedRing(f"degree is defined for F_p[x], not {f.ring.describe()}")
        return fp_degree(f.payload)
    if isinstance(f, galois.Poly):
        return fp_degree(f)
    raise TypeError(f"not a polynomial: {type(f).__name__}")


def derivative(f: RingScalar) -> RingScalar:
    """Formal derivative d/dx on F_p[x]."""
    if f.ring.kind != RingKind.POLY_RING:
        raise UnsupportedRing(f"derivative is defined for F_p[x], not {f.ring.describe()}")
    return RingScalar(f.ring, fp_derivative(f.payload))


@functools.lru_cache(maxsize=None)
def _generator_image(source: RingDescriptor, target: RingDescriptor) -> int:
    modulus = galois.Poly(list(source.modulus), field=target.gf)
    roots = sorted(int(r) for r in modulus.roots())
    if not roots:
        raise NoCanonicalEmbedding(f"{source.describe()} does not embed in {target.describe()}")
    logger.debug(f"u of {source.describe()} maps to {roots[0]} in {target.describe()}")
    return roots[0]


def _embed_ext(a: RingScalar, target: RingDescriptor) -> RingScalar:
    if target.m % a.ring.m:
        raise NoCanonicalEmbedding(f"{a.ring.describe()} does not embed in {target.describe()}")
    image = target.gf(_generator_image(a.ring, target))
    total = target.gf(0)
    power = target.gf(1)
    for digit in fp_from_int(a.ring.p, a.payload).coeffs[::-1]:
        total = total + target.gf(int(digit)) * power
        power = power * image
    return RingScalar(target, int(total))


def embed(a: RingScalar, target: RingDescriptor) -> RingScalar:
    """
    Image of a under the canonical ring map into target

    Args:
        a: Scalar to embed
        target: Ring containing a's ring: a larger finite field, F_p(x) over F_p[x], and so on

    Returns:
        The embedded scalar
    """
    source = a.ring
    if source == target:
        return a
    if source.p != target.p:
        raise NoCanonicalEmbedding(f"{source.describe()} and {target.describe()} differ in characteristic")
    kind, p = source.kind, source.p
    if kind == RingKind.EXT_FIELD and target.kind == RingKind.EXT_FIELD:
        return _embed_ext(a, target)
    if kind == RingKind.PRIME_FIELD:
        if target.kind == RingKind.PRIME_FIELD:
            return a
        return target.scalar(a.payload)
    if kind == RingKind.POLY_RING:
        if target.kind == RingKind.RAT_FUNC_FIELD:
            return RingScalar(target, (a.payload, fp_const(p, 1)))
        if target.kind == RingKind.PERFECT_CLOSURE:
            return RingScalar(target, (a.payload, fp_const(p, 1), 0))
        if target.kind == RingKind.QUOTIENT_RING:
            return embed(embed(a, target.base), target)
    if kind == RingKind.RAT_FUNC_FIELD:
        if target.kind == RingKind.PERFECT_CLOSURE:
            return RingScalar(target, _minimize_level(a.payload[0], a.payload[1], 0, p))
        if target.kind == RingKind.QUOTIENT_RING:
            return RingScalar(target, Poly.constant(target.base, a, "t") % target.modulus_poly)
    raise NoCanonicalEmbedding(f"no canonical map {source.describe()} -> {target.describe()}")


# ---------------------------------------------------------------------------
# literals
# ---------------------------------------------------------------------------

def _translate(text: str) -> Tuple[str, list]:
    out, origin = [], []
    for i, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            origin.extend([i, i])
        else:
            out.append(ch)
            origin.append(i)
    return "".join(out), origin


def _literal_size(a: RingScalar) -> int:
    """Largest degree in x carried by a parsed value; 0 for finite fields."""
    kind, payload = a.ring.kind, a.payload
    if kind == RingKind.POLY_RING:
        return int(payload.degree)
    if kind in (RingKind.RAT_FUNC_FIELD, RingKind.PERFECT_CLOSURE):
        return max(int(payload[0].degree), int(payload[1].degree))
    if kind == RingKind.QUOTIENT_RING:
        return max((_literal_size(c) for c in payload.coeffs), default=0)
    return 0


class _LiteralEvaluator:
    """Evaluates a parsed literal inside a target ring."""

    def __init__(self, ring: RingDescriptor, origin: list, line: Optional[int], column: int):
        self.ring = ring
        self.origin = origin
        self.line = line
        self.column = column

    def fail(self, message: str, node: Optional[ast.AST] = None):
        offset = getattr(node, "col_offset", 0) if node is not None else 0
        col = self.column + (self.origin[offset] if offset < len(self.origin) else offset)
        raise ParseError(message, self.line, col)

    def symbol(self, name: str, node: ast.AST) -> RingScalar:
        kind = self.ring.kind
        if name == "x" and kind in (RingKind.POLY_RING, RingKind.RAT_FUNC_FIELD, RingKind.PERFECT_CLOSURE):
            return self.ring.gen
        if name == "x" and kind == RingKind.QUOTIENT_RING:
            return embed(self.ring.base.gen, self.ring)
        if name == "u" and kind == RingKind.EXT_FIELD:
            return self.ring.gen
        if name == "t" and kind == RingKind.QUOTIENT_RING:
            return self.ring.gen
        self.fail(f"symbol '{name}' is not defined in {self.ring.describe()}", node)

    def exponent(self, node: ast.AST) -> int:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            if node.value > MAX_LITERAL_EXPONENT:
                self.fail(f"exponent {node.value} is too large", node)
            return node.value
        self.fail("exponents must be non-negative integer literals", node)

    def visit(self, node: ast.AST) -> RingScalar:
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant):
            if type(node.value) is not int:
                self.fail(f"unexpected literal {node.value!r}", node)
            return self.ring.scalar(node.value)
        if isinstance(node, ast.Name):
            return self.symbol(node.id, node)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = self.visit(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base, n = self.visit(node.left), self.exponent(node.right)
                if _literal_size(base) * n > MAX_LITERAL_DEGREE:
                    self.fail(f"power of degree {_literal_size(base) * n} exceeds {MAX_LITERAL_DEGREE}", node)
                return base ** n
            left, right = self.visit(node.left), self.visit(node.right)
            try:
                if isinstance(node.op, ast.Add):
                    return left + right
                if isinstance(node.op, ast.Sub):
                    return left - right
                if isinstance(node.op, ast.Mult):
                    return left * right
                if isinstance(node.op, ast.Div):
                    return left / right
            except FrobModError as e:
                self.fail(e.message, node)
            self.fail("unsupported operator", node)
        if isinstance(node, ast.Tuple) and self.ring.kind == RingKind.PERFECT_CLOSURE:
            if len(node.elts) != 2:
                self.fail("perfect-closure literals are (f, level)", node)
            return self.visit(node.elts[0]).root(self.exponent(node.elts[1]))
        self.fail("malformed literal", node)


def parse_scalar(text: str, ring: RingDescriptor, line: Optional[int] = None, column: int = 1) -> RingScalar:
    """Parse a literal such as ``x^4+2*x+1``, ``(x+1) / x``, ``(x, 2)`` or ``x*t^3+t``."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty literal", line, column)
    translated, origin = _translate(text.strip())
    try:
        tree = ast.parse(translated, mode="eval")
    except SyntaxError as e:
        offset = (e.offset or 1) - 1
        col = column + (origin[offset] if offset < len(origin) else offset)
        raise ParseError(f"malformed literal '{text}'", line, col) from e
    return _LiteralEvaluator(ring, origin, line, column).visit(tree)


def format_scalar(a: RingScalar) -> str:
    return str(a)
