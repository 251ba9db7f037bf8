"""
Mechanical certificates for the rank-two module with A = [[0, 1], [1, x]].

Everything is reduced to exact polynomial identities over F_p[x] and integer
arithmetic on degrees. The closed forms use

    a_{-1} = 0,  a_0 = 1,  a_r = a_{r-2} + a_{r-1} x^(q^(r-1))
    s_r = (-1)^(r-1) a_{r-1}^(q^r - 1)
    t_r = a_{r-2}^(q^r + q) + a_r a_{r-1}^(q^r - 1)

and B_r = C_r^-1 A_r C_r^[q^r] = [[0, s_r], [1, t_r]] for
C_r = [[1, a_{r-2}^q], [0, a_{r-1}]]. A certificate for r rules out an
F^(er)-fixed line over the perfect closure of F_p(x); the verdict never
claims more than the checked range of r.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import galois
import pandas as pd

from utils.config_util import setting
from utils.errors import EnumerationCapExceeded, NotUnit, UnsupportedRing, ValidationError
from utils.finite_action import int_rows, iter_subspaces, subspace_count
from utils.frobmod import FrobModule, apply, change_basis, coefficient_sequence, make_module, power_matrix
from utils.matrix_util import determinant, embed_matrix, from_rows
from utils.polynomial import Poly, fp_derivative, fp_format, fp_inflate, fp_is_zero, fp_poly
from utils.rings import (
    RingDescriptor,
    RingKind,
    RingScalar,
    embed,
    poly_degree,
    poly_ring,
    rat_func_field,
)
from utils.stable_structure import Subspace, is_stable as subspace_is_stable
from utils.submodules import Submodule, is_root as submodule_is_root, is_stable as submodule_is_stable

logger = logging.getLogger(__name__)

# polynomials longer than this are summarized by their degree in records
MAX_PRINTED_DEGREE = 64


def _example_module(ring: RingDescriptor, e: int) -> FrobModule:
    return make_module(ring, e, [[0, 1], [1, ring.gen]])


def _a(p: int, e: int, r: int) -> galois.Poly:
    return coefficient_sequence(p, e, r).a_r.payload


def _power_minus_one(f: galois.Poly, k: int) -> galois.Poly:
    """f^(k-1) for k a power of p, as the exact quotient f(x^k) / f."""
    ring = poly_ring(f.field.characteristic)
    return (RingScalar(ring, fp_inflate(f, k)) / RingScalar(ring, f)).payload


def _check_r(r: int, least: int = 1):
    if r < least:
        raise ValidationError(f"r must be >= {least}, got {r}")


@dataclass(frozen=True)
class ClosedForms:
    p: int
    e: int
    r: int
    s_r: RingScalar
    t_r: RingScalar

    def to_dict(self) -> Dict:
        return {"p": self.p, "e": self.e, "r": self.r, "s_r": _printable(self.s_r), "t_r": _printable(self.t_r)}


def _printable(f: RingScalar) -> str:
    degree = poly_degree(f)
    if isinstance(degree, int) and degree > MAX_PRINTED_DEGREE:
        return f"<degree {degree}>"
    return str(f)


def closed_forms(p: int, e: int, r: int) -> ClosedForms:
    """s_r and t_r in F_p[x]."""
    _check_r(r)
    ring = poly_ring(p)
    q = p ** e
    Q = q ** r
    a_r, a_prev, a_prev2 = _a(p, e, r), _a(p, e, r - 1), _a(p, e, r - 2)
    power = _power_minus_one(a_prev, Q)
    s = power if (r - 1) % 2 == 0 else -power
    t = fp_inflate(a_prev2, Q) * fp_inflate(a_prev2, q) + a_r * power
    logger.debug(f"closed forms for p={p}, e={e}, r={r}: deg s = {s.degree}, deg t = {t.degree}")
    return ClosedForms(p, e, r, RingScalar(ring, s), RingScalar(ring, t))


def verify_Br(p: int, e: int, r: int) -> bool:
    """C_r^-1 A_r C_r^[q^r] == [[0, s_r], [1, t_r]] over F_p(x)."""
    _check_r(r)
    K = rat_func_field(p)
    M = _example_module(K, e)
    q = p ** e
    lift = lambda f: embed(RingScalar(poly_ring(p), f), K)
    C = from_rows(K, [[1, lift(fp_inflate(_a(p, e, r - 2), q))], [0, lift(_a(p, e, r - 1))]])
    B = change_basis(M, C, r, max_power=max(r, setting("frobmod", "max_power")))
    forms = closed_forms(p, e, r)
    expected = from_rows(K, [[0, embed(forms.s_r, K)], [1, embed(forms.t_r, K)]])
    matches = B == expected
    if not matches:
        logger.warning(f"B_{r} does not match the closed forms for p={p}, e={e}")
    return matches


def det_identity(p: int, e: int, r: int) -> bool:
    """det A_r == (-1)^r."""
    _check_r(r)
    M = _example_module(poly_ring(p), e)
    A_r = power_matrix(M, r, max_power=max(r, setting("frobmod", "max_power"))).A_r
    return determinant(A_r) == (-1) ** r


@dataclass
class DegreeLedger:
    """Degrees of a_r, s_r, t_r computed two ways: from the polynomials and from integer closed forms."""

    p: int
    e: int
    r: int
    rows: List[Dict] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(row["computed"] == row["closed_form"] for row in self.rows)

    @property
    def t_exceeds_s(self) -> bool:
        degrees = {row["name"]: row["computed"] for row in self.rows}
        return degrees["t_r"] > degrees["s_r"]

    def degree(self, name: str) -> int:
        return next(row["computed"] for row in self.rows if row["name"] == name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows).set_index("name")

    def to_dict(self) -> Dict:
        return {"r": self.r, "rows": self.rows, "consistent": self.consistent, "t_exceeds_s": self.t_exceeds_s}


def _ledger(p: int, e: int, r: int, forms: ClosedForms) -> DegreeLedger:
    q = p ** e
    deg_a = lambda k: sum(q ** i for i in range(k))
    expected = {
        "a_r": deg_a(r),
        "s_r": (q ** r - 1) * deg_a(r - 1),
        "t_r": sum(q ** i for i in range(r - 1, 2 * r - 1)),
    }
    computed = {
        "a_r": poly_degree(coefficient_sequence(p, e, r).a_r),
        "s_r": poly_degree(forms.s_r),
        "t_r": poly_degree(forms.t_r),
    }
    rows = [{"name": name, "computed": int(computed[name]), "closed_form": expected[name]} for name in expected]
    return DegreeLedger(p, e, r, rows)


def degree_ledger(p: int, e: int, r: int) -> DegreeLedger:
    _check_r(r, least=2)
    return _ledger(p, e, r, closed_forms(p, e, r))


@dataclass
class Certificate:
    p: int
    e: int
    r: int
    forms: ClosedForms
    ledger: DegreeLedger
    checks: Dict[str, bool]

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())

    @property
    def s_r(self) -> RingScalar:
        return self.forms.s_r

    @property
    def t_r(self) -> RingScalar:
        return self.forms.t_r

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "e": self.e,
            "r": self.r,
            "s_r": _printable(self.s_r),
            "t_r": _printable(self.t_r),
            "degree_ledger": self.ledger.rows,
            "checks": dict(self.checks),
            "verdict": self.verdict,
        }


def _certify(p: int, e: int, r: int) -> Certificate:
    q = p ** e
    forms = closed_forms(p, e, r)
    ledger = _ledger(p, e, r, forms)
    deg_t = ledger.degree("t_r")
    checks = {
        "B_r identity": verify_Br(p, e, r),
        "det identity": det_identity(p, e, r),
        "degree ledger": ledger.consistent,
        "deg t_r > deg s_r": ledger.t_exceeds_s,
        "s_r != 0": not forms.s_r.is_zero(),
        "a_{r-1} != 0": not fp_is_zero(_a(p, e, r - 1)),
        # (q^r + 1) n = deg t_r + n has no solution n >= 0
        "divisibility contradiction": deg_t % (q ** r) != 0 and sum(q ** i for i in range(r)) % q != 0,
    }
    certificate = Certificate(p, e, r, forms, ledger, checks)
    logger.debug(f"certificate p={p}, e={e}, r={r}: verdict {certificate.verdict}")
    return certificate


def simplicity_certificate(p: int, e: int = 1, r_max: Optional[int] = None, parallel: bool = False) -> List[Certificate]:
    """
    Simplicity certificates for A = [[0, 1], [1, x]] over F_p[x]

    Args:
        p: Characteristic
        e: Frobenius twist, q = p^e
        r_max: Certificates are produced for r = 1..r_max
        parallel: Build certificates in threads

    Returns:
        One Certificate per r, in order of r; all verdicts true means no F^(er)-stable line for any r checked
    """
    r_max = r_max if r_max is not None else setting("certifier", "r_max")
    _check_r(r_max)
    if not galois.is_prime(p):
        raise ValidationError(f"characteristic {p} is not prime")
    if e < 1:
        raise ValidationError(f"e must be positive, got {e}")
    if parallel:
        with ThreadPoolExecutor(max_workers=setting("cli", "batch_workers")) as pool:
            certificates = list(pool.map(lambda r: _certify(p, e, r), range(1, r_max + 1)))
    else:
        certificates = [_certify(p, e, r) for r in range(1, r_max + 1)]
    passed = sum(c.verdict for c in certificates)
    logger.info(f"{passed} of {len(certificates)} certificates hold for p={p}, e={e}")
    return certificates


def certificates_frame(certificates: List[Certificate]) -> pd.DataFrame:
    rows = []
    for c in certificates:
        row = {"p": c.p, "e": c.e, "r": c.r, "deg s_r": c.ledger.degree("s_r"), "deg t_r": c.ledger.degree("t_r")}
        row.update(c.checks)
        row["verdict"] = c.verdict
        rows.append(row)
    return pd.DataFrame(rows)


def line_instability(p: int, e: int = 1, r_max: Optional[int] = None) -> Dict[int, bool]:
    """r -> True when R e_1 is not F^(er)-stable, i.e. the bottom-left entry of A_r is nonzero."""
    r_max = r_max if r_max is not None else setting("certifier", "r_max")
    M = _example_module(poly_ring(p), e)
    out = {}
    for r in range(1, r_max + 1):
        A_r = power_matrix(M, r, max_power=max(r, setting("frobmod", "max_power"))).A_r
        out[r] = not A_r[1][0].is_zero() and A_r[1][0] == coefficient_sequence(p, e, r - 1).a_r
    return out


def _samples(p: int, count: int) -> List[galois.Poly]:
    """x^j + k for the first exponents j prime to p; none of them is a p-th power."""
    exponents = [j for j in range(1, 4 * count + 2) if j % p][:count]
    return [fp_poly(p, [k % p] + [0] * (j - 1) + [1]) for k, j in enumerate(exponents)]


def derivative_audit(p: int, e: int, r: int, samples: Optional[int] = None) -> List[Dict]:
    """d/dx(b^(Q+1) + T b - S) == (b^Q + T) b' with T = t_r^p, S = s_r^p and b' != 0."""
    _check_r(r)
    samples = samples or setting("certifier", "derivative_samples")
    forms = closed_forms(p, e, r)
    Q = (p ** e) ** r
    T = fp_inflate(forms.t_r.payload, p)
    S = fp_inflate(forms.s_r.payload, p)
    results = []
    for beta in _samples(p, samples):
        lhs = fp_derivative(fp_inflate(beta, Q) * beta + T * beta - S)
        rhs = (fp_inflate(beta, Q) + T) * fp_derivative(beta)
        results.append({
            "beta": fp_format(beta),
            "identity": lhs == rhs,
            "derivative_nonzero": not fp_is_zero(fp_derivative(beta)),
        })
    return results


def transcript(certificate: Certificate) -> str:
    """Human-readable proof transcript for one certificate."""
    c = certificate
    q = c.p ** c.e
    Q = q ** c.r
    mark = lambda name: "ok" if c.checks[name] else "FAILED"
    lines = [
        f"Certificate for p = {c.p}, e = {c.e}, r = {c.r} (q = {q}, q^r = {Q})",
        "",
        "Step 1. Change of basis.",
        f"  C_r = [[1, a_(r-2)^q], [0, a_(r-1)]] turns A_r into B_r = [[0, s_r], [1, t_r]]: {mark('B_r identity')}",
        f"  det A_r = (-1)^{c.r}: {mark('det identity')}",
        f"  s_r = {_printable(c.s_r)}",
        f"  t_r = {_printable(c.t_r)}",
        "",
        "Step 2. Reduction to a vector (alpha, 1).",
        "  Assumed context: F_p(x)^(1/p^inf) is integrally closed in its algebraic closure, so a",
        "  general fixed vector reduces to (alpha, 1) with alpha^(q^r+1) + t_r alpha - s_r = 0.",
        f"  The bottom-left entry a_(r-1) of A_r is nonzero: {mark('a_{r-1} != 0')}",
        "",
        "Step 3. No solution alpha in the perfect closure.",
        f"  t > 0 branch: the derivative forces s_r^(p^t) = 0, but s_r != 0: {mark('s_r != 0')}",
        f"  t = 0 branch: deg s_r = {c.ledger.degree('s_r')} < deg t_r = {c.ledger.degree('t_r')}: "
        f"{mark('deg t_r > deg s_r')}",
        f"  (q^r + 1) n = {c.ledger.degree('t_r')} + n needs q^r | deg t_r, and "
        f"1 = q n - q - ... - q^(r-1) fails mod q: {mark('divisibility contradiction')}",
        f"  degree ledger matches the integer closed forms: {mark('degree ledger')}",
        "",
        f"Verdict: {'no' if c.verdict else 'UNCERTIFIED:'} F^{c.e * c.r}-fixed line, "
        f"so the module is simple as an R[F^{c.e * c.r}]-module"
        + ("." if c.verdict else " is not established."),
    ]
    return "\n".join(lines)


@dataclass
class AdjoinedRootReport:
    p: int
    fixed_vector: List[str]
    image: List[str]
    fixed: bool
    basis_vector_fixed: bool

    @property
    def passed(self) -> bool:
        return self.fixed and not self.basis_vector_fixed

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "fixed_vector": self.fixed_vector,
            "image": self.image,
            "fixed": self.fixed,
            "e1_fixed": self.basis_vector_fixed,
            "passed": self.passed,
        }


def adjoined_root_ring(p: int) -> RingDescriptor:
    """F_p(x)[t]/(t^(p^2) + x t^p - t)."""
    K = rat_func_field(p)
    coeffs = [K.zero] * (p * p + 1)
    coeffs[1] = -K.one
    coeffs[p] = K.gen
    coeffs[p * p] = K.one
    return RingDescriptor.quotient_ring(p, Poly(K, coeffs, "t"))


def adjoined_root_check(p: int) -> AdjoinedRootReport:
    """
    Adjoin a root alpha of t^(p^2) + x t^p - t and check that (alpha^p, alpha) is F-fixed

    Args:
        p: Characteristic

    Returns:
        AdjoinedRootReport; it passes when (alpha^p, alpha) is fixed and e_1 is not
    """
    if not galois.is_prime(p):
        raise ValidationError(f"characteristic {p} is not prime")
    ring = adjoined_root_ring(p)
    x = embed(poly_ring(p).gen, ring)
    M = make_module(ring, 1, [[0, 1], [1, x]])
    alpha = ring.gen
    v = (alpha.frobenius(1), alpha)
    image = apply(M, v)
    e1 = (ring.one, ring.zero)
    report = AdjoinedRootReport(
        p=p,
        fixed_vector=[str(c) for c in v],
        image=[str(c) for c in image],
        fixed=tuple(image) == v,
        basis_vector_fixed=tuple(apply(M, e1)) == e1,
    )
    logger.info(f"Adjoined root check for p = {p}: {'passed' if report.passed else 'failed'}")
    return report


@dataclass
class PolynomialRingCorrespondence:
    """Stable subspaces of V versus stable submodules F_p[x] (x) W of the extended module."""

    subspaces: int
    stable: int
    agreements: int
    roots: int
    injective: bool

    @property
    def verdict(self) -> bool:
        return self.agreements == self.subspaces and self.roots == self.stable and self.injective

    def to_dict(self) -> Dict:
        return {
            "subspaces": self.subspaces,
            "stable": self.stable,
            "agreements": self.agreements,
            "roots": self.roots,
            "injective": self.injective,
            "verdict": self.verdict,
        }


def polynomial_ring_example(M: FrobModule, r: int = 1, cap: Optional[int] = None) -> PolynomialRingCorrespondence:
    """Extend a unit F_p-module to F_p[x] and match stable subspaces with stable submodules."""
    if M.ring.kind != RingKind.PRIME_FIELD:
        raise UnsupportedRing(f"the extension to F_p[x] needs a prime-field module, not {M.ring.describe()}")
    if not M.unit:
        raise NotUnit("the correspondence needs a unit module")
    cap = cap if cap is not None else setting("stable_structure", "enumeration_cap")
    total = subspace_count(M.n, M.ring.order)
    if total > cap:
        raise EnumerationCapExceeded(f"{total} subspaces exceed enumeration_cap = {cap}")
    R = poly_ring(M.p)
    twisted = power_matrix(M, r, max_power=max(r, setting("frobmod", "max_power"))).A_r
    M_R = FrobModule(R, M.n, M.e * r, embed_matrix(twisted, R))
    stable, agreements, roots = 0, 0, 0
    images = set()
    for rows in iter_subspaces(M.ring, M.n):
        W = Subspace(M.ring, M.n, int_rows(rows))
        N = Submodule.generated(R, M.n, [[embed(c, R) for c in v] for v in W.vectors()])
        finite = subspace_is_stable(M, W, r)
        extended = submodule_is_stable(M_R, N)
        agreements += finite == extended
        if finite:
            stable += 1
            images.add(N)
            roots += submodule_is_root(M_R, N)
    result = PolynomialRingCorrespondence(total, stable, agreements, roots, len(images) == stable)
    logger.info(f"{stable} stable subspaces over {M.ring.describe()}, correspondence verdict {result.verdict}")
    return result
