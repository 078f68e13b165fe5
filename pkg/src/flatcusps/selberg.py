"""Torsion-free congruence subgroups of rational matrix groups.

For a finitely generated subgroup of ``GL(n; Q)`` containing a unipotent
subgroup, reduction modulo a well-chosen prime ``q`` produces a torsion
free, finite index congruence subgroup containing the unipotent part. The
prime must avoid three finite bad sets: primes up to ``n`` (small
characteristic), primes dividing a generator denominator (not invertible
in the coefficient ring), and primes modulo which some degree-n torsion
characteristic polynomial collapses onto ``(t-1)^n``. Torsion
characteristic polynomials are exactly the degree-n products of cyclotomic
polynomials other than ``(t-1)^n`` itself, a finite enumerable set.

The certificate produced here records the prime, the polynomial list, the
bad primes with reasons, and the residue evidence; an independent
word-enumeration verifier rechecks the conclusion on demand.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, UnipotentViolation
from .exactlin import IntPolynomial, Matrix, char_poly, monomial

REASON_SMALL_CHARACTERISTIC = "small-characteristic"
REASON_COEFFICIENT_DIVISOR = "coefficient-divisor"
REASON_DENOMINATOR = "denominator"


# ---------------------------------------------------------------------------
# Small number theory
# ---------------------------------------------------------------------------


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of a positive integer, ascending."""
    if m < 1:
        raise ValueError("expected a positive integer")
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


def primes_upto(bound: int) -> list[int]:
    return [p for p in range(2, bound + 1) if is_prime(p)]


def euler_phi(d: int) -> int:
    result = d
    for p in prime_factors(d):
        result = result // p * (p - 1)
    return result


def _divisors(d: int) -> list[int]:
    return [e for e in range(1, d + 1) if d % e == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> IntPolynomial:
    """The d-th cyclotomic polynomial, computed by exact division.

    ``t^d - 1`` divided by the cyclotomic polynomials of the proper
    divisors of ``d``; the quotient is monic with integer coefficients.
    """
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    numerator = monomial(d) - IntPolynomial([1])
    for e in _divisors(d)[:-1]:
        quotient, remainder = divmod(numerator, cyclotomic_polynomial(e))
        assert remainder.is_zero()
        numerator = quotient
    assert numerator.is_integral() and numerator.is_monic()
    return numerator


@lru_cache(maxsize=None)
def _admissible_orders(n: int) -> tuple[int, ...]:
    """Orders d of roots of unity with degree ``phi(d) <= n``.

    ``phi(d) >= sqrt(d/2)`` bounds the search range.
    """
    return tuple(d for d in range(1, 2 * n * n + 2) if euler_phi(d) <= n)


def torsion_order_bound(n: int) -> int:
    """lcm of all possible orders of torsion elements of ``GL(n; Q)``."""
    return math.lcm(*_admissible_orders(n))


def unipotent_polynomial(n: int) -> IntPolynomial:
    """``(t - 1)^n``, the characteristic polynomial of unipotent elements."""
    return IntPolynomial([-1, 1]) ** n


def _factor_multisets(n: int, orders: Sequence[int], start: int = 0) -> Iterable[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for i in range(start, len(orders)):
        d = orders[i]
        deg = euler_phi(d)
        if deg <= n:
            for rest in _factor_multisets(n - deg, orders, i):
                yield (d,) + rest


@lru_cache(maxsize=None)
def torsion_polynomials(n: int) -> tuple[IntPolynomial, ...]:
    """Degree-n characteristic polynomials of nontrivial torsion elements.

    All monic degree-n products of cyclotomic polynomials whose factor
    multiset is not ``{Phi_1, ..., Phi_1}``: a rational matrix of finite
    order is semisimple with roots of unity as eigenvalues, so its
    characteristic polynomial is such a product, and each product is
    realized by a block-diagonal companion matrix. Duplicate-free, sorted
    by coefficient tuple.
    """
    if n < 1:
        raise ValueError("degree must be at least 1")
    orders = _admissible_orders(n)
    polys = set()
    for multiset in _factor_multisets(n, orders):
        if all(d == 1 for d in multiset):
            continue
        product = IntPolynomial([1])
        for d in multiset:
            product = product * cyclotomic_polynomial(d)
        polys.add(product)
    return tuple(sorted(polys, key=lambda p: p.coeffs))


# ---------------------------------------------------------------------------
# Inputs and certificates
# ---------------------------------------------------------------------------


class MatrixGroupInput:
    """A finitely generated rational matrix group with a unipotent subgroup.

    ``lambda_gens`` generate the ambient group, ``gamma_gens`` the unipotent
    subgroup (each is required to have characteristic polynomial
    ``(t-1)^n``; this is checked by :func:`good_prime`, not at
    construction, so that violations surface as ``UnipotentViolation``).
    """

    __slots__ = ("n", "lambda_gens", "gamma_gens")

    def __init__(
        self,
        n: int,
        lambda_gens: Sequence[Matrix],
        gamma_gens: Sequence[Matrix] = (),
    ):
        lams = tuple(lambda_gens)
        gams = tuple(gamma_gens)
        if n < 1:
            raise ValueError("degree must be at least 1")
        if not lams:
            raise ValueError("at least one ambient generator is required")
        for m in lams + gams:
            if not (m.is_square() and m.rows == n):
                raise DimensionMismatch(f"generators must be {n}x{n}")
        for m in lams:
            if m.det() == 0:
                raise ValueError("ambient generators must be invertible")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lambda_gens", lams)
        object.__setattr__(self, "gamma_gens", gams)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixGroupInput is immutable")

    def denominators(self) -> list[int]:
        return sorted(
            {
                x.denominator
                for m in self.lambda_gens + self.gamma_gens
                for row in m.entries
                for x in row
                if x.denominator != 1
            }
        )


class ResidueEvidence:
    """One torsion polynomial shown distinct from ``(t-1)^n`` modulo q."""

    __slots__ = ("polynomial", "polynomial_mod_q", "unipotent_mod_q")

    def __init__(
        self,
        polynomial: IntPolynomial,
        polynomial_mod_q: tuple[int, ...],
        unipotent_mod_q: tuple[int, ...],
    ):
        object.__setattr__(self, "polynomial", polynomial)
        object.__setattr__(self, "polynomial_mod_q", polynomial_mod_q)
        object.__setattr__(self, "unipotent_mod_q", unipotent_mod_q)

    def __setattr__(self, name, value):
        raise AttributeError("ResidueEvidence is immutable")

    @property
    def distinct(self) -> bool:
        return self.polynomial_mod_q != self.unipotent_mod_q


class SelbergCertificate:
    """Choice of congruence prime together with the evidence justifying it."""

    __slots__ = ("n", "prime", "torsion_polys", "bad_primes", "residue_evidence")

    def __init__(
        self,
        n: int,
        prime: int,
        torsion_polys: Sequence[IntPolynomial],
        bad_primes: dict[int, tuple[str, ...]],
        residue_evidence: Sequence[ResidueEvidence],
    ):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "torsion_polys", tuple(torsion_polys))
        object.__setattr__(self, "bad_primes", dict(bad_primes))
        object.__setattr__(self, "residue_evidence", tuple(residue_evidence))

    def __setattr__(self, name, value):
        raise AttributeError("SelbergCertificate is immutable")

    def __repr__(self) -> str:
        return f"<SelbergCertificate n={self.n} prime={self.prime}>"


# ---------------------------------------------------------------------------
# Bad primes, good primes, verification
# ---------------------------------------------------------------------------


def bad_primes(
    group_input: MatrixGroupInput, polys: Sequence[IntPolynomial]
) -> dict[int, tuple[str, ...]]:
    """Primes that must be excluded, each with its reasons.

    Three sources: primes at most ``n`` (small residue characteristic),
    primes dividing a generator denominator (invertible in the coefficient
    ring, so unusable for reduction), and primes ``p`` with
    ``p_j = (t-1)^n (mod p)`` for some listed polynomial. The last set is
    computed exactly: ``p`` collapses ``p_j`` onto the unipotent polynomial
    precisely when ``p`` divides every coefficient of the difference, so
    the candidates are the prime factors of the gcd of those coefficients.
    """
    if not polys:
        raise ValueError("at least one torsion polynomial is required")
    n = group_input.n
    reasons: dict[int, set[str]] = {}

    def add(p: int, reason: str) -> None:
        reasons.setdefault(p, set()).add(reason)

    for p in primes_upto(n):
        add(p, REASON_SMALL_CHARACTERISTIC)
    for den in group_input.denominators():
        for p in prime_factors(den):
            add(p, REASON_DENOMINATOR)
    unipotent = unipotent_polynomial(n)
    for poly in polys:
        difference = poly - unipotent
        assert not difference.is_zero() and difference.is_integral()
        content = math.gcd(*(abs(c.numerator) for c in difference.coeffs))
        if content > 1:
            for p in prime_factors(content):
                add(p, REASON_COEFFICIENT_DIVISOR)
    return {p: tuple(sorted(rs)) for p, rs in sorted(reasons.items())}


def good_prime(group_input: MatrixGroupInput) -> SelbergCertificate:
    """Smallest prime admissible for the congruence-subgroup construction.

    Checks that every unipotent generator really has characteristic
    polynomial ``(t-1)^n`` (``UnipotentViolation`` otherwise), builds the
    bad-prime set, picks the smallest prime outside it, and records the
    residue evidence that each torsion polynomial stays distinct from the
    unipotent one modulo that prime. Reduction modulo the certified prime
    therefore separates the unipotent subgroup from all nontrivial
    torsion, so its congruence preimage is torsion free, has finite index,
    and contains the unipotent subgroup.
    """
    n = group_input.n
    unipotent = unipotent_polynomial(n)
    for m in group_input.gamma_gens:
        if char_poly(m) != unipotent:
            raise UnipotentViolation(
                f"generator has characteristic polynomial {char_poly(m)}, "
                f"expected {unipotent}"
            )
    polys = torsion_polynomials(n)
    bad = bad_primes(group_input, polys)
    q = 2
    while q in bad or not is_prime(q):
        q += 1
    evidence = [
        ResidueEvidence(p, p.reduce_mod(q), unipotent.reduce_mod(q)) for p in polys
    ]
    assert all(e.distinct for e in evidence)
    assert q > n and all(d % q != 0 for d in group_input.denominators())
    return SelbergCertificate(n, q, polys, bad, evidence)


def _reduced_char_poly(m: Matrix, q: int) -> Optional[tuple[int, ...]]:
    """Characteristic polynomial modulo q, or None if q hits a denominator."""
    try:
        return char_poly(m).reduce_mod(q)
    except ValueError:
        return None


def verify_certificate(
    group_input: MatrixGroupInput,
    certificate: SelbergCertificate,
    word_length: int = 6,
) -> bool:
    """Brute-force falsifier for a certificate.

    Enumerates all products of the ambient generators and their inverses
    up to the given word length and reduces each modulo the certified
    prime. Any nontrivial element whose reduction has characteristic
    polynomial ``(t-1)^n`` must be non-torsion over the rationals; torsion
    is decided exactly by raising to the lcm of all possible torsion
    orders in ``GL(n; Q)``. Returns False on any counterexample (including
    a prime that divides a generator denominator), True otherwise. A
    verifier, not a prover: word_length bounds the search.
    """
    q = certificate.prime
    if q < 2 or not is_prime(q):
        return False
    if any(d % q == 0 for d in group_input.denominators()):
        return False  # reduction modulo q is undefined on these generators
    n = group_input.n
    unipotent = unipotent_polynomial(n)
    unipotent_mod = unipotent.reduce_mod(q)
    order_bound = torsion_order_bound(n)
    identity = Matrix.identity(n)

    generators = list(group_input.lambda_gens)
    generators += [m.inverse() for m in group_input.lambda_gens]
    seen = {identity}
    frontier = [identity]
    for _ in range(word_length):
        fresh = []
        for w in frontier:
            for g in generators:
                element = w * g
                if element not in seen:
                    seen.add(element)
                    fresh.append(element)
        frontier = fresh
    for element in seen:
        if element == identity:
            continue
        reduced = _reduced_char_poly(element, q)
        if reduced is None:
            return False
        if reduced != unipotent_mod:
            continue
        if char_poly(element) == unipotent:
            continue  # genuinely unipotent, infinite order
        if element ** order_bound == identity:
            return False  # nontrivial torsion collapsed onto the unipotent residue
    return True
