"""Aligned joint eigenvalues for commuting pairs with rational spectra,
completion index sets I(p), and exact valuation profiles.

The automatic tier handles pairs that commute and whose characteristic
polynomials split over Q.  Anything beyond that (irrational or properly
algebraic spectra) must arrive as user-declared ExternalEigenData; the
embedding choices involved are then the user's responsibility and verdicts
built on them are flagged as conditional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from . import arith
from .arith import IntMat, PadicVal, char_poly, mat_from_columns, mat_pow, nullspace
from .errors import IrrationalSpectrum, NotCommuting
from .groups import EndoPair, SArithAbelianGroup


@dataclass(frozen=True)
class EigenPair:
    """One aligned eigenvalue pair (xi of phi, eta of psi) with multiplicity."""

    xi: Fraction
    eta: Fraction
    multiplicity: int = 1


@dataclass(frozen=True)
class EigenPairProfile:
    """Aligned pairs plus, per prime, the index set surviving in the pro-p
    completion and the exact valuations; pair indices are 1-based."""

    pairs: tuple[EigenPair, ...]
    index_sets: dict[int, frozenset[int]]
    valuations: dict[tuple[int, int], tuple[PadicVal, PadicVal]]


@dataclass(frozen=True)
class ExternalEigenPair:
    """User-declared eigenvalue pair: exact squared archimedean moduli and
    p-adic valuations per relevant prime (index by prime)."""

    abs2_xi: Fraction
    abs2_eta: Fraction
    multiplicity: int
    valuations: dict[int, tuple[PadicVal, PadicVal]] = field(default_factory=dict)


@dataclass(frozen=True)
class ExternalEigenData:
    """Escape hatch for spectra the rational tier cannot extract.

    The declared witness-prime set and valuations are trusted verbatim;
    consumers must mark results as conditional on this data.
    """

    pairs: tuple[ExternalEigenPair, ...]
    witness_primes: tuple[int, ...] = ()
    assert_triangularisable: bool = False

    def degree(self) -> int:
        return sum(p.multiplicity for p in self.pairs)


def commuting_check(pair: EndoPair) -> bool:
    """Exact test phi*psi == psi*phi (the implemented sufficient condition
    for simultaneous triangularisability)."""
    return pair.phi * pair.psi == pair.psi * pair.phi


# -- rational root extraction ---------------------------------------------------

def _poly_shift_divide(coeffs: list[Fraction], root: Fraction) -> list[Fraction] | None:
    """Synthetic division by (X - root); None when root is not a root."""
    descending = list(reversed(coeffs))
    acc = descending[0]
    partials = [acc]
    for c in descending[1:]:
        acc = acc * root + c
        partials.append(acc)
    if partials[-1] != 0:  # remainder
        return None
    quotient = partials[:-1]
    quotient.reverse()
    return quotient


def _root_candidates(coeffs: list[Fraction]) -> list[Fraction]:
    """Rational-root-theorem candidates for a polynomial with nonzero
    constant term, from the primitive integer form."""
    scale = 1
    for c in coeffs:
        scale = lcm(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    content = 0
    for v in ints:
        content = gcd(content, v)
    if content > 1:
        ints = [v // content for v in ints]
    cands = set()
    for a in arith.divisors(ints[0]):
        for b in arith.divisors(ints[-1]):
            cands.add(Fraction(a, b))
            cands.add(Fraction(-a, b))
    return sorted(cands)


def rational_roots(coeffs: list[Fraction]) -> tuple[list[tuple[Fraction, int]], int]:
    """All rational roots with multiplicities of a nonzero polynomial.

    Returns (roots, remaining_degree); remaining_degree = 0 means the
    polynomial splits completely over Q.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has no well-defined root set")
    roots: list[tuple[Fraction, int]] = []
    zero_mult = 0
    while coeffs[0] == 0:
        zero_mult += 1
        coeffs = coeffs[1:]
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    if len(coeffs) > 1:
        for cand in _root_candidates(coeffs):
            mult = 0
            while len(coeffs) > 1:
                quo = _poly_shift_divide(coeffs, cand)
                if quo is None:
                    break
                coeffs = quo
                mult += 1
            if mult:
                roots.append((cand, mult))
            if len(coeffs) == 1:
                break
    roots.sort(key=lambda rm: rm[0])
    return roots, len(coeffs) - 1


# -- joint eigenvalue alignment -------------------------------------------------

def _generalized_eigenbasis(m: IntMat, xi: Fraction) -> list[tuple[Fraction, ...]]:
    d = m.rows
    shifted = m - xi * IntMat.identity(d)
    return nullspace(mat_pow(shifted, d))


def _restrict(m: IntMat, basis: list[tuple[Fraction, ...]]) -> IntMat:
    b = mat_from_columns(basis)
    return arith.solve_columns(b, m * b)


def joint_eigenvalues(pair: EndoPair) -> list[EigenPair]:
    """Aligned eigenvalue pairs of a commuting pair with rational spectra.

    For each rational eigenvalue xi of phi, psi preserves the generalized
    eigenspace; the eigenvalues of the restriction give the partners eta.
    On the common nilpotent blocks (phi - xi, psi - eta commute and are
    nilpotent) the eigenvalues of phi^n - psi^n are exactly xi^n - eta^n,
    which is the alignment property downstream formulas need.

    Raises NotCommuting, or IrrationalSpectrum when either characteristic
    polynomial fails to split over Q.
    """
    if not commuting_check(pair):
        raise NotCommuting("pair does not commute; no automatic alignment")
    phi, psi = pair.phi, pair.psi
    d = phi.rows
    phi_roots, rest = rational_roots(list(char_poly(phi)))
    if rest:
        raise IrrationalSpectrum(
            "char poly of phi has an irrational factor; supply external eigendata"
        )
    out: list[EigenPair] = []
    for xi, mult in phi_roots:
        basis = _generalized_eigenbasis(phi, xi)
        if len(basis) != mult:
            raise IrrationalSpectrum(
                f"generalized eigenspace of {xi} has dimension {len(basis)} != {mult}"
            )
        restricted = _restrict(psi, basis)
        psi_roots, rest = rational_roots(list(char_poly(restricted)))
        if rest:
            raise IrrationalSpectrum(
                "char poly of psi restricted to an eigenspace does not split over Q"
            )
        for eta, m2 in psi_roots:
            out.append(EigenPair(xi, eta, m2))
    out.sort(key=lambda ep: (ep.xi, ep.eta))
    assert sum(ep.multiplicity for ep in out) == d
    return out


# -- completion index sets and valuations ---------------------------------------

def relevant_primes(group: SArithAbelianGroup, pairs: list[EigenPair]) -> tuple[int, ...]:
    """S together with every prime dividing a numerator or denominator of
    some eigenvalue."""
    primes = set(group.inverted_primes)
    for ep in pairs:
        for value in (ep.xi, ep.eta):
            if value != 0:
                primes |= set(arith.factorize(value.numerator))
                primes |= set(arith.factorize(value.denominator))
    return tuple(sorted(primes))


def index_sets(
    group: SArithAbelianGroup, pairs: list[EigenPair]
) -> dict[int, frozenset[int]]:
    """I(p) for every relevant prime, 1-based pair indices.

    The pro-p completion of Z[1/S]^d is Z_p^d for p not in S (all indices
    survive) and trivial for p in S (the localization is p-divisible), so
    I(p) is the full index set or empty accordingly.  Primes outside the
    returned map follow the p-not-in-S rule.
    """
    full = frozenset(range(1, len(pairs) + 1))
    out: dict[int, frozenset[int]] = {}
    for p in relevant_primes(group, pairs):
        out[p] = frozenset() if p in group.inverted_primes else full
    return out


def valuation_profile(
    pairs: list[EigenPair], primes: tuple[int, ...]
) -> dict[tuple[int, int], tuple[PadicVal, PadicVal]]:
    """Exact (v_p(xi_i), v_p(eta_i)) for each requested prime and pair index;
    zero eigenvalues record the +infinity marker."""
    out: dict[tuple[int, int], tuple[PadicVal, PadicVal]] = {}
    for p in primes:
        for i, ep in enumerate(pairs, start=1):
            out[(p, i)] = (
                arith.padic_valuation(ep.xi, p, zero_to_infinity=True),
                arith.padic_valuation(ep.eta, p, zero_to_infinity=True),
            )
    return out


def eigen_profile(group: SArithAbelianGroup, pair: EndoPair) -> EigenPairProfile:
    """Full rational-tier profile: aligned pairs, I(p), valuations."""
    pairs = joint_eigenvalues(pair)
    primes = relevant_primes(group, pairs)
    return EigenPairProfile(
        pairs=tuple(pairs),
        index_sets=index_sets(group, pairs),
        valuations=valuation_profile(pairs, primes),
    )
