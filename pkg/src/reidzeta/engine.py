"""Exact coincidence Reidemeister numbers R(phi^n, psi^n).

For the abelian case on Z[1/S]^d the count is the adelic value
|det(psi^n - phi^n)|_inf * prod_{p in S} |det(psi^n - phi^n)|_p, a positive
integer whenever the difference is nonsingular.  Nilpotent input is handled
factorwise and multiplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import arith, spectra
from .arith import IntMat, mat_pow, padic_abs
from .errors import HypothesisViolation, NonIntegerResult, NotTameAt
from .groups import EndoPair, NilpotentFactor, NilpotentGroupData, SArithAbelianGroup

Target = Union[tuple[SArithAbelianGroup, EndoPair], NilpotentGroupData]


@dataclass(frozen=True)
class RValue:
    """A coincidence Reidemeister number: a positive integer or infinite.

    Infinity is a value, never an exception, so horizon scans can report the
    first non-tame iterate.
    """

    value: int | None  # None marks infinitely many classes

    @staticmethod
    def finite(k: int) -> "RValue":
        if k < 1:
            raise ValueError(f"finite class counts are >= 1, got {k}")
        return RValue(int(k))

    @staticmethod
    def infinite() -> "RValue":
        return RValue(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __int__(self) -> int:
        if self.value is None:
            raise ValueError("infinite Reidemeister number has no integer value")
        return self.value

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


@dataclass(frozen=True)
class TamenessResult:
    tag: str  # "tame" | "not_tame" | "unknown"
    witness: int | None = None  # first n with infinitely many classes


def _difference_power(pair: EndoPair, n: int) -> IntMat:
    return mat_pow(pair.psi, n) - mat_pow(pair.phi, n)


def abelian_r(group: SArithAbelianGroup, pair: EndoPair, n: int) -> RValue:
    """R(phi^n, psi^n) on Z[1/S]^d, exactly.

    Returns the infinite marker when det(psi^n - phi^n) = 0.
    """
    d = arith.det(_difference_power(pair, n))
    if d == 0:
        return RValue.infinite()
    result = abs(d)
    for p in group.inverted_primes:
        result *= padic_abs(d, p)
    if result.denominator != 1:
        raise NonIntegerResult(
            f"adelic value {result} is not an integer; input outside the model"
        )
    return RValue.finite(int(result))


def coincidence_singleton(factor: NilpotentFactor) -> bool:
    """True iff only the identity coset satisfies phi_k = psi_k on the factor,
    equivalently det(phi_k - psi_k) != 0 on a torsion-free section."""
    return arith.det(factor.pair.phi - factor.pair.psi) != 0


def nilpotent_r(data: NilpotentGroupData, n: int, strict: bool = False) -> RValue:
    """Product of the per-factor counts at iterate n.

    The singleton hypothesis det(phi_k^n - psi_k^n) != 0 is re-checked for
    the requested n on every factor.  A factor with singular difference
    forces infinitely many classes on the whole group, so the default is to
    return the infinite marker; strict=True raises instead, for callers that
    demand the literal product formula.
    """
    product = 1
    for k, factor in enumerate(data.factors, start=1):
        r = abelian_r(factor.group, factor.pair, n)
        if r.is_infinite:
            if strict:
                raise HypothesisViolation(
                    f"factor {k} has det(phi^{n} - psi^{n}) = 0; "
                    "product formula hypothesis fails"
                )
            return RValue.infinite()
        product *= int(r)
    return RValue.finite(product)


def _r_at(target: Target, n: int) -> RValue:
    if isinstance(target, NilpotentGroupData):
        return nilpotent_r(target, n)
    group, pair = target
    return abelian_r(group, pair, n)


def r_sequence(target: Target, horizon: int) -> list[int]:
    """Exact [R_1, ..., R_horizon]; raises NotTameAt on the first infinite term."""
    out = []
    for n in range(1, horizon + 1):
        r = _r_at(target, n)
        if r.is_infinite:
            raise NotTameAt(n)
        out.append(int(r))
    return out


def tameness_check(
    group: SArithAbelianGroup,
    pair: EndoPair,
    mode: str = "exact",
    horizon: int = 50,
) -> TamenessResult:
    """Decide whether every iterate has finitely many classes.

    exact mode (rational-tier eigenvalue data required): a pair of aligned
    rational eigenvalues collides at some iterate iff xi = +/- eta, with
    witness n = 1 or 2.  horizon mode checks det(psi^n - phi^n) != 0 for
    n <= horizon and returns "unknown" when all pass.
    """
    if mode == "exact":
        pairs = spectra.joint_eigenvalues(pair)
        if any(ep.xi == ep.eta for ep in pairs):
            return TamenessResult("not_tame", witness=1)
        if any(ep.xi == -ep.eta for ep in pairs):
            return TamenessResult("not_tame", witness=2)
        return TamenessResult("tame")
    if mode == "horizon":
        for n in range(1, horizon + 1):
            if arith.det(_difference_power(pair, n)) == 0:
                return TamenessResult("not_tame", witness=n)
        return TamenessResult("unknown")
    raise ValueError(f"mode must be 'exact' or 'horizon', got {mode!r}")
