"""Data model for S-arithmetic abelian groups, endomorphism pairs and
nilpotent factor lists, with validation.

All types are immutable values; `validate` returns a list of human-readable
violations instead of raising, so the CLI can report them all at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import arith
from .arith import IntMat


@dataclass(frozen=True)
class SArithAbelianGroup:
    """The additive group Z[1/S]^d: rank d with the primes in S inverted."""

    rank: int
    inverted_primes: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "inverted_primes", tuple(sorted(set(self.inverted_primes)))
        )

    def __str__(self) -> str:
        if not self.inverted_primes:
            return f"Z^{self.rank}"
        s = ",".join(f"1/{p}" for p in self.inverted_primes)
        return f"Z[{s}]^{self.rank}"


@dataclass(frozen=True)
class EndoPair:
    """Two d x d matrices over Z[1/S] acting on column vectors from the left."""

    phi: IntMat
    psi: IntMat


@dataclass(frozen=True)
class NilpotentFactor:
    """One torsion-free abelian section of the isolated lower central series,
    together with the endomorphism pair it carries."""

    group: SArithAbelianGroup
    pair: EndoPair

    @property
    def rank(self) -> int:
        return self.group.rank


@dataclass(frozen=True)
class NilpotentGroupData:
    """Ordered factor list (top section first) describing a torsion-free
    nilpotent group of finite rank through its abelian sections.

    The tool trusts that the data arises from an actual group; only the
    checkable hypotheses are verified downstream.
    """

    factors: tuple[NilpotentFactor, ...]

    @staticmethod
    def from_abelian(group: SArithAbelianGroup, pair: EndoPair) -> "NilpotentGroupData":
        return NilpotentGroupData((NilpotentFactor(group, pair),))


def denominator_support(q: Fraction) -> set[int]:
    """Primes dividing the denominator of q."""
    if q.denominator == 1:
        return set()
    return set(arith.factorize(q.denominator))


def _validate_group(group: SArithAbelianGroup) -> list[str]:
    out = []
    if group.rank < 1:
        out.append(f"rank must be >= 1, got {group.rank}")
    for p in group.inverted_primes:
        if not isinstance(p, int) or not arith.is_prime(p):
            out.append(f"inverted set contains non-prime {p}")
    return out

def _validate_matrix(name: str, m: IntMat, group: SArithAbelianGroup) -> list[str]:
    out = []
    if m.rows != m.cols:
        out.append(f"{name} is not square ({m.rows}x{m.cols})")
        return out
    if m.rows != group.rank:
        out.append(
            f"dimension mismatch: {name} is {m.rows}x{m.cols} on a rank-{group.rank} group"
        )
        return out
    allowed = set(group.inverted_primes)
    for i, row in enumerate(m.entries):
        for j, x in enumerate(row):
            bad = denominator_support(x) - allowed
            for p in sorted(bad):
                out.append(
                    f"denominator prime {p} not in S at {name}[{i}][{j}] = {x}"
                )
    return out


def validate(group: SArithAbelianGroup, pair: EndoPair) -> list[str]:
    """All invariant violations for (group, pair); empty list means Ok."""
    out = _validate_group(group)
    if out:
        return out
    out += _validate_matrix("phi", pair.phi, group)
    out += _validate_matrix("psi", pair.psi, group)
    return out


def validate_nilpotent(data: NilpotentGroupData) -> list[str]:
    """Violations across all factors, prefixed by factor position (1-based)."""
    if not data.factors:
        return ["factor list must be nonempty"]
    out = []
    for k, factor in enumerate(data.factors, start=1):
        for msg in validate(factor.group, factor.pair):
            out.append(f"factor {k}: {msg}")
    return out
