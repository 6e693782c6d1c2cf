"""Problem-description files and exact machine-readable reports.

The input grammar is JSON with schema tag "reidzeta/1".  Every rational is a
string "p" or "p/q"; raw floats are rejected so no value ever passes through
binary floating point.  Reports are serialized canonically (sorted keys,
fixed separators) so that byte-identical round-trips are a contract.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import arith, groups
from .arith import IntMat, PadicVal
from .errors import SpecValidationError
from .groups import EndoPair, NilpotentGroupData, SArithAbelianGroup
from .spectra import ExternalEigenData, ExternalEigenPair

SCHEMA = "reidzeta/1"


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def spec_sha256(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def parse_rational(raw: Any, where: str) -> Fraction:
    """Exact rational from an int or a 'p/q' string; floats are refused."""
    if isinstance(raw, bool):
        raise SpecValidationError(f"{where}: expected a rational, got a boolean")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        raise SpecValidationError(
            f"{where}: floating point values are not accepted, write '{raw}' as p/q"
        )
    if isinstance(raw, str):
        text = raw.strip()
        if any(ch in text for ch in ".eE"):
            raise SpecValidationError(
                f"{where}: {raw!r} looks like a float; rationals must be 'p' or 'p/q'"
            )
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecValidationError(f"{where}: cannot parse rational {raw!r}") from exc
    raise SpecValidationError(f"{where}: expected a rational, got {type(raw).__name__}")


def format_rational(q: Fraction) -> int | str:
    """Exact JSON value: integer when integral, 'p/q' string otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def _parse_valuation(raw: Any, where: str) -> PadicVal:
    if isinstance(raw, str) and raw.strip() == "inf":
        return PadicVal.infinite()
    value = parse_rational(raw, where)
    if value.denominator != 1:
        raise SpecValidationError(f"{where}: valuations must be integers or 'inf'")
    return PadicVal(int(value))


def _parse_matrix(raw: Any, d: int, where: str) -> IntMat:
    if not isinstance(raw, list) or len(raw) != d:
        raise SpecValidationError(f"{where}: expected {d} rows")
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != d:
            raise SpecValidationError(f"{where}: row {i} must have {d} entries")
        rows.append([parse_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    return IntMat.from_rows(rows)


def _parse_abelian(doc: dict, where: str) -> tuple[SArithAbelianGroup, EndoPair]:
    try:
        rank = int(doc["rank"])
        primes = tuple(int(p) for p in doc.get("inverted_primes", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecValidationError(f"{where}: bad rank or inverted_primes") from exc
    group = SArithAbelianGroup(rank, primes)
    if "phi" not in doc or "psi" not in doc:
        raise SpecValidationError(f"{where}: phi and psi matrices are required")
    pair = EndoPair(
        _parse_matrix(doc["phi"], rank, f"{where}.phi"),
        _parse_matrix(doc["psi"], rank, f"{where}.psi"),
    )
    violations = groups.validate(group, pair)
    if violations:
        raise SpecValidationError([f"{where}: {v}" for v in violations])
    return group, pair


def _parse_external(doc: dict, group: SArithAbelianGroup) -> ExternalEigenData:
    where = "external_eigendata"
    pairs = []
    for i, p in enumerate(doc.get("pairs", []), start=1):
        vals = {}
        for key, pair_vals in p.get("valuations", {}).items():
            prime = int(key)
            if not arith.is_prime(prime):
                raise SpecValidationError(f"{where}: valuation key {key} is not prime")
            if not isinstance(pair_vals, list) or len(pair_vals) != 2:
                raise SpecValidationError(
                    f"{where}: valuations[{key}] must be [v(xi), v(eta)]"
                )
            vals[prime] = (
                _parse_valuation(pair_vals[0], f"{where}.pairs[{i}]"),
                _parse_valuation(pair_vals[1], f"{where}.pairs[{i}]"),
            )
        pairs.append(
            ExternalEigenPair(
                abs2_xi=parse_rational(p.get("abs2_xi"), f"{where}.pairs[{i}].abs2_xi"),
                abs2_eta=parse_rational(p.get("abs2_eta"), f"{where}.pairs[{i}].abs2_eta"),
                multiplicity=int(p.get("multiplicity", 1)),
                valuations=vals,
            )
        )
    witness = tuple(sorted(int(p) for p in doc.get("witness_primes", [])))
    outside = [p for p in witness if p not in group.inverted_primes]
    if outside:
        raise SpecValidationError(
            f"{where}: witness primes {outside} are outside the inverted set"
        )
    data = ExternalEigenData(
        pairs=tuple(pairs),
        witness_primes=witness,
        assert_triangularisable=bool(doc.get("assert_triangularisable", False)),
    )
    if data.degree() != group.rank:
        raise SpecValidationError(
            f"{where}: multiplicities sum to {data.degree()}, rank is {group.rank}"
        )
    return data


@dataclass(frozen=True)
class ProblemSpec:
    """A parsed, validated problem description plus its canonical document."""

    target: object  # (group, pair) tuple or NilpotentGroupData
    external: ExternalEigenData | None
    document: dict

    @property
    def sha256(self) -> str:
        return spec_sha256(self.document)

    @property
    def is_nilpotent(self) -> bool:
        return isinstance(self.target, NilpotentGroupData)

    def factor_list(self):
        if self.is_nilpotent:
            return [(f.group, f.pair) for f in self.target.factors]
        return [self.target]


def parse_problem(doc: dict) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise SpecValidationError("problem document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SpecValidationError(
            f"schema must be {SCHEMA!r}, got {doc.get('schema')!r}"
        )
    group_doc = doc.get("group")
    if not isinstance(group_doc, dict):
        raise SpecValidationError("missing group descriptor")
    kind = group_doc.get("kind")
    external = None
    if kind == "abelian":
        spec_doc = dict(group_doc)
        spec_doc["phi"] = doc.get("phi")
        spec_doc["psi"] = doc.get("psi")
        group, pair = _parse_abelian(spec_doc, "group")
        target = (group, pair)
        if "external_eigendata" in doc:
            external = _parse_external(doc["external_eigendata"], group)
    elif kind == "nilpotent":
        raw_factors = group_doc.get("factors")
        if not isinstance(raw_factors, list) or not raw_factors:
            raise SpecValidationError("nilpotent group needs a nonempty factor list")
        factors = []
        for k, f in enumerate(raw_factors, start=1):
            group, pair = _parse_abelian(f, f"factor {k}")
            factors.append(groups.NilpotentFactor(group, pair))
        target = NilpotentGroupData(tuple(factors))
        if "external_eigendata" in doc:
            raise SpecValidationError(
                "external_eigendata is only supported for abelian input"
            )
    else:
        raise SpecValidationError(f"group.kind must be abelian or nilpotent, got {kind!r}")
    return ProblemSpec(target=target, external=external, document=doc)


def load_problem(path: str) -> ProblemSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, parse_float=_reject_float)
    except OSError as exc:
        raise SpecValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_problem(doc)


def _reject_float(text: str):
    raise SpecValidationError(
        f"floating point literal {text} is not accepted; use 'p/q' strings"
    )
