"""Independent brute-force computation of twisted coincidence class counts.

These oracles share no code with the Smith-normal-form / determinant route:
they enumerate a finite quotient explicitly and merge classes with
union-find.  They exist for cross-validation (tests and the `oracle-check`
CLI subcommand) and make no attempt at efficiency beyond the JIT kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .arith import IntMat, det
from .errors import (
    BudgetExceeded,
    InvalidTable,
    NonIntegralMatrix,
    NotAHomomorphism,
    SingularDifference,
)

#: Largest number of cells (Z/N)^d the abelian oracle will enumerate.
DEFAULT_CELL_BUDGET = 10**7

#: Group tables up to this size are validated exhaustively; larger ones by
#: seeded sampling.
EXHAUSTIVE_LIMIT = 512

_SAMPLE_TRIPLES = 20000
_SAMPLE_SEED = 0x5EED


def _check_group_axioms(table: np.ndarray) -> tuple[int, np.ndarray]:
    """Verify identity, inverses and associativity; return (identity, inv)."""
    m = table.shape[0]
    if table.shape != (m, m):
        raise InvalidTable("multiplication table must be square")
    if table.min() < 0 or table.max() >= m:
        raise InvalidTable("table entries must be element indices")
    idx = np.arange(m)
    identity = None
    for e in range(m):
        if np.array_equal(table[e], idx) and np.array_equal(table[:, e], idx):
            identity = e
            break
    if identity is None:
        raise InvalidTable("no two-sided identity element")
    # each row must hit the identity exactly once (right inverses)
    hits = table == identity
    if not np.all(hits.sum(axis=1) == 1):
        raise InvalidTable("some element has no unique right inverse")
    inv = np.argmax(hits, axis=1).astype(np.int64)
    if not np.array_equal(table[inv, idx], np.full(m, identity)):
        raise InvalidTable("right inverses are not two-sided")
    if m <= EXHAUSTIVE_LIMIT:
        for a in range(m):
            if not np.array_equal(table[table[a]], table[a][table]):
                raise InvalidTable(f"associativity fails at element {a}")
    else:
        rng = np.random.default_rng(_SAMPLE_SEED)
        a, b, c = (rng.integers(0, m, _SAMPLE_TRIPLES) for _ in range(3))
        if not np.array_equal(table[table[a, b], c], table[a, table[b, c]]):
            raise InvalidTable("associativity fails on a sampled triple")
    return identity, inv


def _check_endomorphism(table: np.ndarray, f: np.ndarray, name: str) -> None:
    m = table.shape[0]
    if f.shape != (m,) or f.min() < 0 or f.max() >= m:
        raise InvalidTable(f"{name} is not a self-map of the element set")
    if m <= EXHAUSTIVE_LIMIT:
        if not np.array_equal(f[table], table[f[:, None], f[None, :]]):
            raise InvalidTable(f"{name} is not a homomorphism")
    else:
        rng = np.random.default_rng(_SAMPLE_SEED + 1)
        a = rng.integers(0, m, _SAMPLE_TRIPLES)
        b = rng.integers(0, m, _SAMPLE_TRIPLES)
        if not np.array_equal(f[table[a, b]], table[f[a], f[b]]):
            raise InvalidTable(f"{name} fails the homomorphism law on a sample")


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given by its multiplication table, with two
    endomorphisms as index arrays; validated on construction."""

    table: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    identity: int = 0
    inv: np.ndarray | None = None

    @staticmethod
    def build(table, phi, psi) -> "FiniteGroupTable":
        table = np.ascontiguousarray(table, dtype=np.int64)
        phi = np.ascontiguousarray(phi, dtype=np.int64)
        psi = np.ascontiguousarray(psi, dtype=np.int64)
        identity, inv = _check_group_axioms(table)
        _check_endomorphism(table, phi, "phi")
        _check_endomorphism(table, psi, "psi")
        return FiniteGroupTable(table, phi, psi, identity, inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]


def brute_force_abelian_r(
    phi: IntMat, psi: IntMat, budget: int = DEFAULT_CELL_BUDGET
) -> int:
    """Class count on Z^d by union-find over the quotient (Z/N)^d.

    N = |det(psi - phi)| annihilates the cokernel of the difference (it is a
    multiple of every invariant factor), so classes of the quotient biject
    with classes of Z^d; the count equals |coker(psi - phi)|.
    """
    if not (phi.is_integral and psi.is_integral):
        raise NonIntegralMatrix("the brute-force oracle needs integer matrices")
    delta = psi - phi
    n = det(delta)
    if n == 0:
        raise SingularDifference("det(psi - phi) = 0")
    modulus = abs(int(n))
    d = delta.rows
    cells = modulus**d
    if cells > budget:
        raise BudgetExceeded(f"{cells} cells exceed budget {budget}")
    if modulus == 1:
        return 1
    moves = np.array(
        [[int(delta.entry(i, j)) % modulus for i in range(d)] for j in range(d)],
        dtype=np.int64,
    )
    return _kernels.abelian_orbit_count(moves, modulus)


def brute_force_finite_group_r(
    table: FiniteGroupTable, generators: np.ndarray | None = None
) -> int:
    """Class count of x ~ phi(g)^-1 x psi(g) by union-find over the table.

    Moves compose (the move for g followed by the move for h is the move for
    hg), so merging over any generating set suffices; the default uses every
    element.
    """
    return _kernels.table_orbit_count(
        table.table, table.inv, table.phi, table.psi, generators
    )


# -- Heisenberg-style class-2 test groups ----------------------------------------

MAX_HEISENBERG_MODULUS = 11


def _heis_encode(a, b, c, q):
    return (a * q + b) * q + c


def _heis_mul(u, v, q):
    """Componentwise product of coordinate triples (arrays or ints):
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')."""
    return ((u[0] + v[0]) % q, (u[1] + v[1]) % q, (u[2] + v[2] + u[0] * v[1]) % q)


def _heis_endo_array(mat: IntMat, q: int) -> np.ndarray:
    """Index array of the candidate endomorphism induced by a 2x2 matrix on
    the abelianization; the center scales by the determinant."""
    al, be = int(mat.entry(0, 0)) % q, int(mat.entry(0, 1)) % q
    ga, de = int(mat.entry(1, 0)) % q, int(mat.entry(1, 1)) % q
    detm = (al * de - be * ga) % q
    fx, fy, fz = (al, ga, 0), (be, de, 0), (0, 0, detm)

    def powers(u):
        out = [(0, 0, 0)]
        for _ in range(q - 1):
            out.append(_heis_mul(out[-1], u, q))
        return np.array(out, dtype=np.int64)

    px, py, pz = powers(fx), powers(fy), powers(fz)
    idx = np.arange(q**3)
    a, b, c = idx // (q * q), (idx // q) % q, idx % q
    # normal form: the element with coordinates (a,b,c) is x^a y^b z^(c-ab)
    e = (c - a * b) % q
    u = (px[a, 0], px[a, 1], px[a, 2])
    v = (py[b, 0], py[b, 1], py[b, 2])
    w = (pz[e, 0], pz[e, 1], pz[e, 2])
    uv = _heis_mul(u, v, q)
    uvw = _heis_mul(uv, w, q)
    return _heis_encode(uvw[0], uvw[1], uvw[2], q).astype(np.int64)


def heisenberg_quotient(q: int, mphi: IntMat, mpsi: IntMat) -> FiniteGroupTable:
    """Upper unitriangular 3x3 matrices over Z/q with the endomorphism pair
    induced by the given abelianization matrices.

    The induced maps are checked exhaustively; a pair that does not extend
    to the quotient raises NotAHomomorphism (this can only happen for q = 2,
    where the quotient is not relatively free).
    """
    if q < 2 or q > MAX_HEISENBERG_MODULUS:
        raise BudgetExceeded(f"modulus {q} outside the supported range 2..11")
    if not (mphi.is_integral and mpsi.is_integral):
        raise NonIntegralMatrix("abelianization matrices must be integral")
    if not (mphi.rows == mphi.cols == 2 and mpsi.rows == mpsi.cols == 2):
        raise InvalidTable("abelianization matrices must be 2x2")
    m = q**3
    idx = np.arange(m)
    a, b, c = idx // (q * q), (idx // q) % q, idx % q
    prod = _heis_mul(
        (a[:, None], b[:, None], c[:, None]), (a[None, :], b[None, :], c[None, :]), q
    )
    table = _heis_encode(prod[0], prod[1], prod[2], q).astype(np.int64)
    endos = []
    for name, mat in (("phi", mphi), ("psi", mpsi)):
        f = _heis_endo_array(mat, q)
        if not np.array_equal(f[table], table[f[:, None], f[None, :]]):
            raise NotAHomomorphism(
                f"{name} matrix does not induce an endomorphism mod {q}"
            )
        endos.append(f)
    return FiniteGroupTable.build(table, endos[0], endos[1])
