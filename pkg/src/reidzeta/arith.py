"""Exact arbitrary-precision rational arithmetic and integer-matrix algorithms.

Rationals are `fractions.Fraction` (aliased BigRat): always normalized, with
positive denominator, which is exactly the invariant the rest of the package
relies on.  Matrices are immutable tuples of Fraction rows.  Everything here
is a pure function; no shared mutable state.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import (
    NonIntegralMatrix,
    NonSquare,
    SizeLimitExceeded,
    Unsupported,
    ZeroArgument,
)

BigRat = Fraction

#: Default cap on the bit length of any matrix entry (numerator or
#: denominator).  Operations fail fast instead of thrashing on blow-up.
DEFAULT_BIT_LIMIT = 1 << 20

_BIT_LIMIT_ENV = "REIDZETA_BIT_LIMIT"


def bit_limit() -> int:
    """Active entry-size bound in bits; REIDZETA_BIT_LIMIT overrides."""
    raw = os.environ.get(_BIT_LIMIT_ENV)
    if raw is None:
        return DEFAULT_BIT_LIMIT
    try:
        value = int(raw)
    except ValueError as exc:
        raise Unsupported(f"{_BIT_LIMIT_ENV} must be an integer, got {raw!r}") from exc
    if value < 8:
        raise Unsupported(f"{_BIT_LIMIT_ENV} must be at least 8, got {value}")
    return value


def _guard(q: Fraction) -> Fraction:
    limit = bit_limit()
    if q.numerator.bit_length() > limit or q.denominator.bit_length() > limit:
        raise SizeLimitExceeded(
            f"entry exceeds {limit} bits; raise {_BIT_LIMIT_ENV} if intended"
        )
    return q


# -- primality ----------------------------------------------------------------

_TRIAL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97,
)

# Witness set proven deterministic for n < 3.317e24 (Sorenson-Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_VALID_BELOW = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic primality test for n below 3.317e24.

    Trial division by small primes first, then Miller-Rabin with a fixed
    witness set.  Larger inputs raise Unsupported rather than returning a
    probabilistic answer.
    """
    if n < 2:
        return False
    for p in _TRIAL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n >= _MR_VALID_BELOW:
        raise Unsupported(f"primality test limited to n < {_MR_VALID_BELOW}")
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


# -- p-adic valuations --------------------------------------------------------

@dataclass(frozen=True)
class PadicVal:
    """Additive p-adic valuation; `value is None` encodes +infinity.

    The infinite marker is reserved for the zero element.
    """

    value: int | None

    @staticmethod
    def finite(v: int) -> "PadicVal":
        return PadicVal(int(v))

    @staticmethod
    def infinite() -> "PadicVal":
        return PadicVal(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: "PadicVal") -> "PadicVal":
        if self.is_infinite or other.is_infinite:
            return PadicVal.infinite()
        return PadicVal(self.value + other.value)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else str(self.value)


def int_valuation(n: int, p: int) -> int:
    """Largest e with p^e dividing n, by repeated division; n must be nonzero."""
    if n == 0:
        raise ZeroArgument("valuation of zero requested without +inf convention")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q: int | Fraction, p: int, zero_to_infinity: bool = False) -> PadicVal:
    """v_p(q) with |q|_p = p^(-v); v = v_p(numerator) - v_p(denominator).

    Examples:
        >>> padic_valuation(Fraction(6), 3).value
        1
        >>> padic_valuation(Fraction(1, 5), 5).value
        -1
    """
    _require_prime(p)
    q = Fraction(q)
    if q == 0:
        if zero_to_infinity:
            return PadicVal.infinite()
        raise ZeroArgument("valuation of zero requested without +inf convention")
    return PadicVal(int_valuation(q.numerator, p) - int_valuation(q.denominator, p))


def padic_abs(q: int | Fraction, p: int) -> Fraction:
    """|q|_p as an exact rational power of p; |0|_p = 0."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    v = padic_valuation(q, p).value
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


# -- integer factorization (plumbing for root finding and adelic checks) -------

def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in itertools.count(1):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| (n nonzero) as {prime: exponent}."""
    if n == 0:
        raise ZeroArgument("cannot factorize zero")
    n = abs(n)
    out: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(out.items()))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of |n|."""
    fac = factorize(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def adelic_product(q: int | Fraction) -> Fraction:
    """|q|_inf * prod_p |q|_p over all primes dividing numerator or denominator.

    Equals 1 exactly for every nonzero rational (the product formula).
    """
    q = Fraction(q)
    if q == 0:
        raise ZeroArgument("adelic product of zero")
    result = abs(q)
    for p in set(factorize(q.numerator)) | set(factorize(q.denominator)):
        result *= padic_abs(q, p)
    return result


# -- matrices -----------------------------------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"matrix entries must be int, str or Fraction, got {type(x)!r}")


@dataclass(frozen=True)
class IntMat:
    """Immutable rectangular matrix with exact rational entries.

    The global convention: endomorphisms act on column vectors from the left.
    Construction enforces the entry-size guard.
    """

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(self.entries[0])
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged rows in matrix")
            for x in row:
                _guard(x)

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "IntMat":
        return IntMat(tuple(tuple(_as_fraction(x) for x in row) for row in rows))

    @staticmethod
    def identity(d: int) -> "IntMat":
        return IntMat(
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(d))
                for i in range(d)
            )
        )

    @staticmethod
    def zeros(r: int, c: int) -> "IntMat":
        return IntMat(tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def transpose(self) -> "IntMat":
        return IntMat(tuple(zip(*self.entries)))

    def __add__(self, other: "IntMat") -> "IntMat":
        self._same_shape(other)
        return IntMat(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "IntMat") -> "IntMat":
        self._same_shape(other)
        return IntMat(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __neg__(self) -> "IntMat":
        return IntMat(tuple(tuple(-a for a in row) for row in self.entries))

    def __mul__(self, other):
        if isinstance(other, IntMat):
            if self.cols != other.rows:
                raise NonSquare(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            cols = other.transpose().entries
            return IntMat(
                tuple(
                    tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                    for row in self.entries
                )
            )
        if isinstance(other, (int, Fraction)):
            s = Fraction(other)
            return IntMat(tuple(tuple(a * s for a in row) for row in self.entries))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def _same_shape(self, other: "IntMat") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise NonSquare(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def mat_from_columns(cols: Sequence[Sequence[Fraction]]) -> IntMat:
    return IntMat.from_rows(list(zip(*cols)))


def trace(m: IntMat) -> Fraction:
    if not m.is_square:
        raise NonSquare("trace of a rectangular matrix")
    return sum((m.entries[i][i] for i in range(m.rows)), Fraction(0))


def mat_pow(m: IntMat, n: int) -> IntMat:
    """Exact n-th power by binary exponentiation, n >= 1."""
    if not m.is_square:
        raise NonSquare("power of a rectangular matrix")
    if n < 1:
        raise ValueError(f"exponent must be >= 1, got {n}")
    result = None
    base = m
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _denominator_lcm(m: IntMat) -> int:
    out = 1
    for row in m.entries:
        for x in row:
            out = lcm(out, x.denominator)
    return out


def _bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix; mutates a."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(m: IntMat) -> Fraction:
    """Exact determinant; denominators are cleared first so the elimination
    itself runs on integers."""
    if not m.is_square:
        raise NonSquare("determinant of a rectangular matrix")
    scale = _denominator_lcm(m)
    a = [[int(x * scale) for x in row] for row in m.entries]
    d = _bareiss_det(a)
    return Fraction(d, scale**m.rows)


def char_poly(m: IntMat) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of det(X*I - M); monic of degree d.

    Faddeev-LeVerrier recursion; all divisions are by integers, exact over Q.
    """
    if not m.is_square:
        raise NonSquare("characteristic polynomial of a rectangular matrix")
    d = m.rows
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    n_mat = m
    c = -trace(n_mat)
    coeffs[d - 1] = c
    for k in range(2, d + 1):
        n_mat = m * (n_mat + c * IntMat.identity(d))
        c = -trace(n_mat) / k
        coeffs[d - k] = c
    return tuple(coeffs)


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def mat_inverse(m: IntMat) -> IntMat:
    """Exact inverse of a nonsingular square matrix."""
    if not m.is_square:
        raise NonSquare("inverse of a rectangular matrix")
    d = det(m)
    if d == 0:
        raise ZeroArgument("matrix is singular")
    sol = solve_columns(m, IntMat.identity(m.rows))
    return sol


# -- Smith normal form ---------------------------------------------------------

def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a, dst, src, q):
    # row_dst += q * row_src
    a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]


def _add_col(a, dst, src, q):
    for row in a:
        row[dst] += q * row[src]


def _scale_row(a, i, s):
    a[i] = [s * x for x in a[i]]


def _min_pivot(a, t):
    """Smallest nonzero |entry| in the trailing block, row-major scan order."""
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            v = abs(a[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return best


def smith_normal_form(m: IntMat) -> tuple[IntMat, IntMat, IntMat]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D diagonal with
    the divisibility chain d1 | d2 | ... and nonnegative entries.

    Pivoting is deterministic: smallest nonzero absolute value, scanning the
    trailing block row-major, so U and V are reproducible.
    """
    if not m.is_integral:
        raise NonIntegralMatrix("Smith normal form needs integer entries")
    r, c = m.rows, m.cols
    a = [[int(x) for x in row] for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    limit = bit_limit()

    def guard():
        for row in a:
            for x in row:
                if x.bit_length() > limit:
                    raise SizeLimitExceeded(
                        f"SNF entry exceeds {limit} bits; raise {_BIT_LIMIT_ENV}"
                    )

    t = 0
    while t < min(r, c):
        found = _min_pivot(a, t)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            _swap_rows(a, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(a, t, pj)
            _swap_cols(v, t, pj)
        while True:
            # clear column t; a new smaller remainder becomes the pivot
            dirty = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    _add_row(a, i, t, -q)
                    _add_row(u, i, t, -q)
                    if a[i][t] != 0:
                        _swap_rows(a, t, i)
                        _swap_rows(u, t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    _add_col(a, j, t, -q)
                    _add_col(v, j, t, -q)
                    if a[t][j] != 0:
                        _swap_cols(a, t, j)
                        _swap_cols(v, t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the whole trailing block for the chain
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(a, t, offender, 1)
            _add_row(u, t, offender, 1)
            guard()
        t += 1

    for i in range(min(r, c)):
        if a[i][i] < 0:
            _scale_row(a, i, -1)
            _scale_row(u, i, -1)

    return (
        IntMat.from_rows(u),
        IntMat.from_rows(a),
        IntMat.from_rows(v),
    )


# -- exact linear solving (plumbing for eigenspace work) -----------------------

def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(nrows):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rows, pivots


def nullspace(m: IntMat) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel (column vectors), from the RREF free columns."""
    rows, pivots = rref([list(r) for r in m.entries])
    ncols = m.cols
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        vec = [Fraction(0)] * ncols
        vec[j] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][j]
        basis.append(tuple(vec))
    return basis


def solve_columns(a: IntMat, w: IntMat) -> IntMat:
    """Solve A*C = W for C where A has full column rank; exact.

    Raises ValueError when the system is inconsistent or rank-deficient.
    """
    if a.rows != w.rows:
        raise NonSquare("row counts differ in solve")
    aug = [list(ra) + list(rw) for ra, rw in zip(a.entries, w.entries)]
    rows, pivots = rref(aug)
    m = a.cols
    if pivots != list(range(m)):
        raise ValueError("system is rank-deficient or inconsistent")
    sol = [rows[i][m:] for i in range(m)]
    return IntMat.from_rows(sol)
