"""Union-find kernels for the brute-force oracles.

The merge loops are the only hot spots in the package (everything else is
arbitrary-precision arithmetic, which a JIT cannot express).  One algorithm
body is written in JIT-compatible style and served two ways: compiled with
numba (default) or interpreted over the same numpy arrays.  Selection is via
the REIDZETA_BACKEND environment variable ("numba" or "python"); the numba
versions are compiled lazily on first use.

Union-find itself is inherently sequential, so the fallback keeps the loops
in plain Python rather than pretending to vectorize them.
"""

from __future__ import annotations

import os

import numpy as np

_BACKEND_ENV = "REIDZETA_BACKEND"
_jitted: dict[str, object] = {}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def active_backend() -> str:
    """Resolve the kernel backend: explicit env choice, else numba if present."""
    choice = os.environ.get(_BACKEND_ENV, "").strip().lower()
    if choice in ("python", "numpy"):
        return "python"
    if choice == "numba":
        if not _numba_available():
            raise RuntimeError(f"{_BACKEND_ENV}=numba but numba is not importable")
        return "numba"
    if choice:
        raise RuntimeError(f"{_BACKEND_ENV} must be 'numba' or 'python', got {choice!r}")
    return "numba" if _numba_available() else "python"


def abelian_orbit_count_impl(moves: np.ndarray, modulus: int, parent: np.ndarray) -> int:
    """Count union-find classes of cells in (Z/modulus)^d under x ~ x + move.

    moves: (k, d) int64, entries reduced mod modulus; parent: arange(modulus**d).
    Cells are mixed-radix encoded, least significant coordinate first.
    """
    k = moves.shape[0]
    d = moves.shape[1]
    m = parent.shape[0]
    for t in range(k):
        for x in range(m):
            y = 0
            base = 1
            rem = x
            for j in range(d):
                cj = rem % modulus
                rem //= modulus
                y += ((cj + moves[t, j]) % modulus) * base
                base *= modulus
            rx = x
            while parent[rx] != rx:
                parent[rx] = parent[parent[rx]]
                rx = parent[rx]
            ry = y
            while parent[ry] != ry:
                parent[ry] = parent[parent[ry]]
                ry = parent[ry]
            if rx < ry:
                parent[ry] = rx
            elif ry < rx:
                parent[rx] = ry
    count = 0
    for x in range(m):
        if parent[x] == x:
            count += 1
    return count


def table_orbit_count_impl(
    table: np.ndarray,
    inv: np.ndarray,
    phi: np.ndarray,
    psi: np.ndarray,
    gens: np.ndarray,
    parent: np.ndarray,
) -> int:
    """Count classes of x ~ phi(g)^-1 * x * psi(g) over the listed generators."""
    m = parent.shape[0]
    for gi in range(gens.shape[0]):
        g = gens[gi]
        a = inv[phi[g]]
        b = psi[g]
        for x in range(m):
            y = table[table[a, x], b]
            rx = x
            while parent[rx] != rx:
                parent[rx] = parent[parent[rx]]
                rx = parent[rx]
            ry = y
            while parent[ry] != ry:
                parent[ry] = parent[parent[ry]]
                ry = parent[ry]
            if rx < ry:
                parent[ry] = rx
            elif ry < rx:
                parent[rx] = ry
    count = 0
    for x in range(m):
        if parent[x] == x:
            count += 1
    return count


def _get_jitted(name: str):
    if name not in _jitted:
        from numba import njit

        impl = {"abelian": abelian_orbit_count_impl, "table": table_orbit_count_impl}
        _jitted[name] = njit(cache=True)(impl[name])
    return _jitted[name]


def abelian_orbit_count(moves: np.ndarray, modulus: int) -> int:
    parent = np.arange(modulus ** moves.shape[1], dtype=np.int64)
    moves = np.ascontiguousarray(np.mod(moves, modulus), dtype=np.int64)
    if active_backend() == "numba":
        return int(_get_jitted("abelian")(moves, modulus, parent))
    return abelian_orbit_count_impl(moves, modulus, parent)


def table_orbit_count(
    table: np.ndarray,
    inv: np.ndarray,
    phi: np.ndarray,
    psi: np.ndarray,
    gens: np.ndarray | None = None,
) -> int:
    m = table.shape[0]
    parent = np.arange(m, dtype=np.int64)
    if gens is None:
        gens = np.arange(m, dtype=np.int64)
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    if active_backend() == "numba":
        return int(_get_jitted("table")(table, inv, phi, psi, gens, parent))
    return table_orbit_count_impl(table, inv, phi, psi, gens, parent)
