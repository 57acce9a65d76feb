"""Dense linear algebra over prime fields.

Matrices are numpy ``int64`` arrays with entries reduced to ``[0, p)``.
Pivot choice is deterministic (first nonzero entry), so bases returned by
these helpers are reproducible across runs.
"""

from __future__ import annotations

import numpy as np


def as_matrix(rows, p: int, ncols: int | None = None) -> np.ndarray:
    m = np.asarray(rows, dtype=np.int64)
    if m.size == 0:
        return np.zeros((0, ncols or 0), dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return m % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` over F_p.

    Returns the nonzero rows of the reduced matrix and the pivot columns.
    """
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: np.ndarray, p: int) -> int:
    if np.size(m) == 0:
        return 0
    return len(rref(m, p)[1])


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : m @ x = 0}``."""
    m = np.asarray(m, dtype=np.int64)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref(m, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = (-r[row, f]) % p
    return basis


def row_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis of the row space of ``m``."""
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return np.zeros((0, m.shape[1] if m.ndim == 2 else 0), dtype=np.int64)
    return rref(m, p)[0]


def in_row_space(v, basis: np.ndarray, p: int) -> bool:
    v = np.asarray(v, dtype=np.int64) % p
    if basis.shape[0] == 0:
        return not v.any()
    return rank(np.vstack([basis, v]), p) == rank(basis, p)


def solve_coordinates(v, basis: np.ndarray, p: int) -> np.ndarray | None:
    """Coordinates ``c`` with ``c @ basis == v``, or ``None`` if ``v`` is outside the span.

    ``basis`` must have independent rows.
    """
    v = np.asarray(v, dtype=np.int64) % p
    k = basis.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    aug = np.hstack([basis.T % p, v.reshape(-1, 1)])
    r, piv = rref(aug, p)
    if k in piv:
        return None
    c = np.zeros(k, dtype=np.int64)
    for row, pc in enumerate(piv):
        c[pc] = r[row, k]
    return c


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    r, piv = rref(np.hstack([m % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return r[:, n:]


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def gl_order(d: int, p: int) -> int:
    out = 1
    for i in range(d):
        out *= p**d - p**i
    return out
