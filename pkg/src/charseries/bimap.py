"""Bimaps over F_p, their adjoint, centroid and derivation rings, and radicals.

All rings are matrix algebras acting on a direct sum of the spaces
involved, stored as block-diagonal matrices:

* ``Adj`` on ``U + V``: ``diag(f, g)`` with ``(u f) o v = u o (g v)``, where
  ``f`` acts on row vectors from the right and ``g`` on column vectors from
  the left. Ordinary block products stay inside the ring.
* ``Cent`` on ``U + V + W``: ``diag(f, g, h)`` with
  ``(u f) o v = u o (v g) = (u o v) h``, all acting on rows.
* ``Der`` on ``U + V + W``: ``diag(f, g, h)`` with
  ``(u f) o v + u o (v g) = (u o v) h``; a Lie algebra under the commutator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import fp


@dataclass(frozen=True)
class Bimap:
    p: int
    tensor: np.ndarray = field(compare=False)

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=np.int64) % self.p
        if t.ndim != 3:
            raise ValueError("bimap tensor must be 3-dimensional")
        object.__setattr__(self, "tensor", t)

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(self.tensor.shape)

    def __call__(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(u), np.asarray(v), self.tensor) % self.p

    def is_zero(self) -> bool:
        return not self.tensor.any()

    def __eq__(self, other) -> bool:
        return isinstance(other, Bimap) and self.p == other.p and np.array_equal(self.tensor, other.tensor)

    def __hash__(self) -> int:
        return hash((self.p, self.tensor.shape, self.tensor.tobytes()))


def direct_sum(a: Bimap, b: Bimap) -> Bimap:
    (u1, v1, w1), (u2, v2, w2) = a.dims, b.dims
    t = np.zeros((u1 + u2, v1 + v2, w1 + w2), dtype=np.int64)
    t[:u1, :v1, :w1] = a.tensor
    t[u1:, v1:, w1:] = b.tensor
    return Bimap(a.p, t)


# ----------------------------------------------------------------------------
# matrix algebras


class FpAlgebra:
    """Span of ``m x m`` matrices over F_p, with an echelonized basis."""

    def __init__(self, p: int, m: int, matrices, kind: str = "associative", blocks: tuple = ()):
        self.p, self.m, self.kind = p, m, kind
        self.blocks = tuple(blocks)
        mats = [np.asarray(x, dtype=np.int64).reshape(m, m) % p for x in matrices]
        flat = np.array([x.reshape(-1) for x in mats], dtype=np.int64).reshape(len(mats), m * m)
        self._flat = fp.row_basis(flat, p) if len(mats) else np.zeros((0, m * m), dtype=np.int64)
        self.basis = [row.reshape(m, m) for row in self._flat]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def unital(self) -> bool:
        return self.contains(np.eye(self.m, dtype=np.int64))

    def contains(self, x) -> bool:
        return fp.in_row_space(np.asarray(x).reshape(-1), self._flat, self.p)

    def coordinates(self, x) -> np.ndarray | None:
        return fp.solve_coordinates(np.asarray(x).reshape(-1), self._flat, self.p)

    def element(self, coeffs) -> np.ndarray:
        out = np.zeros((self.m, self.m), dtype=np.int64)
        for c, b in zip(coeffs, self.basis):
            out = (out + int(c) * b) % self.p
        return out

    def product(self, x, y) -> np.ndarray:
        if self.kind == "lie":
            return (x @ y - y @ x) % self.p
        return (x @ y) % self.p

    def is_closed(self) -> bool:
        return all(self.contains(self.product(a, b)) for a in self.basis for b in self.basis)

    def block(self, x, k: int) -> np.ndarray:
        lo = sum(self.blocks[:k])
        hi = lo + self.blocks[k]
        return x[lo:hi, lo:hi]

    def __repr__(self) -> str:
        return f"<FpAlgebra {self.kind} dim {self.dim} on F_{self.p}^{self.m}>"


@dataclass
class Ideal:
    parent: FpAlgebra
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_two_sided(self) -> bool:
        A = self.parent
        sub = FpAlgebra(A.p, A.m, self.basis)
        return all(
            sub.contains(A.product(a, x)) and sub.contains(A.product(x, a)) for a in A.basis for x in self.basis
        )

    def power(self, k: int) -> list:
        """Basis of ``J^k``."""
        return ideal_power(self.parent.p, self.parent.m, self.basis, k)

    def nilpotency_index(self) -> int:
        """Least ``k`` with ``J^k = 0``."""
        k = 1
        cur = self.basis
        while cur:
            k += 1
            cur = _span_products(self.parent.p, self.parent.m, cur, self.basis)
        return k


def _span(p: int, m: int, mats) -> list:
    return FpAlgebra(p, m, mats).basis if mats else []


def _span_products(p: int, m: int, xs, ys) -> list:
    return _span(p, m, [(x @ y) % p for x in xs for y in ys])


def ideal_power(p: int, m: int, basis, k: int) -> list:
    cur = list(basis)
    for _ in range(k - 1):
        if not cur:
            break
        cur = _span_products(p, m, cur, basis)
    return cur


# ----------------------------------------------------------------------------
# solution spaces


def _block_diag(blocks) -> np.ndarray:
    m = sum(b.shape[0] for b in blocks)
    out = np.zeros((m, m), dtype=np.int64)
    k = 0
    for b in blocks:
        r = b.shape[0]
        out[k : k + r, k : k + r] = b
        k += r
    return out


def _solve(p: int, equations: list, sizes: list) -> list:
    """Nullspace of a list of linear equations, split into square blocks."""
    nvar = sum(s * s for s in sizes)
    if equations:
        M = np.array(equations, dtype=np.int64) % p
    else:
        M = np.zeros((0, nvar), dtype=np.int64)
    sols = fp.nullspace(M, p)
    out = []
    for row in sols:
        blocks, k = [], 0
        for s in sizes:
            blocks.append(row[k : k + s * s].reshape(s, s))
            k += s * s
        out.append(_block_diag(blocks))
    return out


def adjoint_algebra(b: Bimap) -> FpAlgebra:
    p = b.p
    T = b.tensor
    dU, dV, dW = b.dims
    nf = dU * dU
    eqs = []
    # (e_a f) o e_b = e_a o (g e_b):  sum_i f[a,i] T[i,b,k] - sum_j T[a,j,k] g[j,b] = 0
    for a in range(dU):
        for bb in range(dV):
            for k in range(dW):
                row = [0] * (nf + dV * dV)
                for i in range(dU):
                    row[a * dU + i] += T[i, bb, k]
                for j in range(dV):
                    row[nf + j * dV + bb] -= T[a, j, k]
                eqs.append(row)
    return FpAlgebra(p, dU + dV, _solve(p, eqs, [dU, dV]), "associative", (dU, dV))


def _triple_equations(b: Bimap, derivation: bool) -> list:
    T = b.tensor
    dU, dV, dW = b.dims
    nf, ng = dU * dU, dV * dV
    nvar = nf + ng + dW * dW
    eqs = []
    for a in range(dU):
        for bb in range(dV):
            for k in range(dW):
                lhs_f = [0] * nvar
                for i in range(dU):
                    lhs_f[a * dU + i] += T[i, bb, k]  # (e_a f) o e_b
                lhs_g = [0] * nvar
                for j in range(dV):
                    lhs_g[nf + bb * dV + j] += T[a, j, k]  # e_a o (e_b g)
                rhs_h = [0] * nvar
                for l in range(dW):
                    rhs_h[nf + ng + l * dW + k] += T[a, bb, l]  # (e_a o e_b) h
                if derivation:
                    eqs.append([x + y - z for x, y, z in zip(lhs_f, lhs_g, rhs_h)])
                else:
                    eqs.append([x - y for x, y in zip(lhs_f, lhs_g)])
                    eqs.append([x - z for x, z in zip(lhs_f, rhs_h)])
    return eqs


def centroid(b: Bimap) -> FpAlgebra:
    dU, dV, dW = b.dims
    mats = _solve(b.p, _triple_equations(b, False), [dU, dV, dW])
    return FpAlgebra(b.p, dU + dV + dW, mats, "associative", (dU, dV, dW))


def derivation_algebra(b: Bimap) -> FpAlgebra:
    dU, dV, dW = b.dims
    mats = _solve(b.p, _triple_equations(b, True), [dU, dV, dW])
    return FpAlgebra(b.p, dU + dV + dW, mats, "lie", (dU, dV, dW))


def enveloping_algebra(a: FpAlgebra) -> FpAlgebra:
    """Associative closure of ``a`` with the identity adjoined."""
    p, m = a.p, a.m
    cur = FpAlgebra(p, m, [np.eye(m, dtype=np.int64)] + list(a.basis), "associative", a.blocks)
    while True:
        prods = [(x @ y) % p for x in cur.basis for y in cur.basis]
        nxt = FpAlgebra(p, m, list(cur.basis) + prods, "associative", a.blocks)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def algebra_closure(p: int, m: int, mats, unital: bool = False) -> FpAlgebra:
    """Smallest associative algebra containing ``mats`` (and 1 when ``unital``)."""
    gens = [np.asarray(x, dtype=np.int64) % p for x in mats]
    if unital:
        gens.append(np.eye(m, dtype=np.int64))
    cur = FpAlgebra(p, m, gens) if gens else FpAlgebra(p, m, [])
    while True:
        prods = [(x @ y) % p for x in cur.basis for y in cur.basis]
        nxt = FpAlgebra(p, m, list(cur.basis) + prods)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


# ----------------------------------------------------------------------------
# Jacobson radical


def _trace_form(x: np.ndarray, p: int, i: int) -> int:
    """``(Tr(x~^(p^i)) mod p^(i+1)) / p^i`` for the integer lift ``x~`` of ``x``."""
    mod = p ** (i + 1)
    y = np.array(x, dtype=object) % p
    e = p**i
    acc = np.eye(x.shape[0], dtype=object)
    base = y
    while e:
        if e & 1:
            acc = (acc @ base) % mod
        base = (base @ base) % mod
        e >>= 1
    t = int(np.trace(acc)) % mod
    assert t % (p**i) == 0, "trace form is not divisible as expected"
    return (t // p**i) % p


def jacobson_radical(a: FpAlgebra) -> Ideal:
    """Largest nilpotent ideal of an associative matrix algebra over F_p.

    Iterated trace forms: ``I_{-1} = A`` and
    ``I_i = {x in I_{i-1} : g_i(x y) = 0 for all y in A}`` for
    ``0 <= i <= floor(log_p m)``, where ``g_i`` is the normalized trace of
    the ``p^i``-th power of an integer lift. Each ``g_i`` is additive on
    ``I_{i-1}``, so every step is a linear system.
    """
    if a.kind != "associative":
        raise ValueError("radical needs an associative algebra")
    p, m = a.p, a.m
    cur = list(a.basis)
    i = 0
    while cur and p**i <= m:
        M = np.array([[_trace_form((x @ y) % p, p, i) for y in a.basis] for x in cur], dtype=np.int64)
        null = fp.nullspace(M.T, p) if M.size else np.zeros((0, len(cur)), dtype=np.int64)
        new = []
        for row in null:
            z = np.zeros((m, m), dtype=np.int64)
            for c, x in zip(row, cur):
                z = (z + int(c) * x) % p
            new.append(z)
        cur = _span(p, m, new)
        i += 1
    return Ideal(a, cur)


def quotient_radical_dim(a: FpAlgebra, J: Ideal) -> int:
    """Dimension of the radical of ``a / J`` (zero when ``J`` is the radical).

    ``B = a / J`` acts faithfully by left multiplication on ``B + F_p 1``,
    and the radical of that matrix image is computed as above.
    """
    p = a.p
    nJ = J.dim
    rows = [x.reshape(-1) for x in J.basis]
    comp = []
    for x in a.basis:
        cand = np.array(rows + [x.reshape(-1)], dtype=np.int64)
        if fp.rank(cand, p) > len(rows):
            rows.append(x.reshape(-1))
            comp.append(x)
    r = len(comp)
    if r == 0:
        return 0
    full = np.array(rows, dtype=np.int64)

    def qc(x):
        return fp.solve_coordinates(x.reshape(-1), full, p)[nJ:]

    mats = []
    for x in comp:
        cols = [qc((x @ y) % p) for y in comp] + [qc(x)]
        m = np.zeros((r + 1, r + 1), dtype=np.int64)
        m[:r, :] = np.array(cols, dtype=np.int64).T
        mats.append(m % p)
    return jacobson_radical(FpAlgebra(p, r + 1, mats)).dim


# ----------------------------------------------------------------------------
# brute-force oracles (small fields and dimensions only)


def all_subspaces(dim: int, p: int):
    """Every subspace of F_p^dim, as echelon bases (numpy rows)."""
    for k in range(dim + 1):
        for piv in itertools.combinations(range(dim), k):
            free = [(r, c) for r in range(k) for c in range(piv[r] + 1, dim) if c not in piv]
            for vals in itertools.product(range(p), repeat=len(free)):
                m = np.zeros((k, dim), dtype=np.int64)
                for r in range(k):
                    m[r, piv[r]] = 1
                for (r, c), v in zip(free, vals):
                    m[r, c] = v
                yield m


def brute_force_radical(a: FpAlgebra) -> list:
    """Largest nilpotent two-sided ideal, by enumerating all subspaces of ``a``."""
    p, m = a.p, a.m
    best: list = []
    for sub in all_subspaces(a.dim, p):
        mats = [a.element(row) for row in sub]
        if len(mats) <= len(best):
            continue
        I = Ideal(a, mats)
        if not I.is_two_sided():
            continue
        if ideal_power(p, m, mats, a.dim + 1):
            continue
        best = mats
    return best


def brute_force_solutions(b: Bimap, ring: str) -> int:
    """Count the solution tuples of the defining identities by enumeration."""
    p = b.p
    T = b.tensor
    dU, dV, dW = b.dims
    sizes = [dU, dV] if ring == "adj" else [dU, dV, dW]
    nvar = sum(s * s for s in sizes)
    count = 0
    us = list(itertools.product(range(p), repeat=dU))
    vs = list(itertools.product(range(p), repeat=dV))
    basis_u = np.eye(dU, dtype=np.int64)
    basis_v = np.eye(dV, dtype=np.int64)
    for vals in itertools.product(range(p), repeat=nvar):
        vals = np.array(vals, dtype=np.int64)
        blocks, k = [], 0
        for s in sizes:
            blocks.append(vals[k : k + s * s].reshape(s, s))
            k += s * s
        ok = True
        for u in basis_u:
            for v in basis_v:
                uv = np.einsum("i,j,ijk->k", u, v, T) % p
                if ring == "adj":
                    f, g = blocks
                    lhs = np.einsum("i,j,ijk->k", (u @ f) % p, v, T) % p
                    rhs = np.einsum("i,j,ijk->k", u, (g @ v) % p, T) % p
                    ok = np.array_equal(lhs, rhs)
                else:
                    f, g, h = blocks
                    x = np.einsum("i,j,ijk->k", (u @ f) % p, v, T) % p
                    y = np.einsum("i,j,ijk->k", u, (v @ g) % p, T) % p
                    z = (uv @ h) % p
                    if ring == "cent":
                        ok = np.array_equal(x, y) and np.array_equal(x, z)
                    else:
                        ok = np.array_equal((x + y) % p, z)
                if not ok:
                    break
            if not ok:
                break
        if ok:
            count += 1
    del us, vs
    return count
