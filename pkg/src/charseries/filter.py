"""Filters over N^d, boundary filters, and their graded Lie rings.

Positions are tuples in N^d ordered componentwise. A :class:`Filter`
stores the finitely many nonzero positions whose value is nontrivial; every
other nonzero position is trivial and position 0 is the whole group.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .pcgroup import (
    PcPresentation,
    Section,
    Subgroup,
    commutator_subgroup,
    join,
    power_subgroup_mod,
    trivial_subgroup,
    whole_group,
)
from .series import Chain

Position = tuple


class FilterError(ValueError):
    pass


def _leq(s: Position, t: Position) -> bool:
    return all(a <= b for a, b in zip(s, t))


def _add(s: Position, t: Position) -> Position:
    return tuple(a + b for a, b in zip(s, t))


def _sub(s: Position, t: Position) -> Position:
    return tuple(a - b for a, b in zip(s, t))


def unit(d: int, i: int) -> Position:
    return tuple(1 if k == i else 0 for k in range(d))


def zero(d: int) -> Position:
    return (0,) * d


@dataclass(frozen=True)
class FilterSeed:
    """Seed values ``pi`` on a finite downward-closed ``X`` in N^d containing 0."""

    group: PcPresentation = field(repr=False)
    d: int
    values: Mapping  # Position -> Subgroup

    def check(self) -> None:
        X = self.values
        z = zero(self.d)
        if z not in X:
            raise FilterError("seed domain must contain 0")
        for i in range(self.d):
            if unit(self.d, i) not in X:
                raise FilterError("seed domain must generate N^d (missing a unit vector)")
        for s in X:
            if len(s) != self.d or any(c < 0 for c in s):
                raise FilterError(f"bad position {s}")
            for i in range(self.d):
                if s[i] and _sub(s, unit(self.d, i)) not in X:
                    raise FilterError(f"seed domain not downward closed at {s}")
            if not X[s].is_normal():
                raise FilterError(f"seed value at {s} is not normal")
        for s, t in itertools.permutations(X, 2):
            if _leq(s, t) and not X[s].contains_subgroup(X[t]):
                raise FilterError(f"seed is not antitone: {s} <= {t}")


@dataclass
class Filter:
    group: PcPresentation = field(repr=False)
    d: int
    values: dict  # nonzero Position -> nontrivial Subgroup
    seed: FilterSeed | None = None

    def __call__(self, s: Position | int) -> Subgroup:
        s = (s,) if isinstance(s, int) else tuple(s)
        if not any(s):
            return whole_group(self.group)
        v = self.values.get(s)
        return v if v is not None else trivial_subgroup(self.group)

    def positions(self) -> list[Position]:
        return sorted(self.values, key=lambda s: (sum(s), s))

    def distinct_values(self) -> list[Subgroup]:
        seen = {}
        for s in self.positions():
            seen.setdefault(self.values[s].gens, self.values[s])
        return sorted(seen.values(), key=lambda H: (-H.log_order, H.gens))


def from_chain(chain: Chain) -> Filter:
    """The N-filter ``phi_i = chain.terms[i-1]`` (so ``phi_0 = phi_1 = G``)."""
    terms = chain.terms
    G = terms[0].ambient
    for i in range(1, len(terms)):
        for j in range(i, len(terms)):
            target = terms[i + j - 1] if i + j - 1 < len(terms) else trivial_subgroup(G)
            if not target.contains_subgroup(commutator_subgroup(G, terms[i - 1], terms[j - 1])):
                raise FilterError(f"chain violates [phi_{i}, phi_{j}] <= phi_{i + j}")
    values = {(i,): terms[i - 1] for i in range(1, len(terms)) if not terms[i - 1].is_trivial()}
    seed_vals = {(0,): terms[0]}
    seed_vals.update({(i,): terms[i - 1] for i in range(1, len(terms))})
    return Filter(G, 1, values, FilterSeed(G, 1, seed_vals))


def boundary(f: Filter, s: Position) -> Subgroup:
    """``<phi_{s+t} : t != 0>``, which by monotonicity is the join over unit steps."""
    s = tuple(s)
    parts = [f(_add(s, unit(f.d, i))) for i in range(f.d)]
    parts = [H for H in parts if not H.is_trivial()]
    if not parts:
        return trivial_subgroup(f.group)
    return join(f.group, *parts)


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violation: tuple | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_filter_axioms(f: Filter, window: Iterable[Position] | None = None) -> AxiomReport:
    """Check ``[phi_s, phi_t] <= phi_{s+t}`` and antitonicity on a window.

    The default window is every nontrivial position plus each of its unit
    successors, which suffices because values outside are trivial.
    """
    G = f.group
    if window is None:
        pos = set(f.values)
        for s in list(pos):
            for i in range(f.d):
                pos.add(_add(s, unit(f.d, i)))
        for i in range(f.d):
            pos.add(unit(f.d, i))
        window = pos
    window = sorted(set(map(tuple, window)), key=lambda s: (sum(s), s))
    for s in window:
        for t in window:
            if _leq(s, t) and s != t and not f(s).contains_subgroup(f(t)):
                return AxiomReport(False, ("order", s, t), f"phi_{s} does not contain phi_{t}")
    for a, s in enumerate(window):
        A = f(s)
        if A.is_trivial():
            continue
        for t in window[a:]:
            B = f(t)
            if B.is_trivial():
                continue
            C = commutator_subgroup(G, A, B)
            if not f(_add(s, t)).contains_subgroup(C):
                return AxiomReport(False, ("commutator", s, t), f"[phi_{s}, phi_{t}] not in phi_{_add(s, t)}")
    return AxiomReport(True)


# ----------------------------------------------------------------------------
# partitions and generated filters


def partitions(s: Position, X: Iterable[Position]) -> list[tuple]:
    """Multisets of nonzero elements of ``X`` summing to ``s``, each sorted, in sorted order."""
    s = tuple(s)
    parts = sorted({tuple(x) for x in X if any(x) and _leq(x, s)})
    out = []

    def rec(rem, start, acc):
        if not any(rem):
            out.append(tuple(acc))
            return
        for k in range(start, len(parts)):
            x = parts[k]
            if _leq(x, rem):
                acc.append(x)
                rec(_sub(rem, x), k, acc)
                acc.pop()

    rec(s, 0, [])
    if not out and any(s):
        raise FilterError(f"{s} is not in the monoid generated by X")
    return sorted(out)


def left_normed(G: PcPresentation, subgroups: list[Subgroup]) -> Subgroup:
    acc = subgroups[0]
    for H in subgroups[1:]:
        acc = commutator_subgroup(G, acc, H)
        if acc.is_trivial():
            break
    return acc


def generate_filter(seed: FilterSeed, max_degree: int | None = None, check: bool = False) -> Filter:
    """The filter generated by a seed: products over partitions of left-normed commutators.

    Ordered partitions are handled by dynamic programming: writing ``Q_s``
    for the product over all sequences summing to ``s``, and using
    ``[AB, C] = [A, C][B, C]`` for normal subgroups,

        Q_s = pi_s * prod_{a in X, 0 < a < s} [Q_{s-a}, pi_a].

    Positions are explored by increasing degree; a position is skipped when a
    unit predecessor is already trivial, since generated filters are antitone.
    """
    if check:
        seed.check()
    G = seed.group
    d = seed.d
    X = {s: H for s, H in seed.values.items() if any(s) and not H.is_trivial()}
    if max_degree is None:
        max_degree = G.n + 1 + max((sum(s) for s in X), default=0)
    values: dict[Position, Subgroup] = {}
    frontier = [unit(d, i) for i in range(d)]
    degree = 1
    while frontier and degree <= max_degree + G.n:
        nxt: set = set()
        for s in sorted(set(frontier)):
            preds = [_sub(s, unit(d, i)) for i in range(d) if s[i]]
            if any(any(q) and q not in values for q in preds):
                continue
            parts = []
            if s in X:
                parts.append(X[s])
            for a, pa in X.items():
                if a != s and _leq(a, s):
                    rest = _sub(s, a)
                    q = values.get(rest)
                    if q is not None:
                        c = commutator_subgroup(G, q, pa)
                        if not c.is_trivial():
                            parts.append(c)
            if not parts:
                continue
            val = join(G, *parts)
            if val.is_trivial():
                continue
            values[s] = val
            for i in range(d):
                nxt.add(_add(s, unit(d, i)))
        frontier = list(nxt)
        degree += 1
    return Filter(G, d, values, seed)


def generate_filter_multisets(seed: FilterSeed, positions: Iterable[Position]) -> dict:
    """Reference evaluation over sorted multisets (an oracle for small cases)."""
    G = seed.group
    X = {s: H for s, H in seed.values.items()}
    out = {}
    for s in positions:
        prods = []
        for P in partitions(s, X):
            prods.append(left_normed(G, [X[x] for x in P]))
        out[tuple(s)] = join(G, *prods) if prods else trivial_subgroup(G)
    return out


def generate_filter_sequences(seed: FilterSeed, positions: Iterable[Position]) -> dict:
    """Reference evaluation over all ordered partitions (an oracle for small cases)."""
    G = seed.group
    X = {s: H for s, H in seed.values.items()}
    out = {}
    for s in positions:
        prods = []
        for P in partitions(s, X):
            for perm in set(itertools.permutations(P)):
                prods.append(left_normed(G, [X[x] for x in perm]))
        out[tuple(s)] = join(G, *prods) if prods else trivial_subgroup(G)
    return out


# ----------------------------------------------------------------------------
# graded Lie ring


class GradedLieRing:
    """Homogeneous components ``L_s = phi_s / (d phi_s · phi_s^p)`` and their brackets.

    For filters whose boundary already contains p-th powers (such as the
    exponent-p central series) the quotient is ``phi_s / d phi_s``. Dividing
    out p-th powers in general keeps every component an F_p space; the
    bracket remains well defined because ``[x^p, y] = [x, y]^p`` modulo
    the boundary of ``s + t``.
    """

    def __init__(self, f: Filter):
        self.filter = f
        self.group = G = f.group
        self.p = G.p
        self.components: dict[Position, Section] = {}
        self.denominators: dict[Position, Subgroup] = {}
        for s in f.positions():
            top = f(s)
            bnd = boundary(f, s)
            K = power_subgroup_mod(G, top, bnd)
            self.denominators[s] = K
            if K.log_order < top.log_order:
                self.components[s] = Section(G, top, K, check=False)
        self._tensors: dict = {}

    @property
    def positions(self) -> list[Position]:
        return sorted(self.components, key=lambda s: (sum(s), s))

    def dim(self, s: Position) -> int:
        c = self.components.get(tuple(s))
        return c.dim if c is not None else 0

    def bracket_tensor(self, s: Position, t: Position, rng: random.Random | None = None) -> np.ndarray:
        """Structure constants ``T[i, j, k]``: ``[e_i, e_j] = sum_k T[i,j,k] e_k``.

        With ``rng`` the coset representatives are perturbed by random
        elements of the denominators, which must not change the result.
        """
        s, t = tuple(s), tuple(t)
        u = _add(s, t)
        ds, dt, du = self.dim(s), self.dim(t), self.dim(u)
        T = np.zeros((ds, dt, du), dtype=np.int64)
        if not (ds and dt and du):
            return T
        if rng is None and (s, t) in self._tensors:
            return self._tensors[(s, t)]
        G = self.group
        Ls, Lt, Lu = self.components[s], self.components[t], self.components[u]
        xs = list(Ls.basis)
        ys = list(Lt.basis)
        if rng is not None:
            xs = [G.mul(x, self.denominators[s].random_element(rng)) for x in xs]
            ys = [G.mul(y, self.denominators[t].random_element(rng)) for y in ys]
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                c = G.commutator(x, y)
                if c not in self.filter(u):
                    raise FilterError(f"bracket of {s} and {t} leaves phi_{u}")
                T[i, j] = Lu.log(c)
        if rng is None:
            self._tensors[(s, t)] = T
        return T

    def bracket(self, s: Position, x, t: Position, y) -> np.ndarray:
        T = self.bracket_tensor(s, t)
        if T.size == 0:
            return np.zeros(self.dim(_add(tuple(s), tuple(t))), dtype=np.int64)
        return np.einsum("i,j,ijk->k", np.asarray(x), np.asarray(y), T) % self.p

    def nontrivial_pairs(self) -> list[tuple[Position, Position]]:
        pos = self.positions
        out = []
        for s in pos:
            for t in pos:
                if (s, t) <= (t, s) or True:
                    if _add(s, t) in self.components:
                        out.append((s, t))
        return out


def graded_lie_ring(f: Filter) -> GradedLieRing:
    return GradedLieRing(f)
