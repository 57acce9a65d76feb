"""Refining the exponent-p central filter with radicals of bimap rings."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp
from .bimap import Bimap, adjoint_algebra, centroid, derivation_algebra, enveloping_algebra, ideal_power, jacobson_radical
from .filter import (
    Filter,
    FilterSeed,
    GradedLieRing,
    _leq,
    boundary,
    from_chain,
    generate_filter,
    graded_lie_ring,
)
from .pcgroup import PcPresentation, Subgroup, layer_meet, whole_group
from .series import Chain, exponent_p_central

RINGS = ("adj", "cent", "der")
DEFAULT_ITERATION_CAP = 8


def commutator_bimap(L: GradedLieRing, s, t) -> Bimap:
    s, t = tuple(s), tuple(t)
    u = tuple(a + b for a, b in zip(s, t))
    for pos in (s, t, u):
        if pos not in L.components:
            raise KeyError(f"no homogeneous component at {pos}")
    return Bimap(L.p, L.bracket_tensor(s, t))


def ring_of(b: Bimap, ring: str):
    if ring == "adj":
        return adjoint_algebra(b)
    if ring == "cent":
        return centroid(b)
    if ring == "der":
        return enveloping_algebra(derivation_algebra(b))
    raise ValueError(f"unknown ring {ring!r}")


def _subspace(p: int, blocks: list) -> np.ndarray:
    rows = [r for B in blocks for r in B]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return fp.row_basis(np.array(rows, dtype=np.int64), p)


def radical_flags(b: Bimap, ring: str) -> tuple[list, list, int]:
    """Flags ``U J^k`` and ``J^k V`` (k >= 1) for the radical ``J`` of the ring.

    Returns (U-subspaces, V-subspaces, dim J); each subspace is an echelon
    basis in the coordinates of ``U`` or ``V``. On the ``V`` side the adjoint
    ring acts on columns, the others on rows.
    """
    p = b.p
    dU, dV, _ = b.dims
    A = ring_of(b, ring)
    J = jacobson_radical(A)
    us, vs = [], []
    k = 1
    while True:
        Jk = ideal_power(p, A.m, J.basis, k)
        if not Jk:
            break
        ublocks = [x[:dU, :dU] for x in Jk]
        vblocks = [x[dU : dU + dV, dU : dU + dV] for x in Jk]
        if ring == "adj":
            vblocks = [x.T for x in vblocks]
        us.append(_subspace(p, ublocks))
        vs.append(_subspace(p, vblocks))
        k += 1
    return us, vs, J.dim


def _pairs(L: GradedLieRing) -> list:
    pos = L.positions
    comp = L.components
    out = []
    for s in pos:
        for t in pos:
            if s <= t and tuple(a + b for a, b in zip(s, t)) in comp:
                out.append((s, t))
    return out


@dataclass(frozen=True)
class Candidate:
    position: tuple
    subgroup: Subgroup
    ring: str
    pair: tuple
    radical_dim: int


def radical_candidates(f: Filter, ring: str, L: GradedLieRing | None = None) -> tuple[list, list]:
    """Subgroups strictly between ``phi_s`` and its boundary found by one ring.

    Returns (candidates, skipped pairs).
    """
    if L is None:
        L = graded_lie_ring(f)
    out: list[Candidate] = []
    skipped = []
    seen = set()
    for s, t in _pairs(L):
        b = commutator_bimap(L, s, t)
        if b.is_zero():
            skipped.append(((s, t), ring, "degenerate bimap"))
            continue
        us, vs, jdim = radical_flags(b, ring)
        for pos, flags in ((s, us), (t, vs)):
            sec = L.components[pos]
            top = f(pos)
            for sub in flags:
                if sub.shape[0] == 0 or sub.shape[0] >= sec.dim:
                    continue
                H = sec.preimage(sub)
                if H.log_order >= top.log_order or H.gens in seen:
                    continue
                seen.add(H.gens)
                out.append(Candidate(pos, H, ring, (s, t), jdim))
    return out, skipped


def all_bimaps_degenerate(G: PcPresentation) -> bool:
    """True when every commutator bimap of the exponent-p central filter is zero."""
    L = graded_lie_ring(from_chain(exponent_p_central(G)))
    return all(commutator_bimap(L, s, t).is_zero() for s, t in _pairs(L))


def radical_subgroups(f: Filter, ring: str, L: GradedLieRing | None = None) -> list:
    """``(position, subgroup)`` pairs from the radical flags of ``ring``."""
    cands, _ = radical_candidates(f, ring, L)
    return [(c.position, c.subgroup) for c in cands]


def power_candidates(f: Filter, L: GradedLieRing) -> list:
    """``d phi_s · phi_s^p`` when it lies strictly between ``phi_s`` and ``d phi_s``."""
    out = []
    for s, K in sorted(L.denominators.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        bnd = boundary(f, s)
        if bnd.log_order < K.log_order < f(s).log_order:
            out.append(Candidate(s, K, "power", (s, s), 0))
    return out


# ----------------------------------------------------------------------------
# flattening


@dataclass(frozen=True)
class SeriesStats:
    length: int
    max_factor_exponent: int
    factors: tuple = ()


def flatten(f: Filter) -> Chain:
    """A characteristic chain through every filter value.

    Starting from the exponent-p central series, each layer ``A > B`` is
    split by ``(A ∩ N) B`` for every filter value ``N`` until nothing
    changes. When the values already form a chain this is that chain.
    """
    G = f.group
    chain = list(exponent_p_central(G).terms)
    values = f.distinct_values()
    changed = True
    while changed:
        changed = False
        for N in values:
            new = [chain[0]]
            for A, B in zip(chain, chain[1:]):
                M = layer_meet(G, A, B, N)
                if B.log_order < M.log_order < A.log_order:
                    new.append(M)
                    changed = True
                new.append(B)
            chain = new
    return Chain(tuple(chain), "refined")


def stats_of_chain(chain: Chain) -> SeriesStats:
    ex = tuple(chain.factor_exponents())
    return SeriesStats(len(ex), max(ex, default=0), ex)


def series_stats(f: Filter) -> SeriesStats:
    return stats_of_chain(flatten(f))


# ----------------------------------------------------------------------------
# fixpoint


@dataclass
class RefinementStep:
    iteration: int
    ring: str
    position: tuple
    radical_dim: int
    log_order: int
    adopted_as: tuple


@dataclass
class RefinementTrace:
    steps: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    initial_stats: SeriesStats | None = None
    final_stats: SeriesStats | None = None
    final_chain: Chain | None = None
    iterations: int = 0
    cap_reached: bool = False

    @property
    def rings_used(self) -> list:
        out = []
        for st in self.steps:
            if st.ring not in out:
                out.append(st.ring)
        return [r for r in RINGS + ("power",) if r in out]


def extend_seed(f: Filter, adopted: list) -> FilterSeed:
    """Seed on N^(d+r) for ``r`` adopted subgroups ``(s_j, H_j)``.

    Old nontrivial positions keep their values; for each ``j`` the new axis
    carries ``H_j`` at ``t + e_j`` for every ``t <= s_j``.
    """
    G = f.group
    d, r = f.d, len(adopted)
    pad = (0,) * r
    vals = {(0,) * (d + r): whole_group(G)}
    for s, H in f.values.items():
        vals[s + pad] = H
    for j, (s, H) in enumerate(adopted):
        e = tuple(1 if k == j else 0 for k in range(r))
        for t in list(f.values) + [(0,) * d]:
            if _leq(t, s):
                vals[t + e] = H
    return FilterSeed(G, d + r, vals)


def refine_fixpoint(
    G: PcPresentation,
    iteration_cap: int = DEFAULT_ITERATION_CAP,
    rings: tuple = RINGS,
    powers: bool = True,
) -> tuple[Filter, RefinementTrace]:
    f = from_chain(exponent_p_central(G))
    trace = RefinementTrace()
    trace.initial_stats = series_stats(f)
    for it in range(1, iteration_cap + 1):
        L = graded_lie_ring(f)
        known = {H.gens for H in f.distinct_values()}
        found: list[Candidate] = []
        if powers:
            found += power_candidates(f, L)
        for ring in rings:
            cands, skipped = radical_candidates(f, ring, L)
            found += cands
            trace.skipped += [(it,) + sk for sk in skipped]
        adopted = []
        for c in found:
            if c.subgroup.gens in known:
                continue
            known.add(c.subgroup.gens)
            adopted.append(c)
        if not adopted:
            break
        trace.iterations = it
        seed = extend_seed(f, [(c.position, c.subgroup) for c in adopted])
        for j, c in enumerate(adopted):
            e = tuple(1 if k == j else 0 for k in range(len(adopted)))
            trace.steps.append(
                RefinementStep(it, c.ring, c.position, c.radical_dim, c.subgroup.log_order, c.position + e)
            )
        f = generate_filter(seed)
    else:
        trace.cap_reached = True
    trace.final_chain = flatten(f)
    trace.final_stats = stats_of_chain(trace.final_chain)
    return f, trace
