"""Brute-force automorphism groups with characteristic-chain pruning.

Images of pc generators are chosen from the last generator upwards. A
relation ``g_i^p = w`` or ``[g_j, g_i] = w`` only involves generators of
index ``>= i``, so it can be checked the moment ``g_i`` receives its image.

With a characteristic chain the presentation is first re-based on a pc
sequence running through the chain terms. An automorphism then maps each
layer ``A/B`` onto itself, so the image of a layer generator must lie in
``A`` and the layer coordinates of all images in a layer must be linearly
independent. Without a chain, partial maps are instead required to be
injective on each tail ``<g_i, ..., g_n>``.

``|Aut(G)|`` is computed as a product of orbit lengths along the stabilizer
chain ``Stab(g_1..g_n) <= Stab(g_2..g_n) <= ... <= Aut(G)``.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from .pcgroup import (
    NormalForm,
    PcPresentation,
    Section,
    induced_presentation,
    subgroup_closure,
)
from .series import Chain

log = logging.getLogger(__name__)

DEFAULT_TUPLE_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GenMap:
    """Images of the pc generators under a candidate homomorphism."""

    images: tuple

    def apply(self, G: PcPresentation, x: NormalForm) -> NormalForm:
        return G.evaluate(self.images, x)

    def compose(self, G: PcPresentation, other: "GenMap") -> "GenMap":
        """``self`` followed by ``other``."""
        return GenMap(tuple(other.apply(G, y) for y in self.images))


def identity_map(G: PcPresentation) -> GenMap:
    return GenMap(tuple(G.generator(i) for i in range(G.n)))


def relations_hold(G: PcPresentation, H: PcPresentation, images: Sequence[NormalForm]) -> bool:
    """Whether ``g_i -> images[i]`` respects every relation of ``G`` inside ``H``."""
    for kind, idx, rhs in G.relations():
        if kind == "pow":
            (i,) = idx
            lhs = H.power(images[i], G.p)
        else:
            j, i = idx
            lhs = H.commutator(images[j], images[i])
        if lhs != H.evaluate(images, rhs):
            return False
    return True


def verify_automorphism(G: PcPresentation, m: GenMap) -> bool:
    if len(m.images) != G.n or not relations_hold(G, G, m.images):
        return False
    return subgroup_closure(G, m.images).order == G.order


def map_order(G: PcPresentation, m: GenMap, limit: int = 10**6) -> int:
    ident = identity_map(G)
    cur = m
    k = 1
    while cur != ident:
        cur = cur.compose(G, m)
        k += 1
        if k > limit:
            raise RuntimeError("map order exceeds limit")
    return k


def generated_group_order(G: PcPresentation, gens: Sequence[GenMap], limit: int = 10**6) -> int:
    """Order of the group generated by automorphisms ``gens`` (by closure)."""
    ident = identity_map(G)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a.compose(G, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        if len(seen) > limit:
            raise RuntimeError("automorphism closure exceeds limit")
        frontier = nxt
    return len(seen)


# ----------------------------------------------------------------------------
# layered presentations


@dataclass
class Layered:
    """A presentation re-based on a chain, with the layer of each generator."""

    source: PcPresentation
    induced: object  # InducedPresentation, or None when no re-basing happened
    pres: PcPresentation
    layer_start: tuple
    layer_end: tuple  # exclusive

    def to_source_map(self, images: Sequence[NormalForm]) -> GenMap:
        """Convert an automorphism of ``pres`` into one of ``source``."""
        if self.induced is None:
            return GenMap(tuple(images))
        ind = self.induced
        G = self.source
        out = []
        for i in range(G.n):
            v = ind.from_source(G.generator(i))
            y = self.pres.evaluate(images, v)
            out.append(ind.to_source(y))
        return GenMap(tuple(out))


def layered(G: PcPresentation, chain: Chain | Sequence) -> Layered:
    terms = list(chain.terms if isinstance(chain, Chain) else chain)
    seq: list[NormalForm] = []
    starts, ends = [], []
    for A, B in zip(terms, terms[1:]):
        sec = Section(G, A, B)
        s = len(seq)
        seq.extend(sec.basis)
        starts.extend([s] * sec.dim)
        ends.extend([len(seq)] * sec.dim)
    ind = induced_presentation(G, seq)
    return Layered(G, ind, ind.presentation, tuple(starts), tuple(ends))


def unlayered(G: PcPresentation) -> Layered:
    return Layered(G, None, G, (0,) * G.n, (G.n,) * G.n)


# ----------------------------------------------------------------------------
# search


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceeded(f"search exceeded {self.limit} candidate images")


def _independent(p: int, rows: list[list[int]]) -> bool:
    # rank test by elimination on small integer lists
    basis: list[list[int]] = []
    for r in rows:
        v = [x % p for x in r]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x)
            if v[lead]:
                f = v[lead]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        if not any(v):
            return False
        lead = next(i for i, x in enumerate(v) if x)
        inv = pow(v[lead], -1, p)
        basis.append([(x * inv) % p for x in v])
    return True


class HomSearch:
    """Search for bijective homomorphisms ``src -> dst`` generator by generator.

    ``pruned=True`` needs both sides layered with matching layer shapes.
    """

    def __init__(self, src: Layered, dst: Layered, pruned: bool, budget: _Budget):
        self.src, self.dst = src, dst
        self.S, self.D = src.pres, dst.pres
        self.pruned = pruned
        self.budget = budget
        S = self.S
        self.n = S.n
        self.p = S.p
        self._orders = {}
        self.src_orders = [S.element_order(S.generator(i)) for i in range(self.n)]
        self.pow_rhs = [S.power_relation(i) for i in range(self.n)]
        self.comm_rhs = [[S.commutator_relation(j, i) for j in range(self.n)] for i in range(self.n)]
        self._cands: dict[int, list] = {}

    def dst_order(self, y: NormalForm) -> int:
        o = self._orders.get(y)
        if o is None:
            o = self.D.element_order(y)
            self._orders[y] = o
        return o

    def candidates(self, i: int) -> list:
        hit = self._cands.get(i)
        if hit is not None:
            return hit
        D, p, n = self.D, self.p, self.n
        want = self.src_orders[i]
        out = []
        if self.pruned:
            s, e = self.dst.layer_start[i], self.dst.layer_end[i]
            for rest in itertools.product(range(p), repeat=n - s):
                if not any(rest[: e - s]):
                    continue
                y = (0,) * s + rest
                if self.dst_order(y) == want:
                    out.append(y)
        else:
            for y in itertools.product(range(p), repeat=n):
                if any(y) and self.dst_order(y) == want:
                    out.append(y)
        self._cands[i] = out
        return out

    def _eval(self, im, exps, start: int) -> NormalForm:
        D = self.D
        res = D.identity
        for j in range(start, self.n):
            e = exps[j]
            if e:
                res = D.mul(res, D.power(im[j], e))
        return res

    def accepts(self, im: list, i: int, y: NormalForm) -> bool:
        """Check all constraints that become decidable once ``g_i -> y``."""
        D, p = self.D, self.p
        if D.power(y, p) != self._eval(im, self.pow_rhs[i], i + 1):
            return False
        crow = self.comm_rhs[i]
        for j in range(i + 1, self.n):
            if D.commutator(im[j], y) != self._eval(im, crow[j], j + 1):
                return False
        if self.pruned:
            s, e = self.dst.layer_start[i], self.dst.layer_end[i]
            rows = [list(y[s:e])] + [list(im[j][s:e]) for j in range(i + 1, self.src.layer_end[i])]
            return _independent(p, rows)
        sub = subgroup_closure(D, [y] + [im[j] for j in range(i + 1, self.n)])
        return sub.log_order == self.n - i

    def extend(self, im: list, i: int) -> list | None:
        """Depth-first completion of images for generators ``i, i-1, ..., 0``."""
        if i < 0:
            return list(im)
        for y in self.candidates(i):
            self.budget.tick()
            if self.accepts(im, i, y):
                im[i] = y
                done = self.extend(im, i - 1)
                if done is not None:
                    return done
        im[i] = None
        return None


@dataclass
class AutResult:
    order: int
    generators: list = field(default_factory=list)
    p: int = 2
    search_nodes: int = 0
    orbit_lengths: list = field(default_factory=list)

    @property
    def is_p_group(self) -> bool:
        k = self.order
        while k % self.p == 0:
            k //= self.p
        return k == 1


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def _aut_search(L: Layered, pruned: bool, budget: _Budget) -> tuple[int, list, list]:
    S = L.pres
    n = S.n
    eng = HomSearch(L, L, pruned, budget)
    base = [S.generator(i) for i in range(n)]
    known: list[GenMap] = []
    order = 1
    orbit_lengths = []
    for k in range(n):
        im = list(base)
        cands = []
        for y in eng.candidates(k):
            im[k] = None
            budget.tick()
            if eng.accepts(im, k, y):
                cands.append(y)
        orbit = {base[k]}
        excluded: set = set()
        queue = [base[k]]

        def close(start_elems, target: set, gens: list[GenMap]):
            todo = list(start_elems)
            while todo:
                z = todo.pop()
                for g in gens:
                    w = g.apply(S, z)
                    if w not in target:
                        target.add(w)
                        todo.append(w)

        close(queue, orbit, known)
        for y in cands:
            if y in orbit or y in excluded:
                continue
            im = list(base)
            im[k] = y
            found = eng.extend(im, k - 1)
            if found is None:
                excluded.add(y)
                close([y], excluded, known)
                continue
            g = GenMap(tuple(found))
            known.append(g)
            orbit.add(y)
            close(list(orbit), orbit, known)
        orbit_lengths.append(len(orbit))
        order *= len(orbit)
    return order, known, orbit_lengths


def brute_force_aut(
    G: PcPresentation,
    chain: Chain | Sequence | None = None,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> AutResult:
    """Exact ``|Aut(G)|``; ``chain`` (characteristic, central, elementary layers) enables pruning."""
    b = _Budget(budget)
    if chain is None:
        L = unlayered(G)
        pruned = False
    else:
        L = layered(G, chain)
        pruned = True
    order, known, orbits = _aut_search(L, pruned, b)
    gens = [L.to_source_map(g.images) for g in known]
    return AutResult(order, gens, G.p, b.nodes, orbits)


def find_isomorphism(G: PcPresentation, H: PcPresentation, budget: int = DEFAULT_TUPLE_BUDGET) -> GenMap | None:
    """An isomorphism ``G -> H`` as images of ``G``'s pc generators, or ``None``."""
    from .series import exponent_p_central

    if G.p != H.p or G.n != H.n:
        return None
    eg, eh = exponent_p_central(G), exponent_p_central(H)
    if eg.factor_exponents() != eh.factor_exponents():
        return None
    LG, LH = layered(G, eg), layered(H, eh)
    eng = HomSearch(LG, LH, True, _Budget(budget))
    found = eng.extend([None] * G.n, G.n - 1)
    if found is None:
        return None
    # convert: G-side generators via LG, images are in LH coordinates
    out = []
    for i in range(G.n):
        v = LG.induced.from_source(G.generator(i))
        y = LH.pres.evaluate(found, v)
        out.append(LH.induced.to_source(y))
    return GenMap(tuple(out))


def is_aut_p_group(G: PcPresentation, budget: int = DEFAULT_TUPLE_BUDGET, iteration_cap: int = 8) -> tuple[bool, int]:
    from .refine import refine_fixpoint

    _, trace = refine_fixpoint(G, iteration_cap=iteration_cap)
    res = brute_force_aut(G, trace.final_chain, budget=budget)
    return res.is_p_group, res.order


# ----------------------------------------------------------------------------
# census

CENSUS_FIELDS = ["group_id", "p", "n", "aut_order", "is_p_group", "search_nodes", "wall_ms", "status"]


@dataclass
class CensusResult:
    p: int | None
    n: int | None
    rows: list = field(default_factory=list)

    @property
    def f_count(self) -> int:
        return len(self.rows)

    @property
    def g_count(self) -> int:
        return sum(1 for r in self.rows if r["is_p_group"] == "true")

    @property
    def failures(self) -> list:
        return [r for r in self.rows if r["status"] != "ok"]


def census_row(entry, budget: int = DEFAULT_TUPLE_BUDGET, iteration_cap: int = 8, timing: bool = False) -> dict:
    """One census row; failures become a status, never an exception."""
    from .refine import refine_fixpoint

    row = {"group_id": entry.group_id, "p": entry.p, "n": entry.n, "aut_order": "", "is_p_group": "",
           "search_nodes": "", "wall_ms": "", "status": "ok"}
    t0 = time.perf_counter()
    try:
        G = entry.load()
        _, trace = refine_fixpoint(G, iteration_cap=iteration_cap)
        res = brute_force_aut(G, trace.final_chain, budget=budget)
        row.update(aut_order=res.order, is_p_group="true" if res.is_p_group else "false", search_nodes=res.search_nodes)
    except BudgetExceeded:
        row["status"] = "budget"
    except Exception as exc:  # recorded per group
        row["status"] = f"error: {type(exc).__name__}: {exc}"
    if timing:
        row["wall_ms"] = int(round((time.perf_counter() - t0) * 1000))
    return row


def _census_job(args):
    entry, budget, cap, timing = args
    return census_row(entry, budget, cap, timing)


def census(entries, jobs: int = 1, budget: int = DEFAULT_TUPLE_BUDGET, iteration_cap: int = 8,
           timing: bool = False) -> CensusResult:
    """Run :func:`census_row` over ``entries``; rows are sorted by group id."""
    from multiprocessing import Pool

    entries = list(entries)
    tasks = [(e, budget, iteration_cap, timing) for e in entries]
    if jobs > 1 and len(tasks) > 1:
        with Pool(jobs) as pool:
            rows = pool.map(_census_job, tasks, chunksize=1)
    else:
        rows = [_census_job(t) for t in tasks]
    rows.sort(key=lambda r: r["group_id"])
    ps = {e.p for e in entries}
    ns = {e.n for e in entries}
    return CensusResult(ps.pop() if len(ps) == 1 else None, ns.pop() if len(ns) == 1 else None, rows)
