"""Characteristic series and numerical invariants of p-groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp
from .pcgroup import (
    PcPresentation,
    Subgroup,
    commutator_subgroup,
    normal_closure,
    power_subgroup_mod,
    subgroup_closure,
    whole_group,
    Section,
)


@dataclass(frozen=True)
class Chain:
    """A strictly descending chain of normal subgroups from ``G`` down to 1."""

    terms: tuple
    kind: str = "refined"

    def __post_init__(self):
        if not self.terms or not self.terms[-1].is_trivial():
            raise ValueError("a chain must end at the trivial subgroup")
        for a, b in zip(self.terms, self.terms[1:]):
            if not b.log_order < a.log_order:
                raise ValueError("chain is not strictly descending")

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def factor_exponents(self) -> list[int]:
        return [a.log_order - b.log_order for a, b in zip(self.terms, self.terms[1:])]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]


def _dedup(terms: list[Subgroup]) -> tuple:
    out = []
    for t in terms:
        if not out or out[-1] != t:
            out.append(t)
    return tuple(out)


def lower_central(G: PcPresentation) -> Chain:
    full = whole_group(G)
    terms = [full]
    while not terms[-1].is_trivial():
        nxt = commutator_subgroup(G, terms[-1], full)
        if nxt == terms[-1]:
            raise ValueError("lower central series does not terminate; presentation is not nilpotent")
        terms.append(nxt)
    return Chain(_dedup(terms), "lower_central")


def exponent_p_central(G: PcPresentation) -> Chain:
    full = whole_group(G)
    terms = [full]
    while not terms[-1].is_trivial():
        cur = terms[-1]
        comm = commutator_subgroup(G, cur, full)
        nxt = power_subgroup_mod(G, cur, comm)
        if nxt == cur:
            raise ValueError("exponent-p central series does not terminate")
        terms.append(nxt)
    return Chain(_dedup(terms), "exponent_p_central")


def frattini(G: PcPresentation) -> Subgroup:
    eta = exponent_p_central(G)
    return eta.terms[1] if len(eta.terms) > 1 else eta.terms[0]


def center(G: PcPresentation) -> Subgroup:
    """``Z(G)`` without element enumeration.

    Walks down the exponent-p central series. If every element of ``C``
    commutes with ``G`` modulo ``eta_j``, then ``a -> ([a, g_i] mod eta_{j+1})_i``
    is a homomorphism from ``C`` into an elementary abelian group, and its
    kernel is the next ``C``.
    """
    p = G.p
    eta = exponent_p_central(G)
    gens = [G.generator(i) for i in range(G.n)]
    C = whole_group(G)
    for top, bot in zip(eta.terms, eta.terms[1:]):
        if C.is_trivial():
            break
        sec = Section(G, top, bot, check=False)
        rows = [[x for g in gens for x in sec.log(G.commutator(c, g))] for c in C.gens]
        m = np.array(rows, dtype=np.int64)
        if not m.any():
            continue
        null = fp.nullspace(m.T, p)
        kgens = [G.evaluate(C.gens, v) for v in null]
        kgens += [G.power(c, p) for c in C.gens]
        kgens += [G.commutator(a, b) for i, a in enumerate(C.gens) for b in C.gens[i + 1 :]]
        C = normal_closure(G, subgroup_closure(G, kgens), within=list(C.gens))
    return C


@dataclass(frozen=True)
class GroupInvariants:
    order_exponent: int
    min_generators: int
    nilpotency_class: int
    p_class: int
    genus: int | None

    def summary(self, p: int) -> str:
        genus = "absent" if self.genus is None else str(self.genus)
        return (
            f"order {p ** self.order_exponent}, d={self.min_generators}, "
            f"class {self.nilpotency_class}, p-class {self.p_class}, genus {genus}"
        )


def invariants(G: PcPresentation) -> GroupInvariants:
    eta = exponent_p_central(G)
    gamma = lower_central(G)
    phi = eta.terms[1] if len(eta.terms) > 1 else eta.terms[0]
    d = G.n - phi.log_order if G.n else 0
    pclass = eta.length
    genus = G.n - d if pclass == 2 else None
    return GroupInvariants(G.n, d, gamma.length, pclass, genus)

