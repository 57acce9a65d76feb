"""Odd-order p-groups admitting an involutory automorphism.

Each family is built on pc generators ``x, y, z`` followed by commutator
generators with recorded definitions, so an automorphism given on
``x, y, z`` extends to the whole pc sequence by collecting commutators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .aut import GenMap, map_order, verify_automorphism
from .pcgroup import (
    PcPresentation,
    Section,
    commutator_subgroup,
    is_consistent,
    subgroup_closure,
    whole_group,
)
from .series import center, frattini

FAMILIES = ("p5", "p6", "p7")


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyId:
    name: str
    p: int
    params: tuple = ()


@dataclass
class FamilyMember:
    id: FamilyId
    group: PcPresentation
    # definitions[k] = (j, i): pc generator k is [g_j, g_i]; 0, 1, 2 are x, y, z
    definitions: dict = field(default_factory=dict)


def _check_p(name: str, p: int) -> None:
    if p % 2 == 0 or p < 3:
        raise FamilyError("odd p required")
    if name in ("p6", "p7") and p < 5:
        raise FamilyError("requires p ≥ 5")


# ----------------------------------------------------------------------------
# order p^5


P5_DEFINITIONS = {3: (1, 0), 4: (2, 0)}


def family_p5(p: int, params=(1, 0, 0, 1)) -> FamilyMember:
    """``x, y, z, t1 = [y, x], t2 = [z, x]`` with ``y^p = t1^a t2^b`` and ``z^p = t1^c t2^d``.

    The remaining relations are ``[z, y] = 1`` and ``x^p = 1``; the
    parameters are rejected unless ``G^p`` has order ``p^2``.
    """
    _check_p("p5", p)
    a, b, c, d = (int(v) % p for v in params)
    if (a * d - b * c) % p == 0:
        raise FamilyError("G^p = <y^p, z^p> must have order p^2 (parameter matrix is singular)")
    n = 5
    G = PcPresentation(
        p,
        n,
        powers={1: (0, 0, 0, a, b), 2: (0, 0, 0, c, d)},
        comms={(1, 0): (0, 0, 0, 1, 0), (2, 0): (0, 0, 0, 0, 1)},
        name=f"P5(p={p}, params={a},{b},{c},{d})",
    )
    member = FamilyMember(FamilyId("p5", p, (a, b, c, d)), G, dict(P5_DEFINITIONS))
    ok, report = verify_family_membership(member)
    if not ok:
        failed = ", ".join(name for name, passed in report if not passed)
        raise FamilyError(f"construction violates: {failed}")
    return member


def parent_presentations(p: int) -> tuple[PcPresentation, PcPresentation]:
    """The class-2 exponent-p groups ``P`` (order p^4) and ``Q`` (order p^5)."""
    _check_p("p5", p)
    P = PcPresentation(p, 4, comms={(1, 0): (0, 0, 0, 1)}, name=f"P(p={p})")
    Q = PcPresentation(p, 5, comms={(1, 0): (0, 0, 0, 1, 0), (2, 0): (0, 0, 0, 0, 1)}, name=f"Q(p={p})")
    return P, Q


# ----------------------------------------------------------------------------
# orders p^6 and p^7 by completion search

# P6: x, y, z, t = [y,x], u = [t,x] = [z,x], v = [t,y]
P6_DEFINITIONS = {3: (1, 0), 4: (3, 0), 5: (3, 1)}
# P7: x, y, z, t1 = [y,x], t2 = [z,x], u = [t1,x] = [t2,z], v = [t2,x] = [t1,y]
P7_DEFINITIONS = {3: (1, 0), 4: (2, 0), 5: (3, 0), 6: (4, 0)}


def _p6_presentation(p: int, params) -> PcPresentation:
    n = 6
    comms = {
        (1, 0): (0, 0, 0, 1, 0, 0),
        (2, 0): (0, 0, 0, 0, 1, 0),
        (3, 0): (0, 0, 0, 0, 1, 0),
        (3, 1): (0, 0, 0, 0, 0, 1),
    }
    # free power parameters: x^p, y^p, t^p in <u, v>; z^p = 1 is imposed
    powers = {}
    for gen, (e4, e5) in zip((0, 1, 3), zip(params[0::2], params[1::2])):
        if e4 or e5:
            powers[gen] = (0, 0, 0, 0, e4, e5)
    return PcPresentation(p, n, powers, comms, name=f"P6(p={p}, params={','.join(map(str, params))})")


def _p7_presentation(p: int, params) -> PcPresentation:
    n = 7
    comms = {
        (1, 0): (0, 0, 0, 1, 0, 0, 0),
        (2, 0): (0, 0, 0, 0, 1, 0, 0),
        (3, 0): (0, 0, 0, 0, 0, 1, 0),
        (4, 0): (0, 0, 0, 0, 0, 0, 1),
        (3, 1): (0, 0, 0, 0, 0, 0, 1),
        (4, 2): (0, 0, 0, 0, 0, 1, 0),
    }
    # free power parameters: x^p, y^p, z^p, t1^p, t2^p in <u, v>
    powers = {}
    for gen, (e5, e6) in zip((0, 1, 2, 3, 4), zip(params[0::2], params[1::2])):
        if e5 or e6:
            powers[gen] = (0, 0, 0, 0, 0, e5, e6)
    return PcPresentation(p, n, powers, comms, name=f"P7(p={p}, params={','.join(map(str, params))})")


_BUILDERS = {"p6": (_p6_presentation, 6, P6_DEFINITIONS), "p7": (_p7_presentation, 10, P7_DEFINITIONS)}


def _parameter_order(p: int, k: int, limit: int | None):
    """Parameter vectors by increasing support size, zero first."""
    count = 0
    for weight in range(k + 1):
        for support in itertools.combinations(range(k), weight):
            for vals in itertools.product(range(1, p), repeat=weight):
                v = [0] * k
                for i, e in zip(support, vals):
                    v[i] = e
                yield tuple(v)
                count += 1
                if limit is not None and count >= limit:
                    return


def completion_search(name: str, p: int, limit: int | None = 64, first_only: bool = True) -> list[FamilyMember]:
    """Consistent completions satisfying the defining relations and admitting the inversion map."""
    _check_p(name, p)
    build, k, defs = _BUILDERS[name]
    found = []
    for params in _parameter_order(p, k, limit):
        G = build(p, params)
        if not is_consistent(G, method="test_words"):
            continue
        member = FamilyMember(FamilyId(name, p, params), G, dict(defs))
        ok, _ = verify_family_membership(member)
        if not ok:
            continue
        try:
            inversion_automorphism(member)
        except FamilyError:
            continue
        found.append(member)
        if first_only:
            break
    return found


def family_member(name: str, p: int, params=None) -> FamilyMember:
    if name == "p5":
        return family_p5(p, params if params is not None else (1, 0, 0, 1))
    _check_p(name, p)
    if params is not None:
        build, k, defs = _BUILDERS[name]
        if len(params) != k:
            raise FamilyError(f"{name} takes {k} parameters")
        G = build(p, tuple(int(v) % p for v in params))
        if not is_consistent(G, method="test_words"):
            raise FamilyError("parameters give an inconsistent presentation")
        return FamilyMember(FamilyId(name, p, tuple(int(v) % p for v in params)), G, dict(defs))
    found = completion_search(name, p)
    if not found:
        raise FamilyError(f"no completion found for {name} at p={p}")
    return found[0]


# ----------------------------------------------------------------------------
# verification


def _relations(name: str, G: PcPresentation, x, y, z) -> list:
    """(label, lhs, rhs) element pairs describing the defining relations."""
    one = (0,) * G.n
    c = G.commutator
    pw = G.power
    p = G.p
    if name == "p5":
        return [
            ("[z,y] = 1", c(z, y), one),
            ("x^p = 1", pw(x, p), one),
        ]
    if name == "p6":
        yx = c(y, x)
        return [
            ("[z,x] = [y,x,x]", c(z, x), c(yx, x)),
            ("[z,y] = 1", c(z, y), one),
            ("[y,x,z] = 1", c(yx, z), one),
            ("z^p = 1", pw(z, p), one),
        ]
    yx, zx = c(y, x), c(z, x)
    return [
        ("[y,x,x] = [z,x,z]", c(yx, x), c(zx, z)),
        ("[z,x,x] = [y,x,y]", c(zx, x), c(yx, y)),
        ("[z,y] = 1", c(z, y), one),
        ("[y,x,z] = 1", c(yx, z), one),
    ]


_ORDERS = {"p5": 5, "p6": 6, "p7": 7}


def verify_family_membership(member: FamilyMember, gens=None) -> tuple[bool, list]:
    """Check the defining relations on designated ``x, y, z`` (default: the first three pc generators)."""
    G = member.group
    name = member.id.name
    if G.n != _ORDERS[name]:
        raise FamilyError(f"wrong order: expected p^{_ORDERS[name]}, got p^{G.n}")
    x, y, z = gens if gens is not None else (G.generator(0), G.generator(1), G.generator(2))
    report = [(label, lhs == rhs) for label, lhs, rhs in _relations(name, G, x, y, z)]
    gen_ok = subgroup_closure(G, [x, y, z]).log_order == G.n
    report.append(("x, y, z generate G", gen_ok))
    if name == "p5":
        p = G.p
        full = whole_group(G)
        Gd = commutator_subgroup(G, full, full)
        Gp = subgroup_closure(G, [G.power(g, p) for g in (x, y, z)])
        Z = center(G)
        target = subgroup_closure(G, [G.commutator(y, x), G.commutator(z, x)])
        report.append(("G' = <[y,x],[z,x]>", Gd == target))
        report.append(("G^p = <y^p, z^p>", Gp == subgroup_closure(G, [G.power(y, p), G.power(z, p)])))
        report.append(("G' = G^p = Z(G)", Gd == Z == _agemo(G)))
        report.append(("|Z(G)| = p^2", Z.log_order == 2))
    return all(ok for _, ok in report), report


def _agemo(G: PcPresentation):
    """``G^p``, generated by the p-th powers of all elements."""
    p = G.p
    return subgroup_closure(G, {G.power(g, p) for g in G.elements(bound=G.order)})


def _extend(member: FamilyMember, xyz_images) -> GenMap:
    G = member.group
    images = list(xyz_images) + [None] * (G.n - 3)
    for k in sorted(member.definitions):
        j, i = member.definitions[k]
        images[k] = G.commutator(images[j], images[i])
    return GenMap(tuple(images))


def inversion_automorphism(member: FamilyMember) -> GenMap:
    """The involution of the family, verified; raises if it is not an automorphism."""
    G = member.group
    x, y, z = (G.generator(i) for i in range(3))
    inv = G.invert
    name = member.id.name
    if name == "p5":
        xyz = (x, inv(y), inv(z))
    elif name == "p6":
        xyz = (inv(x), inv(y), z)
    else:
        xyz = (inv(x), inv(y), inv(z))
    m = _extend(member, xyz)
    if not verify_automorphism(G, m):
        raise FamilyError(f"inversion map is not an automorphism of {G.name}")
    return m


def frattini_action(G: PcPresentation, m: GenMap) -> np.ndarray:
    """Matrix of ``m`` on ``G / Phi(G)`` (rows are images of the section basis)."""
    sec = Section(G, whole_group(G), frattini(G), check=False)
    return np.array([sec.log(m.apply(G, b)) for b in sec.basis], dtype=np.int64).reshape(sec.dim, sec.dim)


def certify_not_p_group(member: FamilyMember) -> dict:
    """Evidence that ``Aut(G)`` is not a p-group: an involution acting as -1 on a Frattini coordinate."""
    G = member.group
    p = G.p
    m = inversion_automorphism(member)
    A = frattini_action(G, m)
    minus_one = any(A[i, i] == p - 1 for i in range(A.shape[0]))
    order = map_order(G, m)
    return {
        "automorphism": m,
        "frattini_action": A,
        "acts_as_minus_one": minus_one,
        "order": order,
        "not_p_group": minus_one and order % 2 == 0 and p % 2 == 1,
    }
