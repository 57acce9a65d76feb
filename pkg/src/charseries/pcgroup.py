"""Finite p-groups given by power-commutator presentations.

A presentation has pc generators ``g_0 .. g_{n-1}`` (0-based in the Python
API; the text format and all printed output are 1-based). Every element has
a unique normal form ``g_0^e_0 ... g_{n-1}^e_{n-1}`` with ``0 <= e_i < p``,
stored as a tuple of exponents.

Relations are triangular: ``g_i^p`` is a word in generators of index ``> i``
and ``[g_j, g_i]`` (``j > i``) is a word in generators of index ``> j``. The
commutator convention is ``[a, b] = a^-1 b^-1 a b``.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import sympy

NormalForm = tuple  # tuple[int, ...] of length n

DEFAULT_ENUMERATION_BOUND = 2**13
DEFAULT_EXHAUSTIVE_BOUND = 2**9
_CACHE_LIMIT = 400_000


class PresentationError(ValueError):
    """Raised for malformed presentation files or relation data."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EnumerationBoundError(RuntimeError):
    pass


class SectionError(ValueError):
    pass


class PcPresentation:
    """A consistent-or-not pc presentation of a group of order ``p**n``.

    ``powers`` maps ``i`` to the normal form of ``g_i^p``; ``comms`` maps
    ``(j, i)`` with ``j > i`` to the normal form of ``[g_j, g_i]``. Missing
    entries are the identity. Instances are treated as immutable; the
    internal caches only memoize multiplication.
    """

    def __init__(self, p: int, n: int, powers=None, comms=None, name: str = ""):
        if not sympy.isprime(p):
            raise PresentationError(f"p = {p} is not prime")
        if n < 0:
            raise PresentationError("n must be nonnegative")
        self.p = int(p)
        self.n = int(n)
        self.name = name
        ident = (0,) * n
        self.identity: NormalForm = ident
        pw = [ident] * n
        for i, w in (powers or {}).items():
            w = tuple(int(x) % p for x in w)
            if len(w) != n or not 0 <= i < n:
                raise PresentationError(f"bad power relation for generator {i + 1}")
            if any(w[: i + 1]):
                raise PresentationError(f"non-triangular power relation for generator {i + 1}")
            pw[i] = w
        cm: dict[tuple[int, int], NormalForm] = {}
        for (j, i), w in (comms or {}).items():
            w = tuple(int(x) % p for x in w)
            if not (0 <= i < j < n) or len(w) != n:
                raise PresentationError(f"bad commutator relation [{j + 1},{i + 1}]")
            if any(w[: j + 1]):
                raise PresentationError(f"non-triangular commutator relation [{j + 1},{i + 1}]")
            if any(w):
                cm[(j, i)] = w
        self._pow = tuple(pw)
        self._comm = cm
        # conj[j][i] = g_j^{g_i} = g_j [g_j, g_i], a normal form since the
        # commutator only involves generators after j
        conj = []
        for j in range(n):
            row = []
            for i in range(n):
                if i < j:
                    c = list(cm.get((j, i), ident))
                    c[j] = 1
                    row.append(tuple(c))
                else:
                    row.append(None)
            conj.append(row)
        self._conj = conj
        self._gen_cache: dict = {}
        self._conj_cache: dict = {}

    # ----- relation access -------------------------------------------------

    @property
    def order(self) -> int:
        return self.p**self.n

    def power_relation(self, i: int) -> NormalForm:
        return self._pow[i]

    def commutator_relation(self, j: int, i: int) -> NormalForm:
        return self._comm.get((j, i), self.identity)

    def relations(self) -> Iterator[tuple[str, tuple[int, ...], NormalForm]]:
        """Yield ``("pow", (i,), rhs)`` and ``("comm", (j, i), rhs)`` for every relation."""
        for i in range(self.n):
            yield "pow", (i,), self._pow[i]
        for j in range(self.n):
            for i in range(j):
                yield "comm", (j, i), self.commutator_relation(j, i)

    def is_abelian_presentation(self) -> bool:
        return not self._comm

    def generator(self, i: int, e: int = 1) -> NormalForm:
        v = [0] * self.n
        v[i] = e % self.p
        return tuple(v)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<PcPresentation{label} p={self.p} n={self.n}>"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PcPresentation)
            and (self.p, self.n, self._pow, self._comm) == (other.p, other.n, other._pow, other._comm)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self._pow, tuple(sorted(self._comm.items()))))

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_gen_cache"] = {}
        state["_conj_cache"] = {}
        return state

    # ----- arithmetic ------------------------------------------------------

    def _trim_caches(self) -> None:
        if len(self._gen_cache) > _CACHE_LIMIT:
            self._gen_cache.clear()
        if len(self._conj_cache) > _CACHE_LIMIT:
            self._conj_cache.clear()

    def mul_gen(self, a: NormalForm, i: int) -> NormalForm:
        """Normal form of ``a * g_i``."""
        key = (a, i)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        p, n = self.p, self.n
        lst = list(a)
        e = lst[i] + 1
        if not any(lst[i + 1 :]):
            if e < p:
                lst[i] = e
            else:
                lst[i] = 0
                lst[i + 1 :] = self._pow[i][i + 1 :]
            out = tuple(lst)
        else:
            tail = (0,) * (i + 1) + tuple(lst[i + 1 :])
            ct = self._conjugate_tail(tail, i)
            if e < p:
                out = tuple(lst[:i]) + (e,) + ct[i + 1 :]
            else:
                rest = self.mul(self._pow[i], ct)
                out = tuple(lst[:i]) + (0,) + rest[i + 1 :]
        if len(self._gen_cache) > _CACHE_LIMIT:
            self._trim_caches()
        self._gen_cache[key] = out
        return out

    def _conjugate_tail(self, t: NormalForm, i: int) -> NormalForm:
        # t lies in <g_{i+1}, ..., g_n>; returns g_i^-1 t g_i
        key = (t, i)
        hit = self._conj_cache.get(key)
        if hit is not None:
            return hit
        res = self.identity
        for j in range(i + 1, self.n):
            c = self._conj[j][i]
            for _ in range(t[j]):
                res = self.mul(res, c)
        self._conj_cache[key] = res
        return res

    def mul(self, a: NormalForm, b: NormalForm) -> NormalForm:
        res = a
        for k, e in enumerate(b):
            for _ in range(e):
                res = self.mul_gen(res, k)
        return res

    def multiply(self, *elts: NormalForm) -> NormalForm:
        res = self.identity
        for x in elts:
            res = self.mul(res, x)
        return res

    def invert(self, a: NormalForm) -> NormalForm:
        p = self.p
        x = self.identity
        r = a
        for i in range(self.n):
            k = (p - r[i]) % p
            for _ in range(k):
                x = self.mul_gen(x, i)
                r = self.mul_gen(r, i)
        return x

    def power(self, a: NormalForm, k: int) -> NormalForm:
        if k < 0:
            a = self.invert(a)
            k = -k
        res = self.identity
        base = a
        while k:
            if k & 1:
                res = self.mul(res, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return res

    def commutator(self, a: NormalForm, b: NormalForm) -> NormalForm:
        return self.mul(self.invert(self.mul(b, a)), self.mul(a, b))

    def conjugate(self, a: NormalForm, b: NormalForm) -> NormalForm:
        """``a^b = b^-1 a b``."""
        return self.mul(self.invert(b), self.mul(a, b))

    def element_order(self, a: NormalForm) -> int:
        k = 1
        x = a
        while any(x):
            x = self.power(x, self.p)
            k *= self.p
        return k

    def collect(self, word: Iterable[tuple[int, int]]) -> NormalForm:
        """Normal form of ``prod g_i^e`` over the ``(i, e)`` pairs of ``word``.

        Exponents may be negative or exceed ``p``.
        """
        res = self.identity
        for i, e in word:
            if not 0 <= i < self.n:
                raise IndexError(f"generator index {i} out of range")
            if e >= 0:
                for _ in range(e):
                    res = self.mul_gen(res, i)
            else:
                res = self.mul(res, self.power(self.generator(i), e))
        return res

    def evaluate(self, images: Sequence[NormalForm], exps: Sequence[int]) -> NormalForm:
        """``prod images[i]^exps[i]`` in this group (images need not be generators)."""
        res = self.identity
        for x, e in zip(images, exps):
            if e:
                res = self.mul(res, self.power(x, e))
        return res

    @staticmethod
    def depth(a: NormalForm) -> int:
        for i, e in enumerate(a):
            if e:
                return i
        return len(a)

    def random_element(self, rng: random.Random) -> NormalForm:
        return tuple(rng.randrange(self.p) for _ in range(self.n))

    # ----- enumeration, consistency ----------------------------------------

    def elements(self, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[NormalForm]:
        return enumerate_elements(self, bound)

    def to_text(self) -> str:
        return format_presentation(self)


# ----------------------------------------------------------------------------
# text format


_WORD_ITEM = re.compile(r"^(\d+)(?:\^(-?\d+))?$")


def _parse_word(tokens: Sequence[str], n: int, p: int, lineno: int) -> list[tuple[int, int]]:
    word = []
    for tok in tokens:
        m = _WORD_ITEM.match(tok)
        if not m:
            raise PresentationError(f"bad word item {tok!r}", lineno)
        g = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if not 1 <= g <= n:
            raise PresentationError(f"generator {g} out of range 1..{n}", lineno)
        word.append((g - 1, e))
    return word


def _word_to_normal_form(word, n: int, p: int, after: int, what: str, lineno: int) -> NormalForm:
    # Triangular right-hand sides are words in generators > after. Such a
    # word is put in normal form only when it is already sorted; otherwise a
    # collection in an unfinished presentation would be needed.
    v = [0] * n
    last = -1
    for g, e in word:
        if g <= after:
            raise PresentationError(f"non-triangular {what}: generator {g + 1} not after {after + 1}", lineno)
        if g <= last:
            raise PresentationError(f"{what}: word must list generators in increasing order", lineno)
        last = g
        v[g] = e % p
    return tuple(v)


def parse_presentation(text: str, name: str = "") -> PcPresentation:
    p = n = None
    powers: dict[int, NormalForm] = {}
    comms: dict[tuple[int, int], NormalForm] = {}
    pending: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        key = toks[0]
        if key == "p":
            if len(toks) != 2 or not toks[1].isdigit():
                raise PresentationError("expected 'p <prime>'", lineno)
            p = int(toks[1])
            if not sympy.isprime(p):
                raise PresentationError(f"p = {p} is not prime", lineno)
        elif key == "n":
            if len(toks) != 2 or not toks[1].isdigit():
                raise PresentationError("expected 'n <count>'", lineno)
            n = int(toks[1])
        elif key in ("pow", "comm"):
            pending.append((lineno, toks))
        else:
            raise PresentationError(f"unknown key {key!r}", lineno)
    if p is None or n is None:
        raise PresentationError("missing 'p' or 'n' line")
    for lineno, toks in pending:
        try:
            eq = toks.index("=")
        except ValueError:
            raise PresentationError("missing '='", lineno) from None
        lhs, rhs = toks[1:eq], toks[eq + 1 :]
        if not all(t.isdigit() for t in lhs):
            raise PresentationError("bad generator index", lineno)
        idx = [int(t) for t in lhs]
        if any(not 1 <= g <= n for g in idx):
            raise PresentationError("generator index out of range", lineno)
        word = _parse_word(rhs, n, p, lineno)
        if toks[0] == "pow":
            if len(idx) != 1:
                raise PresentationError("expected 'pow <i> = <word>'", lineno)
            i = idx[0] - 1
            if i in powers:
                raise PresentationError(f"duplicate power relation for {i + 1}", lineno)
            powers[i] = _word_to_normal_form(word, n, p, i, "power relation", lineno)
        else:
            if len(idx) != 2:
                raise PresentationError("expected 'comm <j> <i> = <word>'", lineno)
            j, i = idx[0] - 1, idx[1] - 1
            if not j > i:
                raise PresentationError("commutator relation needs j > i", lineno)
            if (j, i) in comms:
                raise PresentationError(f"duplicate commutator relation [{j + 1},{i + 1}]", lineno)
            comms[(j, i)] = _word_to_normal_form(word, n, p, j, "commutator relation", lineno)
    return PcPresentation(p, n, powers, comms, name=name)


def load_presentation(path) -> PcPresentation:
    from pathlib import Path

    path = Path(path)
    return parse_presentation(path.read_text(encoding="utf-8"), name=path.stem)


def format_word(v: NormalForm) -> str:
    items = []
    for g, e in enumerate(v):
        if e == 1:
            items.append(f"{g + 1}")
        elif e:
            items.append(f"{g + 1}^{e}")
    return " ".join(items)


def format_presentation(G: PcPresentation) -> str:
    lines = [f"p {G.p}", f"n {G.n}"]
    for i in range(G.n):
        w = G.power_relation(i)
        if any(w):
            lines.append(f"pow {i + 1} = {format_word(w)}")
    for j in range(G.n):
        for i in range(j):
            w = G.commutator_relation(j, i)
            if any(w):
                lines.append(f"comm {j + 1} {i + 1} = {format_word(w)}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# enumeration and consistency


def enumerate_elements(G: PcPresentation, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[NormalForm]:
    if G.order > bound:
        raise EnumerationBoundError(f"group order {G.order} exceeds enumeration bound {bound}")
    return [tuple(v) for v in itertools.product(range(G.p), repeat=G.n)]


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    method: str
    failure: tuple | None = None

    def __bool__(self) -> bool:
        return self.consistent


def _test_word_triples(G: PcPresentation) -> Iterator[tuple[NormalForm, NormalForm, NormalForm]]:
    p, n = G.p, G.n
    gen = G.generator
    for k in range(n):
        for j in range(k):
            for i in range(j):
                yield gen(k), gen(j), gen(i)
    for j in range(n):
        for i in range(j):
            yield gen(j, p - 1), gen(j), gen(i)
            yield gen(j), gen(i, p - 1), gen(i)
    for i in range(n):
        yield gen(i), gen(i, p - 1), gen(i)


def is_consistent(
    G: PcPresentation,
    method: str = "auto",
    exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND,
) -> ConsistencyReport:
    """Check that the presentation defines a group of order ``p**n``.

    ``method="exhaustive"`` checks associativity on every triple whose middle
    factor is a pc generator (by Light's lemma this covers all triples) and
    that every normal form has a two-sided inverse. ``method="test_words"``
    runs the classical finite set of overlap checks for triangular
    presentations, which needs no enumeration. ``"auto"`` picks exhaustive
    up to ``exhaustive_bound`` elements.
    """
    if method == "auto":
        method = "exhaustive" if G.order <= exhaustive_bound else "test_words"
    if method == "test_words":
        for a, b, c in _test_word_triples(G):
            if G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)):
                return ConsistencyReport(False, method, (a, b, c))
        return ConsistencyReport(True, method)
    if method != "exhaustive":
        raise ValueError(f"unknown method {method!r}")
    elts = enumerate_elements(G, max(exhaustive_bound, G.order))
    gens = [G.generator(i) for i in range(G.n)]
    for x in elts:
        for g in gens:
            xg = G.mul(x, g)
            for y in elts:
                if G.mul(xg, y) != G.mul(x, G.mul(g, y)):
                    return ConsistencyReport(False, method, (x, g, y))
    for x in elts:
        xi = G.invert(x)
        if any(G.mul(x, xi)) or any(G.mul(xi, x)):
            return ConsistencyReport(False, method, (x, xi, G.identity))
    return ConsistencyReport(True, method)


# ----------------------------------------------------------------------------
# subgroups


def _sift(G: PcPresentation, ech: dict[int, NormalForm], x: NormalForm) -> NormalForm:
    p = G.p
    while True:
        d = G.depth(x)
        if d == G.n:
            return x
        h = ech.get(d)
        if h is None:
            return x
        x = G.mul(x, G.power(h, p - x[d]))


def _normalize_leading(G: PcPresentation, x: NormalForm) -> NormalForm:
    d = G.depth(x)
    return G.power(x, pow(x[d], -1, G.p))


def _canonical(G: PcPresentation, ech: dict[int, NormalForm]) -> tuple[NormalForm, ...]:
    p = G.p
    depths = sorted(ech)
    out = []
    for a, d in enumerate(depths):
        h = ech[d]
        for d2 in depths[a + 1 :]:
            e = h[d2]
            if e:
                h = G.mul(h, G.power(ech[d2], p - e))
        out.append(h)
    return tuple(out)


def _close(G: PcPresentation, ech: dict[int, NormalForm], queue: list[NormalForm]) -> None:
    p = G.p
    while queue:
        x = queue.pop()
        r = _sift(G, ech, x)
        if not any(r):
            continue
        r = _normalize_leading(G, r)
        ech[G.depth(r)] = r
        queue.append(G.power(r, p))
        for h in list(ech.values()):
            if h is not r:
                queue.append(G.commutator(r, h))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored by its canonical induced pc sequence.

    Generators have strictly increasing depths, leading exponent 1, and zero
    exponent at every other generator's leading position, so two subgroups
    are equal exactly when their ``gens`` agree.
    """

    ambient: PcPresentation = field(compare=False, repr=False)
    gens: tuple

    @property
    def order(self) -> int:
        return self.ambient.p ** len(self.gens)

    @property
    def log_order(self) -> int:
        return len(self.gens)

    def is_trivial(self) -> bool:
        return not self.gens

    def _ech(self) -> dict[int, NormalForm]:
        return {PcPresentation.depth(h): h for h in self.gens}

    def sift(self, x: NormalForm) -> NormalForm:
        return _sift(self.ambient, self._ech(), x)

    def __contains__(self, x: NormalForm) -> bool:
        return not any(self.sift(x))

    def contains_subgroup(self, other: "Subgroup") -> bool:
        ech = self._ech()
        return all(not any(_sift(self.ambient, ech, g)) for g in other.gens)

    def __le__(self, other: "Subgroup") -> bool:
        return other.contains_subgroup(self)

    def __lt__(self, other: "Subgroup") -> bool:
        return self.log_order < other.log_order and other.contains_subgroup(self)

    def elements(self, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[NormalForm]:
        if self.order > bound:
            raise EnumerationBoundError(f"subgroup order {self.order} exceeds bound {bound}")
        G = self.ambient
        out = []
        for exps in itertools.product(range(G.p), repeat=len(self.gens)):
            out.append(G.evaluate(self.gens, exps))
        return out

    def random_element(self, rng: random.Random) -> NormalForm:
        G = self.ambient
        return G.evaluate(self.gens, [rng.randrange(G.p) for _ in self.gens])

    def is_normal(self) -> bool:
        G = self.ambient
        ech = self._ech()
        for h in self.gens:
            for i in range(G.n):
                if any(_sift(G, ech, G.conjugate(h, G.generator(i)))):
                    return False
        return True

    def __repr__(self) -> str:
        return f"<Subgroup order {self.ambient.p}^{len(self.gens)}>"


def subgroup_closure(G: PcPresentation, gens: Iterable[NormalForm]) -> Subgroup:
    ech: dict[int, NormalForm] = {}
    _close(G, ech, [tuple(g) for g in gens])
    return Subgroup(G, _canonical(G, ech))


def whole_group(G: PcPresentation) -> Subgroup:
    return Subgroup(G, tuple(G.generator(i) for i in range(G.n)))


def trivial_subgroup(G: PcPresentation) -> Subgroup:
    return Subgroup(G, ())


def join(G: PcPresentation, *subgroups: Subgroup) -> Subgroup:
    """Subgroup generated by the given subgroups."""
    if len(subgroups) == 1:
        return subgroups[0]
    gens = [g for H in subgroups for g in H.gens]
    return subgroup_closure(G, gens)


def normal_closure(G: PcPresentation, H: Subgroup, within: Sequence[NormalForm] | None = None) -> Subgroup:
    """Smallest subgroup containing ``H`` normalized by ``within`` (default: all pc generators)."""
    if within is None:
        within = [G.generator(i) for i in range(G.n)]
    ech = dict(H._ech())
    while True:
        new = []
        for h in list(ech.values()):
            for c in within:
                y = G.conjugate(h, c)
                if any(_sift(G, ech, y)):
                    new.append(y)
        if not new:
            break
        _close(G, ech, new)
    return Subgroup(G, _canonical(G, ech))


def commutator_subgroup(G: PcPresentation, X: Subgroup, Y: Subgroup) -> Subgroup:
    """``[X, Y]``: generated by generator commutators, normally closed in ``<X, Y>``."""
    if X.is_trivial() or Y.is_trivial():
        return trivial_subgroup(G)
    comms = [G.commutator(x, y) for x in X.gens for y in Y.gens]
    C = subgroup_closure(G, comms)
    return normal_closure(G, C, within=list(X.gens) + list(Y.gens))


def power_subgroup_mod(G: PcPresentation, H: Subgroup, K: Subgroup) -> Subgroup:
    """``H^p K`` for ``K`` normal in ``H`` with ``H/K`` abelian.

    Under that hypothesis the p-th powers of generators suffice.
    """
    return subgroup_closure(G, [G.power(h, G.p) for h in H.gens] + list(K.gens))


def brute_force_closure(G: PcPresentation, gens: Iterable[NormalForm], bound: int = DEFAULT_ENUMERATION_BOUND) -> set:
    """Element set of ``<gens>`` by breadth-first multiplication (an oracle)."""
    gens = [tuple(g) for g in gens]
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > bound:
                        raise EnumerationBoundError("closure exceeds bound")
        frontier = nxt
    return seen


# ----------------------------------------------------------------------------
# sections H/K


class Section:
    """The elementary abelian section ``H/K`` as an F_p vector space.

    ``basis`` holds coset representatives ``b_0 .. b_{r-1}`` in ``H``;
    ``log`` maps elements of ``H`` to coordinates and ``exp`` maps
    coordinates back to the representative ``prod b_i^{c_i}``.
    """

    def __init__(self, G: PcPresentation, H: Subgroup, K: Subgroup, check: bool = True):
        self.G, self.H, self.K = G, H, K
        p = G.p
        if check and not H.contains_subgroup(K):
            raise SectionError("K is not contained in H")
        ech = dict(K._ech())
        basis_depths = []
        for h in H.gens:
            r = _sift(G, ech, h)
            if any(r):
                r = _normalize_leading(G, r)
                d = G.depth(r)
                ech[d] = r
                basis_depths.append(d)
        basis_depths.sort()
        self._ech = ech
        self._depth_index = {d: k for k, d in enumerate(basis_depths)}
        self.basis = tuple(ech[d] for d in basis_depths)
        self.dim = len(self.basis)
        if len(ech) != H.log_order:
            raise SectionError("H does not normalize K or K is not a subgroup of H")
        if check:
            kech = K._ech()
            for b in self.basis:
                if any(_sift(G, kech, G.power(b, p))):
                    raise SectionError("H/K is not elementary abelian (p-th power outside K)")
            for a, b1 in enumerate(self.basis):
                for b2 in self.basis[a + 1 :]:
                    if any(_sift(G, kech, G.commutator(b1, b2))):
                        raise SectionError("H/K is not abelian")
            for k in K.gens:
                for h in H.gens:
                    if any(_sift(G, kech, G.conjugate(k, h))):
                        raise SectionError("K is not normal in H")

    def log(self, x: NormalForm) -> tuple[int, ...]:
        G = self.G
        p = G.p
        coords = [0] * self.dim
        ech = self._ech
        while True:
            d = G.depth(x)
            if d == G.n:
                return tuple(coords)
            h = ech.get(d)
            if h is None:
                raise SectionError("element is not in H")
            k = self._depth_index.get(d)
            if k is not None:
                coords[k] = (coords[k] + x[d]) % p
            x = G.mul(x, G.power(h, p - x[d]))

    def exp(self, v: Sequence[int]) -> NormalForm:
        return self.G.evaluate(self.basis, [int(c) % self.G.p for c in v])

    def preimage(self, vectors) -> Subgroup:
        """Subgroup of ``H`` containing ``K`` whose image is the span of ``vectors``."""
        gens = [self.exp(v) for v in np.asarray(vectors, dtype=np.int64).reshape(-1, self.dim)] if self.dim else []
        return subgroup_closure(self.G, list(self.K.gens) + gens)

    def __repr__(self) -> str:
        return f"<Section dim {self.dim}>"


def section_space(G: PcPresentation, H: Subgroup, K: Subgroup) -> Section:
    return Section(G, H, K)


def intersection(G: PcPresentation, A: Subgroup, B: Subgroup, bound: int = DEFAULT_ENUMERATION_BOUND) -> Subgroup:
    """``A ∩ B`` by enumerating the smaller subgroup."""
    if A.log_order > B.log_order:
        A, B = B, A
    if B.contains_subgroup(A):
        return A
    return subgroup_closure(G, [x for x in A.elements(bound) if x in B])


def layer_meet(G: PcPresentation, A: Subgroup, B: Subgroup, N: Subgroup, bound: int = DEFAULT_ENUMERATION_BOUND) -> Subgroup:
    """``(A ∩ N) B`` for ``B <= A`` normal with ``A/B`` elementary abelian.

    By the modular law this is ``A ∩ NB``; it is computed inside the section.
    """
    S = Section(G, A, B, check=False)
    NB = join(G, N, B)
    if NB.contains_subgroup(A):
        return A
    if G.p**S.dim > bound:
        raise EnumerationBoundError("section too large for layer intersection")
    vecs = [v for v in itertools.product(range(G.p), repeat=S.dim) if any(v) and S.exp(v) in NB]
    return S.preimage(vecs) if vecs else B


# ----------------------------------------------------------------------------
# changing the pc sequence


def sequence_exponents(G: PcPresentation, seq: Sequence[NormalForm], tails: Sequence[Subgroup], x: NormalForm) -> tuple[int, ...]:
    """Exponents of ``x`` with respect to a pc sequence (``tails[i] = <seq[i:]>``)."""
    p = G.p
    out = []
    for i, a in enumerate(seq):
        nxt = tails[i + 1]
        ainv = G.invert(a)
        y = x
        for e in range(p):
            if y in nxt:
                break
            y = G.mul(ainv, y)
        else:
            raise PresentationError("element is not in the span of the sequence")
        out.append(e)
        x = y
    if any(x):
        raise PresentationError("element is not in the span of the sequence")
    return tuple(out)


@dataclass
class InducedPresentation:
    """A presentation on a new pc sequence of ``G``, with conversion maps."""

    source: PcPresentation
    seq: tuple
    tails: tuple
    presentation: PcPresentation

    def to_source(self, v: NormalForm) -> NormalForm:
        return self.source.evaluate(self.seq, v)

    def from_source(self, x: NormalForm) -> NormalForm:
        return sequence_exponents(self.source, self.seq, self.tails, x)


def induced_presentation(G: PcPresentation, seq: Sequence[NormalForm]) -> InducedPresentation:
    """Re-present ``G`` on the pc sequence ``seq``.

    Every tail ``<seq[i:]>`` must be normal in ``G`` with index pattern ``p``.
    """
    seq = tuple(tuple(a) for a in seq)
    m = len(seq)
    if m != G.n:
        raise PresentationError("sequence length must equal n")
    tails = [subgroup_closure(G, seq[i:]) for i in range(m)] + [trivial_subgroup(G)]
    for i in range(m):
        if tails[i].log_order != m - i:
            raise PresentationError("sequence is not a pc sequence")
    powers = {}
    comms = {}
    for i in range(m):
        powers[i] = sequence_exponents(G, seq, tails, G.power(seq[i], G.p))
        for j in range(i + 1, m):
            comms[(j, i)] = sequence_exponents(G, seq, tails, G.commutator(seq[j], seq[i]))
    H = PcPresentation(G.p, m, powers, comms, name=G.name)
    return InducedPresentation(G, seq, tuple(tails), H)
