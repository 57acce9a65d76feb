"""Regenerate the bundled corpus of small p-groups.

Every group of order p^(k+1) has a central subgroup of order p, so it is a
central extension of some group H of order p^k by Z_p. Given a pc
presentation of H, such an extension adds a last generator z (central, of
order p) and a tail z^t_r to each relation r. Collection in the extension
follows the same steps as in H, so the z-exponent of any collected word is
linear in the tail vector t; consistency is a linear condition on t.
Changing pc preimages g_i -> g_i z^c changes t by a coboundary, so only one
representative per class in Z/B is tried. Isomorphic results are merged by
fingerprint plus an explicit isomorphism search.

    python scripts/build_corpus.py --prime 2 --max-exponent 5
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from pathlib import Path

import numpy as np

from charseries import fp
from charseries.aut import find_isomorphism
from charseries.corpus import CorpusEntry, bundled, data_root, fingerprint, group_id, sha256, write_manifest
from charseries.series import center
from charseries.pcgroup import PcPresentation, _test_word_triples, is_consistent, parse_presentation


def relation_keys(H: PcPresentation):
    keys = [("pow", i) for i in range(H.n)]
    keys += [("comm", j, i) for j in range(H.n) for i in range(j)]
    return keys


def extension(H: PcPresentation, tails) -> PcPresentation:
    n = H.n + 1
    powers, comms = {}, {}
    for key, t in zip(relation_keys(H), tails):
        if key[0] == "pow":
            i = key[1]
            powers[i] = H.power_relation(i) + (int(t),)
        else:
            j, i = key[1], key[2]
            comms[(j, i)] = H.commutator_relation(j, i) + (int(t),)
    return PcPresentation(H.p, n, powers, comms)


def defect(E: PcPresentation) -> list[int]:
    out = []
    for a, b, c in _test_word_triples(E):
        lhs = E.mul(E.mul(a, b), c)
        rhs = E.mul(a, E.mul(b, c))
        out.append((lhs[-1] - rhs[-1]) % E.p)
        assert lhs[:-1] == rhs[:-1]
    return out


def cocycle_classes(H: PcPresentation) -> list[np.ndarray]:
    p = H.p
    keys = relation_keys(H)
    r = len(keys)
    cols = []
    for k in range(r):
        e = np.zeros(r, dtype=np.int64)
        e[k] = 1
        cols.append(defect(extension(H, e)))
    D = np.array(cols, dtype=np.int64).T  # rows: test words, cols: tails
    Z = fp.nullspace(D, p)
    # coboundaries: g_i -> g_i z^{c_i}
    brows = []
    for i in range(H.n):
        c = np.zeros(H.n, dtype=np.int64)
        c[i] = 1
        row = []
        for key in keys:
            if key[0] == "pow":
                w = H.power_relation(key[1])
                row.append((p * c[key[1]] - sum(w[k] * c[k] for k in range(H.n))) % p)
            else:
                w = H.commutator_relation(key[1], key[2])
                row.append((-sum(w[k] * c[k] for k in range(H.n))) % p)
        brows.append(row)
    B = fp.row_basis(np.array(brows, dtype=np.int64).reshape(H.n, r), p)
    # complement of B inside Z
    comp = []
    cur = B.copy()
    for z in Z:
        if not fp.in_row_space(z, cur, p):
            comp.append(z)
            cur = np.vstack([cur, z]) if cur.size else z.reshape(1, -1)
    reps = []
    for coeffs in itertools.product(range(p), repeat=len(comp)):
        v = np.zeros(r, dtype=np.int64)
        for c, b in zip(coeffs, comp):
            v = (v + c * b) % p
        reps.append(v)
    return reps


def unique_central_subgroup(E: PcPresentation) -> bool:
    """Whether ``Z(E)`` has exactly one subgroup of order p."""
    Z = center(E)
    return sum(1 for x in Z.elements() if E.element_order(x) == E.p) == E.p - 1


def quadratic_key(E: PcPresentation) -> tuple:
    """Equivalence class of ``q(x) = x^2`` for an extension of an elementary abelian 2-group.

    Over F_2 a quadratic form is determined up to a change of basis by the
    rank of its polar form, whether it vanishes on the radical, and its
    number of zeros. Equivalent forms give isomorphic extensions.
    """
    m = E.n - 1
    vecs = list(itertools.product(range(2), repeat=m))
    q = {v: E.power(v + (0,), 2)[-1] for v in vecs}
    B = np.array([[E.commutator(E.generator(j), E.generator(i))[-1] for i in range(m)] for j in range(m)])
    rad = fp.nullspace(B, 2)
    rank = m - len(rad)
    on_rad = any(q[tuple(int(a) for a in r)] for r in rad)
    zeros = sum(1 for v in vecs if q[v] == 0)
    return rank, on_rad, zeros


def next_level(parents: list[PcPresentation], verbose: bool = True) -> list[PcPresentation]:
    classes: dict[tuple, list[PcPresentation]] = {}
    found: list[PcPresentation] = []
    tried = 0
    for H in parents:
        elementary = not any(any(w) for _, _, w in H.relations())
        forms = set()
        for t in cocycle_classes(H):
            E = extension(H, t)
            if elementary and H.p == 2:
                key = quadratic_key(E)
                if key in forms:
                    continue
                forms.add(key)
            if elementary and any(t) and not unique_central_subgroup(E):
                # another central <w> of order p gives a non-elementary quotient E/<w>,
                # so E also arises from that parent
                continue
            tried += 1
            fpr = fingerprint(E)
            bucket = classes.setdefault(fpr, [])
            if any(find_isomorphism(E, X) is not None for X in bucket):
                continue
            bucket.append(E)
            found.append(E)
    if verbose:
        print(f"  tried {tried} extensions, {len(found)} classes", file=sys.stderr)
    return found


def normalize(G: PcPresentation) -> PcPresentation:
    return parse_presentation(G.to_text())


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--max-exponent", type=int, default=5)
    ap.add_argument("--min-exponent", type=int, default=3)
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--from-bundled", type=int, default=None, metavar="EXPONENT",
                    help="start from the bundled corpus of order p^EXPONENT")
    args = ap.parse_args(argv)
    p = args.prime
    out_root = args.out or data_root()
    level = [PcPresentation(p, 1)]
    first = 2
    if args.from_bundled:
        level = [e.load() for e in bundled(p**args.from_bundled)]
        first = args.from_bundled + 1
    for k in range(first, args.max_exponent + 1):
        t0 = time.time()
        level = [normalize(G) for G in next_level(level)]
        print(f"order {p}^{k}: {len(level)} groups ({time.time() - t0:.1f}s)", file=sys.stderr)
        if k < args.min_exponent:
            continue
        order = p**k
        d = out_root / f"o{order}"
        d.mkdir(parents=True, exist_ok=True)
        for old in d.glob("*.pc"):
            old.unlink()
        entries = []
        for idx, G in enumerate(level, start=1):
            gid = group_id(order, idx, len(level))
            assert is_consistent(G)
            text = f"# {gid}\n" + G.to_text()
            path = d / f"{gid}.pc"
            path.write_text(text, encoding="utf-8")
            entries.append(CorpusEntry(gid, path, sha256(text.encode("utf-8")), p, k))
        write_manifest(d, entries)


if __name__ == "__main__":
    main()
