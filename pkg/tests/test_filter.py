import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charseries.filter import (
    Filter,
    FilterError,
    FilterSeed,
    boundary,
    check_filter_axioms,
    from_chain,
    generate_filter,
    generate_filter_multisets,
    generate_filter_sequences,
    graded_lie_ring,
    partitions,
)
from charseries.pcgroup import Subgroup, commutator_subgroup, join, subgroup_closure, trivial_subgroup, whole_group
from charseries.refine import refine_fixpoint
from charseries.series import exponent_p_central, lower_central

from conftest import corpus, corpus_ids, elementary

ENTRIES = corpus(64)
SMALL = corpus(32)


def test_from_chain_examples(d4):
    f = from_chain(exponent_p_central(elementary(2, 2)))
    assert f(1) == whole_group(f.group) and f((2,)).is_trivial()
    f = from_chain(exponent_p_central(d4))
    assert f((1,)).order == 8 and f((2,)).order == 2 and f((3,)).is_trivial()
    assert f((0,)).order == 8


def test_from_chain_rejects_non_series(d4):
    # G > <g1, g3> > 1 descends, but [phi_1, phi_2] = <g3> is not in phi_3 = 1
    from charseries.series import Chain
    full = whole_group(d4)
    N = subgroup_closure(d4, [d4.generator(0), d4.generator(2)])
    chain = Chain((full, N, trivial_subgroup(d4)))
    with pytest.raises(FilterError):
        from_chain(chain)


@pytest.mark.parametrize("entry", ENTRIES, ids=corpus_ids(ENTRIES))
def test_chain_filters_and_generated_lower_central(entry):
    G = entry.load()
    for chain in (exponent_p_central(G), lower_central(G)):
        f = from_chain(chain)
        assert check_filter_axioms(f)
        for i in range(1, len(chain.terms) + 1):
            assert boundary(f, (i,)) == f((i + 1,))
    gamma = lower_central(G)
    seed = FilterSeed(G, 1, {(0,): whole_group(G), (1,): whole_group(G)})
    g = generate_filter(seed, check=True)
    for i, H in enumerate(gamma.terms, start=1):
        assert g((i,)) == H
    assert g((len(gamma.terms) + 1,)).is_trivial()


def test_boundary_last_position_is_trivial(d4):
    f = from_chain(exponent_p_central(d4))
    assert boundary(f, (2,)).is_trivial()


def test_corrupted_filter_is_reported(d4):
    f = from_chain(exponent_p_central(d4))
    swapped = Filter(d4, 1, {(1,): f((2,)), (2,): f((1,))})
    rep = check_filter_axioms(swapped)
    assert not rep
    assert rep.violation is not None
    assert rep.violation[1:] == ((1,), (2,))


def test_partitions_examples():
    assert partitions((3,), [(0,), (1,), (2,), (3,)]) == [((1,), (1,), (1,)), ((1,), (2,)), ((3,),)]
    assert partitions((1, 1), [(0, 0), (1, 0), (0, 1)]) == [((0, 1), (1, 0))]
    assert partitions((2,), [(0,), (2,)]) == [((2,),)]
    with pytest.raises(FilterError):
        partitions((1,), [(0,), (2,)])


def test_trivial_seed_gives_trivial_filter(d4):
    one = trivial_subgroup(d4)
    seed = FilterSeed(d4, 2, {(0, 0): whole_group(d4), (1, 0): one, (0, 1): one})
    f = generate_filter(seed)
    assert f.values == {}


def test_seed_validation(d4):
    full = whole_group(d4)
    with pytest.raises(FilterError):
        FilterSeed(d4, 1, {(1,): full}).check()
    with pytest.raises(FilterError):
        FilterSeed(d4, 2, {(0, 0): full, (1, 0): full}).check()
    nonnormal = subgroup_closure(d4, [d4.generator(0)])
    with pytest.raises(FilterError):
        FilterSeed(d4, 1, {(0,): full, (1,): nonnormal}).check()


def _random_seed(G, rng, d=2):
    """A valid seed on a box in N^d built from central-series terms."""
    eta = list(exponent_p_central(G).terms)
    gamma = list(lower_central(G).terms)
    pool = sorted({H.gens: H for H in eta + gamma}.values(), key=lambda H: -H.log_order)
    X = {(0,) * d: whole_group(G)}
    box = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)] if d == 2 else [(a,) for a in range(1, 4)]
    for s in sorted(box, key=sum):
        # any normal subgroup inside every value below s keeps the seed antitone
        below = [X[t] for t in X if all(u <= v for u, v in zip(t, s)) and t != s]
        cands = [H for H in pool if all(B.contains_subgroup(H) for B in below)]
        X[s] = rng.choice(cands)
    return FilterSeed(G, d, X)


@pytest.mark.parametrize("entry", SMALL[::3], ids=corpus_ids(SMALL[::3]))
def test_dynamic_programme_matches_partition_enumeration(entry):
    G = entry.load()
    rng = random.Random(entry.group_id)
    for _ in range(2):
        seed = _random_seed(G, rng)
        seed.check()
        f = generate_filter(seed)
        window = [(a, b) for a in range(4) for b in range(4) if (a, b) != (0, 0)]
        seqs = generate_filter_sequences(seed, window)
        multis = generate_filter_multisets(seed, window)
        for s in window:
            assert f(s) == seqs[s], s
            assert f(s) == multis[s], s
        assert check_filter_axioms(f)


@given(st.integers(0, 10**6))
def test_generated_filter_is_monotone_in_seed(seed_int):
    G = SMALL[seed_int % len(SMALL)].load()
    rng = random.Random(seed_int)
    seed = _random_seed(G, rng)
    f = generate_filter(seed)
    # enlarge one nonzero seed value to its normal closure with a larger term
    bigger = dict(seed.values)
    s = rng.choice([t for t in bigger if any(t) and sum(t) == 1])
    bigger[s] = whole_group(G)
    for t in list(bigger):
        if any(t) and all(u <= v for u, v in zip(t, s)):
            bigger[t] = whole_group(G)
    g = generate_filter(FilterSeed(G, 2, bigger))
    for t in f.values:
        assert g(t).contains_subgroup(f(t))


# ----- graded Lie ring -------------------------------------------------------


def test_graded_ring_examples(d4, heis3):
    L = graded_lie_ring(from_chain(exponent_p_central(elementary(3, 2))))
    assert L.positions == [(1,)]
    assert L.dim((1,)) == 2
    for G in (d4, heis3):
        L = graded_lie_ring(from_chain(exponent_p_central(G)))
        assert L.dim((1,)) == 2 and L.dim((2,)) == 1
        T = L.bracket_tensor((1,), (1,))
        assert T.shape == (2, 2, 1)
        assert T.any()
    T = graded_lie_ring(from_chain(exponent_p_central(heis3))).bracket_tensor((1,), (1,))
    form = T[:, :, 0] % 3
    assert np.array_equal(form, (-form.T) % 3) and round(np.linalg.det(form)) % 3 != 0


def _check_lie_ring(L, rng, redraws=3):
    p = L.p
    G = L.group
    pos = L.positions
    for s in pos:
        for t in pos:
            T = L.bracket_tensor(s, t)
            if T.size == 0:
                continue
            for _ in range(redraws):
                assert np.array_equal(L.bracket_tensor(s, t, rng=rng), T)
            # anticommutativity across the pair
            T2 = L.bracket_tensor(t, s)
            assert np.array_equal((T + np.transpose(T2, (1, 0, 2))) % p, np.zeros_like(T))
            if s == t:
                for i in range(T.shape[0]):
                    assert not T[i, i].any()
            # bilinearity: the tensor predicts brackets of products of representatives
            Ls, Lt = L.components[s], L.components[t]
            u = tuple(a + b for a, b in zip(s, t))
            for _ in range(3):
                x = [rng.randrange(p) for _ in range(Ls.dim)]
                y = [rng.randrange(p) for _ in range(Lt.dim)]
                c = G.commutator(Ls.exp(x), Lt.exp(y))
                assert tuple(L.components[u].log(c)) == tuple(L.bracket(s, x, t, y))
    # Jacobi on basis triples
    for r in pos:
        for s in pos:
            for t in pos:
                target = tuple(a + b + c for a, b, c in zip(r, s, t))
                if target not in L.components:
                    continue
                rs = tuple(a + b for a, b in zip(r, s))
                st_ = tuple(a + b for a, b in zip(s, t))
                tr = tuple(a + b for a, b in zip(t, r))
                for i in range(L.dim(r)):
                    for j in range(L.dim(s)):
                        for k in range(L.dim(t)):
                            x, y, z = (np.eye(L.dim(q), dtype=np.int64)[m] for q, m in ((r, i), (s, j), (t, k)))
                            total = np.zeros(L.dim(target), dtype=np.int64)
                            total += L.bracket(rs, L.bracket(r, x, s, y), t, z)
                            total += L.bracket(st_, L.bracket(s, y, t, z), r, x)
                            total += L.bracket(tr, L.bracket(t, z, r, x), s, y)
                            assert not (total % p).any()


@pytest.mark.parametrize("entry", ENTRIES, ids=corpus_ids(ENTRIES))
def test_eta_lie_ring_axioms(entry):
    G = entry.load()
    L = graded_lie_ring(from_chain(exponent_p_central(G)))
    _check_lie_ring(L, random.Random(entry.group_id))


@pytest.mark.parametrize("entry", SMALL[::4], ids=corpus_ids(SMALL[::4]))
def test_refined_lie_ring_axioms(entry):
    G = entry.load()
    f, _ = refine_fixpoint(G)
    _check_lie_ring(graded_lie_ring(f), random.Random(entry.group_id), redraws=2)
