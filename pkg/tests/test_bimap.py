import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charseries.bimap import (
    Bimap,
    FpAlgebra,
    adjoint_algebra,
    algebra_closure,
    all_subspaces,
    brute_force_radical,
    brute_force_solutions,
    centroid,
    derivation_algebra,
    direct_sum,
    enveloping_algebra,
    ideal_power,
    jacobson_radical,
    quotient_radical_dim,
)
from charseries.filter import from_chain, graded_lie_ring
from charseries.refine import commutator_bimap
from charseries.series import exponent_p_central


def alternating_form(p):
    T = np.zeros((2, 2, 1), dtype=np.int64)
    T[0, 1, 0] = 1
    T[1, 0, 0] = p - 1
    return Bimap(p, T)


def random_bimap(rng, p, dU, dV, dW):
    return Bimap(p, np.array([[[rng.randrange(p) for _ in range(dW)] for _ in range(dV)] for _ in range(dU)]))


def test_zero_bimap_rings():
    b = Bimap(3, np.zeros((2, 1, 2), dtype=np.int64))
    assert adjoint_algebra(b).dim == 4 + 1
    assert centroid(b).dim == 4 + 1 + 4
    assert derivation_algebra(b).dim == 4 + 1 + 4


@pytest.mark.parametrize("p", [2, 3, 5])
def test_alternating_form_rings(p):
    b = alternating_form(p)
    A = adjoint_algebra(b)
    assert A.dim == 4
    assert centroid(b).dim == 1
    assert jacobson_radical(A).dim == 0
    assert A.is_closed() and A.unital


def test_alternating_form_adjoint_by_enumeration():
    assert 2 ** adjoint_algebra(alternating_form(2)).dim == brute_force_solutions(alternating_form(2), "adj")


def test_multiplication_bimap_derivations():
    for p in (2, 3, 5):
        b = Bimap(p, np.ones((1, 1, 1), dtype=np.int64))
        D = derivation_algebra(b)
        assert D.dim == 2
        for x in D.basis:
            f, g, h = x[0, 0], x[1, 1], x[2, 2]
            assert (f + g - h) % p == 0


def test_direct_sum_adjoint_dimensions():
    a = alternating_form(3)
    c = Bimap(3, np.ones((1, 1, 1), dtype=np.int64))
    s = direct_sum(a, c)
    assert adjoint_algebra(s).dim == adjoint_algebra(a).dim + adjoint_algebra(c).dim


def test_extraspecial_commutator_bimap(d4, heis3):
    for G in (d4, heis3):
        L = graded_lie_ring(from_chain(exponent_p_central(G)))
        b = commutator_bimap(L, (1,), (1,))
        assert b.dims == (2, 2, 1)
        form = b.tensor[:, :, 0]
        assert form[0, 0] == form[1, 1] == 0
        assert form[0, 1] != 0 and (form[0, 1] + form[1, 0]) % G.p == 0
    G = heis3
    L = graded_lie_ring(from_chain(exponent_p_central(G)))
    b = commutator_bimap(L, (1,), (1,))
    assert 3 ** derivation_algebra(b).dim > 1


@pytest.mark.parametrize("trial", range(12))
def test_ring_solution_spaces_match_enumeration(trial):
    rng = random.Random(trial)
    dU = dV = rng.choice([1, 2])
    dW = rng.choice([1, 2])
    b = random_bimap(rng, 2, dU, dV, dW)
    for ring, make in (("adj", adjoint_algebra), ("cent", centroid), ("der", derivation_algebra)):
        A = make(b)
        assert 2**A.dim == brute_force_solutions(b, ring), ring
        assert A.is_closed()
        if ring == "der":
            assert A.kind == "lie"
        else:
            assert A.unital


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]))
def test_rings_contain_identity_and_are_closed(seed, p):
    rng = random.Random(seed)
    b = random_bimap(rng, p, rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 2))
    A = adjoint_algebra(b)
    C = centroid(b)
    D = derivation_algebra(b)
    assert A.unital and C.unital
    assert A.is_closed() and C.is_closed() and D.is_closed()
    E = enveloping_algebra(D)
    assert E.unital and E.is_closed()
    assert all(E.contains(x) for x in D.basis)


def test_enveloping_examples():
    p = 3
    zero = FpAlgebra(p, 2, [], "lie")
    assert enveloping_algebra(zero).dim == 1
    gl = FpAlgebra(p, 2, [np.eye(2, dtype=np.int64)[[i]].T @ np.eye(2, dtype=np.int64)[[j]] for i in range(2) for j in range(2)], "lie")
    assert enveloping_algebra(gl).dim == 4
    N = np.array([[0, 1], [0, 0]])
    assert enveloping_algebra(FpAlgebra(p, 2, [N], "lie")).dim == 2


def test_radical_examples():
    for p in (2, 3, 5):
        units = [np.array(m) for m in ([[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]])]
        M2 = FpAlgebra(p, 2, units)
        assert jacobson_radical(M2).dim == 0
        upper = FpAlgebra(p, 2, [units[0], units[1], units[3]])
        J = jacobson_radical(upper)
        assert J.dim == 1 and np.array_equal(J.basis[0], units[1])
        N = np.array([[0, 1], [0, 0]])
        J = jacobson_radical(FpAlgebra(p, 2, [np.eye(2, dtype=np.int64), N]))
        assert J.dim == 1 and np.array_equal(J.basis[0], N)
    upper2 = FpAlgebra(2, 2, [units[0], units[1], units[3]])
    assert len(brute_force_radical(upper2)) == 1


def _random_algebra(rng, p):
    while True:
        m = rng.choice([2, 3, 4])
        mats = [np.array([[rng.randrange(p) for _ in range(m)] for _ in range(m)]) for _ in range(rng.choice([1, 2]))]
        if rng.random() < 0.6:
            mats = [np.triu(x, k=rng.choice([0, 0, 1])) for x in mats]
        A = algebra_closure(p, m, mats, unital=rng.random() < 0.5)
        if 1 <= A.dim <= 4:
            return A


def test_radical_matches_brute_force_oracle():
    rng = random.Random(20240611)
    nontrivial = 0
    n = 0
    for trial in range(60):
        p = (2, 3)[trial % 2]
        A = _random_algebra(rng, p)
        J = jacobson_radical(A)
        best = brute_force_radical(A)
        span = FpAlgebra(p, A.m, best) if best else FpAlgebra(p, A.m, [])
        assert J.dim == len(best)
        assert all(span.contains(x) for x in J.basis)
        assert J.is_two_sided()
        assert not ideal_power(p, A.m, J.basis, A.dim + 1)
        assert quotient_radical_dim(A, J) == 0
        nontrivial += J.dim > 0
        n += 1
    assert n >= 50
    # the sample exercises both outcomes
    assert 5 <= nontrivial <= n - 5


def test_subspace_enumeration_counts():
    # number of subspaces of F_2^3 and F_3^2
    assert sum(1 for _ in all_subspaces(3, 2)) == 1 + 7 + 7 + 1
    assert sum(1 for _ in all_subspaces(2, 3)) == 1 + 4 + 1
