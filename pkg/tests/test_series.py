import pytest

from charseries.pcgroup import brute_force_closure, enumerate_elements, subgroup_closure, whole_group
from charseries.series import Chain, center, exponent_p_central, frattini, invariants, lower_central

from conftest import corpus, corpus_ids, elementary

ENTRIES = corpus(64)


def brute_center(G):
    elts = enumerate_elements(G)
    return {z for z in elts if all(G.mul(z, x) == G.mul(x, z) for x in elts)}


def brute_lower_central(G):
    elts = enumerate_elements(G)
    terms = [set(elts)]
    while len(terms[-1]) > 1:
        nxt = brute_force_closure(G, {G.commutator(a, g) for a in terms[-1] for g in elts})
        terms.append(nxt)
    return [len(t) for t in terms]


def brute_eta(G):
    elts = enumerate_elements(G)
    terms = [set(elts)]
    while len(terms[-1]) > 1:
        cur = terms[-1]
        gens = {G.commutator(a, g) for a in cur for g in elts} | {G.power(a, G.p) for a in cur}
        terms.append(brute_force_closure(G, gens))
    return [len(t) for t in terms]


def test_dihedral_and_quaternion(d4, q8):
    for G in (d4, q8):
        eta = exponent_p_central(G)
        assert [H.order for H in eta.terms] == [8, 2, 1]
        assert [H.order for H in lower_central(G).terms] == [8, 2, 1]
        assert center(G) == subgroup_closure(G, [G.generator(2)])
        assert invariants(G).summary(2) == "order 8, d=2, class 2, p-class 2, genus 1"


def test_elementary_abelian():
    G = elementary(3, 3)
    inv = invariants(G)
    assert inv.nilpotency_class == 1 and inv.p_class == 1 and inv.genus is None
    assert "class 1" in inv.summary(3) and "genus absent" in inv.summary(3)
    assert frattini(G).is_trivial()
    assert center(G) == whole_group(G)


def test_chain_validation(d4):
    full = whole_group(d4)
    with pytest.raises(ValueError):
        Chain((full,))
    with pytest.raises(ValueError):
        Chain((full, full, subgroup_closure(d4, [])))


@pytest.mark.parametrize("entry", ENTRIES, ids=corpus_ids(ENTRIES))
def test_series_against_brute_force(entry):
    G = entry.load()
    assert [H.order for H in lower_central(G).terms] == brute_lower_central(G)
    assert [H.order for H in exponent_p_central(G).terms] == brute_eta(G)
    assert set(center(G).elements()) == brute_center(G)
    eta = exponent_p_central(G)
    assert sum(eta.factor_exponents()) == G.n
    # eta is a central series with elementary abelian layers
    for A, B in zip(eta.terms, eta.terms[1:]):
        for a in A.gens:
            assert G.power(a, G.p) in B
            for i in range(G.n):
                assert G.commutator(a, G.generator(i)) in B
