"""Acceptance criteria, one test each; a pass/fail line per criterion is printed in the summary."""

import functools
import io
import random
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from charseries.aut import CENSUS_FIELDS, brute_force_aut, census
from charseries.bimap import (
    Bimap,
    adjoint_algebra,
    algebra_closure,
    brute_force_radical,
    brute_force_solutions,
    centroid,
    derivation_algebra,
    jacobson_radical,
)
from charseries.cli import main, write_csv
from charseries.corpus import bundled
from charseries.families import certify_not_p_group, completion_search, family_p5
from charseries.filter import check_filter_axioms, from_chain, graded_lie_ring
from charseries.pcgroup import PcPresentation, commutator_subgroup, is_consistent, subgroup_closure, whole_group
from charseries.refine import refine_fixpoint
from charseries.series import center, exponent_p_central

from conftest import ACCEPTANCE, D4_TEXT, Q8_TEXT, corpus, parse_presentation
from test_filter import _check_lie_ring


def criterion(n, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except pytest.skip.Exception as exc:
                ACCEPTANCE[n] = ("SKIP", title, str(exc))
                raise
            except BaseException as exc:
                ACCEPTANCE[n] = ("FAIL", title, f"{type(exc).__name__}: {exc}".splitlines()[0])
                raise
            ACCEPTANCE[n] = ("PASS", title, detail or "")

        return run

    return wrap


@criterion(1, "order-32 census")
def test_census_order_32():
    t0 = time.perf_counter()
    res = census(bundled(32), jobs=4)
    dt = time.perf_counter() - t0
    assert not res.failures, res.failures
    assert (res.g_count, res.f_count) == (36, 51)
    assert dt <= 600
    return f"g=36 f=51 in {dt:.1f}s"


@criterion(2, "order-64 census (optional)")
def test_census_order_64():
    entries = bundled(64)
    if not entries:
        pytest.skip("order-64 corpus not bundled")
    t0 = time.perf_counter()
    res = census(entries, jobs=4)
    dt = time.perf_counter() - t0
    assert not res.failures, res.failures[:3]
    assert (res.g_count, res.f_count) == (211, 267), (res.g_count, res.f_count)
    assert dt <= 12 * 3600
    return f"g=211 f=267 in {dt:.1f}s"


@criterion(3, "family witnesses")
def test_family_witnesses():
    t0 = time.perf_counter()
    for p in (3, 5, 7):
        member = family_p5(p)
        G = member.group
        assert is_consistent(G)
        full = whole_group(G)
        Gd = commutator_subgroup(G, full, full)
        Gp = subgroup_closure(G, {G.power(g, p) for g in G.elements(bound=G.order)})
        Z = center(G)
        assert Gd == Gp == Z and Z.log_order == 2
        assert all(G.power(z, p) == G.identity for z in Z.elements())
        cert = certify_not_p_group(member)
        assert cert["acts_as_minus_one"] and cert["not_p_group"]
    for name in ("p6", "p7"):
        for p in (5, 7):
            found = completion_search(name, p)
            assert found, (name, p)
            assert is_consistent(found[0].group)
            assert certify_not_p_group(found[0])["not_p_group"]
    dt = time.perf_counter() - t0
    assert dt <= 300
    return f"p5 at p=3,5,7 and p6, p7 at p=5,7 certified in {dt:.1f}s"


@criterion(4, "graded Lie ring suite")
def test_lie_ring_suite():
    entries = corpus(64)
    for e in entries:
        L = graded_lie_ring(from_chain(exponent_p_central(e.load())))
        _check_lie_ring(L, random.Random(e.group_id), redraws=3)
    return f"{len(entries)} groups"


@criterion(5, "refinement soundness")
def test_refinement_soundness():
    entries = corpus(64)
    strict64 = []
    for e in entries:
        G = e.load()
        f, trace = refine_fixpoint(G)
        assert check_filter_axioms(f), e.group_id
        aut = brute_force_aut(G)
        terms = f.distinct_values() + list(trace.final_chain.terms)
        for m in aut.generators:
            for H in terms:
                assert all(m.apply(G, x) in H for x in H.gens), e.group_id
        a, b = trace.initial_stats, trace.final_stats
        assert b.length >= a.length and b.max_factor_exponent <= a.max_factor_exponent, e.group_id
        if e.order == 64 and b.length > a.length:
            strict64.append(e.group_id)
    assert strict64, "no order-64 group with a strict length increase (order-64 corpus bundled?)"
    return f"{len(entries)} groups; {len(strict64)} order-64 groups strictly refined"


@criterion(6, "algebra oracle equivalence")
def test_algebra_oracles():
    rng = random.Random(6)
    count = nonzero = 0
    while count < 60:
        p = (2, 3)[count % 2]
        m = rng.choice([2, 3, 4])
        mats = [np.array([[rng.randrange(p) for _ in range(m)] for _ in range(m)]) for _ in range(rng.choice([1, 2]))]
        if rng.random() < 0.6:
            mats = [np.triu(x, k=rng.choice([0, 1])) for x in mats]
        A = algebra_closure(p, m, mats, unital=rng.random() < 0.5)
        if not 1 <= A.dim <= 4:
            continue
        J = jacobson_radical(A)
        best = brute_force_radical(A)
        assert J.dim == len(best)
        assert all(algebra_closure(p, m, best).contains(x) for x in J.basis) if best else J.dim == 0
        count += 1
        nonzero += J.dim > 0
    rings = 0
    for dUV in (1, 2):
        for dW in (1, 2):
            for _ in range(4):
                T = np.array([[[rng.randrange(2) for _ in range(dW)] for _ in range(dUV)] for _ in range(dUV)])
                b = Bimap(2, T)
                for ring, make in (("adj", adjoint_algebra), ("cent", centroid), ("der", derivation_algebra)):
                    assert 2 ** make(b).dim == brute_force_solutions(b, ring), (T.tolist(), ring)
                    rings += 1
    return f"{count} algebras ({nonzero} with nonzero radical); {rings} ring solution spaces"


@criterion(7, "automorphism engine")
def test_automorphism_engine():
    cases = [("D4", parse_presentation(D4_TEXT), 8), ("Q8", parse_presentation(Q8_TEXT), 24),
             ("Z3^2", PcPresentation(3, 2), 48)]
    cases += [(f"Z{p}", PcPresentation(p, 1), p - 1) for p in (2, 3, 5, 7)]
    for name, G, expected in cases:
        _, trace = refine_fixpoint(G)
        pruned = brute_force_aut(G, trace.final_chain).order
        plain = brute_force_aut(G).order
        assert pruned == plain == expected, (name, pruned, plain)
    return ", ".join(f"{name}={expected}" for name, _, expected in cases)


def _cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    assert code == 0
    return buf.getvalue()


@criterion(8, "determinism")
def test_determinism(tmp_path):
    outs = []
    for jobs in (1, 4, 1):
        path = tmp_path / f"census_{len(outs)}.csv"
        _cli("census", "--prime", "2", "--exponent", "5", "--jobs", str(jobs), "--out", str(path))
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    direct = write_csv(census(bundled(32), jobs=2).rows, CENSUS_FIELDS, None).encode()
    assert direct == outs[0]
    stats = []
    for jobs in (1, 3):
        path = tmp_path / f"stats_{jobs}.csv"
        _cli("stats", "--prime", "2", "--exponent", "5", "--jobs", str(jobs), "--out", str(path))
        stats.append(path.read_bytes())
    assert stats[0] == stats[1]
    for e in bundled(32)[::5]:
        assert _cli("refine", str(e.path)) == _cli("refine", str(e.path))
    return "census, stats and refine outputs identical across runs and job counts"
