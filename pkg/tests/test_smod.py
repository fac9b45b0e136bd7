import itertools

import flint
from hypothesis import given, settings, strategies as st
import pytest

from soergel.bimodule import gamma, one_tensor
from soergel.hecke import hom_prediction, lp_str
from soergel.smod import (annihilates_Rplus, bar_bs, bar_bs_via_bimodule, bar_element,
                          counterexample_universal, direct_sum, hom_rightR, hom_Zbar,
                          indecomposable_over, is_endomorphism, shift, theta_check,
                          trivial_module, universal_b)
from soergel.structure import zbar_structure


def el(G, w):
    return G.from_word(G.parse_word(w))


def rows(M):
    return [[int(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


def test_bar_bs_rank_one(A1):
    G = A1
    M = bar_bs(G, "s")
    assert M.degrees == [1, -1]
    assert rows(M.P_matrix(G.gens[0])) == [[0, 1], [0, 0]]
    assert rows(M.R[0]) == [[0, -2], [0, 0]]
    assert bar_bs(G, "").degrees == [0]


@pytest.mark.parametrize("name", ["A2", "B2", "U3", "AFF"])
def test_bar_bs_routes_agree(name, request):
    G = request.getfixturevalue(name)
    for k in range(4):
        for word in itertools.product(range(G.rank), repeat=k):
            a, b = bar_bs(G, word), bar_bs_via_bimodule(G, word)
            assert a.degrees == b.degrees
            for x in set(a.P) | set(b.P):
                assert a.P_matrix(x) == b.P_matrix(x)
            assert a.R == b.R


def test_hom_examples(A1, A2):
    G = A1
    M = bar_bs(G, "s")
    assert hom_Zbar(M, M) == {0: 1, 2: 1}
    assert hom_Zbar(trivial_module(G), M) == {1: 1}
    assert hom_rightR(M, M).get(0, 0) >= 1
    N = bar_bs(A2, "sts")
    assert hom_rightR(N, N) == hom_Zbar(N, N)


@pytest.mark.parametrize("name", ["A2", "U3"])
def test_hom_formula_small(name, request):
    G = request.getfixturevalue(name)
    words = [w for k in range(3) for w in itertools.product(range(G.rank), repeat=k)]
    for u in words:
        for v in words:
            if len(u) + len(v) <= 4:
                assert hom_Zbar(bar_bs(G, u), bar_bs(G, v)) == hom_prediction(G, u, v)


def test_indecomposability(A1, A2):
    G = A1
    M = bar_bs(G, "s")
    r = indecomposable_over(M)
    assert r.indecomposable and r.end_dim == 1
    r = indecomposable_over(direct_sum(M, M))
    assert not r.indecomposable and is_endomorphism(direct_sum(M, M), r.idempotent)
    k = trivial_module(G)
    r = indecomposable_over(direct_sum(k, shift(k, 2)), "trivial")
    assert not r.indecomposable
    # BS(sts) = B_sts + B_s in A2
    assert not indecomposable_over(bar_bs(A2, "sts")).indecomposable


def test_theta(A1, A2):
    for G, word in ((A1, "s"), (A2, "sts"), (A2, "st")):
        ok, data = theta_check(G, word)
        assert ok
    ok, data = theta_check(A1, "s")
    assert data[1] == (1, 1, 1)


def test_universal_verdict(U3):
    G = U3
    v = counterexample_universal(G, strict=True)
    assert v["deg"] == 2 and not v["in_gamma_id"] and v["annihilates_Rplus"]
    assert not v["theta_surjective"] and v["orientation"] == "left"
    assert v["gamma_id_degree2_dim"] == 0
    assert v["hom_Zbar_k_degree2"] == 0 and v["hom_rightR_k_degree2"] == 1
    # computed value; see the acceptance suite for the comparison with the published number
    assert v["kl_coeff"] == "3v^4+v^6"


def test_universal_sanity(U3):
    G = U3
    word = G.parse_word("stustu")
    M = bar_bs(G, word)
    assert not annihilates_Rplus(M, bar_element(one_tensor(G, word)))
    for g in gamma(G, [G.e], word, 4):
        assert annihilates_Rplus(M, bar_element(g))
    ok, data = theta_check(G, word)
    assert data[4] == (3, 3, 3) and data[6] == (1, 1, 1)
    assert universal_b(G).degree() == 2


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["sts", "stst", "tst"]), st.integers(0, 100), st.integers(0, 100))
def test_zbar_matrices_follow_structure_constants(A2, B2, word, i, j):
    G = B2 if len(word) == 4 else A2
    M = bar_bs(G, word)
    om = G.interval(el(G, word))
    u, v = om[i % len(om)], om[j % len(om)]
    table = zbar_structure(G, om)
    lhs = M.P_matrix(u) * M.P_matrix(v)
    rhs = flint.fmpq_mat(M.dim, M.dim)
    for x, c in table[(u, v)].items():
        rhs = rhs + M.P_matrix(x) * flint.fmpq(int(c.numerator), int(c.denominator))
    assert lhs == rhs
    for R in M.R:
        assert R * M.P_matrix(u) == M.P_matrix(u) * R
