import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import qfold.qidents as Q
from qfold.qarith import ONE, ZERO, LaurentPoly, qbinom, qint
from qfold.uqminus import UqAlgebra

from conftest import aut, datum, to_sympy
from oracles import qbinom_pascal

A3, D4, B2, G2 = (datum(n) for n in ("a3", "d4", "b2", "g2"))


def test_normal_form_examples():
    assert Q.normal_form_vn((2, 0), 2) == {(1, 1): qint(2), (0, 2): -ONE}
    assert Q.normal_form_vn((3, 0), 2) == {(1, 2): qint(3), (0, 3): -qint(2)}
    assert Q.normal_form_vn((1, 5), 2) == {(1, 5): ONE}
    assert Q.normal_form_vn((0, 0, 0), 3) == {(0, 0, 0): ONE}


def test_normal_form_rejects_bad_input():
    with pytest.raises(ValueError):
        Q.normal_form_vn((1, 0), 1)
    with pytest.raises(ValueError):
        Q.normal_form_vn((-1, 2), 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=4), st.integers(2, 4))
def test_normal_form_properties(a, r):
    a = tuple(a)
    nf = Q.normal_form_vn(a, r)
    for t in nf:
        assert Q.is_normal(t, r)
        assert sum(t) == sum(a)
        assert Q.potential(t) <= Q.potential(a)
    if Q.is_normal(a, r):
        assert nf == {a: ONE}
    # coefficients are bar-invariant: every rule coefficient is a q-binomial
    assert all(c.bar() == c for c in nf.values())


def test_se_tuples():
    got = sorted(Q.se_tuples(3, 2, 2))
    assert got == [(0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert all(Q.is_normal(t, 3) for t in Q.se_tuples(3, 3, 4))


def test_a_coeff_examples():
    for r in (2, 3, 4):
        assert Q.a_coeff(r, r, r) == ONE
    assert Q.a_coeff(3, 1, 2) == qint(3)
    with pytest.raises(ValueError):
        Q.a_coeff(3, 0, 2)


def test_a_coeff_degenerate_range():
    # for -r <= k < 0 only s = -k survives in A(k + r, s); with the sign
    # (-1)^(s-1) of the expansion the coefficient is 1
    for r in (2, 3, 4, 5):
        for k in range(-r, 0):
            vals = {s: Q.a_coeff(k + r, s, r) for s in range(1, r + 1)}
            assert {s for s, v in vals.items() if v} == {-k}
            assert vals[-k] == (ONE if k % 2 else -ONE)
            exp = Q.reindexed_expansion(r, k + r, 0)
            assert exp == {(r + k, 0): ONE}


def test_a_coeff_against_pascal_oracle():
    for r in (2, 3, 4):
        for k in range(-r, 2 * r + 1):
            for s_ in range(1, r + 1):
                want = qbinom_pascal(s_ + k - r - 1, s_ - 1) * qbinom_pascal(k, r - s_)
                assert sp.simplify(to_sympy(Q.a_coeff(k, s_, r)) - want) == 0, (r, k, s_)


def test_alternating_sum_vanishes_in_sympy():
    # the same sum assembled from the Pascal-recurrence binomials
    for r, t, k in ((2, 1, 0), (2, 2, -1), (5, 3, 7), (3, 2, -4)):
        total = sum((-1) ** s_ * qbinom_pascal(r, s_) * qbinom_pascal(t + k - s_ - 1, t - 1)
                    * qbinom_pascal(r + k - s_, r - t) for s_ in range(r + 1))
        assert sp.simplify(total) == 0


@pytest.mark.parametrize("r,k,ell", [(2, 0, 0), (2, 1, 0), (3, 2, 1), (4, 3, 2), (3, -3, 1)])
def test_two_slot_examples(r, k, ell):
    rep = Q.verify_two_slot_expansion(r, k, ell)
    assert rep.ok, rep.failures()


def test_two_slot_rejects_small_k():
    with pytest.raises(ValueError):
        Q.verify_two_slot_expansion(2, -3, 0)


@pytest.mark.parametrize("r,t,k", [(2, 1, 0), (2, 2, -1), (5, 3, 7)])
def test_alternating_sum_examples(r, t, k):
    assert Q.alternating_sum_lemma(r, t, k) == ZERO
    assert Q.verify_alternating_sum_lemma(r, t, k).ok


def test_alternating_sum_needs_t_in_range():
    for t in (0, 4):
        with pytest.raises(ValueError):
            Q.verify_alternating_sum_lemma(3, t, 2)


@pytest.mark.parametrize("n,r,k,ell", [(2, 2, 3, 0), (3, 2, 3, 0), (3, 3, 2, 1), (4, 2, 4, 1)])
def test_multi_slot_examples(n, r, k, ell):
    rep = Q.verify_multi_slot_coefficients(n, r, k, ell)
    assert rep.ok, rep.failures()


def test_multi_slot_n2_is_two_slot():
    for k in range(0, 6):
        nf = Q.normal_form_vn((k, 1), 3)
        for a, c in nf.items():
            assert Q.multi_slot_coefficient(a, k, 3) == c


def test_star_serre_examples():
    x = {}
    for k, c in ((0, ONE), (1, -qint(2)), (2, ONE)):
        Q._axpy(x, {(k, 2 - k): ONE}, c)
    # the L = 2 sum written out before rewriting, then reduced
    acc = {}
    for t, c in x.items():
        Q._axpy(acc, Q.normal_form_vn(t, 2), c)
    assert not acc
    assert not Q.star_serre_vn(2, 2)
    assert not Q.star_serre_vn(4, 2)
    assert not Q.star_serre_vn(2, 3)
    for n, r in ((3, 3), (5, 2), (3, 4)):
        assert Q.verify_star_serre_vn(n, r).ok


def _star_sum_with(n, r, L):
    acc = {}
    for k in range(L + 1):
        c = qbinom(L, k)
        Q._axpy(acc, Q.normal_form_vn((k,) + (0,) * (n - 2) + (L - k,), r), -c if k % 2 else c)
    return acc


def test_star_sum_needs_the_right_length():
    # one less than the critical length leaves a nonzero normal form
    assert _star_sum_with(4, 2, 3)
    assert _star_sum_with(2, 3, 2)


def test_budget():
    with pytest.raises(Q.BudgetError):
        Q.verify_star_serre_vn(12, 2)
    with pytest.raises(Q.BudgetError):
        Q.verify_matrix_serre(2, 3, 2, 2, [{1}, {1}, {1}])
    assert Q.IdentityInstance(r=3, n=4).L == 7
    Q.IdentityInstance(r=2, n=12).check_budget(allow_large=True)


def test_matrix_single_row_reduces():
    M = [(3, 0, 1)]
    nf = Q.normal_form_vnm(M, 2, [{1, 2}])
    assert nf == {(t,): c for t, c in Q.normal_form_vn((3, 0, 1), 2).items()}


def test_matrix_free_move():
    # column 1 does not interact for the row, so one unit moves freely
    nf = Q.normal_form_vnm([(1, 0, 0)], 2, [{2}])
    assert nf == {((0, 1, 0),): ONE} or nf == {((0, 0, 1),): ONE}
    assert Q.normal_form_row((1, 0), 2, frozenset()) == {(0, 1): ONE}


def test_matrix_rows_are_independent():
    M = [(2, 0), (0, 3)]
    sets = [{1}, {1}]
    nf = Q.normal_form_vnm(M, 2, sets)
    a = Q.normal_form_vn((2, 0), 2)
    b = Q.normal_form_vn((0, 3), 2)
    assert nf == {(s, t): x * y for s, x in a.items() for t, y in b.items()}


@pytest.mark.parametrize("n,m,N,r,sets", [
    (2, 1, 2, 2, [{1}]),
    (2, 2, 2, 2, [{1}, {1}]),
    (4, 2, 4, 2, [{1, 2, 3}, {1, 2, 3}]),
    (3, 2, 2, 3, [{1}, {2}]),
])
def test_matrix_serre_examples(n, m, N, r, sets):
    rep = Q.verify_matrix_serre(n, m, N, r, sets)
    assert rep.ok, rep.failures()


def test_factorization():
    for N, r in ((2, 2), (3, 2), (2, 3)):
        assert Q.verify_coefficient_factorization(N, r).ok


def test_strategy_independence():
    rep = Q.verify_strategy_independence(4, 2, samples=150, seed=3)
    assert rep.ok
    rep = Q.verify_strategy_independence(3, 3, samples=150, seed=4)
    assert rep.ok


def test_strategies_agree_with_interaction_sets():
    rng = random.Random(5)
    for _ in range(40):
        a = tuple(rng.randint(0, 4) for _ in range(4))
        inter = frozenset(x for x in (1, 2, 3) if rng.random() < 0.6)
        ref = Q.normal_form_row(a, 2, inter)
        for strat in ("rightmost", "random"):
            assert Q.normal_form_strategy(a, 2, strat, rng, inter) == ref


def test_star_shape():
    sh = Q.star_shape(D4, [1], [0, 2, 3])
    assert (sh["m"], sh["n"], sh["N"], sh["r"], sh["L"]) == (1, 4, 4, 2, 4)
    sh = Q.star_shape(D4, [0, 2, 3], [1])
    assert (sh["m"], sh["n"], sh["L"]) == (3, 2, 2)
    sh = Q.star_shape(G2, [1], [0])
    assert sh["L"] == 4 and sh["r"] == 4
    with pytest.raises(ValueError):
        Q.star_shape(A3, [0, 1], [2])


def test_rewriting_holds_in_uq():
    assert Q.verify_rewriting_in_uq(D4, [1], [0, 2, 3], max_total=3).ok
    assert Q.verify_rewriting_in_uq(B2, [0], [1], max_total=4).ok
    assert Q.verify_rewriting_in_uq(G2, [1], [0], max_total=5).ok


def test_star_identity_d4_centre():
    rep = Q.verify_star_identity_uq(D4, [1], [0, 2, 3])
    assert rep.ok and rep.checks[0].name.startswith("single-centre")


def test_star_identity_d4_leaves_multi_index():
    rep = Q.verify_star_identity_uq(D4, [0, 2, 3], [1])
    assert rep.ok and rep.checks[0].name.startswith("multi-index")


def test_orbit_serre_mod_j_a3():
    rep = Q.verify_star_identity_uq(A3, [0, 2], [1], aut=aut("a3_flip"), p=2)
    assert rep.ok, rep.failures()
    assert Q.verify_star_identity_uq(A3, [1], [0, 2], aut=aut("a3_flip"), p=2).ok


def test_orthogonal_pair_commutes():
    d = datum("a1xa1")
    x = Q.multi_index_serre_uq(d, [0], [1])
    assert x.is_zero()


def _wrong_sum(d, eta, eta2, L, dd):
    alg = UqAlgebra.of(d)
    acc = None
    for k in range(L + 1):
        x = alg.one()
        x = x * Q._power(alg, eta[0], k)
        for j in eta2:
            x = x * alg.divided_power(j, 1)
        x = x * Q._power(alg, eta[0], L - k)
        c = qbinom(L, k, dd)
        x = x.scale(-c if k % 2 else c)
        acc = x if acc is None else acc + x
    return acc


def test_negative_controls_in_uq():
    assert _wrong_sum(D4, [1], [0, 2, 3], 4, 1).is_zero()
    assert not _wrong_sum(D4, [1], [0, 2, 3], 3, 1).is_zero()
    assert _wrong_sum(B2, [1], [0], 3, 1).is_zero()
    assert not _wrong_sum(B2, [1], [0], 3, 2).is_zero()


def test_mutated_coefficient_is_caught(monkeypatch):
    real = Q.a_coeff
    monkeypatch.setattr(Q, "a_coeff", lambda k, s, r: real(k, s, r) * LaurentPoly({0: 1, 2: 1})
                        if s == 1 else real(k, s, r))
    assert not Q.verify_multi_slot_coefficients(3, 2, 3, 0).ok
    assert not Q.verify_two_slot_expansion(2, 1, 0).ok
