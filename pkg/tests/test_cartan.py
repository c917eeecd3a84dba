import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfold.cartan import (CartanDatum, DiagramAut, factor_automorphism, fold, fold_weight,
                          is_admissible, isomorphic, parse_aut, unfold, unfold_weight)

from conftest import datum


def test_validate_examples():
    assert datum("a2").validate()[0]
    assert CartanDatum(["1", "2"], [[2, -3], [-3, 2]]).validate()[0]
    ok, diags = CartanDatum(["1", "2"], [[1, 0], [0, 2]]).validate()
    assert not ok and diags


def test_validate_rejects_positive_offdiagonal():
    assert not CartanDatum(["1", "2"], [[2, 1], [1, 2]]).validate()[0]


def test_admissibility_examples():
    a3 = datum("a3")
    assert is_admissible(a3, DiagramAut([2, 1, 0]))
    assert not is_admissible(datum("a2"), DiagramAut([1, 0]))
    for name in ("a2", "g2", "d4"):
        d = datum(name)
        assert is_admissible(d, DiagramAut.identity(d.rank))


def test_fold_examples():
    folded, orbits = fold(datum("a3"), DiagramAut([2, 1, 0]))
    assert folded.gram == ((4, -2), (-2, 2))
    assert folded.a(0, 1) == -1 and folded.a(1, 0) == -2
    assert orbits == [(0, 2), (1,)]
    single, _ = fold(datum("a1xa1"), DiagramAut([1, 0]))
    assert single.gram == ((4,),)
    g2 = datum("g2")
    same, _ = fold(g2, DiagramAut.identity(2))
    assert same.gram == g2.gram


def test_d4_triality_folds_to_g2():
    folded, _ = fold(datum("d4"), DiagramAut([2, 1, 3, 0]))
    assert isomorphic(folded, datum("g2")) is not None


def test_unfold_examples():
    big, aut = unfold(datum("b2"))
    assert isomorphic(big, datum("a3")) is not None
    assert aut.order == 2
    assert isomorphic(fold(big, aut)[0], datum("b2")) is not None
    big, aut = unfold(datum("g2"))
    assert isomorphic(big, datum("d4")) is not None and aut.order == 3
    big, aut = unfold(datum("a2"))
    assert big.gram == datum("a2").gram and aut.order == 1


def test_factor_order_six():
    d = CartanDatum([str(k) for k in range(6)], [[2 if i == j else 0 for j in range(6)]
                                                 for i in range(6)])
    chain = factor_automorphism(d, DiagramAut([1, 2, 3, 4, 5, 0]))
    assert sorted(s.aut.order for s in chain.stages) == [2, 3]
    assert chain.verify()["ok"]
    final, members = chain.final()
    assert final.gram == ((12,),)


def test_factor_trivial_cases():
    a3 = datum("a3")
    assert len(factor_automorphism(a3, DiagramAut([2, 1, 0])).stages) == 1
    assert factor_automorphism(a3, DiagramAut.identity(3)).stages == []


def test_fold_weight_examples():
    orbits = [(0, 2), (1,)]
    assert fold_weight((1, 1, 1), orbits) == (1, 1)
    assert fold_weight((0, 0, 0), orbits) == (0, 0)
    with pytest.raises(ValueError):
        fold_weight((1, 0, 0), orbits)
    assert unfold_weight((2, 3), orbits, 3) == (2, 3, 2)


def test_parse_aut_formats():
    a3 = datum("a3")
    assert parse_aut("3,2,1", a3) == DiagramAut([2, 1, 0])
    assert parse_aut('{"perm": [2, 1, 0]}', a3) == DiagramAut([2, 1, 0])
    with pytest.raises(ValueError):
        parse_aut("1,2", a3)


def test_canonical_is_order_independent():
    d4 = datum("d4")
    for order in itertools.permutations(range(4)):
        assert d4.permuted(order).canonical() == d4.canonical()


@given(st.permutations(range(4)))
def test_fold_commutes_with_relabelling(order):
    d4 = datum("d4")
    aut = DiagramAut([2, 1, 3, 0])
    pd = d4.permuted(order)
    # conjugate the automorphism into the new node order
    pos = {old: new for new, old in enumerate(order)}
    paut = DiagramAut([pos[aut(order[k])] for k in range(4)])
    assert paut.preserves(pd)
    a, _ = fold(d4, aut)
    b, _ = fold(pd, paut)
    assert isomorphic(a, b) is not None


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_fold_of_unfold_is_identity(ds):
    # a chain of nodes with lengths d_i and simply-laced-style links
    n = len(ds)
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = 2 * ds[i]
    for i in range(n - 1):
        gram[i][i + 1] = gram[i + 1][i] = -max(ds[i], ds[i + 1])
    d = CartanDatum([str(i + 1) for i in range(n)], gram)
    if not d.validate()[0]:
        return
    big, aut = unfold(d)
    assert big.is_symmetric_type()
    assert is_admissible(big, aut)
    assert isomorphic(fold(big, aut)[0], d) is not None
