from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dblcat.core import Functor, StructureError, homomorphisms, iso_search, ordinal, transpose
from dblcat.categorify import complex_truncation
from dblcat.nerve import (check_2coskeletal, diag_nerve, double_nerve, horizontal_nerve, horizontal_nerve_map,
                          nerve_cat, nerve_map, vertical_nerve, vertical_nerve_map)
from dblcat.thomason import boundary, delta
from dblcat.zoo import corpus, small_categories


def test_nerve_of_the_arrow():
    N = nerve_cat(ordinal(1), 3)
    assert [len(N.levels[k].objects) for k in range(4)] == [2, 3, 4, 5]
    assert N.validate() == []


@given(st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=16, deadline=None)
def test_nerve_of_an_ordinal_counts_monotone_strings(n, k):
    N = nerve_cat(ordinal(n), max(k, 1))
    assert len(N.levels[k].objects) == comb(n + k + 1, k + 1)


def test_nerves_of_small_categories_are_simplicial():
    for C in small_categories().values():
        assert nerve_cat(C, 3).validate() == []


def test_act_composes_faces_and_degeneracies():
    N = nerve_cat(ordinal(2), 3)
    # θ = (0, 0, 2): drop vertex 1, then repeat vertex 0
    F = N.act([0, 0, 2], 2)
    assert F.ob[((0, 1), (1, 2))] == ((0, 0), (0, 2))
    with pytest.raises(StructureError):
        N.act([1, 0], 2)


def test_horizontal_nerve_of_corpus():
    for name, D in corpus().items():
        X = horizontal_nerve(D, 3)
        assert X.validate() == [], name
        # level 0 is the vertical category
        assert len(X.levels[0].objects) == len(D.objects)
        assert len(X.levels[0].mor) == len(D.ver.mor)


def test_vertical_nerve_is_horizontal_nerve_of_transpose():
    D = corpus()["[1]x[1]"]
    V, H = vertical_nerve(D, 2), horizontal_nerve(transpose(D), 2)
    for k in range(3):
        assert iso_search(V.levels[k], H.levels[k]) is not None


def test_nerve_maps_are_natural():
    cor = corpus()
    F = list(homomorphisms(cor["[1]x[1]"], cor["[1]x[2]"], limit=2))[-1]
    assert horizontal_nerve_map(F, 3).validate() == []
    assert vertical_nerve_map(F, 2).validate() == []
    G = Functor(ordinal(1), ordinal(2), {0: 0, 1: 2}, {(0, 0): (0, 0), (1, 1): (2, 2), (0, 1): (0, 2)})
    assert nerve_map(G, 3).validate() == []


def test_double_nerve_of_commutative_squares():
    B = double_nerve(corpus()["[1]x[1]"], 2, 2)
    assert B.validate() == []
    # 1x1 arrays in [1]⊠[1] are its nine squares
    assert len(B.levels[(1, 1)]) == 9


def test_diagonal_nerve():
    X = diag_nerve(corpus()["[1]x[1]"], 3)
    assert X.validate() == []
    assert [len(X.levels[k].objects) for k in range(4)] == [4, 9, 16, 25]


@pytest.mark.parametrize("n", [3, 4])
def test_horizontal_nerves_are_2_coskeletal(n):
    for name, D in corpus().items():
        assert check_2coskeletal(D, n), name


def test_coskeletality_detects_missing_fillers():
    assert check_2coskeletal(complex_truncation(delta(3), 3), 3)
    assert not check_2coskeletal(complex_truncation(boundary(3), 3), 3)
    with pytest.raises(StructureError):
        check_2coskeletal(nerve_cat(ordinal(1), 3), 2)
