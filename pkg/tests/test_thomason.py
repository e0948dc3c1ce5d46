import pytest
from hypothesis import given, settings, strategies as st

from dblcat.core import StructureError
from dblcat.thomason import (base_map, boundary, chains, csd2, delta, generating_map, horn, inclusion_pair)

from oracles import sd_poset_size, simplex_faces

# objects and nonidentity morphisms of cSd² of small complexes, counted by an
# independent enumeration of chains of faces and comparable chain pairs
SIZES = [
    (delta(0), 1, 0),
    (delta(1), 5, 4),
    (horn(1, 0), 1, 0),
    (delta(2), 25, 60),
    (boundary(3), 74, 216),
    (horn(3, 1), 61, 168),
    (delta(3), 149, 796),
]


@pytest.mark.parametrize("X, objects, arrows", SIZES, ids=[repr(x[0]) for x in SIZES])
def test_csd2_sizes(X, objects, arrows):
    P = csd2(X)
    assert len(P.objects) == objects
    assert len(P.mor) - len(P.objects) == arrows


def test_frozen_sizes_match_oracle():
    cases = [simplex_faces(1), simplex_faces(2), simplex_faces(3), simplex_faces(3, [(0, 1, 2, 3)]),
             simplex_faces(3, [(0, 1, 2, 3), (0, 2, 3)])]
    assert [sd_poset_size(f) for f in cases] == [(5, 4), (25, 60), (149, 796), (74, 216), (61, 168)]


def test_faces_of_small_complexes():
    assert delta(1).faces() == [(0,), (1,), (0, 1)]
    assert horn(2, 1).faces() == [(0,), (1,), (2,), (0, 1), (1, 2)]
    assert (0, 1, 2) not in boundary(2).faces()
    with pytest.raises(StructureError):
        horn(2, 3)
    with pytest.raises(StructureError):
        delta(-1)


@given(st.integers(0, 3))
@settings(max_examples=8, deadline=None)
def test_chains_are_strictly_increasing(m):
    for c in chains(delta(m)):
        assert all(set(a) < set(b) for a, b in zip(c, c[1:]))


def test_csd2_of_delta1_is_a_zigzag_poset():
    P = csd2(delta(1))
    assert P.validate() == []
    # the middle chain (01) sits below the two maximal chains containing it
    assert len(P.out_of(((0, 1),))) == 3


def test_horn_inclusion_is_full():
    B, A = inclusion_pair(("horn", 2, 1))
    assert len(B.objects) == 25
    assert set(A) == set(chains(horn(2, 1)))
    with pytest.raises(StructureError):
        inclusion_pair(("sphere",))


@pytest.mark.parametrize("family", [("thomason_cof", 1), ("thomason_acof", 1, 0), ("cat_cof", 0),
                                    ("cat_cof", 1), ("cat_cof", 2), ("cat_acof",)])
@pytest.mark.parametrize("n", [0, 1])
def test_generating_maps_validate(family, n):
    assert base_map(family).validate() == []
    F = generating_map(family, n)
    assert F.validate() == []
    assert len(F.src.objects) == len(base_map(family).src.objects) * (n + 1)
