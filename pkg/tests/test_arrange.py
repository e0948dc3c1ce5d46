import random

import pytest
from hypothesis import given, settings, strategies as st

from dblcat.arrange import (Arrangement, Leaf, NotAllowable, NotCompatible, Subdivision, check_compatible,
                            compose_arrangement, cut_tree, fold, horizontal_cuts, is_allowable, normalize, pinwheel,
                            random_cut_tree, split, tree_cells, vertical_cuts)
from dblcat.core import ordinal, product_category
from dblcat.zoo import comm_squares

from oracles import merge_oracle, normalized_subdivisions, slicing_oracle


def random_sliced(rng, n_cells, box=(0, 12, 0, 12)):
    """Random guillotine subdivision obtained by slicing rectangles at random."""
    cells = [box]
    while len(cells) < n_cells:
        rng.shuffle(cells)
        for i, (x0, x1, y0, y1) in enumerate(cells):
            options = [("V", x) for x in range(x0 + 1, x1)] + [("H", y) for y in range(y0 + 1, y1)]
            if options:
                d, at = rng.choice(options)
                cells.pop(i)
                if d == "V":
                    cells += [(x0, at, y0, y1), (at, x1, y0, y1)]
                else:
                    cells += [(x0, x1, y0, at), (x0, x1, at, y1)]
                break
        else:
            break
    return Subdivision.of(cells)


def test_normalize_compresses_coordinates():
    assert normalize([(0, 5, 0, 2), (5, 9, 0, 2)]) == frozenset({(0, 1, 0, 1), (1, 2, 0, 1)})


def test_grid_is_valid_and_allowable():
    for r in range(1, 4):
        for c in range(1, 4):
            g = Subdivision.grid(r, c)
            assert g.validate() == []
            assert is_allowable(g)


def test_pinwheel_is_valid_but_not_allowable():
    p = pinwheel()
    assert p.validate() == []
    assert len(p.cells) == 5
    assert horizontal_cuts(p.cells) == [] and vertical_cuts(p.cells) == []
    assert not is_allowable(p)
    with pytest.raises(NotAllowable):
        cut_tree(p)


def test_overlap_and_gap_are_reported():
    overlap = Subdivision(frozenset({(0, 2, 0, 1), (1, 2, 0, 1)}))
    assert "cells-overlap" in {v.axiom for v in overlap.validate()}
    gap = Subdivision(frozenset({(0, 1, 0, 1), (1, 2, 1, 2)}))
    assert "not-a-tiling" in {v.axiom for v in gap.validate()}


def test_split_partitions_cells():
    g = Subdivision.grid(2, 3).cells
    top, bottom = split(g, "H", 1)
    assert len(top) == 3 and len(bottom) == 3
    left, right = split(g, "V", 2)
    assert len(left) == 4 and len(right) == 2


def test_canonical_tree_takes_all_horizontal_cuts_first():
    t = cut_tree(Subdivision.grid(3, 2))
    assert t.direction == "H" and len(t.children) == 3
    assert sorted(tree_cells(t)) == sorted(Subdivision.grid(3, 2).cells)


def test_small_subdivisions_agree_with_both_oracles():
    count = 0
    for cells in normalized_subdivisions(5):
        expected = slicing_oracle(cells)
        assert merge_oracle(cells) == expected
        assert is_allowable(cells) == expected
        count += 1
    # 1 + 2 + 6 + 25 + 132 rank-normalized subdivisions with at most five cells
    assert count == 166


def test_five_cell_non_allowable_subdivisions_are_the_two_pinwheels():
    bad = [c for c in normalized_subdivisions(5) if not is_allowable(c)]
    assert len(bad) == 2
    mirrored = normalize((3 - x1, 3 - x0, y0, y1) for x0, x1, y0, y1 in pinwheel().cells)
    assert set(bad) == {pinwheel().cells, mirrored}


@given(st.integers(1, 9), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_random_slicings_are_allowable(n, rng):
    s = random_sliced(rng, n)
    assert s.validate() == []
    assert is_allowable(s)
    assert slicing_oracle(s.cells)


# ------------------------------------------------------------------ arrangements


@pytest.fixture(scope="module")
def comm2():
    return comm_squares(ordinal(2))


def sq(t, b, l, r):
    return (t, b, l, r)


def test_grid_arrangement_composes(comm2):
    a = Arrangement.grid([[sq((0, 1), (1, 2), (0, 1), (1, 2)), sq((1, 2), (2, 2), (1, 2), (2, 2))],
                          [sq((1, 2), (2, 2), (1, 2), (2, 2)), sq((2, 2), (2, 2), (2, 2), (2, 2))]])
    assert compose_arrangement(comm2, a) == ((0, 2), (2, 2), (0, 2), (2, 2))


def test_incompatible_labels_raise(comm2):
    a = Arrangement.grid([[sq((0, 1), (1, 2), (0, 1), (1, 2)), sq((0, 1), (1, 2), (0, 1), (1, 2))]])
    bad, _, _ = check_compatible(comm2, a)
    assert bad
    with pytest.raises(NotCompatible):
        compose_arrangement(comm2, a)


def test_unknown_square_is_reported(comm2):
    a = Arrangement.grid([["nope"]])
    bad, _, _ = check_compatible(comm2, a)
    assert bad[0].axiom == "unknown-square"


def test_single_cell_is_its_own_composite(comm2):
    s = sq((0, 1), (1, 2), (0, 1), (1, 2))
    assert compose_arrangement(comm2, Arrangement.grid([[s]])) == s
    assert fold(comm2, Arrangement.grid([[s]]), Leaf((0, 1, 0, 1))) == s


def monotone_labelling(rng, width, height, top=3):
    """A map from grid points to [top]×[top] that is monotone in both directions."""
    def steps(n):
        vals = sorted(rng.randint(0, top) for _ in range(n + 1))
        return vals

    ax, bx = steps(width), steps(width)
    ay, by = steps(height), steps(height)
    return {(x, y): (min(top, ax[x] + ay[y] - min(ay)), min(top, bx[x] + by[y] - min(by)))
            for x in range(width + 1) for y in range(height + 1)}


def labelled(C, sub, point):
    cells = {}
    for x0, x1, y0, y1 in sub.cells:
        hom = lambda p, q: C.hom(point[p], point[q])[0]
        cells[(x0, x1, y0, y1)] = (hom((x0, y0), (x1, y0)), hom((x0, y1), (x1, y1)),
                                   hom((x0, y0), (x0, y1)), hom((x1, y0), (x1, y1)))
    return Arrangement(sub, cells)


@pytest.fixture(scope="module")
def comm33():
    C = product_category(ordinal(3), ordinal(3))
    return C, comm_squares(C)


def test_random_cut_trees_fold_to_the_same_square(comm33):
    C, D = comm33
    rng = random.Random(11)
    for _ in range(15):
        sub = random_sliced(rng, rng.randint(2, 7))
        a = labelled(C, sub, monotone_labelling(rng, sub.width, sub.height))
        expected = compose_arrangement(D, a)
        for _ in range(4):
            assert fold(D, a, random_cut_tree(sub, rng)) == expected
