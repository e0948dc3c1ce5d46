import pytest
from hypothesis import given, settings, strategies as st

from dblcat.core import (BudgetExceeded, DoubleScheme, ReflexiveGraph, StructureError, discrete_category,
                         iso_search, ordinal)
from dblcat.construct import (Budget, FreePresentation, FreeSquare, InfiniteCategory, UnionFind,
                              congruence_closure, free_category, free_double_category, present_category,
                              quotient_category, quotient_double)
from dblcat.zoo import iso_category


def graph(vertices, edges):
    ids = {v: f"i{v}" for v in vertices}
    return ReflexiveGraph(list(vertices), {**edges, **{e: (v, v) for v, e in ids.items()}}, ids)


def parallel_pair():
    return free_category(graph([0, 1], {"f": (0, 1), "g": (0, 1)}))


def test_free_category_on_a_path():
    F = free_category(graph([0, 1, 2], {"e": (0, 1), "f": (1, 2), "k": (0, 2)}))
    assert F.validate() == []
    assert F.compose("e", "f") == ("e", "f")
    # two distinct arrows 0 -> 2: the edge and the path
    assert len(F.hom(0, 2)) == 2
    assert F.ident[1] == "i1"


def test_free_category_on_a_cycle_is_infinite():
    with pytest.raises(InfiniteCategory):
        free_category(graph([0, 1], {"e": (0, 1), "f": (1, 0)}))


def test_free_category_path_budget():
    g = graph(range(4), {"a": (0, 1), "b": (1, 2), "c": (2, 3)})
    with pytest.raises(BudgetExceeded) as info:
        free_category(g, Budget(max_path=2))
    assert info.value.bound == "max_path"


@st.composite
def dags(draw):
    n = draw(st.integers(1, 5))
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(draw(st.integers(0, 1))):
                edges[f"e{i}{j}{k}"] = (i, j)
    return graph(range(n), edges)


def count_paths(g):
    nonid = {e: st_ for e, st_ in g.edges.items() if e not in g.identity.values()}
    memo = {}

    def from_(v):
        if v not in memo:
            memo[v] = sum(1 + from_(t) for e, (s, t) in nonid.items() if s == v)
        return memo[v]
    return sum(from_(v) for v in g.vertices)


@given(dags())
@settings(max_examples=40, deadline=None)
def test_free_category_counts_paths(g):
    F = free_category(g)
    assert F.validate() == []
    assert len(F.mor) == len(g.vertices) + count_paths(g)


def test_presented_iso_category():
    C = present_category([0, 1], {"f": (0, 1), "g": (1, 0)},
                         [(("f", "g"), (("1", 0),)), (("g", "f"), (("1", 1),))])
    assert C.validate() == []
    assert iso_search(C, iso_category()) is not None


def test_presented_monoids():
    C = present_category([0], {"x": (0, 0)}, [(("x", "x", "x"), (("1", 0),))])
    assert C.validate() == [] and len(C.mor) == 3
    C = present_category([0], {"x": (0, 0)}, [(("x", "x", "x"), ("x", "x"))])
    assert C.validate() == [] and len(C.mor) == 3


def test_free_double_category_on_a_single_square():
    H, V = parallel_pair(), discrete_category([0, 1])
    D = free_double_category(DoubleScheme(H, V, {"a": ("f", "g", V.ident[0], V.ident[1])}), lazy=False)
    assert D.validate() == []
    assert sorted(map(repr, D.sq)) == ["IdV('f')", "IdV('g')", "IdV('i0')", "IdV('i1')", "Tile('a')"]


def test_free_double_category_on_corner_square():
    o = ordinal(1)
    D = free_double_category(DoubleScheme(o, o, {"a": ((0, 1), (1, 1), (0, 1), (1, 1))}), lazy=False)
    assert D.validate() == []
    assert len(D.sq) == 5


def test_endo_square_gives_a_presentation():
    one = ordinal(0)
    S = DoubleScheme(one, one, {"a": ((0, 0), (0, 0), (0, 0), (0, 0))})
    P = free_double_category(S, Budget(max_squares=50))
    assert isinstance(P, FreePresentation)
    with pytest.raises(BudgetExceeded):
        free_double_category(S, Budget(max_squares=50), lazy=False)
    g = ("g", "a")
    two = P.square(("h", g, g))
    assert two.tag == "Tile" and two.generator_count() == {"a": 2}
    assert P.equal(("h", g, g), g) is False
    assert P.equal(("h", ("idv", (0, 0)), g), g) is True
    assert P.equal(("h", ("h", g, g), g), ("h", g, ("h", g, g))) is True
    # same cell count, different shapes: not decided by normal forms
    assert P.equal(("h", g, g), ("v", g, g)) is None


def test_free_square_arrangement():
    sq = FreeSquare("Tile", (((0, 1, 0, 1), "a"), ((1, 2, 0, 1), "b")))
    assert len(sq.arrangement().subdivision.cells) == 2
    with pytest.raises(ValueError):
        FreeSquare("IdV", "f").arrangement()


def test_congruence_closure_propagates_through_composition():
    F = free_category(graph([0, 1, 2], {"e": (0, 1), "e2": (0, 1), "f": (1, 2)}))
    cong = congruence_closure([("e", "e2")], F)
    assert cong.rep[("e", "f")] == cong.rep[("e2", "f")]
    Q = quotient_category(F, cong)
    assert Q.validate() == []
    assert iso_search(Q, ordinal(2)) is not None


def test_congruence_rejects_non_parallel_pairs():
    F = parallel_pair()
    with pytest.raises(StructureError):
        congruence_closure([("f", "i0")], F)


def test_quotient_of_parallel_squares():
    H, V = parallel_pair(), discrete_category([0, 1])
    bd = ("f", "g", V.ident[0], V.ident[1])
    D = free_double_category(DoubleScheme(H, V, {"a": bd, "b": bd}), lazy=False)
    assert len(D.sq) == 6
    a, b = (s for s in D.sq if repr(s) in ("Tile('a')", "Tile('b')"))
    Q = quotient_double(D, congruence_closure([(a, b)], D))
    assert Q.validate() == [] and len(Q.sq) == 5


def test_union_find():
    uf = UnionFind()
    for i in range(5):
        uf.add(i)
    assert uf.union(0, 3) and uf.union(3, 4)
    assert not uf.union(0, 4)
    assert sorted(map(sorted, uf.classes().values())) == [[0, 3, 4], [1], [2]]


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("DBLCAT_BUDGET", "max_squares=3, max-path=7")
    assert Budget.from_env(max_cells=9).as_dict() == {"max_cells": 9, "max_path": 7, "max_squares": 3}
    monkeypatch.setenv("DBLCAT_BUDGET", "bogus=1")
    with pytest.raises(ValueError):
        Budget.from_env()
