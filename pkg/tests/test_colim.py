import pytest
from hypothesis import given, settings, strategies as st

from dblcat.core import (Functor, StructureError, discrete_category, embed_h, embed_v, external_product,
                         external_product_functor, homomorphisms, iso_search, ordinal, product_category,
                         terminal_double)
from dblcat.colim import (Diagram, chain_diagram, colimit_cat, colimit_dblcat, filtered_colimit_dblcat,
                          is_directed, pushout_cat_formula, pushout_dblcat_formula, pushout_diagram, span_index)
from dblcat.thomason import inclusion_pair
from dblcat.zoo import corpus, iso_category


def inclusion(A, B):
    return Functor(A, B, {a: a for a in A.objects}, {f: f for f in A.mor})


def test_set_pushout():
    P, leg_b, leg_d = pushout_cat_formula("set", A=[0], B=[0, 1, 2], D=["x", "y"], F={0: "y"})
    assert len(P) == 4
    assert leg_b[0] == leg_d["y"]
    with pytest.raises(StructureError):
        pushout_cat_formula("set", A=[5], B=[0], D=[], F={})


@pytest.mark.parametrize("A_objects", [[0], [2], [0, 2], [1]])
@pytest.mark.parametrize("target", ["[1]", "I", "[1]x[1]"])
def test_full_pushout_matches_general_colimit(A_objects, target):
    D = {"[1]": ordinal(1), "I": iso_category(), "[1]x[1]": product_category(ordinal(1), ordinal(1))}[target]
    B = ordinal(2)
    A = B.full_subcategory(A_objects)
    for F in list(homomorphisms(A, D, limit=3)):
        P, leg_b, leg_d = pushout_cat_formula("full", B=B, A=A_objects, D=D, F=F)
        assert leg_b.validate() == [] and leg_d.validate() == []
        Q, _ = colimit_cat(pushout_diagram(inclusion(A, B), F))
        assert iso_search(P, Q) is not None


def test_cat_x_set_pushout_matches_general_colimit():
    B, K = ordinal(1), ["k", "l"]
    BK = product_category(B, discrete_category(K))
    A_objects = [(0, k) for k in K]
    AK = BK.full_subcategory(A_objects)
    D = iso_category()
    for F in homomorphisms(AK, D, limit=4):
        P, _, _ = pushout_cat_formula("cat_x_set", B=B, A=[0], C=K, D=D, F=F)
        Q, _ = colimit_cat(pushout_diagram(inclusion(AK, BK), F))
        assert iso_search(P, Q) is not None


def test_disc_x_cat_pushout_matches_general_colimit():
    Bset, C = [0, 1], ordinal(1)
    BC = product_category(discrete_category(Bset), C)
    AC = BC.full_subcategory([(0, c) for c in C.objects])
    D = ordinal(2)
    for F in homomorphisms(AC, D, limit=4):
        P, _, _ = pushout_cat_formula("disc_x_cat", A=[0], B=Bset, C=C, D=D, F=F)
        Q, _ = colimit_cat(pushout_diagram(inclusion(AC, BC), F))
        assert iso_search(P, Q) is not None
        assert len(P.objects) == len(D.objects) + len(C.objects)


@given(st.integers(0, 3), st.integers(0, 3), st.data())
@settings(max_examples=25, deadline=None)
def test_pushout_of_ordinals_counts_objects(n, m, data):
    B, D = ordinal(n + 1), ordinal(m)
    A = B.full_subcategory([0])
    F = Functor(A, D, {0: data.draw(st.integers(0, m))}, {})
    F.mor[(0, 0)] = D.ident[F.ob[0]]
    Q, legs = colimit_cat(pushout_diagram(inclusion(A, B), F))
    assert Q.validate() == []
    assert len(Q.objects) == (m + 1) + (n + 1)
    assert all(leg.validate() == [] for leg in legs.values())


def test_chain_colimit_is_the_last_stage():
    stages = [ordinal(0), ordinal(1), ordinal(2)]
    maps = [Functor(stages[0], stages[1], {0: 0}, {(0, 0): (0, 0)}), inclusion(stages[1], stages[2])]
    d = chain_diagram(stages, maps)
    assert d.validate() == []
    Q, _ = colimit_cat(d)
    assert iso_search(Q, ordinal(2)) is not None


def test_diagram_validation_catches_non_commuting_triangle():
    one, two = ordinal(0), ordinal(1)
    stages = [one, two, two]
    maps = [Functor(one, two, {0: 0}, {(0, 0): (0, 0)}), Functor.identity(two)]
    d = chain_diagram(stages, maps)
    d.edges[(0, 2)] = Functor(one, two, {0: 1}, {(0, 0): (1, 1)})
    assert "diagram-functoriality" in {v.axiom for v in d.validate()}


def test_directedness():
    assert is_directed(ordinal(3)) == []
    assert is_directed(span_index()) != []
    assert is_directed(iso_category()) == []


def test_double_pushout_formula_matches_engine():
    kind = ("point_into_I",)
    B, A_objects = inclusion_pair(kind)
    A, C = B.full_subcategory(A_objects), ordinal(0)
    AC, BC = external_product(A, C), external_product(B, C)
    F = next(iter(homomorphisms(AC, terminal_double(), limit=1)))
    P, leg_b, leg_d = pushout_dblcat_formula(kind, C, F)
    i = external_product_functor(inclusion(A, B), Functor.identity(C), AC, BC)
    Q, _ = colimit_dblcat(pushout_diagram(i, F))
    assert len(P.objects) == 2 and len(P.sq) == 4
    assert iso_search(P, Q) is not None
    assert leg_b.validate() == [] and leg_d.validate() == []


def test_filtered_colimit_agrees_with_general_colimit():
    X0, X1 = corpus()["[1]x[1]"], external_product(ordinal(1), ordinal(2))
    F = next(iter(homomorphisms(X0, X1, limit=1)))
    d = chain_diagram([X0, X1], [F])
    P, _ = filtered_colimit_dblcat(d)
    Q, _ = colimit_dblcat(d)
    assert iso_search(P, Q) is not None


def test_filtered_colimit_rejects_span():
    D = embed_h(ordinal(0))
    i = next(iter(homomorphisms(D, embed_v(ordinal(1)), limit=1)))
    F = next(iter(homomorphisms(D, embed_h(ordinal(1)), limit=1)))
    with pytest.raises(StructureError):
        filtered_colimit_dblcat(pushout_diagram(i, F))


def test_restricted_diagram_is_a_category_diagram():
    X0 = embed_h(ordinal(1))
    d = chain_diagram([X0, X0], [next(iter(homomorphisms(X0, X0, limit=1)))])
    hd = d.restrict("hor")
    assert isinstance(hd, Diagram) and hd.validate() == []
