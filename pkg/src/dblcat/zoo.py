"""Small named fixtures used by tests, the CLI and the acceptance suite."""
from __future__ import annotations

import random
from typing import Dict

from .construct import free_category, free_double_category
from .core import (DoubleCategory, DoubleScheme, FinCategory, ReflexiveGraph, discrete_category, embed_h, embed_v,
                   external_product, ordinal, poset_category, product_category, terminal_double)


def iso_category() -> FinCategory:
    """𝐈: two objects and a unique morphism between any two (the free-living isomorphism)."""
    return poset_category([0, 1], lambda a, b: True)


def square_poset() -> FinCategory:
    """[1]×[1] as a poset category."""
    return product_category(ordinal(1), ordinal(1))


def comm_squares(C: FinCategory) -> DoubleCategory:
    """The double category of commutative squares in C; a square is named by its boundary."""
    sq = {}
    for t, (a, b) in C.mor.items():
        for l in C.out_of(a):
            c = C.tgt(l)
            for r in C.out_of(b):
                d = C.tgt(r)
                tr = C.comp[(t, r)]
                for bot in C.hom(c, d):
                    if C.comp[(l, bot)] == tr:
                        sq[(t, bot, l, r)] = (t, bot, l, r)
    hcomp, vcomp = {}, {}
    for s1 in sq:
        t1, b1, l1, r1 = s1
        for s2 in sq:
            t2, b2, l2, r2 = s2
            if r1 == l2:
                hcomp[(s1, s2)] = (C.comp[(t1, t2)], C.comp[(b1, b2)], l1, r2)
            if b1 == t2:
                vcomp[(s1, s2)] = (t1, b2, C.comp[(l1, l2)], C.comp[(r1, r2)])
    idv = {f: (f, f, C.ident[a], C.ident[b]) for f, (a, b) in C.mor.items()}
    idh = {v: (C.ident[a], C.ident[b], v, v) for v, (a, b) in C.mor.items()}
    return DoubleCategory(C, C, sq, hcomp, vcomp, idv, idh)


def _graph(vertices, edges) -> ReflexiveGraph:
    e = dict(edges)
    ident = {}
    for v in vertices:
        ident[v] = ("1", v)
        e[("1", v)] = (v, v)
    return ReflexiveGraph(tuple(vertices), e, ident)


def free_on_edges(vertices, edges) -> FinCategory:
    """Free category on a directed acyclic graph given as {name: (src, tgt)}."""
    return free_category(_graph(vertices, edges))


def random_dag_category(rng: random.Random, n: int = 4, p: float = 0.4) -> FinCategory:
    verts = list(range(n))
    edges = {}
    for i in verts:
        for j in verts:
            if i < j and rng.random() < p:
                edges[f"e{i}{j}"] = (i, j)
    return free_on_edges(verts, edges)


def noreedy() -> DoubleCategory:
    """Four objects, horizontal f: A→B and g: C→D, a vertical isomorphism C≅B, identity squares only."""
    H = free_on_edges(["A", "B", "C", "D"], {"f": ("A", "B"), "g": ("C", "D")})
    objs = ["A", "B", "C", "D"]
    mor = {("1", x): (x, x) for x in objs}
    mor.update({"k": ("C", "B"), "k'": ("B", "C")})
    comp = {}
    for f, (s, t) in mor.items():
        for g, (s2, t2) in mor.items():
            if t != s2:
                continue
            if f[0] == "1" and isinstance(f, tuple):
                comp[(f, g)] = g
            elif isinstance(g, tuple) and g[0] == "1":
                comp[(f, g)] = f
            else:
                comp[(f, g)] = ("1", s)
    V = FinCategory(objs, mor, {x: ("1", x) for x in objs}, comp)
    return free_double_category(DoubleScheme(H, V, {}), lazy=False)


def corpus() -> Dict[str, DoubleCategory]:
    """Named double categories used for property checks across modules."""
    one = ordinal(1)
    I = iso_category()
    return {
        "terminal": terminal_double(),
        "H[1]": embed_h(one),
        "V[1]": embed_v(one),
        "H[2]": embed_h(ordinal(2)),
        "[1]x[1]": external_product(one, one),
        "[1]x[2]": external_product(one, ordinal(2)),
        "VI": embed_v(I),
        "HI": embed_h(I),
        "Ix[1]": external_product(I, one),
        "comm[1]": comm_squares(one),
        "V([1]x[1])": embed_v(square_poset()),
        "noreedy": noreedy(),
    }


def small_categories() -> Dict[str, FinCategory]:
    return {
        "[0]": ordinal(0),
        "[1]": ordinal(1),
        "[2]": ordinal(2),
        "I": iso_category(),
        "[1]x[1]": square_poset(),
        "disc2": discrete_category([0, 1]),
        "span": free_on_edges(["a", "b", "c"], {"f": ("a", "b"), "g": ("a", "c")}),
    }
