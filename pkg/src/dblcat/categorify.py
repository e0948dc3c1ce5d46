"""Fundamental categories and horizontal categorification of 2-truncated simplicial objects."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Tuple

from .construct import DEFAULT_BUDGET, Budget, SquareClosure, _certify, _Mark, present_category
from .core import (BudgetExceeded, DoubleCategory, DoubleFunctor, FinCategory, Functor, StructureError,
                   homomorphisms, ordinal, product_category, sortkey, transpose)
from .nerve import SimplicialTruncation, TruncationMorphism, _set_level, _set_map, horizontal_nerve, nerve_cat
from .thomason import SimplexLikeComplex

Id = Hashable

# bound on the functors enumerated by the adjunction check, separate from closure budgets
ENUMERATION_LIMIT = 100000


# --------------------------------------------------------------------------
# building truncations


def truncate(X: SimplicialTruncation, k: int = 2) -> SimplicialTruncation:
    if X.n < k:
        raise StructureError(f"truncation has only {X.n} levels")
    return SimplicialTruncation(k, {j: X.levels[j] for j in range(k + 1)},
                                {key: F for key, F in X.faces.items() if key[0] <= k},
                                {key: F for key, F in X.degens.items() if key[0] < k}, X.discrete)


def constant(A: FinCategory, n: int = 2) -> SimplicialTruncation:
    """σA: A at every level with identity operators."""
    one = Functor.identity(A)
    return SimplicialTruncation(n, {k: A for k in range(n + 1)},
                                {(k, i): one for k in range(1, n + 1) for i in range(k + 1)},
                                {(k, i): one for k in range(n) for i in range(k + 1)})


def simplex(m: int, n: int = 2) -> SimplicialTruncation:
    """Δ[m] truncated at level n (the nerve of [m])."""
    return nerve_cat(ordinal(m), n)


def complex_truncation(K: SimplexLikeComplex, n: int = 2) -> SimplicialTruncation:
    """The simplicial set of an ordered complex: monotone vertex lists spanning a face."""
    faces = {frozenset(f) for f in K.faces()}
    verts = sorted({v for f in faces for v in f})
    levels = {}
    for k in range(n + 1):
        cells = [c for c in itertools.combinations_with_replacement(verts, k + 1) if frozenset(c) in faces]
        levels[k] = _set_level(cells if k else [c[0] for c in cells])
    as_tuple = lambda x, k: x if k else (x,)
    from_tuple = lambda t: t if len(t) > 1 else t[0]
    fac = {(k, i): _set_map(levels[k], levels[k - 1],
                            lambda x, k=k, i=i: from_tuple(as_tuple(x, k)[:i] + as_tuple(x, k)[i + 1:]))
           for k in range(1, n + 1) for i in range(k + 1)}
    deg = {(k, i): _set_map(levels[k], levels[k + 1],
                            lambda x, k=k, i=i: as_tuple(x, k)[:i + 1] + as_tuple(x, k)[i:])
           for k in range(n) for i in range(k + 1)}
    return SimplicialTruncation(n, levels, fac, deg, discrete=True)


def _product_functor(F: Functor, G: Functor, src: FinCategory, tgt: FinCategory) -> Functor:
    return Functor(src, tgt, {(a, b): (F.ob[a], G.ob[b]) for a, b in src.objects},
                   {(f, g): (F.mor[f], G.mor[g]) for f, g in src.mor})


def levelwise_product(X: SimplicialTruncation, Y: SimplicialTruncation) -> SimplicialTruncation:
    n = min(X.n, Y.n)
    levels = {k: product_category(X.levels[k], Y.levels[k]) for k in range(n + 1)}
    faces = {key: _product_functor(X.faces[key], Y.faces[key], levels[key[0]], levels[key[0] - 1])
             for key in X.faces if key[0] <= n}
    degens = {key: _product_functor(X.degens[key], Y.degens[key], levels[key[0]], levels[key[0] + 1])
              for key in X.degens if key[0] < n}
    return SimplicialTruncation(n, levels, faces, degens, X.discrete and Y.discrete)


def object_part(X: SimplicialTruncation) -> SimplicialTruncation:
    """Obj X as a set-valued truncation."""
    levels = {k: _set_level(list(L.objects)) for k, L in X.levels.items()}
    fac = {key: _set_map(levels[key[0]], levels[key[0] - 1], lambda x, F=F: F.ob[x]) for key, F in X.faces.items()}
    deg = {key: _set_map(levels[key[0]], levels[key[0] + 1], lambda x, F=F: F.ob[x]) for key, F in X.degens.items()}
    return SimplicialTruncation(X.n, levels, fac, deg, discrete=True)


def _require_2(X: SimplicialTruncation) -> None:
    if X.n < 2:
        raise StructureError("categorification needs levels 0, 1 and 2")
    bad = truncate(X, 2).validate()
    if bad:
        raise StructureError("invalid truncation: " + "; ".join(map(str, bad[:3])))


# --------------------------------------------------------------------------
# fundamental category


def _fundamental(X: SimplicialTruncation, budget: Budget) -> Tuple[FinCategory, Dict[Id, Id]]:
    L0, L1, L2 = (X.levels[k] for k in range(3))
    s0 = X.degens[(0, 0)]
    idents = {a: s0.ob[a] for a in L0.objects}
    degenerate = set(idents.values())
    gens = {x: (X.faces[(1, 1)].ob[x], X.faces[(1, 0)].ob[x]) for x in L1.objects if x not in degenerate}
    rels = []
    for t in L2.objects:
        a, b, c = (X.faces[(2, i)].ob[t] for i in (2, 0, 1))
        rels.append(([a, b], [c]))
    return present_category(L0.objects, gens, rels, idents, budget, with_names=True)


def fundamental_category(X: SimplicialTruncation, budget: Budget = DEFAULT_BUDGET) -> FinCategory:
    """cX: free category on the 1-simplices, degenerate ones as identities, modulo d2τ;d0τ = d1τ."""
    if X.n < 2:
        raise StructureError("the fundamental category needs levels 0, 1 and 2")
    if not X.discrete:
        X = object_part(X)
    return _fundamental(X, budget)[0]


@dataclass(eq=False)
class Categorification:
    """c_hX with the generator maps used by the adjunction."""
    double: DoubleCategory
    horizontal_name: Dict[Id, Id]  # object of X1 -> horizontal morphism
    square_name: Dict[Id, Id]  # morphism of X1 -> square
    source: SimplicialTruncation


def categorify_h(X: SimplicialTruncation, budget: Budget = DEFAULT_BUDGET) -> Categorification:
    _require_2(X)
    L0, L1, L2 = (X.levels[k] for k in range(3))
    d = {(k, i): X.faces[(k, i)] for k in (1, 2) for i in range(k + 1)}
    s0 = X.degens[(0, 0)]
    H, hname = _fundamental(object_part(X), budget)
    V = L0
    eng = SquareClosure(H, V, budget.max_squares, budget.max_cells)
    cls = {}
    for a in sorted(L1.mor, key=sortkey):
        x, y = L1.mor[a]
        bd = (hname[x], hname[y], d[(1, 1)].mor[a], d[(1, 0)].mor[a])
        cls[a] = eng.generator(bd, a)
    # (i) vertical composites agree with composition in X1
    for (a, b), c in L1.comp.items():
        eng.merge(eng.vcomp(cls[a], cls[b]), cls[c])
    # (ii) 2-simplices glue their outer faces
    for t in L2.mor:
        eng.merge(eng.hcomp(cls[d[(2, 2)].mor[t]], cls[d[(2, 0)].mor[t]]), cls[d[(2, 1)].mor[t]])
    # (iii) horizontal identities are degeneracies
    for j in V.mor:
        eng.merge(eng.idh[j], cls[s0.mor[j]])
    # (iv) vertical identities are identities of X1
    for x in L1.objects:
        eng.merge(eng.idv[hname[x]], cls[L1.ident[x]])
    eng.saturate()

    def name(c):
        labs = [l for l in eng.labels[c] if not isinstance(l, _Mark)]
        if labs:
            return min(labs, key=sortkey)
        marks = sorted(((m.kind, m.cell) for m in eng.labels[c] if isinstance(m, _Mark)), key=sortkey)
        if marks:
            return marks[0]
        return eng.term[c]

    C, names = eng.result(name)
    _certify(C.validate())
    return Categorification(C, dict(hname), {a: names[c] for a, c in cls.items()}, X)


def fundamental_double_category(X: SimplicialTruncation, budget: Budget = DEFAULT_BUDGET) -> DoubleCategory:
    """c_hX."""
    return categorify_h(X, budget).double


def fundamental_double_category_v(X: SimplicialTruncation, budget: Budget = DEFAULT_BUDGET) -> DoubleCategory:
    """c_vX, the transpose of c_hX."""
    return transpose(fundamental_double_category(X, budget))


# --------------------------------------------------------------------------
# the adjunction


def _fill(C: DoubleCategory, E: DoubleCategory, ob, hor, ver, sq) -> Optional[DoubleFunctor]:
    """Extend generator values along the composition tables; None on conflict or gap."""
    hor, sq = dict(hor), dict(sq)
    for a in C.objects:
        if C.hor.ident[a] in hor and hor[C.hor.ident[a]] != E.hor.ident[ob[a]]:
            return None
        hor[C.hor.ident[a]] = E.hor.ident[ob[a]]
    for f, s in C.idv.items():
        if f in hor:
            sq.setdefault(s, E.idv[hor[f]])
    for v, s in C.idh.items():
        sq.setdefault(s, E.idh[ver[v]])
    changed = True
    while changed:
        changed = False
        for (f, g), h in C.hor.comp.items():
            if f in hor and g in hor and h not in hor:
                hor[h] = E.hor.comp.get((hor[f], hor[g]))
                changed = True
        for tab, etab in ((C.hcomp, E.hcomp), (C.vcomp, E.vcomp)):
            for (a, b), c in tab.items():
                if a in sq and b in sq and c not in sq:
                    sq[c] = etab.get((sq[a], sq[b]))
                    changed = True
        for f, s in C.idv.items():
            if f in hor and s not in sq:
                sq[s] = E.idv[hor[f]]
                changed = True
    if set(hor) != set(C.hor.mor) or set(sq) != set(C.sq) or None in hor.values() or None in sq.values():
        return None
    F = DoubleFunctor(C, E, dict(ob), hor, dict(ver), sq)
    return None if F.validate() else F


def transpose_to_functor(cat: Categorification, G: TruncationMorphism, E: DoubleCategory) -> Optional[DoubleFunctor]:
    """G ↦ G′: the double functor c_hX → E determined by a truncation morphism X → N_h E."""
    G0, G1 = G.components[0], G.components[1]
    hor = {cat.horizontal_name[x]: G1.ob[x][0] for x in cat.source.levels[1].objects}
    sq = {cat.square_name[a]: G1.mor[a][0] for a in cat.source.levels[1].mor}
    return _fill(cat.double, E, G0.ob, hor, G0.mor, sq)


def transpose_to_morphism(cat: Categorification, F: DoubleFunctor, target: SimplicialTruncation
                          ) -> TruncationMorphism:
    """G′ ↦ G: restrict along X → c_hX; level 2 is forced by the 2-coskeletal target."""
    X = cat.source
    L0, L1, L2 = (X.levels[k] for k in range(3))
    G0 = Functor(L0, target.levels[0], dict(F.ob), dict(F.ver))
    G1 = Functor(L1, target.levels[1], {x: (F.hor[cat.horizontal_name[x]],) for x in L1.objects},
                 {a: (F.sq[cat.square_name[a]],) for a in L1.mor})
    d2, d0 = X.faces[(2, 2)], X.faces[(2, 0)]
    G2 = Functor(L2, target.levels[2], {t: G1.ob[d2.ob[t]] + G1.ob[d0.ob[t]] for t in L2.objects},
                 {t: G1.mor[d2.mor[t]] + G1.mor[d0.mor[t]] for t in L2.mor})
    return TruncationMorphism(X, target, {0: G0, 1: G1, 2: G2})


def truncation_morphisms(X: SimplicialTruncation, E: DoubleCategory, target: Optional[SimplicialTruncation] = None,
                         budget: int = ENUMERATION_LIMIT) -> List[TruncationMorphism]:
    """All morphisms X → N_h E of 2-truncations; G0 and G2 are forced by G1."""
    target = target or horizontal_nerve(E, 2)
    L1 = X.levels[1]
    s0 = X.degens[(0, 0)]
    out = []
    count = 0
    for G1 in homomorphisms(L1, target.levels[1]):
        count += 1
        if count > budget:
            raise BudgetExceeded("enumeration", budget, "enumerating truncation morphisms")
        td1 = target.faces[(1, 1)]
        G0 = Functor(X.levels[0], target.levels[0], {a: td1.ob[G1.ob[s0.ob[a]]] for a in X.levels[0].objects},
                     {j: td1.mor[G1.mor[s0.mor[j]]] for j in X.levels[0].mor})
        d2, d0 = X.faces[(2, 2)], X.faces[(2, 0)]
        L2 = X.levels[2]
        try:
            G2 = Functor(L2, target.levels[2], {t: G1.ob[d2.ob[t]] + G1.ob[d0.ob[t]] for t in L2.objects},
                         {t: G1.mor[d2.mor[t]] + G1.mor[d0.mor[t]] for t in L2.mor})
        except KeyError:
            continue
        if any(G2.ob[t] not in target.levels[2].ident for t in L2.objects):
            continue
        if any(G2.mor[t] not in target.levels[2].mor for t in L2.mor):
            continue
        G = TruncationMorphism(X, target, {0: G0, 1: G1, 2: G2})
        if not G.validate():
            out.append(G)
    return out


def adjunction_bijection_check(X: SimplicialTruncation, E: DoubleCategory, budget: Budget = DEFAULT_BUDGET) -> bool:
    """G ↦ G′ and G′ ↦ G are mutually inverse bijections between both hom-sets."""
    cat = categorify_h(truncate(X, 2), budget)
    target = horizontal_nerve(E, 2)
    left = list(homomorphisms(cat.double, E, limit=ENUMERATION_LIMIT + 1))
    if len(left) > ENUMERATION_LIMIT:
        raise BudgetExceeded("enumeration", ENUMERATION_LIMIT, "enumerating double functors")
    right = truncation_morphisms(cat.source, E, target)
    key_l = lambda F: F.key()
    key_r = lambda G: tuple((k, tuple(sorted(G.components[k].ob.items(), key=sortkey)),
                             tuple(sorted(G.components[k].mor.items(), key=sortkey))) for k in range(3))
    lset = {key_l(F) for F in left}
    rset = {key_r(G) for G in right}
    if len(lset) != len(rset):
        return False
    for G in right:
        F = transpose_to_functor(cat, G, E)
        if F is None or key_l(F) not in lset:
            return False
        if key_r(transpose_to_morphism(cat, F, target)) != key_r(G):
            return False
    for F in left:
        G = transpose_to_morphism(cat, F, target)
        if G.validate() or key_r(G) not in rset:
            return False
        back = transpose_to_functor(cat, G, E)
        if back is None or key_l(back) != key_l(F):
            return False
    return True


def counit(E: DoubleCategory, budget: Budget = DEFAULT_BUDGET) -> DoubleFunctor:
    """c_h N_h E → E, the transpose of the identity of N_h E."""
    X = horizontal_nerve(E, 2)
    cat = categorify_h(X, budget)
    ident = TruncationMorphism(X, X, {k: Functor.identity(X.levels[k]) for k in range(3)})
    F = transpose_to_functor(cat, ident, E)
    if F is None:
        raise StructureError("counit is not well defined")
    return F
