"""Topologies on Cat, epimorphism tests, and the model-structure predicates on double categories.

Conventions: 𝔻₀ is the category of objects and vertical morphisms, 𝔻₁ the
category of horizontal morphisms and squares under vertical composition.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Hashable, List, Optional, Tuple

from .construct import DEFAULT_BUDGET, Budget, InfiniteCategory, free_category
from .core import (DoubleCategory, DoubleFunctor, FinCategory, Functor, HNatTransf, ReflexiveGraph, StructureError,
                   homomorphisms, horizontal_transformations, sortkey)
from .nerve import _strings

Id = Hashable


class Topology(str, Enum):
    TAU = "tau"
    TAU_PRIME = "tau_prime"
    TRIVIAL = "trivial"

    @classmethod
    def parse(cls, s) -> "Topology":
        if isinstance(s, Topology):
            return s
        key = str(s).lower().replace("'", "_prime").replace("tauprime", "tau_prime").replace("-", "_")
        for t in cls:
            if t.value == key:
                return t
        raise StructureError(f"unknown topology {s!r}")


@dataclass
class EpiResult:
    """Outcome of an epi test with the evidence found.

    τ′: ``witness`` is {"objects": section, "arrows": lifts}; trivial: a
    functor section; τ: the explored automaton states.  When the test
    fails for τ, ``counterexample`` is a composable string with no lift.
    """
    holds: bool
    topology: Topology
    witness: Optional[Any] = None
    counterexample: Optional[Tuple[Id, ...]] = None

    def __bool__(self) -> bool:
        return self.holds


def _check_functor(p: Functor) -> None:
    bad = p.validate()
    if bad:
        raise StructureError("invalid functor: " + "; ".join(map(str, bad[:3])))


def is_simplicially_surjective(p: Functor) -> EpiResult:
    """Surjectivity of p_k on nerves for every k, by language inclusion.

    Letters are morphisms of the codomain.  The codomain accepts composable
    strings (state: last target); the domain accepts strings with a
    composable lift (state: set of possible lift targets).  Explore the
    product of the first with the subset construction of the second; an
    empty subset on a reachable composable string is a counterexample.
    """
    E, B = p.src, p.tgt
    if set(B.objects) - set(p.ob.values()):
        missing = min(set(B.objects) - set(p.ob.values()), key=sortkey)
        return EpiResult(False, Topology.TAU, counterexample=(missing,))
    lifts: Dict[Id, List[Id]] = {m: [] for m in B.mor}
    for e, m in p.mor.items():
        lifts[m].append(e)
    start = (None, None)
    parent: Dict[tuple, Optional[tuple]] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        b, sub = state
        letters = B.mor if b is None else B.out_of(b)
        for m in letters:
            nxt = frozenset(E.tgt(e) for e in lifts[m] if sub is None or E.src(e) in sub)
            if not nxt:
                word, s = [m], state
                while parent[s] is not None:
                    s, letter = parent[s]
                    word.append(letter)
                return EpiResult(False, Topology.TAU, counterexample=tuple(reversed(word)))
            key = (B.tgt(m), nxt)
            if key not in parent:
                parent[key] = (state, m)
                queue.append(key)
    return EpiResult(True, Topology.TAU, witness=len(parent))


def find_u_split(p: Functor) -> Optional[Dict[str, Dict[Id, Id]]]:
    """A graph section of p: objects q(b) over b and, for every morphism m, a lift between them."""
    E, B = p.src, p.tgt
    fiber: Dict[Id, List[Id]] = {b: [] for b in B.objects}
    for x, b in p.ob.items():
        fiber[b].append(x)
    images: Dict[Tuple[Id, Id], Dict[Id, Id]] = {}
    for e, (x, y) in E.mor.items():
        images.setdefault((x, y), {}).setdefault(p.mor[e], e)
    order = sorted(B.objects, key=lambda b: (len(fiber[b]), -len(B.out_of(b)) - len(B.into(b)), sortkey(b)))
    between: Dict[Id, List[Id]] = {b: [] for b in B.objects}
    placed = set()
    for b in order:
        placed.add(b)
        for m, (s, t) in B.mor.items():
            if (s == b and t in placed) or (t == b and s in placed):
                between[b].append(m)
    q: Dict[Id, Id] = {}

    def ok(b) -> bool:
        for m in between[b]:
            s, t = B.mor[m]
            if m not in images.get((q[s], q[t]), {}):
                return False
        return True

    def rec(i) -> bool:
        if i == len(order):
            return True
        b = order[i]
        for x in fiber[b]:
            q[b] = x
            if ok(b) and rec(i + 1):
                return True
        q.pop(b, None)
        return False

    if not rec(0):
        return None
    arrows = {m: images[(q[s], q[t])][m] for m, (s, t) in B.mor.items()}
    return {"objects": dict(q), "arrows": arrows}


def find_section(p: Functor) -> Optional[Functor]:
    """A functor q with p∘q = id, if one exists."""
    allowed = lambda sort, x, y: (p.ob[y] == x) if sort == "o" else (p.mor[y] == x)
    for q in homomorphisms(p.tgt, p.src, limit=1, allowed=allowed):
        return q
    return None


def is_epi(p: Functor, T="tau") -> EpiResult:
    T = Topology.parse(T)
    _check_functor(p)
    if T is Topology.TAU:
        return is_simplicially_surjective(p)
    if T is Topology.TAU_PRIME:
        w = find_u_split(p)
        return EpiResult(w is not None, T, witness=w)
    q = find_section(p)
    return EpiResult(q is not None, T, witness=q)


# --------------------------------------------------------------------------
# invertible cells and the mapping path object


def horizontal_inverse(D: DoubleCategory, s: Id) -> Optional[Id]:
    t, b, l, r = D.sq[s]
    for c in D.by_left.get(r, ()):
        if D.right(c) == l and D.hcomp.get((s, c)) == D.idh[l] and D.hcomp.get((c, s)) == D.idh[r]:
            return c
    return None


def vertical_inverse(D: DoubleCategory, s: Id) -> Optional[Id]:
    t, b, l, r = D.sq[s]
    for c in D.by_top.get(b, ()):
        if D.bottom(c) == t and D.vcomp.get((s, c)) == D.idv[t] and D.vcomp.get((c, s)) == D.idv[b]:
            return c
    return None


def iso1(B: DoubleCategory) -> FinCategory:
    """Horizontal isomorphisms and horizontally invertible squares, composed vertically."""
    objs = [f for f in B.hor.mor if B.hor.is_iso(f)]
    mor = {s: (B.top(s), B.bottom(s)) for s in B.sq if horizontal_inverse(B, s) is not None}
    comp = {(a, c): d for (a, c), d in B.vcomp.items() if a in mor and c in mor}
    return FinCategory(objs, mor, {f: B.idv[f] for f in objs}, comp)


@dataclass(eq=False)
class MappingPath:
    """(P_F)₀ with its projections: ``source`` = s∘F̄₀, ``target`` = t̄, ``to_iso`` = F̄₀."""
    category: FinCategory
    source: Functor
    target: Functor
    to_iso: Functor


def mapping_path_object(F: DoubleFunctor) -> MappingPath:
    A, B = F.src, F.tgt
    I = iso1(B)
    into: Dict[Id, List[Id]] = {}
    for f in I.objects:
        into.setdefault(B.hor.tgt(f), []).append(f)
    objs = [(a, f) for a in A.objects for f in into.get(F.ob[a], ())]
    by_right: Dict[Id, List[Id]] = {}
    for s in I.mor:
        by_right.setdefault(B.right(s), []).append(s)
    mor = {}
    for k, (a, a2) in A.ver.mor.items():
        for s in by_right.get(F.ver[k], ()):
            mor[(k, s)] = ((a, B.top(s)), (a2, B.bottom(s)))
    comp = {}
    out_of: Dict[tuple, List[tuple]] = {}
    for m, (x, y) in mor.items():
        out_of.setdefault(x, []).append(m)
    for m, (x, y) in mor.items():
        for n in out_of.get(y, ()):
            comp[(m, n)] = (A.ver.comp[(m[0], n[0])], B.vcomp[(m[1], n[1])])
    ident = {(a, f): (A.ver.ident[a], B.idv[f]) for a, f in objs}
    P = FinCategory(objs, mor, ident, comp)
    source = Functor(P, B.ver, {o: B.hor.src(o[1]) for o in objs}, {m: B.left(m[1]) for m in mor})
    target = Functor(P, A.ver, {o: o[0] for o in objs}, {m: m[0] for m in mor})
    to_iso = Functor(P, I, {o: o[1] for o in objs}, {m: m[1] for m in mor})
    return MappingPath(P, source, target, to_iso)


def r_functor(F: DoubleFunctor, path: Optional[MappingPath] = None) -> Functor:
    """(r_F)₀: iso(E)₁ → (P_F)₀, f ↦ (t f, F f)."""
    path = path or mapping_path_object(F)
    I = iso1(F.src)
    return Functor(I, path.category, {f: (F.src.hor.tgt(f), F.hor[f]) for f in I.objects},
                   {s: (F.src.right(s), F.sq[s]) for s in I.mor})


# --------------------------------------------------------------------------
# predicates


def is_fully_faithful(F: DoubleFunctor) -> bool:
    """F₁ is the pullback of F₀×F₀ along (s,t): unique lifts of horizontals and of squares."""
    A, B = F.src, F.tgt
    hor_pre: Dict[tuple, List[Id]] = {}
    for h, (a, b) in A.hor.mor.items():
        hor_pre.setdefault((a, b, F.hor[h]), []).append(h)
    for a in A.objects:
        for b in A.objects:
            for h in B.hor.hom(F.ob[a], F.ob[b]):
                if len(hor_pre.get((a, b, h), ())) != 1:
                    return False
    sq_pre: Dict[tuple, List[Id]] = {}
    for s in A.sq:
        sq_pre.setdefault((A.left(s), A.right(s), F.sq[s]), []).append(s)
    by_sides = B.by_sides
    for j in A.ver.mor:
        for k in A.ver.mor:
            for s in by_sides.get((F.ver[j], F.ver[k]), ()):
                if len(sq_pre.get((j, k, s), ())) != 1:
                    return False
    return True


def is_weak_equivalence(F: DoubleFunctor, T="tau") -> bool:
    if not is_fully_faithful(F):
        return False
    return is_epi(mapping_path_object(F).source, T).holds


def is_fibration(F: DoubleFunctor, T="tau") -> bool:
    return is_epi(r_functor(F), T).holds


def is_acyclic_fibration(F: DoubleFunctor, T="tau") -> bool:
    return is_fully_faithful(F) and is_epi(F.v0(), T).holds


def indecomposables(C: FinCategory) -> List[Id]:
    non = set(C.nonidentity())
    decomposable = {h for (f, g), h in C.comp.items() if f in non and g in non}
    return sorted(non - decomposable, key=sortkey)


def is_free_on_graph(C: FinCategory) -> bool:
    """C is the free category on its indecomposables (acyclic, no isos, unique factorizations)."""
    if any(C.is_iso(f) for f in C.nonidentity()):
        return False
    gens = indecomposables(C)
    edges = {g: C.mor[g] for g in gens}
    vertices = list(C.objects)
    if _has_cycle(vertices, edges):
        return False
    non = set(C.nonidentity())
    seen = set()
    out: Dict[Id, List[Id]] = {}
    for g, (s, t) in edges.items():
        out.setdefault(s, []).append(g)
    stack = [(g, g) for g in gens]
    while stack:
        path_value, last = stack.pop()
        if path_value in seen:
            return False
        seen.add(path_value)
        for g in out.get(C.tgt(last), ()):
            stack.append((C.comp[(path_value, g)], g))
    return seen == non


def _has_cycle(vertices, edges) -> bool:
    out: Dict[Id, List[Id]] = {v: [] for v in vertices}
    for s, t in edges.values():
        out[s].append(t)
    colour: Dict[Id, int] = {}

    def visit(v) -> bool:
        colour[v] = 1
        for w in out[v]:
            c = colour.get(w, 0)
            if c == 1 or (c == 0 and visit(w)):
                return True
        colour[v] = 2
        return False

    return any(colour.get(v, 0) == 0 and visit(v) for v in vertices)


def is_coproduct_of_ordinals(C: FinCategory) -> bool:
    if any(C.is_iso(f) for f in C.nonidentity()):
        return False
    for a in C.objects:
        for b in C.objects:
            if len(C.hom(a, b)) > 1:
                return False
    comp = _components(C)
    for objs in comp:
        for a in objs:
            for b in objs:
                if not C.hom(a, b) and not C.hom(b, a):
                    return False
    return True


def _components(C: FinCategory) -> List[List[Id]]:
    parent = {a: a for a in C.objects}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for s, t in C.mor.values():
        parent[find(s)] = find(t)
    groups: Dict[Id, List[Id]] = {}
    for a in C.objects:
        groups.setdefault(find(a), []).append(a)
    return list(groups.values())


def is_cofibrant(D: DoubleCategory, T="tau") -> Optional[bool]:
    """True, False, or None when undecided (τ with a free but non-ordinal 𝔻₀)."""
    T = Topology.parse(T)
    if T is Topology.TRIVIAL:
        return True
    free = is_free_on_graph(D.ver)
    if T is Topology.TAU_PRIME:
        return free
    if not free:
        return False  # τ-cofibrant double categories are τ′-cofibrant
    return True if is_coproduct_of_ordinals(D.ver) else None


# --------------------------------------------------------------------------
# cofibrant replacement


def pullback_double(E0: FinCategory, K0: Functor, B: DoubleCategory) -> Tuple[DoubleCategory, DoubleFunctor]:
    """E with E₁ the pullback of (s,t) along K₀×K₀, and the projection K: E → B."""
    hor = {}
    for x in E0.objects:
        for y in E0.objects:
            for h in B.hor.hom(K0.ob[x], K0.ob[y]):
                hor[(x, h, y)] = (x, y)
    hident = {x: (x, B.hor.ident[K0.ob[x]], x) for x in E0.objects}
    hcomp_1 = {}
    out_of: Dict[Id, List[tuple]] = {}
    for f in hor:
        out_of.setdefault(f[0], []).append(f)
    for f in hor:
        for g in out_of.get(f[2], ()):
            hcomp_1[(f, g)] = (f[0], B.hor.comp[(f[1], g[1])], g[2])
    H = FinCategory(list(E0.objects), hor, hident, hcomp_1)
    by_sides = B.by_sides
    sq = {}
    for j, (x, x2) in E0.mor.items():
        for k, (y, y2) in E0.mor.items():
            for s in by_sides.get((K0.mor[j], K0.mor[k]), ()):
                t, b, _, _ = B.sq[s]
                sq[(j, s, k)] = ((x, t, y), (x2, b, y2), j, k)
    by_left: Dict[Id, List[tuple]] = {}
    by_top: Dict[tuple, List[tuple]] = {}
    for c, (t, b, l, r) in sq.items():
        by_left.setdefault(l, []).append(c)
        by_top.setdefault(t, []).append(c)
    hc, vc = {}, {}
    for c, (t, b, l, r) in sq.items():
        for d in by_left.get(r, ()):
            hc[(c, d)] = (c[0], B.hcomp[(c[1], d[1])], d[2])
        for d in by_top.get(b, ()):
            vc[(c, d)] = (E0.comp[(c[0], d[0])], B.vcomp[(c[1], d[1])], E0.comp[(c[2], d[2])])
    idv = {f: (E0.ident[f[0]], B.idv[f[1]], E0.ident[f[2]]) for f in hor}
    idh = {j: (j, B.idh[K0.mor[j]], j) for j in E0.mor}
    E = DoubleCategory(H, E0, sq, hc, vc, idv, idh)
    K = DoubleFunctor(E, B, dict(K0.ob), {f: f[1] for f in hor}, dict(K0.mor), {c: c[1] for c in sq})
    return E, K


@dataclass(eq=False)
class Replacement:
    """A cofibrant replacement K: E → B, or the graph of a free category too large to materialize."""
    topology: Topology
    double: Optional[DoubleCategory]
    projection: Optional[DoubleFunctor]
    certified_levels: Optional[int] = None  # τ: K₀ is surjective on nerve levels ≤ this
    presentation: Optional[Dict[str, Any]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def materialized(self) -> bool:
        return self.double is not None


def _nonidentity_graph(C: FinCategory) -> ReflexiveGraph:
    edges = {("e", f): C.mor[f] for f in C.nonidentity()}
    ident = {a: ("1", a) for a in C.objects}
    edges.update({("1", a): (a, a) for a in C.objects})
    return ReflexiveGraph(tuple(C.objects), edges, ident)


def _path_value(C: FinCategory, path) -> Id:
    if isinstance(path, tuple) and path and path[0] == "1" and len(path) == 2 and path[1] in C.ident:
        return C.ident[path[1]]
    steps = [path] if (isinstance(path, tuple) and path and path[0] == "e") else list(path)
    return C.compose(*[s[1] for s in steps])


def cofibrant_replacement(B: DoubleCategory, T="tau_prime", level: int = 2,
                          budget: Budget = DEFAULT_BUDGET) -> Replacement:
    T = Topology.parse(T)
    B0 = B.ver
    if T is Topology.TRIVIAL:
        return Replacement(T, B, DoubleFunctor.identity(B), notes=["every double category is cofibrant"])
    if T is Topology.TAU_PRIME:
        g = _nonidentity_graph(B0)
        try:
            E0 = free_category(g, budget)
        except InfiniteCategory:
            return Replacement(T, None, None, presentation={
                "objects": list(B0.objects), "edges": {e: st for e, st in g.edges.items() if e[0] == "e"}},
                notes=["the graph of nonidentity arrows has a cycle; the free category is infinite"])
        K0 = Functor(E0, B0, {a: a for a in E0.objects}, {p: _path_value(B0, p) for p in E0.mor})
        E, K = pullback_double(E0, K0, B)
        return Replacement(T, E, K)
    # τ: a coproduct of copies of [n] for every n-string, n ≤ level
    objs, mor, ident, comp = [], {}, {}, {}
    kob, kmor = {}, {}
    for n in range(level + 1):
        for w in _strings(B0, n):
            verts = [w] if n == 0 else [B0.src(w[0])] + [B0.tgt(f) for f in w]
            for i in range(n + 1):
                objs.append((n, w, i))
                kob[(n, w, i)] = verts[i]
            for i in range(n + 1):
                for j in range(i, n + 1):
                    m = (n, w, (i, j))
                    mor[m] = ((n, w, i), (n, w, j))
                    kmor[m] = B0.ident[verts[i]] if i == j else B0.compose(*w[i:j])
            for i in range(n + 1):
                ident[(n, w, i)] = (n, w, (i, i))
                for j in range(i, n + 1):
                    for k in range(j, n + 1):
                        comp[((n, w, (i, j)), (n, w, (j, k)))] = (n, w, (i, k))
    E0 = FinCategory(objs, mor, ident, comp)
    K0 = Functor(E0, B0, kob, kmor)
    E, K = pullback_double(E0, K0, B)
    return Replacement(T, E, K, certified_levels=level,
                       notes=[f"K0 is surjective on nerve levels up to {level}; higher levels are not certified"])


# --------------------------------------------------------------------------
# the Segal map against the pseudo pullback


def pseudo_pullback(D: DoubleCategory) -> FinCategory:
    """𝔻₁ ×ps 𝔻₁ over 𝔻₀: pairs (f, g) with a vertical iso from src g to tgt f."""
    V = D.ver
    isos = [v for v in V.mor if V.is_iso(v)]
    objs = [(f, v, g) for f in D.hor.mor for v in isos for g in D.hor.mor
            if V.tgt(v) == D.hor.tgt(f) and V.src(v) == D.hor.src(g)]
    by_top: Dict[Id, List[Id]] = {}
    for s in D.sq:
        by_top.setdefault(D.top(s), []).append(s)
    mor = {}
    for (f, v, g) in objs:
        for a in by_top.get(f, ()):
            for b in by_top.get(g, ()):
                for v2 in isos:
                    if V.src(v2) == V.tgt(D.left(b)) and V.tgt(v2) == V.tgt(D.right(a)) \
                            and V.comp[(D.left(b), v2)] == V.comp[(v, D.right(a))]:
                        mor[(a, v, v2, b)] = ((f, v, g), (D.bottom(a), v2, D.bottom(b)))
    out_of: Dict[tuple, List[tuple]] = {}
    for m, (x, y) in mor.items():
        out_of.setdefault(x, []).append(m)
    comp = {}
    for m, (x, y) in mor.items():
        for n in out_of.get(y, ()):
            comp[(m, n)] = (D.vcomp[(m[0], n[0])], m[1], n[2], D.vcomp[(m[3], n[3])])
    ident = {o: (D.idv[o[0]], o[1], o[1], D.idv[o[2]]) for o in objs}
    return FinCategory(objs, mor, ident, comp)


def segal_pseudo_comparison(D: DoubleCategory) -> bool:
    """Essential surjectivity of the strict pullback 𝔻₁ ×𝔻₀ 𝔻₁ inside the pseudo pullback."""
    P = pseudo_pullback(D)
    strict = {o for o in P.objects if D.ver.is_identity(o[1])}
    for o in P.objects:
        if o in strict:
            continue
        if not any(P.tgt(m) in strict and P.is_iso(m) for m in P.out_of(o)):
            return False
    return True


# --------------------------------------------------------------------------
# brute-force equivalence (reference for the trivial topology)


def _is_invertible_transformation(t: HNatTransf) -> bool:
    E = t.F.tgt
    return all(E.hor.is_iso(f) for f in t.obj.values()) and \
        all(horizontal_inverse(E, s) is not None for s in t.ver.values())


def _isomorphic_functors(F: DoubleFunctor, G: DoubleFunctor) -> bool:
    return any(_is_invertible_transformation(t) for t in horizontal_transformations(F, G))


def horizontal_equivalence_inverse(F: DoubleFunctor, limit: Optional[int] = None) -> Optional[DoubleFunctor]:
    """A pseudo-inverse G with F;G ≅ 1 and G;F ≅ 1 under horizontal transformations, by exhaustive search."""
    A, B = F.src, F.tgt
    idA, idB = DoubleFunctor.identity(A), DoubleFunctor.identity(B)
    for G in homomorphisms(B, A, limit=limit):
        if _isomorphic_functors(F.then(G), idA) and _isomorphic_functors(G.then(F), idB):
            return G
    return None
