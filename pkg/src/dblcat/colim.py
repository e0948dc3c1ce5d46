"""Colimits of categories, double derivation schemes and double categories.

The generic engines glue node data by union-find and close compositions
with the engines from ``construct``.  The pushout formulas build the
normal forms directly and are cross-checked against the engines.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .construct import (DEFAULT_BUDGET, Budget, CategoryClosure, SquareClosure, UnionFind, _certify, _Mark)
from .core import (DoubleCategory, DoubleFunctor, DoubleScheme, FinCategory, Functor, StructureError, Violation,
                   discrete_category, external_product, product_category, sortkey)

Id = Hashable


class NotDirected(StructureError):
    pass


class UnsupportedInclusion(StructureError):
    pass


@dataclass(eq=False)
class Diagram:
    """A diagram indexed by a finite category.

    ``edges`` assigns a (double) functor to each nonidentity morphism of the
    index; identities are implicit.
    """
    index: FinCategory
    nodes: Dict[Id, Any]
    edges: Dict[Id, Any] = field(default_factory=dict)

    def edge(self, u: Id):
        if u in self.edges:
            return self.edges[u]
        if self.index.is_identity(u):
            return None
        raise StructureError(f"no functor for index morphism {u!r}")

    def validate(self) -> List[Violation]:
        out = [Violation("index:" + v.axiom, v.witnesses) for v in self.index.validate()]
        if out:
            return out
        for i in self.index.objects:
            if i not in self.nodes:
                out.append(Violation("missing-node", (i,)))
        for u in self.index.nonidentity():
            F = self.edges.get(u)
            i, j = self.index.mor[u]
            if F is None:
                out.append(Violation("missing-edge", (u,)))
            elif F.src is not self.nodes[i] or F.tgt is not self.nodes[j]:
                out.append(Violation("edge-endpoints", (u,)))
            elif hasattr(F, "validate") and isinstance(F.src, (FinCategory, DoubleCategory)):
                out += [Violation(f"edge {u!r}: " + v.axiom, v.witnesses) for v in F.validate()]
        if out:
            return out
        for (u, v), w in self.index.comp.items():
            if self.index.is_identity(u) or self.index.is_identity(v):
                continue
            Fu, Fv, Fw = self.edges[u], self.edges[v], self.edges.get(w)
            if Fw is None:
                out.append(Violation("composite-not-identity", (u, v)))
                continue
            for attr in _sort_maps(Fu):
                mu, mv, mw = getattr(Fu, attr), getattr(Fv, attr), getattr(Fw, attr)
                if any(mv[mu[x]] != mw[x] for x in mu):
                    out.append(Violation("diagram-functoriality", (u, v, attr)))
        return out

    def restrict(self, attr: str) -> "Diagram":
        """Underlying diagram of horizontal ("hor") or vertical ("ver") 1-categories."""
        nodes = {i: getattr(X, attr) for i, X in self.nodes.items()}
        edges = {u: Functor(nodes[self.index.src(u)], nodes[self.index.tgt(u)], F.ob, getattr(F, attr))
                 for u, F in self.edges.items()}
        return Diagram(self.index, nodes, edges)


def _sort_maps(F) -> Tuple[str, ...]:
    if isinstance(F, Functor):
        return ("ob", "mor")
    return ("ob", "hor", "ver", "sq")


def span_index() -> FinCategory:
    """The index category a ← o → b of a pushout, with morphisms "i" (o→b) and "f" (o→a)."""
    objs = ["o", "b", "a"]
    mor = {("1", x): (x, x) for x in objs}
    mor.update({"i": ("o", "b"), "f": ("o", "a")})
    comp = {}
    for u, (s, t) in mor.items():
        for v, (s2, t2) in mor.items():
            if t == s2:
                comp[(u, v)] = v if isinstance(u, tuple) else u
    return FinCategory(objs, mor, {x: ("1", x) for x in objs}, comp)


def pushout_diagram(i, F) -> Diagram:
    """Pushout of i: O → B and F: O → A (functors or double functors with a common source)."""
    if i.src is not F.src:
        raise StructureError("span legs must share their source")
    return Diagram(span_index(), {"o": i.src, "b": i.tgt, "a": F.tgt}, {"i": i, "f": F})


def chain_index(n: int) -> FinCategory:
    from .core import ordinal
    return ordinal(n)


def chain_diagram(stages: Sequence[Any], maps: Sequence[Any]) -> Diagram:
    """A chain X0 → X1 → ... with composites filled in."""
    n = len(stages) - 1
    idx = chain_index(n)
    nodes = {k: X for k, X in enumerate(stages)}
    edges = {}
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            F = maps[a]
            for k in range(a + 1, b):
                F = F.then(maps[k])
            edges[(a, b)] = F
    return Diagram(idx, nodes, edges)


def _check(d: Diagram) -> None:
    bad = d.validate()
    if bad:
        raise StructureError("invalid diagram: " + "; ".join(map(str, bad[:5])))


def _object_classes(d: Diagram) -> UnionFind:
    uf = UnionFind()
    for i, X in d.nodes.items():
        for a in X.objects:
            uf.add((i, a))
    for u, F in d.edges.items():
        i, j = d.index.mor[u]
        for a, b in F.ob.items():
            uf.union((i, a), (j, b))
    return uf


# --------------------------------------------------------------------------
# generic engines


def colimit_cat(d: Diagram, budget: Budget = DEFAULT_BUDGET, check: bool = True
                ) -> Tuple[FinCategory, Dict[Id, Functor]]:
    """Colimit of a diagram of categories with its cocone.

    Identifiers are (node, local id) pairs, the least one in each class.
    """
    if check:
        _check(d)
    uf = _object_classes(d)
    objects = sorted({uf.find(x) for x in uf.parent}, key=sortkey)
    eng = CategoryClosure(objects, budget.max_squares)
    cls: Dict[tuple, int] = {}
    for i, C in d.nodes.items():
        for f, (s, t) in C.mor.items():
            if C.is_identity(f) and C.ident[s] == f:
                c = eng.ident[uf.find((i, s))]
                eng.labels[c].add((i, f))
                cls[(i, f)] = c
            else:
                cls[(i, f)] = eng.generator(uf.find((i, s)), uf.find((i, t)), (i, f))
        for (f, g), h in C.comp.items():
            eng.put("c", cls[(i, f)], cls[(i, g)], cls[(i, h)])
    for u, F in d.edges.items():
        i, j = d.index.mor[u]
        for f, g in F.mor.items():
            eng.merge(cls[(i, f)], cls[(j, g)])
    eng.saturate()
    P, names = eng.result()
    legs = {}
    for i, C in d.nodes.items():
        legs[i] = Functor(C, P, {a: uf.find((i, a)) for a in C.objects},
                          {f: names[cls[(i, f)]] for f in C.mor})
    _certify(P.validate())
    for F in legs.values():
        _certify(F.validate())
    return P, legs


def colimit_dds(d: Diagram, budget: Budget = DEFAULT_BUDGET) -> Tuple[DoubleScheme, Dict[Id, DoubleFunctor]]:
    """Colimit of schemes: 1-categories by colimit_cat, squares by a set pushout."""
    H, hl = colimit_cat(d.restrict("hor"), budget, check=False)
    V, vl = colimit_cat(d.restrict("ver"), budget, check=False)
    uf = UnionFind()
    for i, X in d.nodes.items():
        for s in X.squares:
            uf.add((i, s))
    for u, F in d.edges.items():
        i, j = d.index.mor[u]
        for s, t in F.sq.items():
            uf.union((i, s), (j, t))
    sq = {}
    for i, X in d.nodes.items():
        for s, (t, b, l, r) in _square_items(X):
            sq[uf.find((i, s))] = (hl[i].mor[t], hl[i].mor[b], vl[i].mor[l], vl[i].mor[r])
    S = DoubleScheme(H, V, sq)
    legs = {i: _SchemeMap(X, S, hl[i].ob, hl[i].mor, vl[i].mor, {s: uf.find((i, s)) for s, _ in _square_items(X)})
            for i, X in d.nodes.items()}
    _certify(S.validate())
    return S, legs


def _square_items(X):
    return X.sq.items() if isinstance(X, DoubleCategory) else X.squares.items()


@dataclass(eq=False)
class _SchemeMap:
    src: Any
    tgt: Any
    ob: Dict
    hor: Dict
    ver: Dict
    sq: Dict


def colimit_dblcat(d: Diagram, budget: Budget = DEFAULT_BUDGET
                   ) -> Tuple[DoubleCategory, Dict[Id, DoubleFunctor]]:
    """Colimit of double categories: scheme colimit, free double category, least congruence."""
    _check(d)
    H, hl = colimit_cat(d.restrict("hor"), budget, check=False)
    V, vl = colimit_cat(d.restrict("ver"), budget, check=False)
    eng = SquareClosure(H, V, budget.max_squares)
    cls: Dict[tuple, int] = {}
    for i, X in d.nodes.items():
        for s, (t, b, l, r) in X.sq.items():
            cls[(i, s)] = eng.generator((hl[i].mor[t], hl[i].mor[b], vl[i].mor[l], vl[i].mor[r]), (i, s))
    for i, X in d.nodes.items():
        for f, s in X.idv.items():
            eng.merge(cls[(i, s)], eng.idv[hl[i].mor[f]])
        for v, s in X.idh.items():
            eng.merge(cls[(i, s)], eng.idh[vl[i].mor[v]])
        for (a, b), c in X.hcomp.items():
            eng.put("h", cls[(i, a)], cls[(i, b)], cls[(i, c)])
        for (a, b), c in X.vcomp.items():
            eng.put("v", cls[(i, a)], cls[(i, b)], cls[(i, c)])
    for u, F in d.edges.items():
        i, j = d.index.mor[u]
        for s, t in F.sq.items():
            eng.merge(cls[(i, s)], cls[(j, t)])
    eng.saturate()

    def name(c):
        labs = [l for l in eng.labels[c] if not isinstance(l, _Mark)]
        if labs:
            return min(labs, key=sortkey)
        marks = sorted(((m.kind, m.cell) for m in eng.labels[c] if isinstance(m, _Mark)), key=sortkey)
        if marks:
            return marks[0]
        return _term_name(eng.term[c])

    P, names = eng.result(name)
    _certify(P.validate())
    legs = {}
    for i, X in d.nodes.items():
        legs[i] = DoubleFunctor(X, P, dict(hl[i].ob), dict(hl[i].mor), dict(vl[i].mor),
                                {s: names[cls[(i, s)]] for s in X.sq})
        _certify(legs[i].validate())
    return P, legs


def _term_name(t):
    if t[0] in ("h", "v"):
        return (t[0], _term_name(t[1]), _term_name(t[2]))
    return t[1] if t[0] == "g" else (t[0], t[1])


def is_directed(index: FinCategory) -> List[Violation]:
    """Filteredness of the index: nonempty, upper bounds for pairs, coequalizing parallel pairs."""
    C = index
    if not C.objects:
        return [Violation("empty-index")]
    out = []
    reach = {i: {C.tgt(f) for f in C.out_of(i)} for i in C.objects}
    for i in C.objects:
        for j in C.objects:
            if not reach[i] & reach[j]:
                out.append(Violation("no-upper-bound", (i, j)))
    for i in C.objects:
        for j in C.objects:
            hom = C.hom(i, j)
            for u in hom:
                for v in hom:
                    if u != v and not any(C.comp[(u, w)] == C.comp[(v, w)] for w in C.out_of(j)):
                        out.append(Violation("parallel-pair-not-coequalized", (u, v)))
    return out


def filtered_colimit_dblcat(d: Diagram) -> Tuple[DoubleCategory, Dict[Id, DoubleFunctor]]:
    """Sortwise colimit over a filtered index; compositions come from the stages."""
    bad = is_directed(d.index)
    if bad:
        raise NotDirected("index category is not filtered: " + "; ".join(map(str, bad[:3])))
    _check(d)
    ufs = {k: UnionFind() for k in ("ob", "hor", "ver", "sq")}
    cells = {"ob": lambda X: X.objects, "hor": lambda X: X.hor.mor, "ver": lambda X: X.ver.mor,
             "sq": lambda X: X.sq}
    for i, X in d.nodes.items():
        for k, uf in ufs.items():
            for x in cells[k](X):
                uf.add((i, x))
    for u, F in d.edges.items():
        i, j = d.index.mor[u]
        for k, uf in ufs.items():
            for x, y in getattr(F, k).items():
                uf.union((i, x), (j, y))
    f = {k: uf.find for k, uf in ufs.items()}

    def merged(pairs, what):
        out = {}
        for key, val in pairs:
            if out.setdefault(key, val) != val:
                raise StructureError(f"stages disagree on a {what} composite")
        return out

    objs = sorted({f["ob"]((i, a)) for i, X in d.nodes.items() for a in X.objects}, key=sortkey)
    hmor, vmor, sq = {}, {}, {}
    hc, vc, shc, svc, hid, vid, idv, idh = [], [], [], [], {}, {}, {}, {}
    for i, X in d.nodes.items():
        O = lambda a: f["ob"]((i, a))
        Hm = lambda m: f["hor"]((i, m))
        Vm = lambda m: f["ver"]((i, m))
        S = lambda s: f["sq"]((i, s))
        for m, (a, b) in X.hor.mor.items():
            hmor[Hm(m)] = (O(a), O(b))
        for m, (a, b) in X.ver.mor.items():
            vmor[Vm(m)] = (O(a), O(b))
        for s, (t, b, l, r) in X.sq.items():
            sq[S(s)] = (Hm(t), Hm(b), Vm(l), Vm(r))
        hc += [((Hm(a), Hm(b)), Hm(c)) for (a, b), c in X.hor.comp.items()]
        vc += [((Vm(a), Vm(b)), Vm(c)) for (a, b), c in X.ver.comp.items()]
        shc += [((S(a), S(b)), S(c)) for (a, b), c in X.hcomp.items()]
        svc += [((S(a), S(b)), S(c)) for (a, b), c in X.vcomp.items()]
        for a, m in X.hor.ident.items():
            hid[O(a)] = Hm(m)
        for a, m in X.ver.ident.items():
            vid[O(a)] = Vm(m)
        for m, s in X.idv.items():
            idv[Hm(m)] = S(s)
        for m, s in X.idh.items():
            idh[Vm(m)] = S(s)
    H = FinCategory(objs, hmor, hid, merged(hc, "horizontal"))
    V = FinCategory(objs, vmor, vid, merged(vc, "vertical"))
    P = DoubleCategory(H, V, sq, merged(shc, "square"), merged(svc, "square"), idv, idh)
    _certify(P.validate())
    legs = {i: DoubleFunctor(X, P, {a: f["ob"]((i, a)) for a in X.objects},
                             {m: f["hor"]((i, m)) for m in X.hor.mor}, {m: f["ver"]((i, m)) for m in X.ver.mor},
                             {s: f["sq"]((i, s)) for s in X.sq}) for i, X in d.nodes.items()}
    return P, legs


# --------------------------------------------------------------------------
# reflections along a full inclusion


class Reflections:
    """For a full subcategory A ⊆ B: terminal objects of A↓b and initial objects of b↓A.

    The supported inclusions have, for every b outside A, either an empty
    comma category or a terminal (initial) object; anything else is refused.
    """

    def __init__(self, B: FinCategory, A_objects: Iterable[Id]):
        self.B = B
        self.A = set(A_objects)
        self.new = [b for b in B.objects if b not in self.A]
        self.coreflect: Dict[Id, Optional[Tuple[Id, Id]]] = {}
        self.reflect: Dict[Id, Optional[Tuple[Id, Id]]] = {}
        for b in self.new:
            self.coreflect[b] = self._terminal(b)
            self.reflect[b] = self._initial(b)
        for a in self.A:
            if a not in B.ident:
                raise StructureError(f"{a!r} is not an object of B")

    def _terminal(self, b):
        B = self.B
        arrows = [(a, f) for a in sorted(self.A, key=sortkey) for f in B.hom(a, b)]
        if not arrows:
            return None
        for a0, e in arrows:
            if all(sum(1 for x in B.hom(a, a0) if B.comp[(x, e)] == f) == 1 for a, f in arrows):
                return (a0, e)
        raise UnsupportedInclusion(f"no terminal object in A↓{b!r}")

    def _initial(self, b):
        B = self.B
        arrows = [(a, f) for a in sorted(self.A, key=sortkey) for f in B.hom(b, a)]
        if not arrows:
            return None
        for a0, u in arrows:
            if all(sum(1 for x in B.hom(a0, a) if B.comp[(u, x)] == f) == 1 for a, f in arrows):
                return (a0, u)
        raise UnsupportedInclusion(f"no initial object in {b!r}↓A")

    def factor_left(self, f):
        """f: a → b' with a in A, b' new: the x with x;ε = f."""
        B = self.B
        a, b = B.mor[f]
        a0, e = self.coreflect[b]
        return next(x for x in B.hom(a, a0) if B.comp[(x, e)] == f)

    def factor_right(self, f):
        """f: b → a with b new, a in A: the x with u;x = f."""
        B = self.B
        b, a = B.mor[f]
        a0, u = self.reflect[b]
        return next(x for x in B.hom(a0, a) if B.comp[(u, x)] == f)

    def factor_through(self, f) -> Optional[Id]:
        """f: b → b' between new objects: the x with u;x;ε = f, if f factors through A."""
        B = self.B
        b, b2 = B.mor[f]
        r, c = self.reflect[b], self.coreflect[b2]
        if r is None or c is None:
            return None
        for x in B.hom(r[0], c[0]):
            if B.compose(r[1], x, c[1]) == f:
                return x
        return None


class _Normalizer:
    """Canonical forms of composites in a pushout along A × K ⊆ B × K.

    Atoms are ("D", d), ("U", b, k), ("E", b, k) and ("B", f, k); k is the
    component from the second factor (an object for morphisms, a morphism
    for squares).  ``comp`` composes in the D-structure, ``image(x, k)``
    is F(x, k) for a morphism x of A, and ``unit_u(b, k)`` / ``unit_e(b, k)``
    are the D-identities at the interfaces of U and E atoms.
    """

    def __init__(self, refl: Reflections, comp, image, unit_u, unit_e):
        self.r = refl
        self.comp, self.image, self.unit_u, self.unit_e = comp, image, unit_u, unit_e

    def atoms_of_b(self, f, k) -> List[tuple]:
        r, B = self.r, self.r.B
        s, t = B.mor[f]
        sA, tA = s in r.A, t in r.A
        if sA and tA:
            return [("D", self.image(f, k))]
        if sA:
            return [("D", self.image(r.factor_left(f), k)), ("E", t, k)]
        if tA:
            return [("U", s, k), ("D", self.image(r.factor_right(f), k))]
        x = r.factor_through(f)
        if x is not None:
            return [("U", s, k), ("D", self.image(x, k)), ("E", t, k)]
        return [("B", f, k)]

    def _push(self, stack: List[tuple], atom: tuple) -> None:
        B = self.r.B
        work = [atom]
        while work:
            a = work.pop(0)
            if a[0] == "B":
                expanded = self.atoms_of_b(a[1], a[2])
                if expanded != [a]:
                    work = expanded + work
                    continue
            if not stack:
                stack.append(a)
                continue
            top = stack[-1]
            if top[0] == "D" and a[0] == "D":
                stack[-1] = ("D", self.comp(top[1], a[1]))
            elif top[0] == "E" and a[0] == "U":
                stack.pop()
                x = B.comp[(self.r.coreflect[top[1]][1], self.r.reflect[a[1]][1])]
                work.insert(0, ("D", self.image(x, a[2])))
            elif top[0] == "E" and a[0] == "B":
                stack.pop()
                work.insert(0, ("B", B.comp[(self.r.coreflect[top[1]][1], a[1])], a[2]))
            elif top[0] == "B" and a[0] == "U":
                stack.pop()
                work.insert(0, ("B", B.comp[(top[1], self.r.reflect[a[1]][1])], a[2]))
            elif top[0] == "B" and a[0] == "B":
                stack.pop()
                work.insert(0, ("B", B.comp[(top[1], a[1])], a[2]))
            else:
                stack.append(a)

    def normal(self, atoms: Sequence[tuple]) -> tuple:
        stack: List[tuple] = []
        for a in atoms:
            self._push(stack, a)
        kinds = "".join(a[0] for a in stack)
        if kinds == "U":
            stack.append(("D", self.unit_u(stack[0][1], stack[0][2])))
        elif kinds == "E":
            stack.insert(0, ("D", self.unit_e(stack[0][1], stack[0][2])))
        elif kinds == "UE":
            stack.insert(1, ("D", self.unit_u(stack[0][1], stack[0][2])))
        kinds = "".join(a[0] for a in stack)
        if kinds == "D":
            return ("D", stack[0][1])
        if kinds == "UD":
            return ("in", stack[0][1], stack[0][2], stack[1][1])
        if kinds == "DE":
            return ("out", stack[0][1], stack[1][1], stack[1][2])
        if kinds == "UDE":
            return ("thr", stack[0][1], stack[0][2], stack[1][1], stack[2][1], stack[2][2])
        if kinds == "B":
            return ("dir", stack[0][1], stack[0][2])
        raise StructureError(f"composite did not reduce to a normal form: {stack!r}")

    @staticmethod
    def atoms(form: tuple) -> List[tuple]:
        k = form[0]
        if k == "D":
            return [("D", form[1])]
        if k == "in":
            return [("U", form[1], form[2]), ("D", form[3])]
        if k == "out":
            return [("D", form[1]), ("E", form[2], form[3])]
        if k == "thr":
            return [("U", form[1], form[2]), ("D", form[3]), ("E", form[4], form[5])]
        return [("B", form[1], form[2])]


def _reflection_category(refl: Reflections, K_objects: Sequence[Id], D: FinCategory,
                         F_ob: Callable[[Id, Id], Id], F_mor: Callable[[Id, Id], Id]):
    """Pushout of A×K_disc → D along A×K_disc ⊆ B×K_disc, by canonical forms."""
    B = refl.B
    norm = _Normalizer(refl, lambda x, y: D.comp[(x, y)], F_mor,
                       lambda b, k: D.ident[F_ob(refl.reflect[b][0], k)],
                       lambda b, k: D.ident[F_ob(refl.coreflect[b][0], k)])
    objs = [("D", x) for x in D.objects] + [("new", b, k) for b in refl.new for k in K_objects]
    mor: Dict[tuple, Tuple[tuple, tuple]] = {}
    for d, (x, y) in D.mor.items():
        mor[("D", d)] = (("D", x), ("D", y))
    for b in refl.new:
        rb, cb = refl.reflect[b], refl.coreflect[b]
        for k in K_objects:
            if rb is not None:
                src = F_ob(rb[0], k)
                for d in D.out_of(src):
                    mor[("in", b, k, d)] = (("new", b, k), ("D", D.tgt(d)))
            if cb is not None:
                tgt = F_ob(cb[0], k)
                for d in D.into(tgt):
                    mor[("out", d, b, k)] = (("D", D.src(d)), ("new", b, k))
    for b in refl.new:
        rb = refl.reflect[b]
        if rb is None:
            continue
        for b2 in refl.new:
            cb = refl.coreflect[b2]
            if cb is None:
                continue
            for k in K_objects:
                for k2 in K_objects:
                    for d in D.hom(F_ob(rb[0], k), F_ob(cb[0], k2)):
                        mor[("thr", b, k, d, b2, k2)] = (("new", b, k), ("new", b2, k2))
    for f, (s, t) in B.mor.items():
        if s in refl.A or t in refl.A or refl.factor_through(f) is not None:
            continue
        for k in K_objects:
            mor[("dir", f, k)] = (("new", s, k), ("new", t, k))
    ident = {("D", x): ("D", D.ident[x]) for x in D.objects}
    for b in refl.new:
        for k in K_objects:
            ident[("new", b, k)] = norm.normal([("B", B.ident[b], k)])
    out_of = defaultdict(list)
    for m, (s, t) in mor.items():
        out_of[s].append(m)
    comp = {}
    for m, (s, t) in mor.items():
        for n in out_of[t]:
            comp[(m, n)] = norm.normal(_Normalizer.atoms(m) + _Normalizer.atoms(n))
    P = FinCategory(objs, mor, ident, comp)

    def leg_b(f, k):
        return norm.normal([("B", f, k)])

    return P, norm, leg_b


def pushout_cat_formula(variant: str, **kw):
    """Explicit pushouts of categories along inclusions.

    Variants and keyword inputs:
      "set":        A, B (sets, A ⊆ B), D (set), F (dict A → D)          → (objects, leg_B, leg_D)
      "full":       B (category), A (object set of a full subcategory), D, F (Functor A → D)
      "disc_x_cat": A, B (sets), C (category), D, F (Functor A_disc × C → D)
      "cat_x_set":  B, A (object set), C (set), D, F (Functor A × C_disc → D)
    The category variants return (P, leg_B, leg_D) with functors.
    """
    if variant == "set":
        A, B, D, F = set(kw["A"]), list(kw["B"]), list(kw["D"]), kw["F"]
        if not A <= set(B):
            raise StructureError("A is not a subset of B")
        P = [("D", x) for x in D] + [("new", b) for b in B if b not in A]
        leg_b = {b: ("D", F[b]) if b in A else ("new", b) for b in B}
        return P, leg_b, {x: ("D", x) for x in D}
    if variant == "full":
        return _pushout_full(kw["B"], kw["A"], kw["D"], kw["F"])
    if variant == "disc_x_cat":
        return _pushout_disc_x_cat(kw["A"], kw["B"], kw["C"], kw["D"], kw["F"])
    if variant == "cat_x_set":
        return _pushout_cat_x_set(kw["B"], kw["A"], kw["C"], kw["D"], kw["F"])
    raise StructureError(f"unknown pushout variant {variant!r}")


def _check_full(B: FinCategory, A_objects) -> FinCategory:
    A = set(A_objects)
    if not A <= set(B.objects):
        raise StructureError("A has objects outside B")
    return B.full_subcategory(A)


def _pushout_full(B: FinCategory, A_objects, D: FinCategory, F: Functor):
    """General full inclusion: the two normal forms glued by the coend relations."""
    Af = _check_full(B, A_objects)
    A = set(Af.objects)
    if set(F.ob) != A:
        raise StructureError("F must be defined on the full subcategory A")
    new = [b for b in B.objects if b not in A]
    obj = lambda b: ("D", F.ob[b]) if b in A else ("B", b)
    objs = [("D", x) for x in D.objects] + [("B", b) for b in new]
    lefts = [f for f in B.mor if B.src(f) not in A and B.tgt(f) in A]
    rights = [f for f in B.mor if B.src(f) in A and B.tgt(f) not in A]
    raw: Dict[tuple, Tuple[tuple, tuple]] = {}
    for d, (x, y) in D.mor.items():
        raw[("D", d)] = (("D", x), ("D", y))
    for f, (s, t) in B.mor.items():
        if s not in A and t not in A:
            raw[("B", f)] = (("B", s), ("B", t))
    L = [None] + lefts
    R = [None] + rights
    for l in L:
        for r in R:
            if l is None and r is None:
                continue
            x0 = None if l is None else F.ob[B.tgt(l)]
            y0 = None if r is None else F.ob[B.src(r)]
            for d, (x, y) in D.mor.items():
                if (x0 is None or x == x0) and (y0 is None or y == y0):
                    s = ("D", x) if l is None else ("B", B.src(l))
                    t = ("D", y) if r is None else ("B", B.tgt(r))
                    raw[("T", l, d, r)] = (s, t)
    uf = UnionFind()
    for m in raw:
        uf.add(m)
    for l in lefts:
        for x in Af.out_of(B.tgt(l)):
            lx = B.comp[(l, x)]
            for d in D.out_of(F.ob[B.tgt(lx)]):
                for r in R:
                    if r is not None and D.tgt(d) != F.ob[B.src(r)]:
                        continue
                    uf.union(("T", lx, d, r), ("T", l, D.comp[(F.mor[x], d)], r))
    for r in rights:
        for x in Af.into(B.src(r)):
            xr = B.comp[(x, r)]
            for d in D.into(F.ob[B.src(xr)]):
                for l in L:
                    if l is not None and D.src(d) != F.ob[B.tgt(l)]:
                        continue
                    uf.union(("T", l, d, xr), ("T", l, D.comp[(d, F.mor[x])], r))
    for f, (s, t) in B.mor.items():
        if s not in A and t not in A:
            for a in A:
                for g in B.hom(s, a):
                    for h in B.hom(a, t):
                        if B.comp[(g, h)] == f:
                            uf.union(("B", f), ("T", g, D.ident[F.ob[a]], h))

    def as_raw(f):
        s, t = B.mor[f]
        if s in A and t in A:
            return ("D", F.mor[f])
        if s in A:
            return ("T", None, D.ident[F.ob[s]], f)
        if t in A:
            return ("T", f, D.ident[F.ob[t]], None)
        return ("B", f)

    def compose(m, n):
        if m[0] == "D" and n[0] == "D":
            return ("D", D.comp[(m[1], n[1])])
        if m[0] == "D":
            if n[0] == "T" and n[1] is None:
                return ("T", None, D.comp[(m[1], n[2])], n[3])
        if n[0] == "D":
            if m[0] == "T" and m[3] is None:
                return ("T", m[1], D.comp[(m[2], n[1])], None)
        if m[0] == "T" and n[0] == "T":
            if m[3] is None and n[1] is None:
                mid = D.comp[(m[2], n[2])]
            else:
                x = B.comp[(m[3], n[1])]
                mid = D.compose(m[2], F.mor[x], n[2])
            return _tidy(("T", m[1], mid, n[3]))
        if m[0] == "T" and n[0] == "B":
            return ("T", m[1], m[2], B.comp[(m[3], n[1])])
        if m[0] == "B" and n[0] == "T":
            return ("T", B.comp[(m[1], n[1])], n[2], n[3])
        if m[0] == "B" and n[0] == "B":
            return ("B", B.comp[(m[1], n[1])])
        raise StructureError(f"cannot compose {m!r} and {n!r}")

    classes = uf.classes()
    mor = {c: raw[c] for c in classes}
    out_of = defaultdict(list)
    for c, (s, t) in mor.items():
        out_of[s].append(c)
    comp = {}
    for c, (s, t) in mor.items():
        for e in out_of[t]:
            comp[(c, e)] = uf.find(compose(c, e))
    ident = {("D", x): uf.find(("D", D.ident[x])) for x in D.objects}
    for b in new:
        ident[("B", b)] = uf.find(("B", B.ident[b]))
    P = FinCategory(objs, mor, ident, comp)
    _certify(P.validate())
    leg_b = Functor(B, P, {b: obj(b) for b in B.objects}, {f: uf.find(as_raw(f)) for f in B.mor})
    leg_d = Functor(D, P, {x: ("D", x) for x in D.objects}, {d: uf.find(("D", d)) for d in D.mor})
    _certify(leg_b.validate() + leg_d.validate())
    return P, leg_b, leg_d


def _tidy(t):
    if t[0] == "T" and t[1] is None and t[3] is None:
        return ("D", t[2])
    return t


def _pushout_disc_x_cat(A, B, C: FinCategory, D: FinCategory, F: Functor):
    A, Bl = set(A), list(B)
    new = [b for b in Bl if b not in A]
    objs = [("D", x) for x in D.objects] + [("new", b, c) for b in new for c in C.objects]
    mor = {("D", d): (("D", x), ("D", y)) for d, (x, y) in D.mor.items()}
    mor.update({("new", b, g): (("new", b, s), ("new", b, t)) for b in new for g, (s, t) in C.mor.items()})
    ident = {("D", x): ("D", D.ident[x]) for x in D.objects}
    ident.update({("new", b, c): ("new", b, C.ident[c]) for b in new for c in C.objects})
    comp = {(("D", f), ("D", g)): ("D", h) for (f, g), h in D.comp.items()}
    comp.update({(("new", b, f), ("new", b, g)): ("new", b, h) for b in new for (f, g), h in C.comp.items()})
    P = FinCategory(objs, mor, ident, comp)
    Bd = discrete_category(Bl)
    BC = product_category(Bd, C)
    leg_b = Functor(BC, P, {(b, c): ("D", F.ob[(b, c)]) if b in A else ("new", b, c) for b, c in BC.objects},
                    {(i, g): ("D", F.mor[(i, g)]) if i[1] in A else ("new", i[1], g) for i, g in BC.mor})
    leg_d = Functor(D, P, {x: ("D", x) for x in D.objects}, {d: ("D", d) for d in D.mor})
    return P, leg_b, leg_d


def _pushout_cat_x_set(B: FinCategory, A_objects, K: Sequence[Id], D: FinCategory, F: Functor):
    """A × K_disc ⊆ B × K_disc, with F a functor on A × K_disc (product naming)."""
    Af = _check_full(B, A_objects)
    K = list(K)
    Kd = discrete_category(K)
    BK = product_category(B, Kd)
    try:
        refl = Reflections(B, Af.objects)
    except UnsupportedInclusion:
        A2 = [(a, k) for a in Af.objects for k in K]
        return _pushout_full(BK, A2, D, Functor(BK.full_subcategory(A2), D, dict(F.ob), dict(F.mor)))
    P, norm, leg = _reflection_category(refl, K, D, lambda a, k: F.ob[(a, k)],
                                        lambda x, k: F.mor[(x, Kd.ident[k])])
    _certify(P.validate())
    ob = {(b, k): ("D", F.ob[(b, k)]) if b in refl.A else ("new", b, k) for b, k in BK.objects}
    leg_b = Functor(BK, P, ob, {(f, i): leg(f, Kd.src(i)) for f, i in BK.mor})
    leg_d = Functor(D, P, {x: ("D", x) for x in D.objects}, {d: ("D", d) for d in D.mor})
    _certify(leg_b.validate() + leg_d.validate())
    return P, leg_b, leg_d


def pushout_atoms(form: tuple) -> List[tuple]:
    """Decompose a canonical pushout form into its atoms ("D", d), ("U", b, k), ("E", b, k), ("B", f, k)."""
    return _Normalizer.atoms(form)


# --------------------------------------------------------------------------
# pushouts of double categories along i ⊠ C


def pushout_dblcat_formula(kind, C: FinCategory, F: DoubleFunctor
                           ) -> Tuple[DoubleCategory, DoubleFunctor, DoubleFunctor]:
    """Pushout of F: A⊠C → D along i⊠C: A⊠C → B⊠C for a supported full inclusion i.

    ``kind`` is ("horn", m, k) or ("point_into_I",).  Returns P with the
    cocone legs from B⊠C and from D.
    """
    from .thomason import inclusion_pair

    if kind[0] not in ("horn", "point_into_I"):
        raise UnsupportedInclusion(f"unsupported inclusion {kind!r}")
    B, A_objects = inclusion_pair(kind)
    Aset = set(A_objects)
    bad = F.validate()
    if bad:
        raise StructureError("invalid double functor: " + "; ".join(map(str, bad[:3])))
    if set(F.ob) != {(a, c) for a in A_objects for c in C.objects}:
        raise StructureError("F must be defined on A⊠C")
    D = F.tgt
    refl = Reflections(B, A_objects)
    Cobj = list(C.objects)
    BC = external_product(B, C)

    # vertical 1-category: canonical forms over the vertical category of D
    PV, vnorm, vleg = _reflection_category(refl, Cobj, D.ver, lambda a, c: F.ob[(a, c)],
                                           lambda x, c: F.ver[(x, c)])
    objs = PV.objects
    # horizontal 1-category: D's horizontal category plus a copy of C for each new object
    hmor = {("D", h): (("D", x), ("D", y)) for h, (x, y) in D.hor.mor.items()}
    hmor.update({("new", b, g): (("new", b, s), ("new", b, t)) for b in refl.new for g, (s, t) in C.mor.items()})
    hid = {("D", x): ("D", D.hor.ident[x]) for x in D.objects}
    hid.update({("new", b, c): ("new", b, C.ident[c]) for b in refl.new for c in Cobj})
    hcomp = {(("D", f), ("D", g)): ("D", h) for (f, g), h in D.hor.comp.items()}
    hcomp.update({(("new", b, f), ("new", b, g)): ("new", b, h) for b in refl.new for (f, g), h in C.comp.items()})
    PH = FinCategory(objs, hmor, hid, hcomp)

    snorm = _Normalizer(refl, lambda x, y: D.vcomp[(x, y)], lambda x, g: F.sq[(x, g)],
                        lambda b, g: D.idv[F.hor[(refl.reflect[b][0], g)]],
                        lambda b, g: D.idv[F.hor[(refl.coreflect[b][0], g)]])

    def vform(form_atoms):
        return vnorm.normal(form_atoms)

    def boundary(s):
        k = s[0]
        if k == "D":
            t, b, l, r = D.sq[s[1]]
            return (("D", t), ("D", b), ("D", l), ("D", r))
        if k == "in":
            _, b, g, d = s
            gs, gt = C.mor[g]
            t0, b0, l0, r0 = D.sq[d]
            return (("new", b, g), ("D", b0), vform([("U", b, gs), ("D", l0)]), vform([("U", b, gt), ("D", r0)]))
        if k == "out":
            _, d, b, g = s
            gs, gt = C.mor[g]
            t0, b0, l0, r0 = D.sq[d]
            return (("D", t0), ("new", b, g), vform([("D", l0), ("E", b, gs)]), vform([("D", r0), ("E", b, gt)]))
        if k == "thr":
            _, b, g, d, b2, g2 = s
            t0, b0, l0, r0 = D.sq[d]
            return (("new", b, g), ("new", b2, g2),
                    vform([("U", b, C.src(g)), ("D", l0), ("E", b2, C.src(g2))]),
                    vform([("U", b, C.tgt(g)), ("D", r0), ("E", b2, C.tgt(g2))]))
        _, f, g = s
        s0, t0 = B.mor[f]
        return (("new", s0, g), ("new", t0, g), vform([("B", f, C.src(g))]), vform([("B", f, C.tgt(g))]))

    squares = [("D", d) for d in D.sq]
    by_top, by_bottom = defaultdict(list), defaultdict(list)
    for d, (t, b, l, r) in D.sq.items():
        by_top[t].append(d)
        by_bottom[b].append(d)
    for b in refl.new:
        rb, cb = refl.reflect[b], refl.coreflect[b]
        for g in C.mor:
            if rb is not None:
                squares += [("in", b, g, d) for d in by_top[F.hor[(rb[0], g)]]]
            if cb is not None:
                squares += [("out", d, b, g) for d in by_bottom[F.hor[(cb[0], g)]]]
    for b in refl.new:
        rb = refl.reflect[b]
        if rb is None:
            continue
        for b2 in refl.new:
            cb = refl.coreflect[b2]
            if cb is None:
                continue
            for g in C.mor:
                tops = set(by_top[F.hor[(rb[0], g)]])
                for g2 in C.mor:
                    squares += [("thr", b, g, d, b2, g2) for d in by_bottom[F.hor[(cb[0], g2)]] if d in tops]
    for f, (s, t) in B.mor.items():
        if s in Aset or t in Aset or refl.factor_through(f) is not None:
            continue
        squares += [("dir", f, g) for g in C.mor]
    sq = {s: boundary(s) for s in squares}

    def hc(x, y):
        k = x[0]
        if k != y[0]:
            raise StructureError("squares of different forms are not horizontally composable")
        if k == "D":
            return ("D", D.hcomp[(x[1], y[1])])
        if k == "in":
            return ("in", x[1], C.comp[(x[2], y[2])], D.hcomp[(x[3], y[3])])
        if k == "out":
            return ("out", D.hcomp[(x[1], y[1])], x[2], C.comp[(x[3], y[3])])
        if k == "thr":
            return ("thr", x[1], C.comp[(x[2], y[2])], D.hcomp[(x[3], y[3])], x[4], C.comp[(x[5], y[5])])
        return ("dir", x[1], C.comp[(x[2], y[2])])

    by_left = defaultdict(list)
    by_top_p = defaultdict(list)
    for s, (t, b, l, r) in sq.items():
        by_left[l].append(s)
        by_top_p[t].append(s)
    shc, svc = {}, {}
    for s, (t, b, l, r) in sq.items():
        for s2 in by_left[r]:
            shc[(s, s2)] = hc(s, s2)
        for s2 in by_top_p[b]:
            svc[(s, s2)] = snorm.normal(_Normalizer.atoms(s) + _Normalizer.atoms(s2))
    idv = {("D", h): ("D", D.idv[h]) for h in D.hor.mor}
    for b in refl.new:
        for g in C.mor:
            idv[("new", b, g)] = snorm.normal([("B", B.ident[b], g)])

    def idh_of(v):
        k = v[0]
        if k == "D":
            return ("D", D.idh[v[1]])
        if k == "in":
            return ("in", v[1], C.ident[v[2]], D.idh[v[3]])
        if k == "out":
            return ("out", D.idh[v[1]], v[2], C.ident[v[3]])
        if k == "thr":
            return ("thr", v[1], C.ident[v[2]], D.idh[v[3]], v[4], C.ident[v[5]])
        return ("dir", v[1], C.ident[v[2]])

    idh = {v: idh_of(v) for v in PV.mor}
    P = DoubleCategory(PH, PV, sq, shc, svc, idv, idh)
    _certify(P.validate())

    def hleg(b, g):
        return ("D", F.hor[(b, g)]) if b in Aset else ("new", b, g)

    leg_b = DoubleFunctor(BC, P,
                          {(b, c): ("D", F.ob[(b, c)]) if b in Aset else ("new", b, c) for b, c in BC.objects},
                          {(b, g): hleg(b, g) for b, g in BC.hor.mor},
                          {(f, c): vnorm.normal([("B", f, c)]) for f, c in BC.ver.mor},
                          {(f, g): snorm.normal([("B", f, g)]) for f, g in BC.sq})
    leg_d = DoubleFunctor(D, P, {x: ("D", x) for x in D.objects}, {h: ("D", h) for h in D.hor.mor},
                          {v: ("D", v) for v in D.ver.mor}, {s: ("D", s) for s in D.sq})
    _certify(leg_b.validate() + leg_d.validate())
    return P, leg_b, leg_d
