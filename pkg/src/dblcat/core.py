"""Finite categories, double categories, functors and transformations.

Everything here is an explicit table.  Identifiers are arbitrary hashable
values (strings when read from files, tuples when produced by constructions);
composition is always written in diagrammatic order, so ``C.compose(f, g)``
is "f then g".
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Id = Hashable


class BudgetExceeded(RuntimeError):
    """An enumeration or closure passed its configured bound."""

    def __init__(self, bound: str, limit: int, detail: str = ""):
        self.bound = bound
        self.limit = limit
        msg = f"budget exceeded: {bound}={limit}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class StructureError(ValueError):
    """Input does not have the shape an operation requires."""


def sortkey(x: Any) -> tuple:
    """Total order on the identifiers we produce (mixed str/int/tuple)."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, len(x), tuple(sortkey(y) for y in x))
    if x is None:
        return (-1,)
    return (3, type(x).__name__, repr(x))


@dataclass(frozen=True)
class Violation:
    axiom: str
    witnesses: tuple = ()

    def __str__(self) -> str:
        return f"{self.axiom}: {', '.join(map(repr, self.witnesses))}"


# --------------------------------------------------------------------------
# graphs


@dataclass(eq=False)
class FinGraph:
    vertices: tuple
    edges: Dict[Id, Tuple[Id, Id]]

    def validate(self) -> List[Violation]:
        vs = set(self.vertices)
        out = []
        if len(vs) != len(self.vertices):
            out.append(Violation("duplicate-vertex"))
        for e, (s, t) in self.edges.items():
            if s not in vs or t not in vs:
                out.append(Violation("edge-endpoint", (e, s, t)))
        return out


@dataclass(eq=False)
class ReflexiveGraph(FinGraph):
    identity: Dict[Id, Id] = field(default_factory=dict)

    def validate(self) -> List[Violation]:
        out = FinGraph.validate(self)
        for v in self.vertices:
            e = self.identity.get(v)
            if e is None:
                out.append(Violation("missing-identity-edge", (v,)))
            elif self.edges.get(e) != (v, v):
                out.append(Violation("identity-edge-endpoints", (v, e)))
        return out


# --------------------------------------------------------------------------
# categories


class FinCategory:
    """A finite category given by explicit tables.

    ``morphisms`` maps each morphism to ``(source, target)``; ``identities``
    maps each object to its identity; ``composition`` maps composable pairs
    ``(f, g)`` to ``f;g``.
    """

    def __init__(self, objects: Iterable[Id], morphisms: Mapping[Id, Tuple[Id, Id]],
                 identities: Mapping[Id, Id], composition: Mapping[Tuple[Id, Id], Id]):
        self.objects = tuple(objects)
        self.mor = dict(morphisms)
        self.ident = dict(identities)
        self.comp = dict(composition)

    # basic access
    @property
    def morphisms(self) -> tuple:
        return tuple(self.mor)

    def src(self, f: Id) -> Id:
        return self.mor[f][0]

    def tgt(self, f: Id) -> Id:
        return self.mor[f][1]

    def compose(self, *fs: Id) -> Id:
        """Composite of a nonempty path, first morphism first."""
        h = fs[0]
        for g in fs[1:]:
            h = self.comp[(h, g)]
        return h

    def identity(self, a: Id) -> Id:
        return self.ident[a]

    @cached_property
    def identity_set(self) -> frozenset:
        return frozenset(self.ident.values())

    def is_identity(self, f: Id) -> bool:
        return f in self.identity_set

    @cached_property
    def _homs(self) -> Dict[Tuple[Id, Id], List[Id]]:
        h: Dict[Tuple[Id, Id], List[Id]] = {}
        for f, st in self.mor.items():
            h.setdefault(st, []).append(f)
        return h

    def hom(self, a: Id, b: Id) -> List[Id]:
        return self._homs.get((a, b), [])

    @cached_property
    def _out(self) -> Dict[Id, List[Id]]:
        d: Dict[Id, List[Id]] = {a: [] for a in self.objects}
        for f, (s, _) in self.mor.items():
            d[s].append(f)
        return d

    @cached_property
    def _in(self) -> Dict[Id, List[Id]]:
        d: Dict[Id, List[Id]] = {a: [] for a in self.objects}
        for f, (_, t) in self.mor.items():
            d[t].append(f)
        return d

    def out_of(self, a: Id) -> List[Id]:
        return self._out[a]

    def into(self, b: Id) -> List[Id]:
        return self._in[b]

    def nonidentity(self) -> List[Id]:
        ids = self.identity_set
        return [f for f in self.mor if f not in ids]

    def is_iso(self, f: Id) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f: Id) -> Optional[Id]:
        s, t = self.mor[f]
        for g in self.hom(t, s):
            if self.comp[(f, g)] == self.ident[s] and self.comp[(g, f)] == self.ident[t]:
                return g
        return None

    def __repr__(self) -> str:
        return f"FinCategory({len(self.objects)} objects, {len(self.mor)} morphisms)"

    def validate(self) -> List[Violation]:
        return validate_category(self)

    # constructions
    def opposite(self) -> "FinCategory":
        return FinCategory(self.objects, {f: (t, s) for f, (s, t) in self.mor.items()},
                           self.ident, {(g, f): h for (f, g), h in self.comp.items()})

    def full_subcategory(self, objs: Iterable[Id]) -> "FinCategory":
        keep = set(objs)
        objects = [a for a in self.objects if a in keep]
        mor = {f: st for f, st in self.mor.items() if st[0] in keep and st[1] in keep}
        comp = {k: h for k, h in self.comp.items() if k[0] in mor and k[1] in mor}
        return FinCategory(objects, mor, {a: self.ident[a] for a in objects}, comp)

    def relabel(self, obj: Callable[[Id], Id], mor: Callable[[Id], Id]) -> "FinCategory":
        return FinCategory([obj(a) for a in self.objects],
                           {mor(f): (obj(s), obj(t)) for f, (s, t) in self.mor.items()},
                           {obj(a): mor(f) for a, f in self.ident.items()},
                           {(mor(f), mor(g)): mor(h) for (f, g), h in self.comp.items()})


def validate_category(C: FinCategory) -> List[Violation]:
    out: List[Violation] = []
    objs = set(C.objects)
    if len(objs) != len(C.objects):
        out.append(Violation("duplicate-object"))
    for f, (s, t) in C.mor.items():
        if s not in objs or t not in objs:
            out.append(Violation("morphism-endpoint", (f, s, t)))
    if out:
        return out
    for a in C.objects:
        i = C.ident.get(a)
        if i is None or C.mor.get(i) != (a, a):
            out.append(Violation("identity", (a, i)))
    if out:
        return out
    for (f, g), h in C.comp.items():
        if f not in C.mor or g not in C.mor or h not in C.mor:
            out.append(Violation("composition-unknown-morphism", (f, g, h)))
        elif C.tgt(f) != C.src(g) or C.mor[h] != (C.src(f), C.tgt(g)):
            out.append(Violation("composition-boundary", (f, g, h)))
    if out:
        return out
    for f in C.mor:
        for g in C.out_of(C.tgt(f)):
            if (f, g) not in C.comp:
                out.append(Violation("composition-total", (f, g)))
    if out:
        return out
    for f, (s, t) in C.mor.items():
        if C.comp[(C.ident[s], f)] != f or C.comp[(f, C.ident[t])] != f:
            out.append(Violation("unit", (f,)))
    for f in C.mor:
        for g in C.out_of(C.tgt(f)):
            fg = C.comp[(f, g)]
            for h in C.out_of(C.tgt(g)):
                if C.comp[(fg, h)] != C.comp[(f, C.comp[(g, h)])]:
                    out.append(Violation("associativity", (f, g, h)))
    return out


def discrete_category(objects: Iterable[Id], tag: str = "1") -> FinCategory:
    objects = list(objects)
    ids = {a: (tag, a) for a in objects}
    return FinCategory(objects, {ids[a]: (a, a) for a in objects}, ids,
                       {(ids[a], ids[a]): ids[a] for a in objects})


def poset_category(elements: Iterable[Id], leq: Callable[[Id, Id], bool]) -> FinCategory:
    """The category of a finite preorder; the morphism a<=b is named ``(a, b)``."""
    els = list(elements)
    mor = {(a, b): (a, b) for a in els for b in els if leq(a, b)}
    comp = {}
    for (a, b) in mor:
        for c in els:
            if (b, c) in mor:
                comp[((a, b), (b, c))] = (a, c)
    return FinCategory(els, mor, {a: (a, a) for a in els}, comp)


def ordinal(n: int) -> FinCategory:
    """[n] = 0 < 1 < ... < n, with objects named by int."""
    return poset_category(range(n + 1), lambda a, b: a <= b)


def product_category(A: FinCategory, B: FinCategory) -> FinCategory:
    objs = [(a, b) for a in A.objects for b in B.objects]
    mor = {(f, g): ((A.src(f), B.src(g)), (A.tgt(f), B.tgt(g))) for f in A.mor for g in B.mor}
    comp = {}
    for (f1, f2), h in A.comp.items():
        for (g1, g2), k in B.comp.items():
            comp[((f1, g1), (f2, g2))] = (h, k)
    return FinCategory(objs, mor, {(a, b): (A.ident[a], B.ident[b]) for a, b in objs}, comp)


def coproduct_category(parts: Sequence[FinCategory]) -> FinCategory:
    objs, mor, ident, comp = [], {}, {}, {}
    for i, C in enumerate(parts):
        objs += [(i, a) for a in C.objects]
        mor.update({(i, f): ((i, s), (i, t)) for f, (s, t) in C.mor.items()})
        ident.update({(i, a): (i, f) for a, f in C.ident.items()})
        comp.update({((i, f), (i, g)): (i, h) for (f, g), h in C.comp.items()})
    return FinCategory(objs, mor, ident, comp)


@dataclass(eq=False)
class Functor:
    src: FinCategory
    tgt: FinCategory
    ob: Dict[Id, Id]
    mor: Dict[Id, Id]

    def __call__(self, f: Id) -> Id:
        return self.mor[f]

    def validate(self) -> List[Violation]:
        out = []
        S, T = self.src, self.tgt
        for a in S.objects:
            if self.ob.get(a) not in T.ident:
                out.append(Violation("functor-object", (a,)))
        if out:
            return out
        for f, (s, t) in S.mor.items():
            g = self.mor.get(f)
            if g not in T.mor or T.mor[g] != (self.ob[s], self.ob[t]):
                out.append(Violation("functor-boundary", (f, g)))
        if out:
            return out
        for a in S.objects:
            if self.mor[S.ident[a]] != T.ident[self.ob[a]]:
                out.append(Violation("functor-identity", (a,)))
        for (f, g), h in S.comp.items():
            if T.comp[(self.mor[f], self.mor[g])] != self.mor[h]:
                out.append(Violation("functor-composition", (f, g)))
        return out

    def then(self, other: "Functor") -> "Functor":
        return Functor(self.src, other.tgt, {a: other.ob[b] for a, b in self.ob.items()},
                       {f: other.mor[g] for f, g in self.mor.items()})

    @staticmethod
    def identity(C: FinCategory) -> "Functor":
        return Functor(C, C, {a: a for a in C.objects}, {f: f for f in C.mor})

    def is_bijective(self) -> bool:
        return (len(set(self.ob.values())) == len(self.tgt.objects) == len(self.ob)
                and len(set(self.mor.values())) == len(self.tgt.mor) == len(self.mor))


def is_full_inclusion(F: Functor) -> bool:
    """Injective on objects and a bijection on every hom-set."""
    if len(set(F.ob.values())) != len(F.ob):
        return False
    S, T = F.src, F.tgt
    for a in S.objects:
        for b in S.objects:
            imgs = [F.mor[f] for f in S.hom(a, b)]
            if len(set(imgs)) != len(imgs) or len(imgs) != len(T.hom(F.ob[a], F.ob[b])):
                return False
    return True


def is_equivalence(F: Functor) -> bool:
    """Fully faithful and essentially surjective."""
    S, T = F.src, F.tgt
    for a in S.objects:
        for b in S.objects:
            imgs = [F.mor[f] for f in S.hom(a, b)]
            if len(set(imgs)) != len(imgs) or len(imgs) != len(T.hom(F.ob[a], F.ob[b])):
                return False
    image = set(F.ob.values())
    for b in T.objects:
        if b in image:
            continue
        if not any(T.is_iso(f) for a in image for f in T.hom(a, b)):
            return False
    return True


# --------------------------------------------------------------------------
# double structures


@dataclass(eq=False)
class DoubleGraph:
    """Double graph with 1-identities: two reflexive graphs on shared objects plus squares.

    ``squares`` maps a square to ``(top, bottom, left, right)``.
    """
    hor: ReflexiveGraph
    ver: ReflexiveGraph
    squares: Dict[Id, Tuple[Id, Id, Id, Id]]

    @property
    def objects(self) -> tuple:
        return self.hor.vertices

    def validate(self) -> List[Violation]:
        out = self.hor.validate() + self.ver.validate()
        if set(self.hor.vertices) != set(self.ver.vertices):
            out.append(Violation("object-sets-differ"))
        out += _check_square_corners(self.squares, self.hor.edges, self.ver.edges)
        return out


def _check_square_corners(squares, hor, ver) -> List[Violation]:
    out = []
    for s, (t, b, l, r) in squares.items():
        if t not in hor or b not in hor or l not in ver or r not in ver:
            out.append(Violation("square-boundary-unknown", (s,)))
            continue
        ts, tt = hor[t]
        bs, bt = hor[b]
        ls, lt = ver[l]
        rs, rt = ver[r]
        if not (ts == ls and tt == rs and bs == lt and bt == rt):
            out.append(Violation("square-corners", (s,)))
    return out


@dataclass(eq=False)
class DoubleScheme:
    """Double derivation scheme: 1-categories on shared objects plus bare squares."""
    hor: FinCategory
    ver: FinCategory
    squares: Dict[Id, Tuple[Id, Id, Id, Id]]

    @property
    def objects(self) -> tuple:
        return self.hor.objects

    def validate(self) -> List[Violation]:
        out = [Violation("horizontal:" + v.axiom, v.witnesses) for v in self.hor.validate()]
        out += [Violation("vertical:" + v.axiom, v.witnesses) for v in self.ver.validate()]
        if set(self.hor.objects) != set(self.ver.objects):
            out.append(Violation("object-sets-differ"))
        out += _check_square_corners(self.squares, self.hor.mor, self.ver.mor)
        return out


class DoubleCategory:
    """A finite double category.

    ``squares[s] = (top, bottom, left, right)``; ``hcomp[(a, b)]`` is the
    horizontal composite (a on the left), ``vcomp[(a, b)]`` the vertical one
    (a on top).  ``idv[f]`` is the vertical identity square on the horizontal
    morphism f and ``idh[v]`` the horizontal identity square on the vertical
    morphism v.
    """

    def __init__(self, hor: FinCategory, ver: FinCategory, squares: Mapping[Id, tuple],
                 hcomp: Mapping, vcomp: Mapping, idv: Mapping, idh: Mapping):
        self.hor = hor
        self.ver = ver
        self.sq = dict(squares)
        self.hcomp = dict(hcomp)
        self.vcomp = dict(vcomp)
        self.idv = dict(idv)
        self.idh = dict(idh)

    @property
    def objects(self) -> tuple:
        return self.hor.objects

    @property
    def squares(self) -> tuple:
        return tuple(self.sq)

    def top(self, s: Id) -> Id:
        return self.sq[s][0]

    def bottom(self, s: Id) -> Id:
        return self.sq[s][1]

    def left(self, s: Id) -> Id:
        return self.sq[s][2]

    def right(self, s: Id) -> Id:
        return self.sq[s][3]

    def hc(self, *ss: Id) -> Id:
        h = ss[0]
        for s in ss[1:]:
            h = self.hcomp[(h, s)]
        return h

    def vc(self, *ss: Id) -> Id:
        h = ss[0]
        for s in ss[1:]:
            h = self.vcomp[(h, s)]
        return h

    @cached_property
    def by_left(self) -> Dict[Id, List[Id]]:
        d: Dict[Id, List[Id]] = {}
        for s, b in self.sq.items():
            d.setdefault(b[2], []).append(s)
        return d

    @cached_property
    def by_top(self) -> Dict[Id, List[Id]]:
        d: Dict[Id, List[Id]] = {}
        for s, b in self.sq.items():
            d.setdefault(b[0], []).append(s)
        return d

    @cached_property
    def by_sides(self) -> Dict[Tuple[Id, Id], List[Id]]:
        d: Dict[Tuple[Id, Id], List[Id]] = {}
        for s, b in self.sq.items():
            d.setdefault((b[2], b[3]), []).append(s)
        return d

    @cached_property
    def by_boundary(self) -> Dict[tuple, List[Id]]:
        d: Dict[tuple, List[Id]] = {}
        for s, b in self.sq.items():
            d.setdefault(b, []).append(s)
        return d

    def with_boundary(self, top: Id, bottom: Id, left: Id, right: Id) -> List[Id]:
        return self.by_boundary.get((top, bottom, left, right), [])

    def right_of(self, s: Id) -> List[Id]:
        """Squares horizontally composable to the right of s."""
        return self.by_left.get(self.sq[s][3], [])

    def below(self, s: Id) -> List[Id]:
        return self.by_top.get(self.sq[s][1], [])

    def scheme(self) -> DoubleScheme:
        return DoubleScheme(self.hor, self.ver, dict(self.sq))

    def validate(self) -> List[Violation]:
        return validate_double(self)

    def __repr__(self) -> str:
        return (f"DoubleCategory({len(self.objects)} objects, {len(self.hor.mor)} horizontal, "
                f"{len(self.ver.mor)} vertical, {len(self.sq)} squares)")


def validate_double(D: DoubleCategory) -> List[Violation]:
    out = D.scheme().validate()
    if out:
        return out
    H, V = D.hor, D.ver
    for f in H.mor:
        s = D.idv.get(f)
        a, b = H.mor[f]
        if s not in D.sq or D.sq[s] != (f, f, V.ident[a], V.ident[b]):
            out.append(Violation("vertical-identity-square", (f, s)))
    for v in V.mor:
        s = D.idh.get(v)
        a, b = V.mor[v]
        if s not in D.sq or D.sq[s] != (H.ident[a], H.ident[b], v, v):
            out.append(Violation("horizontal-identity-square", (v, s)))
    if out:
        return out
    for a in D.objects:
        if D.idh[V.ident[a]] != D.idv[H.ident[a]]:
            out.append(Violation("identity-square-coherence", (a,)))
    # closure and boundaries of both compositions
    for s in D.sq:
        for t in D.right_of(s):
            u = D.hcomp.get((s, t))
            if u is None:
                out.append(Violation("horizontal-composition-total", (s, t)))
                continue
            bs, bt = D.sq[s], D.sq[t]
            want = (H.comp[(bs[0], bt[0])], H.comp[(bs[1], bt[1])], bs[2], bt[3])
            if D.sq.get(u) != want:
                out.append(Violation("horizontal-composition-boundary", (s, t, u)))
        for t in D.below(s):
            u = D.vcomp.get((s, t))
            if u is None:
                out.append(Violation("vertical-composition-total", (s, t)))
                continue
            bs, bt = D.sq[s], D.sq[t]
            want = (bs[0], bt[1], V.comp[(bs[2], bt[2])], V.comp[(bs[3], bt[3])])
            if D.sq.get(u) != want:
                out.append(Violation("vertical-composition-boundary", (s, t, u)))
    if out:
        return out
    for s, (t, b, l, r) in D.sq.items():
        if D.hcomp[(D.idh[l], s)] != s or D.hcomp[(s, D.idh[r])] != s:
            out.append(Violation("horizontal-unit", (s,)))
        if D.vcomp[(D.idv[t], s)] != s or D.vcomp[(s, D.idv[b])] != s:
            out.append(Violation("vertical-unit", (s,)))
    for (f, g), h in H.comp.items():
        if D.hcomp[(D.idv[f], D.idv[g])] != D.idv[h]:
            out.append(Violation("vertical-identity-functoriality", (f, g)))
    for (j, k), h in V.comp.items():
        if D.vcomp[(D.idh[j], D.idh[k])] != D.idh[h]:
            out.append(Violation("horizontal-identity-functoriality", (j, k)))
    for s in D.sq:
        for t in D.right_of(s):
            st = D.hcomp[(s, t)]
            for u in D.right_of(t):
                if D.hcomp[(st, u)] != D.hcomp[(s, D.hcomp[(t, u)])]:
                    out.append(Violation("horizontal-associativity", (s, t, u)))
        for t in D.below(s):
            st = D.vcomp[(s, t)]
            for u in D.below(t):
                if D.vcomp[(st, u)] != D.vcomp[(s, D.vcomp[(t, u)])]:
                    out.append(Violation("vertical-associativity", (s, t, u)))
    if out:
        return out
    for a in D.sq:
        for b in D.right_of(a):
            ab = D.hcomp[(a, b)]
            for c in D.below(a):
                ac = D.vcomp[(a, c)]
                for d in D.by_left.get(D.sq[c][3], ()):
                    if D.sq[d][0] != D.sq[b][1]:
                        continue
                    if D.vcomp[(ab, D.hcomp[(c, d)])] != D.hcomp[(ac, D.vcomp[(b, d)])]:
                        out.append(Violation("interchange", (a, b, c, d)))
    return out


@dataclass(eq=False)
class DoubleFunctor:
    src: DoubleCategory
    tgt: DoubleCategory
    ob: Dict[Id, Id]
    hor: Dict[Id, Id]
    ver: Dict[Id, Id]
    sq: Dict[Id, Id]

    def validate(self) -> List[Violation]:
        S, T = self.src, self.tgt
        out = Functor(S.hor, T.hor, self.ob, self.hor).validate()
        out += Functor(S.ver, T.ver, self.ob, self.ver).validate()
        if out:
            return out
        for s, (t, b, l, r) in S.sq.items():
            x = self.sq.get(s)
            if x not in T.sq or T.sq[x] != (self.hor[t], self.hor[b], self.ver[l], self.ver[r]):
                out.append(Violation("double-functor-boundary", (s, x)))
        if out:
            return out
        for (a, b), c in S.hcomp.items():
            if T.hcomp[(self.sq[a], self.sq[b])] != self.sq[c]:
                out.append(Violation("double-functor-horizontal", (a, b)))
        for (a, b), c in S.vcomp.items():
            if T.vcomp[(self.sq[a], self.sq[b])] != self.sq[c]:
                out.append(Violation("double-functor-vertical", (a, b)))
        for f, s in S.idv.items():
            if self.sq[s] != T.idv[self.hor[f]]:
                out.append(Violation("double-functor-vertical-identity", (f,)))
        for v, s in S.idh.items():
            if self.sq[s] != T.idh[self.ver[v]]:
                out.append(Violation("double-functor-horizontal-identity", (v,)))
        return out

    def h0(self) -> Functor:
        return Functor(self.src.hor, self.tgt.hor, self.ob, self.hor)

    def v0(self) -> Functor:
        """The functor on vertical categories (the object-level functor F_0)."""
        return Functor(self.src.ver, self.tgt.ver, self.ob, self.ver)

    def then(self, G: "DoubleFunctor") -> "DoubleFunctor":
        return DoubleFunctor(self.src, G.tgt, {a: G.ob[b] for a, b in self.ob.items()},
                             {f: G.hor[g] for f, g in self.hor.items()},
                             {f: G.ver[g] for f, g in self.ver.items()},
                             {s: G.sq[t] for s, t in self.sq.items()})

    @staticmethod
    def identity(D: DoubleCategory) -> "DoubleFunctor":
        return DoubleFunctor(D, D, {a: a for a in D.objects}, {f: f for f in D.hor.mor},
                             {f: f for f in D.ver.mor}, {s: s for s in D.sq})

    def is_bijective(self) -> bool:
        T = self.tgt
        return all(len(set(m.values())) == len(m) == n for m, n in (
            (self.ob, len(T.objects)), (self.hor, len(T.hor.mor)),
            (self.ver, len(T.ver.mor)), (self.sq, len(T.sq))))

    def key(self) -> tuple:
        return tuple(tuple(sorted(m.items(), key=lambda kv: sortkey(kv[0])))
                     for m in (self.ob, self.hor, self.ver, self.sq))


def validate(x: Any) -> List[Violation]:
    """Diagnostics for any core value; empty means valid."""
    if isinstance(x, (FinCategory, DoubleCategory, DoubleScheme, DoubleGraph, FinGraph,
                      Functor, DoubleFunctor, HNatTransf, VNatTransf)):
        return x.validate()
    raise StructureError(f"cannot validate {type(x).__name__}")


# --------------------------------------------------------------------------
# standard constructions


def external_product(A: FinCategory, B: FinCategory) -> DoubleCategory:
    """A ⊠ B: vertical morphisms come from A, horizontal ones from B."""
    objs = [(a, b) for a in A.objects for b in B.objects]
    hmor = {(a, g): ((a, B.src(g)), (a, B.tgt(g))) for a in A.objects for g in B.mor}
    hcomp = {((a, f), (a, g)): (a, h) for a in A.objects for (f, g), h in B.comp.items()}
    hor = FinCategory(objs, hmor, {(a, b): (a, B.ident[b]) for a, b in objs}, hcomp)
    vmor = {(f, b): ((A.src(f), b), (A.tgt(f), b)) for f in A.mor for b in B.objects}
    vcomp = {((f, b), (g, b)): (h, b) for (f, g), h in A.comp.items() for b in B.objects}
    ver = FinCategory(objs, vmor, {(a, b): (A.ident[a], b) for a, b in objs}, vcomp)
    sq = {}
    for f in A.mor:
        a0, a1 = A.mor[f]
        for g in B.mor:
            b0, b1 = B.mor[g]
            sq[(f, g)] = ((a0, g), (a1, g), (f, b0), (f, b1))
    sh = {((f, g1), (f, g2)): (f, g) for f in A.mor for (g1, g2), g in B.comp.items()}
    sv = {((f1, g), (f2, g)): (f, g) for (f1, f2), f in A.comp.items() for g in B.mor}
    idv = {(a, g): (A.ident[a], g) for a in A.objects for g in B.mor}
    idh = {(f, b): (f, B.ident[b]) for f in A.mor for b in B.objects}
    return DoubleCategory(hor, ver, sq, sh, sv, idv, idh)


def external_product_functor(F: Functor, G: Functor, src: Optional[DoubleCategory] = None,
                             tgt: Optional[DoubleCategory] = None) -> DoubleFunctor:
    S = src or external_product(F.src, G.src)
    T = tgt or external_product(F.tgt, G.tgt)
    return DoubleFunctor(S, T, {(a, b): (F.ob[a], G.ob[b]) for a, b in S.objects},
                         {(a, g): (F.ob[a], G.mor[g]) for a, g in S.hor.mor},
                         {(f, b): (F.mor[f], G.ob[b]) for f, b in S.ver.mor},
                         {(f, g): (F.mor[f], G.mor[g]) for f, g in S.sq})


def product_double(D: DoubleCategory, E: DoubleCategory) -> DoubleCategory:
    """Sortwise cartesian product."""
    hor = product_category(D.hor, E.hor)
    ver = product_category(D.ver, E.ver)
    sq = {(s, t): tuple(zip(D.sq[s], E.sq[t])) for s in D.sq for t in E.sq}
    hcomp = {((a, c), (b, d)): (ab, cd) for (a, b), ab in D.hcomp.items() for (c, d), cd in E.hcomp.items()}
    vcomp = {((a, c), (b, d)): (ab, cd) for (a, b), ab in D.vcomp.items() for (c, d), cd in E.vcomp.items()}
    idv = {(f, g): (D.idv[f], E.idv[g]) for f in D.hor.mor for g in E.hor.mor}
    idh = {(f, g): (D.idh[f], E.idh[g]) for f in D.ver.mor for g in E.ver.mor}
    return DoubleCategory(hor, ver, sq, hcomp, vcomp, idv, idh)


def transpose(D: DoubleCategory) -> DoubleCategory:
    sq = {s: (l, r, t, b) for s, (t, b, l, r) in D.sq.items()}
    return DoubleCategory(D.ver, D.hor, sq, D.vcomp, D.hcomp, D.idh, D.idv)


def transpose_functor(F: DoubleFunctor, src: Optional[DoubleCategory] = None,
                      tgt: Optional[DoubleCategory] = None) -> DoubleFunctor:
    return DoubleFunctor(src or transpose(F.src), tgt or transpose(F.tgt), F.ob, F.ver, F.hor, F.sq)


def embed_h(C: FinCategory) -> DoubleCategory:
    """ℍC: C as horizontal category, only identity vertical morphisms and squares."""
    ver = discrete_category(C.objects, "1v")
    sq = {("iv", f): (f, f, ("1v", s), ("1v", t)) for f, (s, t) in C.mor.items()}
    hcomp = {(("iv", f), ("iv", g)): ("iv", h) for (f, g), h in C.comp.items()}
    vcomp = {(("iv", f), ("iv", f)): ("iv", f) for f in C.mor}
    idv = {f: ("iv", f) for f in C.mor}
    idh = {("1v", a): ("iv", C.ident[a]) for a in C.objects}
    return DoubleCategory(C, ver, sq, hcomp, vcomp, idv, idh)


def embed_v(C: FinCategory) -> DoubleCategory:
    """𝕍C, the transpose of ℍC."""
    return transpose(embed_h(C))


def embed_h_functor(F: Functor) -> DoubleFunctor:
    S, T = embed_h(F.src), embed_h(F.tgt)
    return DoubleFunctor(S, T, dict(F.ob), dict(F.mor), {("1v", a): ("1v", b) for a, b in F.ob.items()},
                         {("iv", f): ("iv", g) for f, g in F.mor.items()})


def embed_v_functor(F: Functor) -> DoubleFunctor:
    return transpose_functor(embed_h_functor(F))


def underlying_h0(D: DoubleCategory) -> FinCategory:
    return D.hor


def underlying_v0(D: DoubleCategory) -> FinCategory:
    return D.ver


def terminal_double() -> DoubleCategory:
    return embed_h(ordinal(0))


def full_sub_double(D: DoubleCategory, objs: Iterable[Id]) -> DoubleCategory:
    keep = set(objs)
    hor = D.hor.full_subcategory(keep)
    ver = D.ver.full_subcategory(keep)
    sq = {s: b for s, b in D.sq.items() if b[0] in hor.mor and b[1] in hor.mor}
    return DoubleCategory(hor, ver, sq,
                          {k: v for k, v in D.hcomp.items() if k[0] in sq and k[1] in sq},
                          {k: v for k, v in D.vcomp.items() if k[0] in sq and k[1] in sq},
                          {f: D.idv[f] for f in hor.mor}, {v: D.idh[v] for v in ver.mor})


# --------------------------------------------------------------------------
# relational search: functor enumeration and isomorphism


class _Structure:
    """A finite multi-sorted relational structure: the common currency of search."""

    def __init__(self, elements: List[Tuple[str, Id]], relations: List[tuple]):
        self.elements = elements
        self.relations = relations
        self.index = {e: i for i, e in enumerate(elements)}
        self.sorts = [e[0] for e in elements]
        self.tuples = [(r[0], tuple(self.index[x] for x in r[1:])) for r in relations]
        self.by_elem: List[List[int]] = [[] for _ in elements]
        for t, (_, args) in enumerate(self.tuples):
            for x in set(args):
                self.by_elem[x].append(t)
        self.lookup: Dict[tuple, set] = {}
        for name, args in self.tuples:
            for i in range(len(args)):
                key = (name, i, args[:i] + args[i + 1:])
                self.lookup.setdefault(key, set()).add(args[i])
        self.rel_count: Dict[str, int] = {}
        for name, _ in self.tuples:
            self.rel_count[name] = self.rel_count.get(name, 0) + 1


def _cat_structure(C: FinCategory, p: str = "") -> Tuple[List, List]:
    els = [(p + "o", a) for a in C.objects] + [(p + "m", f) for f in C.mor]
    rels = []
    for f, (s, t) in C.mor.items():
        rels.append((p + "src", (p + "m", f), (p + "o", s)))
        rels.append((p + "tgt", (p + "m", f), (p + "o", t)))
    for a, f in C.ident.items():
        rels.append((p + "id", (p + "o", a), (p + "m", f)))
    for (f, g), h in C.comp.items():
        rels.append((p + "comp", (p + "m", f), (p + "m", g), (p + "m", h)))
    return els, rels


def _structure(X: Any) -> _Structure:
    if isinstance(X, FinCategory):
        return _Structure(*_cat_structure(X))
    if isinstance(X, DoubleCategory):
        he, hr = _cat_structure(X.hor, "h")
        ve, vr = _cat_structure(X.ver, "v")
        els = [("o", a) for a in X.objects] + [e for e in he if e[0] == "hm"] + \
              [e for e in ve if e[0] == "vm"] + [("s", s) for s in X.sq]
        ren = lambda e: ("o", e[1]) if e[0] in ("ho", "vo") else e
        rels = [(r[0],) + tuple(ren(e) for e in r[1:]) for r in hr + vr]
        for s, (t, b, l, r) in X.sq.items():
            rels += [("top", ("s", s), ("hm", t)), ("bot", ("s", s), ("hm", b)),
                     ("lft", ("s", s), ("vm", l)), ("rgt", ("s", s), ("vm", r))]
        rels += [("sh", ("s", a), ("s", b), ("s", c)) for (a, b), c in X.hcomp.items()]
        rels += [("sv", ("s", a), ("s", b), ("s", c)) for (a, b), c in X.vcomp.items()]
        rels += [("iv", ("hm", f), ("s", s)) for f, s in X.idv.items()]
        rels += [("ih", ("vm", f), ("s", s)) for f, s in X.idh.items()]
        return _Structure(els, rels)
    raise StructureError(f"no relational structure for {type(X).__name__}")


_SORT_RANK = {"o": 0, "ho": 0, "vo": 0, "hm": 1, "vm": 1, "m": 1, "s": 2}


def _refine(A: _Structure, B: _Structure, rounds: int = 4) -> Tuple[List[int], List[int]]:
    """Joint colour refinement; equal colours are necessary for an isomorphism to match."""
    table: Dict[Any, int] = {}

    def canon(x):
        return table.setdefault(x, len(table))

    ca = [canon(("sort", s)) for s in A.sorts]
    cb = [canon(("sort", s)) for s in B.sorts]
    for _ in range(rounds):
        def step(S, col):
            sig = []
            for x in range(len(S.elements)):
                parts = []
                for t in S.by_elem[x]:
                    name, args = S.tuples[t]
                    parts.append((name, tuple(i for i, y in enumerate(args) if y == x),
                                  tuple(col[y] for y in args)))
                parts.sort()
                sig.append(canon((col[x], tuple(parts))))
            return sig
        na, nb = step(A, ca), step(B, cb)
        if len(set(na)) == len(set(ca)) and len(set(nb)) == len(set(cb)):
            ca, cb = na, nb
            break
        ca, cb = na, nb
    return ca, cb


def _search(A: _Structure, B: _Structure, *, bijective: bool, allowed: Optional[Callable[[int, int], bool]] = None,
            limit: Optional[int] = None, fixed: Optional[Dict[int, int]] = None) -> Iterator[Dict[int, int]]:
    """Enumerate relation-preserving maps A -> B (bijections when ``bijective``)."""
    n = len(A.elements)
    if bijective:
        if len(A.elements) != len(B.elements) or A.rel_count != B.rel_count:
            return
        ca, cb = _refine(A, B)
        if sorted(ca) != sorted(cb):
            return
    by_sort: Dict[str, List[int]] = {}
    for y, s in enumerate(B.sorts):
        by_sort.setdefault(s, []).append(y)
    base: List[List[int]] = []
    for x in range(n):
        cands = by_sort.get(A.sorts[x], [])
        if bijective:
            cands = [y for y in cands if cb[y] == ca[x]]
        if allowed is not None:
            cands = [y for y in cands if allowed(x, y)]
        if fixed and x in fixed:
            cands = [fixed[x]] if fixed[x] in cands else []
        if not cands:
            return
        base.append(cands)

    # static order: greedily pick the element most constrained by already-ordered ones
    order: List[int] = []
    placed = [False] * n
    remaining = [len(set(args)) for _, args in A.tuples]
    score = [0] * n
    heap = [(-0, _SORT_RANK.get(A.sorts[x], 3), len(base[x]), x) for x in range(n)]
    heapq.heapify(heap)
    while heap:
        s, _, _, x = heapq.heappop(heap)
        if placed[x] or -s != score[x]:
            continue
        placed[x] = True
        order.append(x)
        for t in A.by_elem[x]:
            remaining[t] -= 1
            if remaining[t] == 1:
                for y in A.tuples[t][1]:
                    if not placed[y]:
                        score[y] += 1
                        heapq.heappush(heap, (-score[y], _SORT_RANK.get(A.sorts[y], 3), len(base[y]), y))
    checks: List[List[Tuple[str, int, tuple]]] = [[] for _ in range(n)]
    pos = {x: i for i, x in enumerate(order)}
    for name, args in A.tuples:
        last = max(args, key=lambda y: pos[y])
        for i, y in enumerate(args):
            if y == last:
                checks[last].append((name, i, args))
                break

    m: Dict[int, int] = {}
    used = set()
    count = 0

    def candidates(x):
        cands = None
        for name, i, args in checks[x]:
            key = (name, i, tuple(m[y] if y != x else None for j, y in enumerate(args) if j != i))
            if None in key[2]:
                # x occurs twice in the tuple; check afterwards
                continue
            vals = B.lookup.get(key, set())
            cands = vals if cands is None else cands & vals
            if not cands:
                return []
        pool = base[x] if cands is None else [y for y in base[x] if y in cands]
        return pool

    def consistent(x):
        for name, i, args in checks[x]:
            img = tuple(m[y] for y in args)
            key = (name, 0, img[1:])
            if img[0] not in B.lookup.get(key, ()):
                return False
        return True

    def rec(k):
        nonlocal count
        if k == n:
            count += 1
            yield dict(m)
            return
        x = order[k]
        for y in candidates(x):
            if bijective and y in used:
                continue
            m[x] = y
            if consistent(x):
                if bijective:
                    used.add(y)
                yield from rec(k + 1)
                if bijective:
                    used.discard(y)
            del m[x]
            if limit is not None and count >= limit:
                return

    yield from rec(0)


def _split(A: _Structure, B: _Structure, m: Dict[int, int]) -> Dict[str, Dict[Id, Id]]:
    out: Dict[str, Dict[Id, Id]] = {}
    for x, y in m.items():
        s, a = A.elements[x]
        out.setdefault(s, {})[a] = B.elements[y][1]
    return out


def _as_morphism(X, Y, parts):
    if isinstance(X, FinCategory):
        return Functor(X, Y, parts.get("o", {}), parts.get("m", {}))
    return DoubleFunctor(X, Y, parts.get("o", {}), parts.get("hm", {}), parts.get("vm", {}), parts.get("s", {}))


def iso_search(X, Y) -> Optional[Any]:
    """An isomorphism X ≅ Y as a (double) functor, or None."""
    if type(X) is not type(Y):
        return None
    A, B = _structure(X), _structure(Y)
    for m in _search(A, B, bijective=True):
        return _as_morphism(X, Y, _split(A, B, m))
    return None


def homomorphisms(X, Y, *, limit: Optional[int] = None, allowed: Optional[Callable[[str, Id, Id], bool]] = None,
                  fixed: Optional[Dict[Tuple[str, Id], Id]] = None) -> Iterator[Any]:
    """Enumerate all functors (or double functors) X -> Y.

    ``allowed(sort, x, y)`` prunes candidate images; sorts are "o", "m" for
    categories and "o", "hm", "vm", "s" for double categories.
    """
    A, B = _structure(X), _structure(Y)
    allow = None
    if allowed is not None:
        allow = lambda x, y: allowed(A.sorts[x], A.elements[x][1], B.elements[y][1])
    fx = None
    if fixed:
        fx = {A.index[k]: B.index[(k[0], v)] for k, v in fixed.items()}
    for m in _search(A, B, bijective=False, allowed=allow, fixed=fx, limit=limit):
        yield _as_morphism(X, Y, _split(A, B, m))


def count_homomorphisms(X, Y, budget: Optional[int] = None) -> int:
    n = 0
    for _ in homomorphisms(X, Y):
        n += 1
        if budget is not None and n > budget:
            raise BudgetExceeded("max-functors", budget)
    return n


# --------------------------------------------------------------------------
# transformations


@dataclass(eq=False)
class HNatTransf:
    """θ: F ⇒ G with horizontal components θA and squares θj for vertical j."""
    F: DoubleFunctor
    G: DoubleFunctor
    obj: Dict[Id, Id]
    ver: Dict[Id, Id]

    def validate(self) -> List[Violation]:
        F, G = self.F, self.G
        D, E = F.src, F.tgt
        out = []
        for a in D.objects:
            f = self.obj.get(a)
            if f not in E.hor.mor or E.hor.mor[f] != (F.ob[a], G.ob[a]):
                out.append(Violation("component-boundary", (a,)))
        if out:
            return out
        for j, (a, c) in D.ver.mor.items():
            s = self.ver.get(j)
            if s not in E.sq or E.sq[s] != (self.obj[a], self.obj[c], F.ver[j], G.ver[j]):
                out.append(Violation("component-square-boundary", (j,)))
        if out:
            return out
        for a in D.objects:
            if self.ver[D.ver.ident[a]] != E.idv[self.obj[a]]:
                out.append(Violation("identity-component", (a,)))
        for (j, k), jk in D.ver.comp.items():
            if self.ver[jk] != E.vcomp[(self.ver[j], self.ver[k])]:
                out.append(Violation("vertical-composite-component", (j, k)))
        for s, (f, g, j, k) in D.sq.items():
            if E.hcomp[(F.sq[s], self.ver[k])] != E.hcomp[(self.ver[j], G.sq[s])]:
                out.append(Violation("naturality-square", (s,)))
        return out


@dataclass(eq=False)
class VNatTransf:
    """σ: F ⇒ G with vertical components σA and squares σf for horizontal f."""
    F: DoubleFunctor
    G: DoubleFunctor
    obj: Dict[Id, Id]
    hor: Dict[Id, Id]

    def validate(self) -> List[Violation]:
        F, G = self.F, self.G
        D, E = F.src, F.tgt
        out = []
        for a in D.objects:
            v = self.obj.get(a)
            if v not in E.ver.mor or E.ver.mor[v] != (F.ob[a], G.ob[a]):
                out.append(Violation("component-boundary", (a,)))
        if out:
            return out
        for f, (a, b) in D.hor.mor.items():
            s = self.hor.get(f)
            if s not in E.sq or E.sq[s] != (F.hor[f], G.hor[f], self.obj[a], self.obj[b]):
                out.append(Violation("component-square-boundary", (f,)))
        if out:
            return out
        for a in D.objects:
            if self.hor[D.hor.ident[a]] != E.idh[self.obj[a]]:
                out.append(Violation("identity-component", (a,)))
        for (f, g), fg in D.hor.comp.items():
            if self.hor[fg] != E.hcomp[(self.hor[f], self.hor[g])]:
                out.append(Violation("horizontal-composite-component", (f, g)))
        for s, (f, g, j, k) in D.sq.items():
            if E.vcomp[(F.sq[s], self.hor[g])] != E.vcomp[(self.hor[f], G.sq[s])]:
                out.append(Violation("naturality-square", (s,)))
        return out


def _product_search(choices: List[Tuple[Id, List[Id]]], ok: Callable[[Dict[Id, Id]], bool]) -> Iterator[Dict[Id, Id]]:
    keys = [k for k, _ in choices]
    for combo in itertools.product(*[c for _, c in choices]):
        m = dict(zip(keys, combo))
        if ok(m):
            yield m


def horizontal_transformations(F: DoubleFunctor, G: DoubleFunctor) -> Iterator[HNatTransf]:
    D, E = F.src, F.tgt
    objs = list(D.objects)

    def obj_ok(m):
        for f, (a, b) in D.hor.mor.items():
            if E.hor.comp[(F.hor[f], m[b])] != E.hor.comp[(m[a], G.hor[f])]:
                return False
        return True

    obj_choices = [(a, E.hor.hom(F.ob[a], G.ob[a])) for a in objs]
    for theta in _product_search(obj_choices, obj_ok):
        choices = []
        for j, (a, c) in D.ver.mor.items():
            choices.append((j, E.with_boundary(theta[a], theta[c], F.ver[j], G.ver[j])))
        for sq in _product_search(choices, lambda m: True):
            t = HNatTransf(F, G, theta, sq)
            if not t.validate():
                yield t


def vertical_transformations(F: DoubleFunctor, G: DoubleFunctor) -> Iterator[VNatTransf]:
    D, E = F.src, F.tgt
    objs = list(D.objects)

    def obj_ok(m):
        for j, (a, b) in D.ver.mor.items():
            if E.ver.comp[(F.ver[j], m[b])] != E.ver.comp[(m[a], G.ver[j])]:
                return False
        return True

    obj_choices = [(a, E.ver.hom(F.ob[a], G.ob[a])) for a in objs]
    for sigma in _product_search(obj_choices, obj_ok):
        choices = []
        for f, (a, b) in D.hor.mor.items():
            choices.append((f, E.with_boundary(F.hor[f], G.hor[f], sigma[a], sigma[b])))
        for sq in _product_search(choices, lambda m: True):
            t = VNatTransf(F, G, sigma, sq)
            if not t.validate():
                yield t


def _modification_ok(mu: Dict[Id, Id], th: HNatTransf, th2: HNatTransf, sg: VNatTransf, sg2: VNatTransf) -> bool:
    D, E = th.F.src, th.F.tgt
    for f, (a, b) in D.hor.mor.items():
        if E.hcomp[(mu[a], sg2.hor[f])] != E.hcomp[(sg.hor[f], mu[b])]:
            return False
    for j, (a, c) in D.ver.mor.items():
        if E.vcomp[(mu[a], th2.ver[j])] != E.vcomp[(th.ver[j], mu[c])]:
            return False
    return True


def hom_double_category(D: DoubleCategory, E: DoubleCategory, budget: int = 2000) -> DoubleCategory:
    """The double category of double functors D -> E.

    Horizontal morphisms are horizontal transformations, vertical morphisms
    vertical transformations, squares are modifications: a square with top θ,
    bottom θ', left σ, right σ' assigns to every object A a square μA with that
    boundary at A, compatible with σf, σ'f horizontally and θj, θ'j vertically.
    """
    functors = []
    for F in homomorphisms(D, E):
        functors.append(F)
        if len(functors) > budget:
            raise BudgetExceeded("max-functors", budget)
    fid = {i: F for i, F in enumerate(functors)}
    hts: Dict[Id, HNatTransf] = {}
    hmor: Dict[Id, tuple] = {}
    for i, F in fid.items():
        for k, G in fid.items():
            for t in horizontal_transformations(F, G):
                name = ("h", i, k, len(hts))
                hts[name] = t
                hmor[name] = (i, k)
                if len(hts) > budget:
                    raise BudgetExceeded("max-transformations", budget)
    vts: Dict[Id, VNatTransf] = {}
    vmor: Dict[Id, tuple] = {}
    for i, F in fid.items():
        for k, G in fid.items():
            for t in vertical_transformations(F, G):
                name = ("v", i, k, len(vts))
                vts[name] = t
                vmor[name] = (i, k)
                if len(vts) > budget:
                    raise BudgetExceeded("max-transformations", budget)

    def hkey(t: HNatTransf):
        return (id(t.F), id(t.G), tuple(sorted(t.obj.items(), key=lambda kv: sortkey(kv[0]))),
                tuple(sorted(t.ver.items(), key=lambda kv: sortkey(kv[0]))))

    def vkey(t: VNatTransf):
        return (id(t.F), id(t.G), tuple(sorted(t.obj.items(), key=lambda kv: sortkey(kv[0]))),
                tuple(sorted(t.hor.items(), key=lambda kv: sortkey(kv[0]))))

    hfind = {hkey(t): n for n, t in hts.items()}
    vfind = {vkey(t): n for n, t in vts.items()}
    objs = list(fid)
    hident, vident = {}, {}
    for i, F in fid.items():
        t = HNatTransf(F, F, {a: E.hor.ident[F.ob[a]] for a in D.objects}, {j: E.idh[F.ver[j]] for j in D.ver.mor})
        hident[i] = hfind[hkey(t)]
        t = VNatTransf(F, F, {a: E.ver.ident[F.ob[a]] for a in D.objects}, {f: E.idv[F.hor[f]] for f in D.hor.mor})
        vident[i] = vfind[vkey(t)]
    hcomp = {}
    for n1, t1 in hts.items():
        for n2, t2 in hts.items():
            if t1.G is t2.F:
                t = HNatTransf(t1.F, t2.G, {a: E.hor.comp[(t1.obj[a], t2.obj[a])] for a in D.objects},
                               {j: E.hcomp[(t1.ver[j], t2.ver[j])] for j in D.ver.mor})
                hcomp[(n1, n2)] = hfind[hkey(t)]
    vcomp = {}
    for n1, t1 in vts.items():
        for n2, t2 in vts.items():
            if t1.G is t2.F:
                t = VNatTransf(t1.F, t2.G, {a: E.ver.comp[(t1.obj[a], t2.obj[a])] for a in D.objects},
                               {f: E.vcomp[(t1.hor[f], t2.hor[f])] for f in D.hor.mor})
                vcomp[(n1, n2)] = vfind[vkey(t)]
    hor = FinCategory(objs, hmor, hident, hcomp)
    ver = FinCategory(objs, vmor, vident, vcomp)

    sq: Dict[Id, tuple] = {}
    comp_of: Dict[Id, Dict[Id, Id]] = {}
    mkey = {}
    for tn, th in hts.items():
        for bn, th2 in hts.items():
            for ln, sg in vts.items():
                if sg.F is not th.F or sg.G is not th2.F:
                    continue
                for rn, sg2 in vts.items():
                    if sg2.F is not th.G or sg2.G is not th2.G:
                        continue
                    choices = [(a, E.with_boundary(th.obj[a], th2.obj[a], sg.obj[a], sg2.obj[a])) for a in D.objects]
                    for mu in _product_search(choices, lambda m: _modification_ok(m, th, th2, sg, sg2)):
                        name = ("sq", len(sq))
                        sq[name] = (tn, bn, ln, rn)
                        comp_of[name] = mu
                        mkey[(tn, bn, ln, rn, tuple(mu[a] for a in D.objects))] = name
                        if len(sq) > budget:
                            raise BudgetExceeded("max-squares", budget)
    shc, svc = {}, {}
    for s1, (t1, b1, l1, r1) in sq.items():
        for s2, (t2, b2, l2, r2) in sq.items():
            if r1 == l2:
                mu = tuple(E.hcomp[(comp_of[s1][a], comp_of[s2][a])] for a in D.objects)
                shc[(s1, s2)] = mkey[(hcomp[(t1, t2)], hcomp[(b1, b2)], l1, r2, mu)]
            if b1 == t2:
                mu = tuple(E.vcomp[(comp_of[s1][a], comp_of[s2][a])] for a in D.objects)
                svc[(s1, s2)] = mkey[(t1, b2, vcomp[(l1, l2)], vcomp[(r1, r2)], mu)]
    idv = {}
    for tn, th in hts.items():
        i, k = hmor[tn]
        idv[tn] = mkey[(tn, tn, vident[i], vident[k], tuple(E.idv[th.obj[a]] for a in D.objects))]
    idh = {}
    for vn, sg in vts.items():
        i, k = vmor[vn]
        idh[vn] = mkey[(hident[i], hident[k], vn, vn, tuple(E.idh[sg.obj[a]] for a in D.objects))]
    H = DoubleCategory(hor, ver, sq, shc, svc, idv, idh)
    H.functors = fid
    return H
