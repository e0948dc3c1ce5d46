"""Free categories and double categories, closure engines, congruences and quotients.

The two closure engines are coset-enumeration style saturations: classes of
morphisms (or squares) with partial composition tables, merged by
congruence, with undefined composites created round by round until the
tables are total.  A result is only returned once the tables close within
budget and the output passes validation.
"""
from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .arrange import Arrangement, is_allowable
from .core import (BudgetExceeded, DoubleCategory, DoubleGraph, DoubleScheme, FinCategory, ReflexiveGraph,
                   StructureError, Violation, sortkey)

Id = Hashable


class InfiniteCategory(StructureError):
    """The requested free structure has infinitely many cells."""


@dataclass(frozen=True)
class _Mark:
    """Label of an identity seed inside a closure, distinct from any user identifier."""
    kind: str
    cell: Any


@dataclass(frozen=True)
class Budget:
    """Bounds for every enumeration.

    ``max_path`` bounds path length in free categories, ``max_squares`` the
    number of live classes in a closure (morphisms or squares) and
    ``max_cells`` the number of cells in a free square's arrangement.
    """
    max_cells: int = 256
    max_path: int = 64
    max_squares: int = 2000

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        vals = {}
        raw = os.environ.get("DBLCAT_BUDGET", "")
        for part in filter(None, (p.strip() for p in raw.split(","))):
            k, _, v = part.partition("=")
            k = k.strip().replace("-", "_")
            if k not in ("max_cells", "max_path", "max_squares"):
                raise ValueError(f"unknown budget key {k!r} in DBLCAT_BUDGET")
            vals[k] = int(v)
        vals.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**vals)

    def as_dict(self) -> Dict[str, int]:
        return {"max_cells": self.max_cells, "max_path": self.max_path, "max_squares": self.max_squares}


DEFAULT_BUDGET = Budget()


# --------------------------------------------------------------------------
# free categories


def _nonidentity_edges(g: ReflexiveGraph) -> Dict[Id, Tuple[Id, Id]]:
    ids = set(g.identity.values())
    return {e: st for e, st in g.edges.items() if e not in ids}


def _find_cycle(vertices, edges) -> Optional[List[Id]]:
    out = defaultdict(list)
    for e, (s, t) in edges.items():
        out[s].append((e, t))
    color = {v: 0 for v in vertices}
    stack_path: List[Id] = []

    def visit(v):
        color[v] = 1
        for e, t in out[v]:
            stack_path.append(e)
            if color[t] == 1:
                return True
            if color[t] == 0 and visit(t):
                return True
            stack_path.pop()
        color[v] = 2
        return False

    for v in vertices:
        if color[v] == 0 and visit(v):
            return stack_path
    return None


def free_category(g: ReflexiveGraph, budget: Budget = DEFAULT_BUDGET) -> FinCategory:
    """Free category on a reflexive graph: paths of nonidentity edges.

    Identity edges stay identities, single edges keep their name and longer
    paths are named by the tuple of their edges.
    """
    bad = g.validate()
    if bad:
        raise StructureError("; ".join(map(str, bad)))
    edges = _nonidentity_edges(g)
    cyc = _find_cycle(g.vertices, edges)
    if cyc is not None:
        raise InfiniteCategory(f"cycle of nonidentity edges {cyc!r}")
    out = defaultdict(list)
    for e, (s, t) in sorted(edges.items(), key=lambda kv: sortkey(kv[0])):
        out[s].append((e, t))
    mor: Dict[Id, Tuple[Id, Id]] = {g.identity[v]: (v, v) for v in g.vertices}
    paths: Dict[Id, Tuple[Id, ...]] = {}
    limit = budget.max_squares

    def extend(start, path, end):
        for e, t in out[end]:
            p = path + (e,)
            if len(p) > budget.max_path:
                raise BudgetExceeded("max_path", budget.max_path, "path length")
            name = p[0] if len(p) == 1 else p
            mor[name] = (start, t)
            paths[name] = p
            if len(mor) > limit:
                raise BudgetExceeded("max_squares", limit, "morphism count")
            extend(start, p, t)

    for v in g.vertices:
        extend(v, (), v)
    by_path = {p: n for n, p in paths.items()}
    ids = set(g.identity.values())
    comp = {}
    for f, (_, t) in mor.items():
        for h, (s2, _) in mor.items():
            if t != s2:
                continue
            if f in ids:
                comp[(f, h)] = h
            elif h in ids:
                comp[(f, h)] = f
            else:
                comp[(f, h)] = by_path[paths[f] + paths[h]]
    return FinCategory(g.vertices, mor, dict(g.identity), comp)


def free_dds(g: DoubleGraph, budget: Budget = DEFAULT_BUDGET) -> DoubleScheme:
    """Free double derivation scheme: free 1-categories, squares unchanged."""
    bad = g.validate()
    if bad:
        raise StructureError("; ".join(map(str, bad)))
    return DoubleScheme(free_category(g.hor, budget), free_category(g.ver, budget), dict(g.squares))


# --------------------------------------------------------------------------
# union-find


class UnionFind:
    def __init__(self):
        self.parent: Dict[Any, Any] = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p == x:
            return x
        root = self.find(p)
        self.parent[x] = root
        return root

    def union(self, x, y) -> bool:
        """Merge; the representative is the least element by sortkey."""
        a, b = self.find(x), self.find(y)
        if a == b:
            return False
        if sortkey(b) < sortkey(a):
            a, b = b, a
        self.parent[b] = a
        return True

    def classes(self) -> Dict[Any, List[Any]]:
        out: Dict[Any, List[Any]] = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return out


# --------------------------------------------------------------------------
# closure engines


def _term_size(t) -> int:
    if t[0] in ("h", "v", "c"):
        return _term_size(t[1]) + _term_size(t[2])
    return 1


def _better(t1, t2) -> bool:
    return (_term_size(t1), sortkey(t1)) < (_term_size(t2), sortkey(t2))


class _Engine:
    """Shared union-find over integer classes with re-keyed composition tables."""

    tables: Tuple[str, ...] = ()

    def __init__(self, limit: int, label: str):
        self.limit = limit
        self.budget_label = label
        self.parent: List[int] = []
        self.term: List[tuple] = []
        self.labels: List[set] = []
        self.tab: Dict[str, Dict[Tuple[int, int], int]] = {n: {} for n in self.tables}
        self.uses: List[set] = []
        # entries added or re-keyed, and merge survivors, since the last associativity pass
        self.fresh: Dict[str, set] = {n: set() for n in self.tables}
        self.dirty: Dict[str, set] = {n: set() for n in self.tables}
        self.queue: List[Tuple[int, int]] = []
        self.live = 0
        self.changed = False

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def _new(self, term, label=None) -> int:
        c = len(self.parent)
        self.parent.append(c)
        self.term.append(term)
        self.labels.append({label} if label is not None else set())
        self.uses.append(set())
        self.live += 1
        if self.live > self.limit:
            raise BudgetExceeded(self.budget_label, self.limit, "closure did not saturate")
        return c

    def get(self, name: str, a: int, b: int) -> Optional[int]:
        v = self.tab[name].get((self.find(a), self.find(b)))
        return None if v is None else self.find(v)

    def put(self, name: str, a: int, b: int, c: int) -> None:
        a, b, c = self.find(a), self.find(b), self.find(c)
        t = self.tab[name]
        old = t.get((a, b))
        if old is None:
            t[(a, b)] = c
            self.fresh[name].add((a, b))
            self.uses[a].add((name, a, b))
            self.uses[b].add((name, a, b))
            self.changed = True
        elif self.find(old) != c:
            self.queue.append((old, c))
            self._drain()

    def merge(self, x: int, y: int) -> None:
        self.queue.append((x, y))
        self._drain()

    def _check_mergeable(self, keep: int, gone: int) -> None:
        pass

    def _drain(self) -> None:
        while self.queue:
            x, y = self.queue.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            keep, gone = (x, y) if x < y else (y, x)
            self._check_mergeable(keep, gone)
            self.parent[gone] = keep
            self.live -= 1
            self.changed = True
            if _better(self.term[gone], self.term[keep]):
                self.term[keep] = self.term[gone]
            self.labels[keep] |= self.labels[gone]
            for d in self.dirty.values():
                d.add(keep)
            for name, a, b in self.uses[gone]:
                t = self.tab[name]
                if (a, b) not in t:
                    continue
                v = t.pop((a, b))
                na, nb = self.find(a), self.find(b)
                old = t.get((na, nb))
                if old is None:
                    t[(na, nb)] = v
                    self.fresh[name].add((na, nb))
                    self.uses[na].add((name, na, nb))
                    self.uses[nb].add((name, na, nb))
                elif self.find(old) != self.find(v):
                    self.queue.append((old, v))
            self.uses[gone] = set()

    def alive(self) -> List[int]:
        return [c for c in range(len(self.parent)) if self.parent[c] == c]

    def entries(self, name: str) -> List[Tuple[int, int, int]]:
        out = []
        for (a, b), c in list(self.tab[name].items()):
            out.append((self.find(a), self.find(b), self.find(c)))
        return out

    def _assoc(self, name: str) -> None:
        """Associativity on every triple touching an entry or class changed since the last pass."""
        ents = self.entries(name)
        right: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        left: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        byval: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        for a, b, c in ents:
            right[a].append((b, c))
            left[b].append((a, c))
            byval[c].append((a, b))
        fresh = {(self.find(a), self.find(b)) for a, b in self.fresh[name]}
        dirty = {self.find(m) for m in self.dirty[name]}
        self.fresh[name], self.dirty[name] = set(), set()
        if dirty:
            for a, b, c in ents:
                if a in dirty or b in dirty or c in dirty:
                    fresh.add((a, b))
        if 2 * len(fresh) > len(ents):
            # most entries are new: a full pass is cheaper than collecting triples
            for a, b, ab in ents:
                for c, bc in right.get(b, ()):
                    self._assoc_one(name, a, b, c, ab, bc)
            return
        triples = set()
        for a, b in fresh:
            ab = self.get(name, a, b)
            if ab is None:
                continue
            for c, _ in right.get(b, ()):
                triples.add((a, b, c))
            for x, _ in left.get(a, ()):
                triples.add((x, a, b))
            for x, y in byval.get(a, ()):
                triples.add((x, y, b))
            for x, y in byval.get(b, ()):
                triples.add((a, x, y))
        for a, b, c in sorted(triples):
            self._assoc_one(name, a, b, c, self.get(name, a, b), self.get(name, b, c))

    def _assoc_one(self, name: str, a: int, b: int, c: int, ab: Optional[int], bc: Optional[int]) -> None:
        if ab is not None and bc is not None:
            x = self.get(name, ab, c)
            y = self.get(name, a, bc)
            if x is None and y is None:
                return
            if x is None:
                self.put(name, ab, c, y)
            elif y is None:
                self.put(name, a, bc, x)
            elif x != y:
                self.merge(x, y)


class CategoryClosure(_Engine):
    """Closure for categories: morphism classes over a fixed object set."""

    tables = ("c",)

    def __init__(self, objects: Iterable[Id], limit: int = DEFAULT_BUDGET.max_squares):
        super().__init__(limit, "max_squares")
        self.objects = list(objects)
        self.src: List[Id] = []
        self.tgt: List[Id] = []
        self.ident: Dict[Id, int] = {}
        for a in self.objects:
            i = self._make(a, a, ("1", a))
            self.ident[a] = i
        for a in self.objects:
            i = self.ident[a]
            self.put("c", i, i, i)

    def _make(self, s, t, term, label=None) -> int:
        c = self._new(term, label)
        self.src.append(s)
        self.tgt.append(t)
        if s in self.ident and t in self.ident:
            self.put("c", self.ident[s], c, c)
            self.put("c", c, self.ident[t], c)
        return c

    def _check_mergeable(self, keep, gone):
        if (self.src[keep], self.tgt[keep]) != (self.src[gone], self.tgt[gone]):
            raise StructureError("merging non-parallel morphisms")

    def generator(self, s: Id, t: Id, label: Id) -> int:
        return self._make(s, t, ("g", label), label)

    def compose(self, a: int, b: int) -> int:
        """Class of a;b, created if not yet known."""
        a, b = self.find(a), self.find(b)
        if self.tgt[a] != self.src[b]:
            raise StructureError("composing non-composable morphisms")
        c = self.get("c", a, b)
        if c is None:
            c = self._make(self.src[a], self.tgt[b], ("c", self.term[a], self.term[b]))
            self.put("c", a, b, c)
        return c

    def word(self, classes: Sequence[int]) -> int:
        acc = classes[0]
        for x in classes[1:]:
            acc = self.compose(acc, x)
        return acc

    def deduce(self) -> None:
        self.changed = True
        while self.changed:
            self.changed = False
            self._assoc("c")

    def saturate(self) -> None:
        while True:
            self.deduce()
            alive = self.alive()
            by_src = defaultdict(list)
            for c in alive:
                by_src[self.src[c]].append(c)
            missing = [(a, b) for a in alive for b in by_src[self.tgt[a]] if self.get("c", a, b) is None]
            if not missing:
                return
            for a, b in missing:
                if self.get("c", a, b) is None:
                    self.compose(a, b)

    def result(self, name=None) -> Tuple[FinCategory, Dict[int, Id]]:
        """Materialize; ``name(class)`` chooses identifiers (default: least label or word)."""
        alive = self.alive()
        names: Dict[int, Id] = {}
        for c in alive:
            names[c] = name(c) if name else self.default_name(c)
        if len(set(names.values())) != len(names):
            raise StructureError("identifier clash while naming closure classes")
        mor = {names[c]: (self.src[c], self.tgt[c]) for c in alive}
        ident = {a: names[self.find(i)] for a, i in self.ident.items()}
        comp = {(names[a], names[b]): names[c] for a, b, c in self.entries("c")}
        C = FinCategory(self.objects, mor, ident, comp)
        return C, {c: names[self.find(c)] for c in range(len(self.parent))}

    def default_name(self, c: int) -> Id:
        if self.labels[c]:
            return min(self.labels[c], key=sortkey)
        t = self.term[c]
        if t[0] == "1":
            return ("1", t[1])
        return tuple(_flatten(t))


def _flatten(t) -> List[Id]:
    if t[0] in ("c", "h", "v"):
        return _flatten(t[1]) + _flatten(t[2])
    return [t[1]]


def present_category(objects: Iterable[Id], generators: Mapping[Id, Tuple[Id, Id]],
                     relations: Iterable[Tuple[Sequence[Id], Sequence[Id]]] = (),
                     identities: Optional[Mapping[Id, Id]] = None,
                     budget: Budget = DEFAULT_BUDGET, with_names: bool = False):
    """The category presented by generators and path relations.

    Relation sides are sequences of generator names; a name from
    ``identities`` (object -> name) stands for that identity.  With
    ``with_names`` the result is (category, generator -> morphism name).
    """
    objects = list(objects)
    eng = CategoryClosure(objects, budget.max_squares)
    ident = dict(identities or {a: ("1", a) for a in objects})
    cls: Dict[Id, int] = {}
    for a, n in ident.items():
        cls[n] = eng.ident[a]
        eng.labels[eng.ident[a]].add(n)
    for g, (s, t) in sorted(generators.items(), key=lambda kv: sortkey(kv[0])):
        cls[g] = eng.generator(s, t, g)
    for lhs, rhs in relations:
        if not lhs or not rhs:
            raise StructureError("relation sides must be nonempty words")
        eng.merge(eng.word([cls[x] for x in lhs]), eng.word([cls[x] for x in rhs]))
    eng.saturate()

    def name(c):
        idl = [n for n in ident.values() if eng.find(cls[n]) == c]
        if idl:
            return idl[0]
        return eng.default_name(c)

    C, names = eng.result(name)
    _certify(C.validate())
    if with_names:
        return C, {g: names[c] for g, c in cls.items()}
    return C


def _certify(bad: List[Violation]) -> None:
    if bad:
        raise StructureError("closure result failed validation: " + "; ".join(map(str, bad[:5])))


class SquareClosure(_Engine):
    """Closure for double categories over fixed horizontal and vertical categories."""

    tables = ("h", "v")

    def __init__(self, H: FinCategory, V: FinCategory, limit: int = DEFAULT_BUDGET.max_squares,
                 max_cells: Optional[int] = None):
        super().__init__(limit, "max_squares")
        self.H, self.V = H, V
        self.max_cells = max_cells
        self.bd: List[tuple] = []
        self.idv: Dict[Id, int] = {}
        self.idh: Dict[Id, int] = {}
        for f, (a, b) in H.mor.items():
            self.idv[f] = self._make((f, f, V.ident[a], V.ident[b]), ("idv", f), _Mark("idv", f), units=False)
        for v, (a, b) in V.mor.items():
            self.idh[v] = self._make((H.ident[a], H.ident[b], v, v), ("idh", v), _Mark("idh", v), units=False)
        for a in H.objects:
            self.merge(self.idv[H.ident[a]], self.idh[V.ident[a]])
        for c in list(self.idv.values()) + list(self.idh.values()):
            self._units(c)
        for (f, g), fg in H.comp.items():
            self.put("h", self.idv[f], self.idv[g], self.idv[fg])
        for (j, k), jk in V.comp.items():
            self.put("v", self.idh[j], self.idh[k], self.idh[jk])

    def _units(self, c: int) -> None:
        t, b, l, r = self.bd[c]
        self.put("h", self.idh[l], c, c)
        self.put("h", c, self.idh[r], c)
        self.put("v", self.idv[t], c, c)
        self.put("v", c, self.idv[b], c)

    def _make(self, boundary, term, label=None, units=True) -> int:
        if self.max_cells is not None and _term_size(term) > self.max_cells:
            raise BudgetExceeded("max_cells", self.max_cells, "free square arrangement size")
        c = self._new(term, label)
        self.bd.append(boundary)
        if units:
            self._units(c)
        return c

    def _check_mergeable(self, keep, gone):
        if self.bd[keep] != self.bd[gone]:
            raise StructureError(f"merging squares with different boundaries {self.bd[keep]} / {self.bd[gone]}")

    def generator(self, boundary, label: Id) -> int:
        return self._make(tuple(boundary), ("g", label), label)

    def hcomp(self, a: int, b: int) -> int:
        a, b = self.find(a), self.find(b)
        ta, ba, la, ra = self.bd[a]
        tb, bb, lb, rb = self.bd[b]
        if ra != lb:
            raise StructureError("squares not horizontally composable")
        c = self.get("h", a, b)
        if c is None:
            bd = (self.H.comp[(ta, tb)], self.H.comp[(ba, bb)], la, rb)
            c = self._make(bd, ("h", self.term[a], self.term[b]))
            self.put("h", a, b, c)
        return c

    def vcomp(self, a: int, b: int) -> int:
        a, b = self.find(a), self.find(b)
        ta, ba, la, ra = self.bd[a]
        tb, bb, lb, rb = self.bd[b]
        if ba != tb:
            raise StructureError("squares not vertically composable")
        c = self.get("v", a, b)
        if c is None:
            bd = (ta, bb, self.V.comp[(la, lb)], self.V.comp[(ra, rb)])
            c = self._make(bd, ("v", self.term[a], self.term[b]))
            self.put("v", a, b, c)
        return c

    def _interchange(self) -> None:
        below = defaultdict(list)
        for a, c, ac in self.entries("v"):
            below[a].append((c, ac))
        hent = self.entries("h")
        for a, b, ab in hent:
            for c, ac in below.get(a, ()):
                for d, bd in below.get(b, ()):
                    cd = self.get("h", c, d)
                    if cd is None:
                        continue
                    x = self.get("v", ab, cd)
                    y = self.get("h", ac, bd)
                    if x is None and y is None:
                        continue
                    if x is None:
                        self.put("v", ab, cd, y)
                    elif y is None:
                        self.put("h", ac, bd, x)
                    elif x != y:
                        self.merge(x, y)

    def deduce(self) -> None:
        self.changed = True
        while self.changed:
            self.changed = False
            self._assoc("h")
            self._assoc("v")
            self._interchange()

    def saturate(self) -> None:
        while True:
            self.deduce()
            alive = self.alive()
            by_left, by_top = defaultdict(list), defaultdict(list)
            for c in alive:
                by_left[self.bd[c][2]].append(c)
                by_top[self.bd[c][0]].append(c)
            hmiss = [(a, b) for a in alive for b in by_left[self.bd[a][3]] if self.get("h", a, b) is None]
            vmiss = [(a, b) for a in alive for b in by_top[self.bd[a][1]] if self.get("v", a, b) is None]
            if not hmiss and not vmiss:
                return
            for a, b in hmiss:
                if self.get("h", a, b) is None:
                    self.hcomp(a, b)
            for a, b in vmiss:
                if self.get("v", a, b) is None:
                    self.vcomp(a, b)

    def result(self, name) -> Tuple[DoubleCategory, Dict[int, Id]]:
        alive = self.alive()
        names = {c: name(c) for c in alive}
        if len(set(names.values())) != len(names):
            raise StructureError("identifier clash while naming square classes")
        sq = {names[c]: self.bd[c] for c in alive}
        hc = {(names[a], names[b]): names[c] for a, b, c in self.entries("h")}
        vc = {(names[a], names[b]): names[c] for a, b, c in self.entries("v")}
        idv = {f: names[self.find(c)] for f, c in self.idv.items()}
        idh = {v: names[self.find(c)] for v, c in self.idh.items()}
        D = DoubleCategory(self.H, self.V, sq, hc, vc, idv, idh)
        return D, {c: names[self.find(c)] for c in range(len(self.parent))}


# --------------------------------------------------------------------------
# free double categories


@dataclass(frozen=True)
class FreeSquare:
    """A square of a free double category.

    ``tag`` is "IdV" (data: a horizontal morphism), "IdH" (a vertical
    morphism) or "Tile" (data: the sorted ``(cell, label)`` pairs of an
    allowable arrangement; labels are generator names or identity
    FreeSquares).
    """
    tag: str
    data: Any

    def __repr__(self) -> str:
        if self.tag == "Tile" and len(self.data) == 1:
            return f"Tile({self.data[0][1]!r})"
        return f"{self.tag}({self.data!r})"

    def arrangement(self) -> Arrangement:
        if self.tag != "Tile":
            raise ValueError("identity squares have no tile arrangement")
        return Arrangement.build(self.data)

    def generator_count(self) -> Dict[Id, int]:
        out: Dict[Id, int] = {}
        if self.tag == "Tile":
            for _, lab in self.data:
                if not isinstance(lab, FreeSquare):
                    out[lab] = out.get(lab, 0) + 1
        return out


def _layout(term, box=(Fraction(0), Fraction(1), Fraction(0), Fraction(1))) -> List[tuple]:
    x0, x1, y0, y1 = box
    kind = term[0]
    if kind == "h":
        xm = (x0 + x1) / 2
        return _layout(term[1], (x0, xm, y0, y1)) + _layout(term[2], (xm, x1, y0, y1))
    if kind == "v":
        ym = (y0 + y1) / 2
        return _layout(term[1], (x0, x1, y0, ym)) + _layout(term[2], (x0, x1, ym, y1))
    if kind == "g":
        lab = term[1]
    elif kind == "idv":
        lab = FreeSquare("IdV", term[1])
    else:
        lab = FreeSquare("IdH", term[1])
    return [(box, lab)]


def term_to_square(term) -> FreeSquare:
    if term[0] == "idv":
        return FreeSquare("IdV", term[1])
    if term[0] == "idh":
        return FreeSquare("IdH", term[1])
    arr = Arrangement.build(_layout(term))
    assert is_allowable(arr.subdivision)
    return FreeSquare("Tile", arr.key())


class FreePresentation:
    """Lazy handle on a free double category that did not saturate within budget.

    Terms are nested tuples: ("g", name), ("idv", f), ("idh", v),
    ("h", t1, t2), ("v", t1, t2).
    """

    def __init__(self, scheme: DoubleScheme):
        self.scheme = scheme

    def boundary(self, t) -> tuple:
        S = self.scheme
        k = t[0]
        if k == "g":
            return tuple(S.squares[t[1]])
        if k == "idv":
            a, b = S.hor.mor[t[1]]
            return (t[1], t[1], S.ver.ident[a], S.ver.ident[b])
        if k == "idh":
            a, b = S.ver.mor[t[1]]
            return (S.hor.ident[a], S.hor.ident[b], t[1], t[1])
        b1, b2 = self.boundary(t[1]), self.boundary(t[2])
        if k == "h":
            if b1[3] != b2[2]:
                raise StructureError("not horizontally composable")
            return (S.hor.comp[(b1[0], b2[0])], S.hor.comp[(b1[1], b2[1])], b1[2], b2[3])
        if b1[1] != b2[0]:
            raise StructureError("not vertically composable")
        return (b1[0], b2[1], S.ver.comp[(b1[2], b2[2])], S.ver.comp[(b1[3], b2[3])])

    def hcomp(self, a, b):
        t = ("h", a, b)
        self.boundary(t)
        return self.normal(t)

    def vcomp(self, a, b):
        t = ("v", a, b)
        self.boundary(t)
        return self.normal(t)

    def normal(self, t):
        """Absorb identity squares under the unit laws."""
        k = t[0]
        if k not in ("h", "v"):
            if k == "idh" and self.scheme.ver.is_identity(t[1]):
                a = self.scheme.ver.src(t[1])
                return ("idv", self.scheme.hor.ident[a])
            return t
        a, b = self.normal(t[1]), self.normal(t[2])
        if k == "h":
            if a[0] == "idh" or (a[0] == "idv" and self.scheme.hor.is_identity(a[1])):
                return b
            if b[0] == "idh" or (b[0] == "idv" and self.scheme.hor.is_identity(b[1])):
                return a
        else:
            if a[0] == "idv":
                return b
            if b[0] == "idv":
                return a
        return (k, a, b)

    def square(self, t) -> FreeSquare:
        return term_to_square(self.normal(t))

    def equal(self, x, y) -> Optional[bool]:
        """True/False when decided by canonical forms or invariants, None otherwise."""
        if self.boundary(x) != self.boundary(y):
            return False
        sx, sy = self.square(x), self.square(y)
        if sx == sy:
            return True
        if sx.generator_count() != sy.generator_count():
            return False
        return None


def free_double_category(S: DoubleScheme, budget: Budget = DEFAULT_BUDGET, lazy: bool = True
                         ) -> Union[DoubleCategory, FreePresentation]:
    """Free double category on a scheme, materialized when it saturates within budget."""
    bad = S.validate()
    if bad:
        raise StructureError("; ".join(map(str, bad)))
    try:
        eng = SquareClosure(S.hor, S.ver, budget.max_squares, budget.max_cells)
        for g, bd in sorted(S.squares.items(), key=lambda kv: sortkey(kv[0])):
            eng.generator(bd, g)
        eng.saturate()
    except BudgetExceeded:
        if lazy:
            return FreePresentation(S)
        raise

    def name(c):
        marks = [l for l in eng.labels[c] if isinstance(l, _Mark)]
        for kind, tag in (("idv", "IdV"), ("idh", "IdH")):
            cells = sorted((m.cell for m in marks if m.kind == kind), key=sortkey)
            if cells:
                return FreeSquare(tag, cells[0])
        return term_to_square(eng.term[c])

    D, _ = eng.result(name)
    _certify(D.validate())
    return D


# --------------------------------------------------------------------------
# congruences and quotients


@dataclass
class CatCongruence:
    category: FinCategory
    rep: Dict[Id, Id]  # morphism -> least member of its class

    def classes(self) -> Dict[Id, List[Id]]:
        out: Dict[Id, List[Id]] = defaultdict(list)
        for f, r in self.rep.items():
            out[r].append(f)
        return dict(out)

    def validate(self) -> List[Violation]:
        C = self.category
        out = []
        for f, r in self.rep.items():
            if C.mor[f] != C.mor[r]:
                out.append(Violation("congruence-not-parallel", (f, r)))
        if out:
            return out
        seen = {}
        for (f, g), h in C.comp.items():
            k = (self.rep[f], self.rep[g])
            if seen.setdefault(k, self.rep[h]) != self.rep[h]:
                out.append(Violation("congruence-not-closed", (f, g)))
        return out


@dataclass
class DblCongruence:
    double: DoubleCategory
    rep: Dict[Id, Id]  # square -> least member of its class

    def classes(self) -> Dict[Id, List[Id]]:
        out: Dict[Id, List[Id]] = defaultdict(list)
        for f, r in self.rep.items():
            out[r].append(f)
        return dict(out)

    def validate(self) -> List[Violation]:
        D = self.double
        out = []
        for s, r in self.rep.items():
            if D.sq[s] != D.sq[r]:
                out.append(Violation("congruence-boundary", (s, r)))
        if out:
            return out
        for name, tab in (("horizontal", D.hcomp), ("vertical", D.vcomp)):
            seen = {}
            for (a, b), c in tab.items():
                k = (self.rep[a], self.rep[b])
                if seen.setdefault(k, self.rep[c]) != self.rep[c]:
                    out.append(Violation(f"congruence-not-closed-{name}", (a, b)))
        return out


def congruence_closure(pairs: Iterable[Tuple[Id, Id]], structure: Union[FinCategory, DoubleCategory]
                       ) -> Union[CatCongruence, DblCongruence]:
    """Least congruence containing the pairs (morphisms of a category or squares of a double category)."""
    uf = UnionFind()
    if isinstance(structure, FinCategory):
        cells = structure.mor
        tables = [structure.comp]
    else:
        cells = structure.sq
        tables = [structure.hcomp, structure.vcomp]
    for x in cells:
        uf.add(x)
    for a, b in pairs:
        if a not in cells or b not in cells:
            raise StructureError(f"unknown cell in pair {(a, b)!r}")
        if cells[a] != cells[b]:
            raise StructureError(f"pair {(a, b)!r} is not parallel")
        uf.union(a, b)
    changed = True
    while changed:
        changed = False
        for tab in tables:
            seen: Dict[tuple, Id] = {}
            for (a, b), c in tab.items():
                k = (uf.find(a), uf.find(b))
                prev = seen.setdefault(k, c)
                if uf.union(prev, c):
                    changed = True
    rep = {x: uf.find(x) for x in cells}
    if isinstance(structure, FinCategory):
        return CatCongruence(structure, rep)
    return DblCongruence(structure, rep)


def quotient_category(C: FinCategory, cong: CatCongruence) -> FinCategory:
    bad = cong.validate()
    if bad:
        raise StructureError("; ".join(map(str, bad)))
    r = cong.rep
    mor = {r[f]: C.mor[f] for f in C.mor}
    comp = {(r[f], r[g]): r[h] for (f, g), h in C.comp.items()}
    return FinCategory(C.objects, mor, {a: r[f] for a, f in C.ident.items()}, comp)


def quotient_double(D: DoubleCategory, cong: DblCongruence) -> DoubleCategory:
    bad = cong.validate()
    if bad:
        raise StructureError("; ".join(map(str, bad)))
    r = cong.rep
    sq = {r[s]: D.sq[s] for s in D.sq}
    return DoubleCategory(D.hor, D.ver, sq, {(r[a], r[b]): r[c] for (a, b), c in D.hcomp.items()},
                          {(r[a], r[b]): r[c] for (a, b), c in D.vcomp.items()},
                          {f: r[s] for f, s in D.idv.items()}, {v: r[s] for v, s in D.idh.items()})
