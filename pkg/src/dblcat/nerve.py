"""Nerves of categories and double categories as finite truncations.

Simplices of level k ≥ 1 are tuples of k composable morphisms; level 0
holds bare objects.  Set-valued truncations use discrete level categories.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .core import (DoubleCategory, DoubleFunctor, FinCategory, Functor, StructureError, Violation, discrete_category,
                   transpose, transpose_functor)

Id = Hashable


@dataclass(eq=False)
class SimplicialTruncation:
    """Levels 0..n of a simplicial object in finite categories.

    ``faces[(k, i)]`` is d_i: X_k → X_{k-1} and ``degens[(k, i)]`` is
    s_i: X_k → X_{k+1} (only for k < n).
    """
    n: int
    levels: Dict[int, FinCategory]
    faces: Dict[Tuple[int, int], Functor]
    degens: Dict[Tuple[int, int], Functor]
    discrete: bool = False

    def level(self, k: int) -> FinCategory:
        if k > self.n:
            raise StructureError(f"level {k} is above the truncation level {self.n}")
        return self.levels[k]

    def act(self, theta: Sequence[int], k: int) -> Functor:
        """X(θ): X_k → X_m for a monotone θ: [m] → [k] given as its value list."""
        theta = list(theta)
        if any(a > b for a, b in zip(theta, theta[1:])) or (theta and (theta[0] < 0 or theta[-1] > k)):
            raise StructureError(f"{theta} is not a monotone map into [{k}]")
        F = Functor.identity(self.levels[k])
        level = k
        image = sorted(set(theta))
        # faces for the values missed by θ, largest first so indices stay valid
        for j in reversed(range(k + 1)):
            if j not in image:
                F = F.then(self.faces[(level, j)])
                level -= 1
        # degeneracies for the repeated values of the surjective part
        eta = [image.index(v) for v in theta]
        ops = []
        while len(eta) - 1 > level:
            i = next(i for i in range(len(eta) - 1) if eta[i] == eta[i + 1])
            ops.append(i)
            eta = eta[:i + 1] + eta[i + 2:]
        for i in reversed(ops):
            F = F.then(self.degens[(level, i)])
            level += 1
        return F

    def validate(self) -> List[Violation]:
        """Simplicial identities on objects and morphisms of every represented level."""
        out = []
        for k, L in self.levels.items():
            out += [Violation(f"level {k}: " + v.axiom, v.witnesses) for v in L.validate()]
        for (k, i), F in list(self.faces.items()) + list(self.degens.items()):
            out += [Violation(f"operator {(k, i)}: " + v.axiom, v.witnesses) for v in F.validate()]
        if out:
            return out
        d, s = self.faces, self.degens

        def same(F: Functor, G: Functor, what):
            if F.ob != G.ob or F.mor != G.mor:
                out.append(Violation("simplicial-identity", what))

        for k in range(2, self.n + 1):
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    # d_i d_j = d_{j-1} d_i
                    same(d[(k, j)].then(d[(k - 1, i)]), d[(k, i)].then(d[(k - 1, j - 1)]), ("dd", k, i, j))
        for k in range(0, self.n - 1):
            for i in range(k + 1):
                for j in range(i, k + 1):
                    # s_i s_j = s_{j+1} s_i
                    same(s[(k, j)].then(s[(k + 1, i)]), s[(k, i)].then(s[(k + 1, j + 1)]), ("ss", k, i, j))
        for k in range(0, self.n):
            for j in range(k + 1):
                ident = Functor.identity(self.levels[k])
                for i in range(k + 2):
                    lhs = s[(k, j)].then(d[(k + 1, i)])
                    if i < j:
                        same(lhs, d[(k, i)].then(s[(k - 1, j - 1)]), ("ds<", k, i, j))
                    elif i in (j, j + 1):
                        same(lhs, ident, ("ds=", k, i, j))
                    else:
                        same(lhs, d[(k, i - 1)].then(s[(k - 1, j)]), ("ds>", k, i, j))
        return out


@dataclass(eq=False)
class TruncationMorphism:
    src: SimplicialTruncation
    tgt: SimplicialTruncation
    components: Dict[int, Functor]

    def validate(self) -> List[Violation]:
        out = []
        for k, F in self.components.items():
            out += F.validate()
        for (k, i), d in self.src.faces.items():
            if k in self.components and k - 1 in self.components:
                a = d.then(self.components[k - 1])
                b = self.components[k].then(self.tgt.faces[(k, i)])
                if a.ob != b.ob or a.mor != b.mor:
                    out.append(Violation("naturality-face", (k, i)))
        for (k, i), s in self.src.degens.items():
            if k in self.components and k + 1 in self.components:
                a = s.then(self.components[k + 1])
                b = self.components[k].then(self.tgt.degens[(k, i)])
                if a.ob != b.ob or a.mor != b.mor:
                    out.append(Violation("naturality-degeneracy", (k, i)))
        return out


# --------------------------------------------------------------------------
# strings in a category


def _strings(C: FinCategory, k: int) -> List[Id]:
    if k == 0:
        return list(C.objects)
    out = [(f,) for f in C.mor]
    for _ in range(k - 1):
        out = [w + (g,) for w in out for g in C.out_of(C.tgt(w[-1]))]
    return out


def _vertex(C: FinCategory, w, i: int):
    if not isinstance(w, tuple) or not w:
        return w
    return C.src(w[0]) if i == 0 else C.tgt(w[i - 1])


def _face(C: FinCategory, w, k: int, i: int):
    if k == 1:
        return C.tgt(w[0]) if i == 0 else C.src(w[0])
    if i == 0:
        return w[1:]
    if i == k:
        return w[:-1]
    return w[:i - 1] + (C.comp[(w[i - 1], w[i])],) + w[i + 1:]


def _degen(C: FinCategory, w, k: int, i: int):
    if k == 0:
        return (C.ident[w],)
    return w[:i] + (C.ident[_vertex(C, w, i)],) + w[i:]


def _set_level(items: List[Id]) -> FinCategory:
    return discrete_category(items, "id")


def _set_map(src: FinCategory, tgt: FinCategory, f: Callable[[Id], Id]) -> Functor:
    ob = {x: f(x) for x in src.objects}
    return Functor(src, tgt, ob, {src.ident[x]: tgt.ident[ob[x]] for x in src.objects})


def nerve_cat(C: FinCategory, n: int) -> SimplicialTruncation:
    """Set-valued nerve of C up to level n: composable strings, faces compose or drop."""
    levels = {k: _set_level(_strings(C, k)) for k in range(n + 1)}
    faces = {(k, i): _set_map(levels[k], levels[k - 1], lambda w, k=k, i=i: _face(C, w, k, i))
             for k in range(1, n + 1) for i in range(k + 1)}
    degens = {(k, i): _set_map(levels[k], levels[k + 1], lambda w, k=k, i=i: _degen(C, w, k, i))
              for k in range(n) for i in range(k + 1)}
    return SimplicialTruncation(n, levels, faces, degens, discrete=True)


def _square_category(D: DoubleCategory) -> FinCategory:
    """Vertical morphisms with squares between them under horizontal composition."""
    mor = {s: (D.left(s), D.right(s)) for s in D.sq}
    return FinCategory(list(D.ver.mor), mor, dict(D.idh), dict(D.hcomp))


def horizontal_nerve(D: DoubleCategory, n: int) -> SimplicialTruncation:
    """Cat-valued horizontal nerve up to level n; composition in each level is vertical."""
    H, S = D.hor, _square_category(D)
    levels = {}
    for k in range(n + 1):
        objs = _strings(H, k)
        if k == 0:
            levels[0] = D.ver
            continue
        mor = {w: (tuple(D.top(s) for s in w), tuple(D.bottom(s) for s in w)) for w in _strings(S, k)}
        ident = {x: tuple(D.idv[h] for h in x) for x in objs}
        comp = {}
        below = D.by_top
        for w in mor:
            for rest in _stack_below(D, w, below):
                comp[(w, rest)] = tuple(D.vcomp[(a, b)] for a, b in zip(w, rest))
        levels[k] = FinCategory(objs, mor, ident, comp)

    def functor(k_src, k_tgt, on_obj, on_mor):
        A, B = levels[k_src], levels[k_tgt]
        return Functor(A, B, {x: on_obj(x) for x in A.objects}, {w: on_mor(w) for w in A.mor})

    faces, degens = {}, {}
    for k in range(1, n + 1):
        for i in range(k + 1):
            faces[(k, i)] = functor(k, k - 1, lambda x, k=k, i=i: _face(H, x, k, i),
                                    lambda w, k=k, i=i: _face(S, w, k, i))
    for k in range(n):
        for i in range(k + 1):
            degens[(k, i)] = functor(k, k + 1, lambda x, k=k, i=i: _degen(H, x, k, i),
                                     lambda w, k=k, i=i: _degen(S, w, k, i))
    return SimplicialTruncation(n, levels, faces, degens)


def _stack_below(D: DoubleCategory, w: tuple, below) -> List[tuple]:
    """Rows of squares vertically composable beneath the row w."""
    rows = [()]
    for s in w:
        nxt = []
        for r in rows:
            for t in below.get(D.bottom(s), ()):
                if r and D.right(r[-1]) != D.left(t):
                    continue
                nxt.append(r + (t,))
        rows = nxt
    return rows


def vertical_nerve(D: DoubleCategory, n: int) -> SimplicialTruncation:
    """Horizontal nerve of the transpose: strings of vertical morphisms, horizontal composition."""
    return horizontal_nerve(transpose(D), n)


def horizontal_nerve_map(F: DoubleFunctor, n: int, src: Optional[SimplicialTruncation] = None,
                         tgt: Optional[SimplicialTruncation] = None) -> TruncationMorphism:
    src = src or horizontal_nerve(F.src, n)
    tgt = tgt or horizontal_nerve(F.tgt, n)
    comps = {0: Functor(src.levels[0], tgt.levels[0], dict(F.ob), dict(F.ver))}
    for k in range(1, n + 1):
        A, B = src.levels[k], tgt.levels[k]
        comps[k] = Functor(A, B, {x: tuple(F.hor[h] for h in x) for x in A.objects},
                           {w: tuple(F.sq[s] for s in w) for w in A.mor})
    return TruncationMorphism(src, tgt, comps)


def vertical_nerve_map(F: DoubleFunctor, n: int) -> TruncationMorphism:
    return horizontal_nerve_map(transpose_functor(F), n)


def nerve_map(F: Functor, n: int, src: Optional[SimplicialTruncation] = None,
              tgt: Optional[SimplicialTruncation] = None) -> TruncationMorphism:
    src = src or nerve_cat(F.src, n)
    tgt = tgt or nerve_cat(F.tgt, n)
    comps = {}
    for k in range(n + 1):
        f = (lambda x: F.ob[x]) if k == 0 else (lambda w: tuple(F.mor[g] for g in w))
        comps[k] = _set_map(src.levels[k], tgt.levels[k], f)
    return TruncationMorphism(src, tgt, comps)


# --------------------------------------------------------------------------
# double nerve


@dataclass(frozen=True)
class Array:
    """A p×q composable array: object, horizontal, vertical and square grids (row-major tuples)."""
    p: int
    q: int
    obj: Tuple[Tuple[Id, ...], ...]
    hor: Tuple[Tuple[Id, ...], ...]
    ver: Tuple[Tuple[Id, ...], ...]
    sq: Tuple[Tuple[Id, ...], ...]

    def transposed(self) -> "Array":
        return Array(self.q, self.p, _tr(self.obj, self.q + 1), _tr(self.ver, self.q + 1),
                     _tr(self.hor, self.q), _tr(self.sq, self.q))


def _tr(grid, cols):
    return tuple(tuple(row[j] for row in grid) for j in range(cols))


def _arrays(D: DoubleCategory, p: int, q: int) -> List[Array]:
    """All p×q arrays, built row of squares by row of squares."""
    H = D.hor
    if p == 0:
        out = []
        for w in _strings(H, q):
            if q == 0:
                out.append(Array(0, 0, ((w,),), ((),), (), ()))
            else:
                objs = tuple(_vertex(H, w, i) for i in range(q + 1))
                out.append(Array(0, q, (objs,), (w,), (), ()))
        return out
    if q == 0:
        return [a.transposed() for a in _arrays(transpose(D), 0, p)]
    below = D.by_top
    rows = [(w,) for w in _strings(_square_category(D), q)]
    for _ in range(p - 1):
        rows = [r + (nxt,) for r in rows for nxt in _stack_below(D, r[-1], below)]
    out = []
    for r in rows:
        hor = (tuple(D.top(s) for s in r[0]),) + tuple(tuple(D.bottom(s) for s in row) for row in r)
        ver = tuple((D.left(row[0]),) + tuple(D.right(s) for s in row) for row in r)
        obj = tuple(tuple(_vertex(H, h, i) for i in range(q + 1)) for h in hor)
        out.append(Array(p, q, obj, hor, ver, tuple(r)))
    return out


def _vface(D: DoubleCategory, a: Array, i: int) -> Array:
    p = a.p
    if p == 0:
        raise StructureError("no vertical faces at vertical degree 0")
    if i == 0:
        return Array(p - 1, a.q, a.obj[1:], a.hor[1:], a.ver[1:], a.sq[1:])
    if i == p:
        return Array(p - 1, a.q, a.obj[:-1], a.hor[:-1], a.ver[:-1], a.sq[:-1])
    ver = a.ver[:i - 1] + (tuple(D.ver.comp[(x, y)] for x, y in zip(a.ver[i - 1], a.ver[i])),) + a.ver[i + 1:]
    sq = a.sq[:i - 1] + (tuple(D.vcomp[(x, y)] for x, y in zip(a.sq[i - 1], a.sq[i])),) + a.sq[i + 1:]
    return Array(p - 1, a.q, a.obj[:i] + a.obj[i + 1:], a.hor[:i] + a.hor[i + 1:], ver, sq)


def _vdegen(D: DoubleCategory, a: Array, i: int) -> Array:
    ver_row = tuple(D.ver.ident[x] for x in a.obj[i])
    sq_row = tuple(D.idv[h] for h in a.hor[i])
    return Array(a.p + 1, a.q, a.obj[:i + 1] + a.obj[i:], a.hor[:i + 1] + a.hor[i:],
                 a.ver[:i] + (ver_row,) + a.ver[i:], a.sq[:i] + (sq_row,) + a.sq[i:])


@dataclass(eq=False)
class BisimplicialTruncation:
    """(N_d D)_{p,q} for p ≤ m, q ≤ n with bi-face and bi-degeneracy maps on demand.

    p counts vertical steps (rows), q horizontal steps (columns).
    """
    double: DoubleCategory
    m: int
    n: int
    levels: Dict[Tuple[int, int], List[Array]] = field(default_factory=dict)

    def __post_init__(self):
        self._t = transpose(self.double)
        if not self.levels:
            self.levels = {(p, q): _arrays(self.double, p, q) for p in range(self.m + 1) for q in range(self.n + 1)}

    def vface(self, a: Array, i: int) -> Array:
        return _vface(self.double, a, i)

    def vdegen(self, a: Array, i: int) -> Array:
        return _vdegen(self.double, a, i)

    def hface(self, a: Array, j: int) -> Array:
        return _vface(self._t, a.transposed(), j).transposed()

    def hdegen(self, a: Array, j: int) -> Array:
        return _vdegen(self._t, a.transposed(), j).transposed()

    def validate(self) -> List[Violation]:
        """Faces and degeneracies land in the represented levels and commute across directions."""
        out = []
        sets = {k: set(v) for k, v in self.levels.items()}
        for (p, q), arr in self.levels.items():
            for a in arr:
                for i in range(p + 1 if p else 0):
                    if self.vface(a, i) not in sets[(p - 1, q)]:
                        out.append(Violation("vface-target", (p, q, i)))
                for j in range(q + 1 if q else 0):
                    if self.hface(a, j) not in sets[(p, q - 1)]:
                        out.append(Violation("hface-target", (p, q, j)))
                if p and q:
                    for i in range(p + 1):
                        for j in range(q + 1):
                            if self.vface(self.hface(a, j), i) != self.hface(self.vface(a, i), j):
                                out.append(Violation("faces-commute", (p, q, i, j)))
                if p < self.m:
                    for i in range(p + 1):
                        if self.vdegen(a, i) not in sets[(p + 1, q)]:
                            out.append(Violation("vdegen-target", (p, q, i)))
                if q < self.n:
                    for j in range(q + 1):
                        if self.hdegen(a, j) not in sets[(p, q + 1)]:
                            out.append(Violation("hdegen-target", (p, q, j)))
        return out


def double_nerve(D: DoubleCategory, m: int, n: int) -> BisimplicialTruncation:
    return BisimplicialTruncation(D, m, n)


def diag_nerve(D: DoubleCategory, k: int) -> SimplicialTruncation:
    """Set-valued diagonal of the double nerve: d_i = d^v_i d^h_i and s_i = s^v_i s^h_i."""
    B = BisimplicialTruncation(D, k, k, {(j, j): _arrays(D, j, j) for j in range(k + 1)})
    levels = {j: _set_level(B.levels[(j, j)]) for j in range(k + 1)}
    faces = {(j, i): _set_map(levels[j], levels[j - 1], lambda a, i=i: B.vface(B.hface(a, i), i))
             for j in range(1, k + 1) for i in range(j + 1)}
    degens = {(j, i): _set_map(levels[j], levels[j + 1], lambda a, i=i: B.vdegen(B.hdegen(a, i), i))
              for j in range(k) for i in range(j + 1)}
    return SimplicialTruncation(k, levels, faces, degens, discrete=True)


# --------------------------------------------------------------------------
# coskeleta


def _triples(n: int) -> List[Tuple[int, int, int]]:
    return list(itertools.combinations(range(n + 1), 3))


def _matching_families(X: SimplicialTruncation, n: int, part: str) -> List[Dict[Tuple[int, int, int], Id]]:
    """Families of level-2 cells indexed by the 2-faces of Δ[n] that agree on shared edges."""
    L2 = X.levels[2]
    d = {i: X.faces[(2, i)] for i in range(3)}
    cells = list(L2.objects) if part == "ob" else list(L2.mor)
    get = (lambda F, x: F.ob[x]) if part == "ob" else (lambda F, x: F.mor[x])
    index: Dict[tuple, List[Id]] = {}
    for x in cells:
        index.setdefault((get(d[2], x), get(d[0], x)), []).append(x)
    tri = _triples(n)
    out: List[Dict] = []

    def rec(t, edges, fam):
        if t == len(tri):
            out.append(dict(fam))
            return
        a, b, c = tri[t]
        ab, bc, ac = edges.get((a, b)), edges.get((b, c)), edges.get((a, c))
        if ab is not None and bc is not None:
            cand = index.get((ab, bc), [])
        else:
            cand = [x for x in cells if (ab is None or get(d[2], x) == ab) and (bc is None or get(d[0], x) == bc)]
        for x in cand:
            e = {(a, b): get(d[2], x), (b, c): get(d[0], x), (a, c): get(d[1], x)}
            if ac is not None and e[(a, c)] != ac:
                continue
            new = {k: v for k, v in e.items() if k not in edges}
            edges.update(new)
            fam[(a, b, c)] = x
            rec(t + 1, edges, fam)
            del fam[(a, b, c)]
            for k in new:
                del edges[k]

    rec(0, {}, {})
    return out


def coskeleton_level(X: SimplicialTruncation, n: int) -> FinCategory:
    """(cosk₂ X)_n as the category of matching families; composition is componentwise."""
    if X.n < 2:
        raise StructureError("need levels up to 2")
    L2 = X.levels[2]
    tri = _triples(n)
    key = lambda fam: tuple(fam[t] for t in tri)
    objs = [key(f) for f in _matching_families(X, n, "ob")]
    mor = {}
    for f in _matching_families(X, n, "mor"):
        mor[key(f)] = (tuple(L2.src(x) for x in key(f)), tuple(L2.tgt(x) for x in key(f)))
    ident = {o: tuple(L2.ident[x] for x in o) for o in objs}
    comp = {}
    by_src: Dict[tuple, List[tuple]] = {}
    for m, (s, t) in mor.items():
        by_src.setdefault(s, []).append(m)
    for m, (s, t) in mor.items():
        for m2 in by_src.get(t, ()):
            comp[(m, m2)] = tuple(L2.comp[(x, y)] for x, y in zip(m, m2))
    return FinCategory(objs, mor, ident, comp)


def canonical_to_coskeleton(X: SimplicialTruncation, n: int, C: Optional[FinCategory] = None) -> Functor:
    """X_n → (cosk₂ X)_n sending a cell to its family of 2-faces."""
    C = C or coskeleton_level(X, n)
    tri = _triples(n)
    restr = [X.act(t, n) for t in tri]
    Ln = X.levels[n]
    ob = {x: tuple(R.ob[x] for R in restr) for x in Ln.objects}
    mor = {w: tuple(R.mor[w] for R in restr) for w in Ln.mor}
    return Functor(Ln, C, ob, mor)


def check_2coskeletal(X, n: int) -> bool:
    """Level n agrees with the matching-family limit of levels ≤ 2 via the canonical map."""
    if n < 3:
        raise StructureError("2-coskeletality is checked at levels n ≥ 3")
    if isinstance(X, DoubleCategory):
        X = horizontal_nerve(X, n)
    C = coskeleton_level(X, n)
    F = canonical_to_coskeleton(X, n, C)
    if F.validate():
        return False
    return (len(set(F.ob.values())) == len(F.ob) == len(C.objects)
            and len(set(F.mor.values())) == len(F.mor) == len(C.mor))
