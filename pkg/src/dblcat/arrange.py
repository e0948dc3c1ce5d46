"""Rectangle subdivisions, allowability and composition of arrangements.

Cells are ``(x0, x1, y0, y1)`` with integer coordinates; ``y`` grows
downward, so the top edge of a cell lies on ``y0``.  Subdivisions are kept
rank-normalized: the x-coordinates in use are ``0..width`` and the
y-coordinates ``0..height``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .core import DoubleCategory, Violation, sortkey

Cell = Tuple[int, int, int, int]


class NotAllowable(ValueError):
    pass


class NotCompatible(ValueError):
    pass


def normalize(cells: Iterable[Cell]) -> FrozenSet[Cell]:
    cells = list(cells)
    xs = sorted({c[0] for c in cells} | {c[1] for c in cells})
    ys = sorted({c[2] for c in cells} | {c[3] for c in cells})
    rx = {x: i for i, x in enumerate(xs)}
    ry = {y: i for i, y in enumerate(ys)}
    return frozenset((rx[a], rx[b], ry[c], ry[d]) for a, b, c, d in cells)


@dataclass(frozen=True)
class Subdivision:
    cells: FrozenSet[Cell]

    @classmethod
    def of(cls, cells: Iterable[Sequence[int]]) -> "Subdivision":
        return cls(normalize(tuple(c) for c in cells))

    @classmethod
    def grid(cls, rows: int, cols: int) -> "Subdivision":
        return cls(frozenset((x, x + 1, y, y + 1) for x in range(cols) for y in range(rows)))

    @property
    def width(self) -> int:
        return max(c[1] for c in self.cells)

    @property
    def height(self) -> int:
        return max(c[3] for c in self.cells)

    def sorted_cells(self) -> List[Cell]:
        return sorted(self.cells, key=lambda c: (c[2], c[0], c[3], c[1]))

    def validate(self) -> List[Violation]:
        out = []
        if not self.cells:
            return [Violation("empty-subdivision")]
        if self.cells != normalize(self.cells):
            out.append(Violation("not-rank-normalized"))
        for c in self.cells:
            if c[0] >= c[1] or c[2] >= c[3]:
                out.append(Violation("cell-area", (c,)))
        if out:
            return out
        cells = self.sorted_cells()
        for i, a in enumerate(cells):
            for b in cells[i + 1:]:
                if a[0] < b[1] and b[0] < a[1] and a[2] < b[3] and b[2] < a[3]:
                    out.append(Violation("cells-overlap", (a, b)))
        area = sum((c[1] - c[0]) * (c[3] - c[2]) for c in cells)
        if area != self.width * self.height or min(c[0] for c in cells) or min(c[2] for c in cells):
            out.append(Violation("not-a-tiling"))
        return out


def pinwheel() -> Subdivision:
    """Five cells: a centre surrounded by four L-arranged cells; no full cut exists."""
    return Subdivision.of([(0, 2, 0, 1), (2, 3, 0, 2), (1, 3, 2, 3), (0, 1, 1, 3), (1, 2, 1, 2)])


def _bounds(cells: FrozenSet[Cell]) -> Cell:
    return (min(c[0] for c in cells), max(c[1] for c in cells),
            min(c[2] for c in cells), max(c[3] for c in cells))


def horizontal_cuts(cells: FrozenSet[Cell]) -> List[int]:
    """y-values of full-length horizontal cuts, ascending."""
    _, _, y0, y1 = _bounds(cells)
    edges = {c[2] for c in cells} - {y0}
    return sorted(y for y in edges if not any(c[2] < y < c[3] for c in cells))


def vertical_cuts(cells: FrozenSet[Cell]) -> List[int]:
    x0, _, _, _ = _bounds(cells)
    edges = {c[0] for c in cells} - {x0}
    return sorted(x for x in edges if not any(c[0] < x < c[1] for c in cells))


def split(cells: FrozenSet[Cell], direction: str, at: int) -> Tuple[FrozenSet[Cell], FrozenSet[Cell]]:
    k = 2 if direction == "H" else 0
    first = frozenset(c for c in cells if c[k + 1] <= at)
    return first, cells - first


@lru_cache(maxsize=None)
def _allowable(cells: FrozenSet[Cell]) -> bool:
    if len(cells) == 1:
        return True
    for d, cuts in (("H", horizontal_cuts(cells)), ("V", vertical_cuts(cells))):
        for at in cuts:
            a, b = split(cells, d, at)
            if _allowable(a) and _allowable(b):
                return True
    return False


def is_allowable(s: Union[Subdivision, Iterable[Cell]]) -> bool:
    cells = s.cells if isinstance(s, Subdivision) else frozenset(s)
    return _allowable(cells)


@dataclass(frozen=True)
class Leaf:
    cell: Cell


@dataclass(frozen=True)
class Node:
    direction: str  # "H": children are rows, top to bottom; "V": columns, left to right
    children: Tuple["CutTree", ...]


CutTree = Union[Leaf, Node]


def _strips(cells: FrozenSet[Cell], direction: str, cuts: List[int]) -> List[FrozenSet[Cell]]:
    out, rest = [], cells
    for at in cuts:
        first, rest = split(rest, direction, at)
        out.append(first)
    out.append(rest)
    return out


def _canonical(cells: FrozenSet[Cell]) -> CutTree:
    if len(cells) == 1:
        return Leaf(next(iter(cells)))
    for d in ("H", "V"):
        cuts = horizontal_cuts(cells) if d == "H" else vertical_cuts(cells)
        if cuts:
            return Node(d, tuple(_canonical(p) for p in _strips(cells, d, cuts)))
    raise NotAllowable("no full-length cut in sub-rectangle %r" % (_bounds(cells),))


def cut_tree(s: Union[Subdivision, Iterable[Cell]]) -> CutTree:
    """Canonical cut tree: all horizontal cuts at once if any exist, else all vertical ones."""
    cells = s.cells if isinstance(s, Subdivision) else frozenset(s)
    if not _allowable(cells):
        raise NotAllowable("subdivision is not allowable")
    return _canonical(cells)


def random_cut_tree(s: Union[Subdivision, Iterable[Cell]], rng: random.Random) -> CutTree:
    """A binary cut tree choosing a uniformly random full-length cut at every step."""
    cells = s.cells if isinstance(s, Subdivision) else frozenset(s)
    if len(cells) == 1:
        return Leaf(next(iter(cells)))
    options = [("H", y) for y in horizontal_cuts(cells)] + [("V", x) for x in vertical_cuts(cells)]
    if not options:
        raise NotAllowable("no full-length cut in sub-rectangle %r" % (_bounds(cells),))
    d, at = rng.choice(options)
    a, b = split(cells, d, at)
    return Node(d, (random_cut_tree(a, rng), random_cut_tree(b, rng)))


def tree_cells(t: CutTree) -> List[Cell]:
    if isinstance(t, Leaf):
        return [t.cell]
    return [c for ch in t.children for c in tree_cells(ch)]


# --------------------------------------------------------------------------
# arrangements


@dataclass(frozen=True)
class Arrangement:
    """A labelled subdivision.

    ``cells`` labels each cell with a square.  Atomic segments may be
    labelled explicitly: ``hsegs[((x0, x1), y)]`` is a horizontal morphism
    and ``vsegs[(x, (y0, y1))]`` a vertical one.  Unlabelled segments are
    inferred from the cells when checking compatibility.
    """
    subdivision: Subdivision
    cells: Mapping[Cell, Hashable]
    hsegs: Mapping[Tuple[Tuple[int, int], int], Hashable] = field(default_factory=dict)
    vsegs: Mapping[Tuple[int, Tuple[int, int]], Hashable] = field(default_factory=dict)

    @classmethod
    def grid(cls, rows: Sequence[Sequence[Hashable]]) -> "Arrangement":
        cells = {}
        for y, row in enumerate(rows):
            for x, sq in enumerate(row):
                cells[(x, x + 1, y, y + 1)] = sq
        return cls(Subdivision(frozenset(cells)), cells)

    @classmethod
    def build(cls, labelled: Iterable[Tuple[Sequence[int], Hashable]]) -> "Arrangement":
        """From (cell, square) pairs with arbitrary coordinates; normalizes ranks."""
        labelled = [(tuple(c), s) for c, s in labelled]
        raw = [c for c, _ in labelled]
        xs = sorted({c[0] for c in raw} | {c[1] for c in raw})
        ys = sorted({c[2] for c in raw} | {c[3] for c in raw})
        rx = {x: i for i, x in enumerate(xs)}
        ry = {y: i for i, y in enumerate(ys)}
        cells = {(rx[a], rx[b], ry[c], ry[d]): s for (a, b, c, d), s in labelled}
        return cls(Subdivision(frozenset(cells)), cells)

    def key(self) -> tuple:
        return tuple(sorted(((c, s) for c, s in self.cells.items()), key=lambda cs: (cs[0], sortkey(cs[1]))))


def _vertex_map(sub: Subdivision):
    hv: Dict[int, set] = {}
    vv: Dict[int, set] = {}
    for x0, x1, y0, y1 in sub.cells:
        for y in (y0, y1):
            hv.setdefault(y, set()).update((x0, x1))
        for x in (x0, x1):
            vv.setdefault(x, set()).update((y0, y1))
    return {y: sorted(v) for y, v in hv.items()}, {x: sorted(v) for x, v in vv.items()}


def _atoms(points: List[int], lo: int, hi: int) -> List[Tuple[int, int]]:
    inner = [p for p in points if lo <= p <= hi]
    return list(zip(inner, inner[1:]))


def check_compatible(D: DoubleCategory, a: Arrangement) -> Tuple[List[Violation], Dict, Dict]:
    """Compatibility of an arrangement over D; returns diagnostics and the full segment labelling."""
    out: List[Violation] = []
    sub = a.subdivision
    for c in sub.cells:
        if c not in a.cells:
            out.append(Violation("unlabelled-cell", (c,)))
        elif a.cells[c] not in D.sq:
            out.append(Violation("unknown-square", (c, a.cells[c])))
    if out:
        return out, {}, {}
    hpts, vpts = _vertex_map(sub)
    corner: Dict[Tuple[int, int], Hashable] = {}
    H, V = D.hor, D.ver
    for c, s in a.cells.items():
        t, b, l, r = D.sq[s]
        x0, x1, y0, y1 = c
        for pt, ob in (((x0, y0), H.src(t)), ((x1, y0), H.tgt(t)), ((x0, y1), H.src(b)), ((x1, y1), H.tgt(b))):
            if corner.setdefault(pt, ob) != ob:
                out.append(Violation("vertex-objects-disagree", (pt,)))
    if out:
        return out, {}, {}
    hseg = dict(a.hsegs)
    vseg = dict(a.vsegs)
    # infer segments that coincide with a whole cell edge
    for c, s in a.cells.items():
        t, b, l, r = D.sq[s]
        x0, x1, y0, y1 = c
        if len(_atoms(hpts[y0], x0, x1)) == 1:
            hseg.setdefault(((x0, x1), y0), t)
        if len(_atoms(hpts[y1], x0, x1)) == 1:
            hseg.setdefault(((x0, x1), y1), b)
        if len(_atoms(vpts[x0], y0, y1)) == 1:
            vseg.setdefault((x0, (y0, y1)), l)
        if len(_atoms(vpts[x1], y0, y1)) == 1:
            vseg.setdefault((x1, (y0, y1)), r)
    # remaining segments: search over hom-sets, checked cell by cell
    constraints = []
    for c, s in a.cells.items():
        t, b, l, r = D.sq[s]
        x0, x1, y0, y1 = c
        constraints.append((H, [("h", (seg, y0)) for seg in _atoms(hpts[y0], x0, x1)], t))
        constraints.append((H, [("h", (seg, y1)) for seg in _atoms(hpts[y1], x0, x1)], b))
        constraints.append((V, [("v", (x0, seg)) for seg in _atoms(vpts[x0], y0, y1)], l))
        constraints.append((V, [("v", (x1, seg)) for seg in _atoms(vpts[x1], y0, y1)], r))
    labels = {("h", k): v for k, v in hseg.items()}
    labels.update({("v", k): v for k, v in vseg.items()})
    unknown = sorted({k for _, ks, _ in constraints for k in ks if k not in labels}, key=sortkey)

    def endpoints(k):
        if k[0] == "h":
            (x0, x1), y = k[1]
            return corner[(x0, y)], corner[(x1, y)]
        x, (y0, y1) = k[1]
        return corner[(x, y0)], corner[(x, y1)]

    def ok(partial):
        for cat, ks, want in constraints:
            if all(k in partial for k in ks):
                try:
                    if cat.compose(*[partial[k] for k in ks]) != want:
                        return False
                except KeyError:
                    return False
        return True

    def solve(i):
        if i == len(unknown):
            return ok(labels)
        k = unknown[i]
        cat = H if k[0] == "h" else V
        for m in cat.hom(*endpoints(k)):
            labels[k] = m
            if ok(labels) and solve(i + 1):
                return True
        labels.pop(k, None)
        return False

    for k, v in list(labels.items()):
        cat = H if k[0] == "h" else V
        if v not in cat.mor or cat.mor[v] != endpoints(k):
            out.append(Violation("segment-label", (k, v)))
    if out:
        return out, {}, {}
    if not solve(0):
        out.append(Violation("incompatible-labels"))
        return out, {}, {}
    return out, {k[1]: v for k, v in labels.items() if k[0] == "h"}, {k[1]: v for k, v in labels.items() if k[0] == "v"}


def fold(D: DoubleCategory, a: Arrangement, tree: CutTree) -> Hashable:
    """Compose along a cut tree (any tree, not only the canonical one)."""
    if isinstance(tree, Leaf):
        return a.cells[tree.cell]
    parts = [fold(D, a, ch) for ch in tree.children]
    table = D.vcomp if tree.direction == "H" else D.hcomp
    acc = parts[0]
    for p in parts[1:]:
        try:
            acc = table[(acc, p)]
        except KeyError:
            raise NotCompatible(f"squares {acc!r} and {p!r} are not composable") from None
    return acc


def compose_arrangement(D: DoubleCategory, a: Arrangement, tree: Optional[CutTree] = None,
                        check: bool = True) -> Hashable:
    if not is_allowable(a.subdivision):
        raise NotAllowable("subdivision is not allowable")
    if check:
        bad, _, _ = check_compatible(D, a)
        if bad:
            raise NotCompatible("; ".join(map(str, bad)))
    return fold(D, a, tree if tree is not None else cut_tree(a.subdivision))
