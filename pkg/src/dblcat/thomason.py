"""Simplex, horn and boundary complexes, their Sd² posets, and generating maps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import (DoubleFunctor, FinCategory, Functor, StructureError, discrete_category, external_product,
                   external_product_functor, ordinal, poset_category)
from .zoo import free_on_edges, iso_category

Face = Tuple[int, ...]
Chain = Tuple[Face, ...]


@dataclass(frozen=True)
class SimplexLikeComplex:
    tag: str  # "delta" | "horn" | "boundary"
    m: int
    k: Optional[int] = None

    def __post_init__(self):
        if self.tag not in ("delta", "horn", "boundary"):
            raise StructureError(f"unknown complex {self.tag!r}")
        if self.m < 0 or (self.tag == "horn" and not (self.k is not None and 0 <= self.k <= self.m)):
            raise StructureError(f"bad indices for {self.tag}({self.m}, {self.k})")

    def faces(self) -> List[Face]:
        """Nondegenerate simplices as sorted vertex tuples, ordered by (dimension, lexicographic)."""
        full = tuple(range(self.m + 1))
        excluded = set()
        if self.tag in ("horn", "boundary"):
            excluded.add(full)
        if self.tag == "horn":
            excluded.add(tuple(v for v in full if v != self.k))
        return [s for r in range(1, self.m + 2) for s in itertools.combinations(full, r) if s not in excluded]


def delta(m: int) -> SimplexLikeComplex:
    return SimplexLikeComplex("delta", m)


def horn(m: int, k: int) -> SimplexLikeComplex:
    return SimplexLikeComplex("horn", m, k)


def boundary(m: int) -> SimplexLikeComplex:
    return SimplexLikeComplex("boundary", m)


def chains(X: SimplexLikeComplex) -> List[Chain]:
    """Strictly increasing chains of faces (the nondegenerate simplices of Sd X)."""
    faces = X.faces()
    sets = {f: frozenset(f) for f in faces}
    out: List[Chain] = []

    def grow(chain):
        out.append(chain)
        last = sets[chain[-1]]
        for f in faces:
            if last < sets[f]:
                grow(chain + (f,))

    for f in faces:
        grow((f,))
    out.sort(key=lambda c: (len(c), c))
    return out


def csd2(X: SimplexLikeComplex) -> FinCategory:
    """cSd²X: chains of faces of X ordered by inclusion of their face sets."""
    objs = chains(X)
    asset = {c: frozenset(c) for c in objs}
    return poset_category(objs, lambda a, b: asset[a] <= asset[b])


def inclusion_pair(kind) -> Tuple[FinCategory, List]:
    """The ambient category B and the object set of the full subcategory A for a supported inclusion.

    ``kind`` is ("horn", m, k) for cSd²Λᵏ[m] ⊂ cSd²Δ[m] or ("point_into_I",) for {1} ⊂ 𝐈.
    """
    if kind[0] == "horn":
        _, m, k = kind
        B = csd2(delta(m))
        A = set(chains(horn(m, k)))
        return B, [b for b in B.objects if b in A]
    if kind[0] == "point_into_I":
        return iso_category(), [1]
    raise StructureError(f"unsupported inclusion {kind!r}")


def _inclusion(A: FinCategory, B: FinCategory) -> Functor:
    return Functor(A, B, {a: a for a in A.objects}, {f: f for f in A.mor})


def _empty() -> FinCategory:
    return FinCategory([], {}, {}, {})


def base_map(family) -> Functor:
    """The map of categories whose external product with [n] is the generating map."""
    name = family[0]
    if name == "thomason_cof":
        m = family[1]
        return _inclusion(csd2(boundary(m)), csd2(delta(m)))
    if name == "thomason_acof":
        _, m, k = family
        return _inclusion(csd2(horn(m, k)), csd2(delta(m)))
    if name == "cat_cof":
        idx = family[1]
        one = ordinal(1)
        if idx == 0:
            return Functor(_empty(), ordinal(0), {}, {})
        if idx == 1:
            d = discrete_category([0, 1])
            return Functor(d, one, {0: 0, 1: 1}, {("1", 0): (0, 0), ("1", 1): (1, 1)})
        if idx == 2:
            par = free_on_edges([0, 1], {"a": (0, 1), "b": (0, 1)})
            return Functor(par, one, {0: 0, 1: 1},
                           {("1", 0): (0, 0), ("1", 1): (1, 1), "a": (0, 1), "b": (0, 1)})
        raise StructureError("cat_cof index must be 0, 1 or 2")
    if name == "cat_acof":
        I = iso_category()
        return _inclusion(I.full_subcategory([1]), I)
    raise StructureError(f"unknown generator family {family!r}")


def generating_map(family, n: int) -> DoubleFunctor:
    """The generating map ``base ⊠ [n]`` as a double functor."""
    F = base_map(family)
    C = ordinal(n)
    return external_product_functor(F, Functor.identity(C), external_product(F.src, C), external_product(F.tgt, C))
