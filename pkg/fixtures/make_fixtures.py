"""Regenerate the JSON fixtures used in the README and the CLI tests."""
import sys
from pathlib import Path

from dblcat.arrange import Arrangement, pinwheel
from dblcat.core import (DoubleFunctor, Functor, discrete_category, embed_h_functor, embed_v_functor,
                         external_product, ordinal, terminal_double)
from dblcat.formats import encode, store
from dblcat.nerve import nerve_cat
from dblcat.zoo import comm_squares, iso_category, noreedy


def collapse(C):
    one = discrete_category([0])
    return Functor(C, one, {a: 0 for a in C.objects}, {f: one.ident[0] for f in C.mor})


def point_into_I_map(C, D):
    """The unique double functor {1}⊠C → D when D is terminal."""
    A = iso_category().full_subcategory([1])
    AC = external_product(A, C)
    x = D.objects[0]
    return DoubleFunctor(AC, D, {o: x for o in AC.objects}, {h: D.hor.ident[x] for h in AC.hor.mor},
                         {v: D.ver.ident[x] for v in AC.ver.mor}, {s: D.idv[D.hor.ident[x]] for s in AC.sq})


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    I = iso_category()
    store(encode(embed_h_functor(collapse(I))), out / "H_I_to_1.dc")
    store(encode(embed_v_functor(collapse(I))), out / "V_I_to_1.dc")
    store(encode(terminal_double()), out / "terminal.dc")
    store(encode(point_into_I_map(ordinal(0), terminal_double())), out / "point_into_I_map.dc")
    store(encode(external_product(ordinal(1), ordinal(1))), out / "square.dc")
    store(encode(noreedy()), out / "noreedy.dc")
    store(encode(comm_squares(ordinal(2))), out / "comm2.dc")
    store(encode(pinwheel()), out / "pinwheel.sub")
    store(encode(Arrangement.grid([[((0, 1), (1, 2), (0, 1), (1, 2)), ((1, 2), (2, 2), (1, 2), (2, 2))],
                                       [((1, 2), (2, 2), (1, 2), (2, 2)), ((2, 2), (2, 2), (2, 2), (2, 2))]])), out / "grid2x2.arr")
    store(encode(nerve_cat(I, 2)), out / "nerve_I.tr")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent)
