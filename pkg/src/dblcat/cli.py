"""Command line interface: ``dblcat <command> ...``.

Exit codes: 0 when a predicate holds or a construction succeeds, 1 when a
predicate fails, 2 on any error (unreadable input, failed validation,
exceeded budget).  Every report carries the tool version and the budgets.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from .arrange import Arrangement, NotAllowable, NotCompatible, compose_arrangement, is_allowable
from .categorify import categorify_h, fundamental_category, fundamental_double_category_v
from .colim import (UnsupportedInclusion, colimit_cat, colimit_dblcat, filtered_colimit_dblcat, pushout_diagram,
                    pushout_dblcat_formula)
from .construct import Budget, CatCongruence, congruence_closure, free_double_category, quotient_category, \
    quotient_double
from .core import (BudgetExceeded, DoubleCategory, DoubleFunctor, FinCategory, Functor, StructureError,
                   external_product, external_product_functor, hom_double_category, iso_search, ordinal,
                   product_double, transpose, transpose_functor)
from .formats import DocumentError, encode, from_json_id, load, load_value, store, to_json_id
from .model import (Topology, cofibrant_replacement, is_acyclic_fibration, is_cofibrant, is_fibration,
                    is_weak_equivalence, segal_pseudo_comparison)
from .nerve import check_2coskeletal, diag_nerve, double_nerve, horizontal_nerve, vertical_nerve
from .thomason import boundary, csd2, delta, horn, inclusion_pair
from .zoo import iso_category

TRUE, FALSE, ERROR = 0, 1, 2


class Report:
    """Human-readable lines plus a machine-readable block."""

    def __init__(self, command: str, budget: Budget):
        self.command = command
        self.budget = budget
        self.lines: List[str] = []
        self.data: Dict[str, Any] = {}

    def say(self, line: str) -> None:
        self.lines.append(line)

    def as_json(self, status: int) -> Dict[str, Any]:
        return {"tool": "dblcat", "version": __version__, "command": self.command,
                "budget": self.budget.as_dict(), "exit_code": status, **self.data}

    def emit(self, status: int, machine_only: bool, out=None) -> None:
        out = out or sys.stdout
        block = json.dumps(self.as_json(status), sort_keys=True, indent=2, ensure_ascii=False)
        if machine_only:
            print(block, file=out)
            return
        for line in self.lines:
            print(line, file=out)
        print("--- report", file=out)
        print(block, file=out)


def _sizes(x) -> Dict[str, int]:
    if isinstance(x, DoubleCategory):
        return {"objects": len(x.objects), "horizontal": len(x.hor.mor), "vertical": len(x.ver.mor),
                "squares": len(x.sq)}
    if isinstance(x, FinCategory):
        return {"objects": len(x.objects), "morphisms": len(x.mor)}
    return {}


def _output(rep: Report, value, path: Optional[str]) -> None:
    """Write a constructed value to ``path`` or embed it in the report."""
    doc = encode(value)
    rep.data["kind"] = doc.kind
    rep.data["sizes"] = _sizes(value)
    if path:
        store(doc, path)
        rep.data["output"] = path
        rep.say(f"wrote {doc.kind} to {path}")
    else:
        rep.data["document"] = doc.as_json()
    if rep.data["sizes"]:
        rep.say(", ".join(f"{k}: {v}" for k, v in rep.data["sizes"].items()))


def parse_category(spec: str) -> FinCategory:
    """``[n]`` for an ordinal, ``I`` for the free-living isomorphism, otherwise a category file."""
    m = re.fullmatch(r"\s*\[\s*(\d+)\s*\]\s*", spec)
    if m:
        return ordinal(int(m.group(1)))
    if spec.strip() == "I":
        return iso_category()
    return load_value(spec, ("category",))


def parse_inclusion(spec: str):
    s = spec.strip().lower().replace("_", "-")
    if s == "point-into-i":
        return ("point_into_I",)
    m = re.fullmatch(r"horn-?\(?\s*(\d+)\s*,\s*(\d+)\s*\)?", s)
    if m:
        return ("horn", int(m.group(1)), int(m.group(2)))
    raise StructureError(f"unknown inclusion {spec!r}; use point-into-I or horn(m,k)")


def _same_double(D: DoubleCategory, E: DoubleCategory) -> bool:
    return (set(D.objects) == set(E.objects) and D.sq == E.sq and D.hor.mor == E.hor.mor
            and D.ver.mor == E.ver.mor)


# --------------------------------------------------------------------------
# commands; each returns an exit code and fills the report


def cmd_validate(a, rep: Report) -> int:
    doc = load(a.file)
    rep.data["kind"] = doc.kind
    try:
        load_value(a.file)
    except DocumentError as e:
        rep.data["violations"] = [str(v) for v in e.violations] or [str(e)]
        rep.say(f"invalid {doc.kind}: {e}")
        return FALSE
    rep.say(f"valid {doc.kind}")
    return TRUE


def cmd_product(a, rep: Report) -> int:
    x, y = load_value(a.left, ("category", "double_category")), load_value(a.right, ("category", "double_category"))
    if isinstance(x, FinCategory) and isinstance(y, FinCategory):
        rep.say("external product (vertical from the first factor, horizontal from the second)")
        _output(rep, external_product(x, y), a.output)
    elif isinstance(x, DoubleCategory) and isinstance(y, DoubleCategory):
        rep.say("cartesian product of double categories")
        _output(rep, product_double(x, y), a.output)
    else:
        raise StructureError("product needs two categories or two double categories")
    return TRUE


def cmd_transpose(a, rep: Report) -> int:
    x = load_value(a.file, ("double_category", "double_functor"))
    if isinstance(x, DoubleFunctor):
        _output(rep, transpose_functor(x), a.output)
    else:
        _output(rep, transpose(x), a.output)
    return TRUE


def cmd_free(a, rep: Report) -> int:
    S = load_value(a.file, ("scheme",))
    D = free_double_category(S, rep.budget, lazy=False)
    _output(rep, D, a.output)
    return TRUE


def cmd_quotient(a, rep: Report) -> int:
    x = load_value(a.file, ("category", "double_category"))
    pairs = [tuple(from_json_id(v) for v in json.loads(p)) for p in a.relation]
    cong = congruence_closure(pairs, x)
    Q = quotient_category(x, cong) if isinstance(cong, CatCongruence) else quotient_double(x, cong)
    _output(rep, Q, a.output)
    return TRUE


def cmd_colimit(a, rep: Report) -> int:
    d = load_value(a.file, ("diagram",))
    if any(isinstance(v, DoubleCategory) for v in d.nodes.values()):
        P, _ = colimit_dblcat(d, rep.budget)
    else:
        P, _ = colimit_cat(d, rep.budget)
    _output(rep, P, a.output)
    return TRUE


def cmd_filtered(a, rep: Report) -> int:
    d = load_value(a.file, ("diagram",))
    P, _ = filtered_colimit_dblcat(d)
    _output(rep, P, a.output)
    return TRUE


def cmd_pushout(a, rep: Report) -> int:
    kind = parse_inclusion(a.inclusion)
    C = parse_category(a.c)
    D = load_value(a.target, ("double_category",))
    F = load_value(a.functor, ("double_functor",))
    if not _same_double(F.tgt, D):
        raise StructureError("the functor's target differs from the given double category")
    F = DoubleFunctor(F.src, D, F.ob, F.hor, F.ver, F.sq)
    B, A_objects = inclusion_pair(kind)
    expected = len(D.objects) + (len(B.objects) - len(A_objects)) * len(C.objects)
    if a.generic:
        A = B.full_subcategory(A_objects)
        AC = external_product(A, C)
        if set(AC.objects) != set(F.src.objects):
            raise StructureError("the functor must be defined on A⊠C")
        F = DoubleFunctor(AC, D, F.ob, F.hor, F.ver, F.sq)
        inc = Functor(A, B, {x: x for x in A.objects}, {f: f for f in A.mor})
        i = external_product_functor(inc, Functor.identity(C), AC, external_product(B, C))
        P, _ = colimit_dblcat(pushout_diagram(i, F), rep.budget)
        rep.data["method"] = "generic"
    else:
        P, _, _ = pushout_dblcat_formula(kind, C, F)
        rep.data["method"] = "formula"
    rep.data["expected_objects"] = expected
    rep.say(f"pushout along {a.inclusion} ⊠ {a.c} by the {rep.data['method']} engine")
    _output(rep, P, a.output)
    return TRUE


def cmd_nerve(a, rep: Report) -> int:
    D = load_value(a.file, ("double_category",))
    k = a.level
    if a.double:
        X = double_nerve(D, k, k)
        sizes = {f"{p},{q}": len(X.levels[(p, q)]) for p in range(k + 1) for q in range(k + 1)}
        rep.data["double_levels"] = sizes
        rep.say("double nerve level sizes (p,q): " + ", ".join(f"{p}: {n}" for p, n in sizes.items()))
        return TRUE
    if a.vertical:
        X = vertical_nerve(D, k)
    elif a.diag:
        X = diag_nerve(D, k)
    else:
        X = horizontal_nerve(D, k)
    rep.data["level_sizes"] = [len(X.levels[j].objects) for j in range(X.n + 1)]
    rep.say("level sizes: " + ", ".join(map(str, rep.data["level_sizes"])))
    _output(rep, X, a.output)
    return TRUE


def cmd_coskeletal(a, rep: Report) -> int:
    x = load_value(a.file, ("double_category", "truncation"))
    ok = check_2coskeletal(x, a.n)
    rep.data["holds"] = ok
    rep.say(f"2-coskeletal at level {a.n}: {ok}")
    return TRUE if ok else FALSE


def cmd_categorify(a, rep: Report) -> int:
    X = load_value(a.file, ("truncation",))
    if a.sset:
        value = fundamental_category(X, rep.budget)
    elif a.v:
        value = fundamental_double_category_v(X, rep.budget)
    else:
        value = categorify_h(X, rep.budget).double
    _output(rep, value, a.output)
    return TRUE


def cmd_check(a, rep: Report) -> int:
    T = Topology.parse(a.topology)
    rep.data["topology"] = T.value
    if a.cofibrant:
        D = load_value(a.file, ("double_category",))
        res = is_cofibrant(D, T)
        rep.data["predicate"] = "cofibrant"
        rep.data["holds"] = "unknown" if res is None else res
        rep.say(f"cofibrant ({T.value}): {rep.data['holds']}")
        if res is None:
            rep.say("undecided: the vertical category is free on a graph but not a coproduct of ordinals")
            return ERROR
        return TRUE if res else FALSE
    F = load_value(a.file, ("double_functor",))
    if a.we:
        name, res = "weak equivalence", is_weak_equivalence(F, T)
    elif a.fib:
        name, res = "fibration", is_fibration(F, T)
    else:
        name, res = "acyclic fibration", is_acyclic_fibration(F, T)
    rep.data["predicate"] = name
    rep.data["holds"] = res
    rep.say(f"{name} ({T.value}): {res}")
    return TRUE if res else FALSE


def cmd_replace(a, rep: Report) -> int:
    D = load_value(a.file, ("double_category",))
    R = cofibrant_replacement(D, a.topology, a.level, rep.budget)
    rep.data["topology"] = R.topology.value
    rep.data["materialized"] = R.materialized
    rep.data["certified_levels"] = R.certified_levels
    rep.data["notes"] = R.notes
    for n in R.notes:
        rep.say(n)
    if not R.materialized:
        rep.data["presentation"] = {"objects": [to_json_id(x) for x in R.presentation["objects"]],
                                    "edges": [[to_json_id(e), to_json_id(s), to_json_id(t)]
                                              for e, (s, t) in R.presentation["edges"].items()]}
        rep.say("replacement returned as a presentation (free category on a cyclic graph)")
        return TRUE
    _output(rep, R.projection, a.output)
    rep.data["sizes"] = _sizes(R.double)
    return TRUE


def cmd_sd2(a, rep: Report) -> int:
    if a.simplex is not None:
        X = delta(a.simplex)
    elif a.horn is not None:
        X = horn(*a.horn)
    else:
        X = boundary(a.boundary)
    P = csd2(X)
    rep.data["poset_sizes"] = {"objects": len(P.objects), "nonidentity": len(P.mor) - len(P.objects)}
    rep.say(f"cSd² poset: {len(P.objects)} objects, {len(P.mor) - len(P.objects)} nonidentity morphisms")
    value = P if a.box is None else external_product(P, ordinal(a.box))
    _output(rep, value, a.output)
    return TRUE


def cmd_allowable(a, rep: Report) -> int:
    x = load_value(a.file, ("subdivision",))
    sub = x.subdivision if isinstance(x, Arrangement) else x
    ok = is_allowable(sub)
    rep.data["holds"] = ok
    rep.say(f"allowable: {ok}")
    return TRUE if ok else FALSE


def cmd_compose(a, rep: Report) -> int:
    D = load_value(a.double, ("double_category",))
    arr = load_value(a.arrangement, ("subdivision",))
    if not isinstance(arr, Arrangement):
        raise StructureError("the arrangement needs a square label per cell")
    try:
        s = compose_arrangement(D, arr)
    except NotAllowable as e:
        rep.say(str(e))
        rep.data["holds"] = False
        return FALSE
    except NotCompatible as e:
        raise StructureError(f"incompatible arrangement: {e}") from None
    rep.data["square"] = to_json_id(s)
    rep.data["boundary"] = [to_json_id(x) for x in D.sq[s]]
    rep.say(f"composite square: {s!r}")
    return TRUE


def cmd_iso(a, rep: Report) -> int:
    x, y = load_value(a.left), load_value(a.right)
    phi = iso_search(x, y)
    rep.data["holds"] = phi is not None
    rep.say(f"isomorphic: {phi is not None}")
    if phi is not None:
        rep.data["witness"] = encode(phi).payload if isinstance(phi, DoubleFunctor) else \
            {"objects": [[to_json_id(k), to_json_id(v)] for k, v in phi.ob.items()],
             "morphisms": [[to_json_id(k), to_json_id(v)] for k, v in phi.mor.items()]}
        if isinstance(phi, DoubleFunctor):
            for key in ("source", "target"):
                rep.data["witness"].pop(key, None)
    return TRUE if phi is not None else FALSE


def cmd_hom(a, rep: Report) -> int:
    D = load_value(a.left, ("double_category",))
    E = load_value(a.right, ("double_category",))
    H = hom_double_category(D, E, rep.budget.max_squares)
    _output(rep, H, a.output)
    return TRUE


def cmd_segal(a, rep: Report) -> int:
    D = load_value(a.file, ("double_category",))
    ok = segal_pseudo_comparison(D)
    rep.data["holds"] = ok
    rep.say(f"strict composable pairs are essentially surjective onto pseudo ones: {ok}")
    return TRUE if ok else FALSE


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dblcat", description="Finite double categories and their homotopy theory.")
    p.add_argument("--version", action="version", version=f"dblcat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-cells", type=int)
    common.add_argument("--max-path", type=int)
    common.add_argument("--max-squares", type=int)
    common.add_argument("--json", action="store_true", help="print only the machine-readable report")
    common.add_argument("-o", "--output", help="write the constructed document here")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "validate any document").add_argument("file")
    sp = add("product", cmd_product, "external product of categories or product of double categories")
    sp.add_argument("left")
    sp.add_argument("right")
    add("transpose", cmd_transpose, "swap horizontal and vertical structure").add_argument("file")
    add("free", cmd_free, "free double category on a scheme").add_argument("file")
    sp = add("quotient", cmd_quotient, "quotient by the congruence generated by pairs")
    sp.add_argument("file")
    sp.add_argument("--relation", action="append", default=[], help='JSON pair, e.g. \'["a", "b"]\'')
    add("colimit", cmd_colimit, "colimit of a finite diagram").add_argument("file")
    add("filtered", cmd_filtered, "colimit of a filtered diagram").add_argument("file")
    sp = add("pushout", cmd_pushout, "pushout along a generating inclusion ⊠ C")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--formula", dest="inclusion_formula", metavar="INCLUSION")
    mode.add_argument("--generic", dest="inclusion_generic", metavar="INCLUSION")
    sp.add_argument("--c", required=True, help="[n], I, or a category file")
    sp.add_argument("target")
    sp.add_argument("functor")
    sp = add("nerve", cmd_nerve, "nerves of a double category")
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--horizontal", action="store_true")
    kind.add_argument("--vertical", action="store_true")
    kind.add_argument("--double", action="store_true")
    kind.add_argument("--diag", action="store_true")
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("file")
    sp = add("coskeletal", cmd_coskeletal, "check 2-coskeletality at a level")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("file")
    sp = add("categorify", cmd_categorify, "categorify a 2-truncation")
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--h", action="store_true")
    kind.add_argument("--v", action="store_true")
    kind.add_argument("--sset", action="store_true")
    sp.add_argument("file")
    sp = add("check", cmd_check, "model-structure predicates")
    pred = sp.add_mutually_exclusive_group(required=True)
    pred.add_argument("--we", action="store_true")
    pred.add_argument("--fib", action="store_true")
    pred.add_argument("--acyclic-fib", action="store_true")
    pred.add_argument("--cofibrant", action="store_true")
    sp.add_argument("--topology", default=None)
    sp.add_argument("args", nargs="+", help="[topology] file")
    sp = add("replace", cmd_replace, "cofibrant replacement")
    sp.add_argument("--topology", default="tauprime")
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("file")
    sp = add("sd2", cmd_sd2, "cSd² posets of simplices, horns and boundaries")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--simplex", type=int)
    which.add_argument("--horn", type=int, nargs=2, metavar=("M", "K"))
    which.add_argument("--boundary", type=int)
    sp.add_argument("--box", type=int)
    add("allowable", cmd_allowable, "is a subdivision allowable").add_argument("file")
    sp = add("compose-arrangement", cmd_compose, "compose a labelled subdivision")
    sp.add_argument("double")
    sp.add_argument("arrangement")
    sp = add("iso", cmd_iso, "search for an isomorphism")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("hom", cmd_hom, "double category of double functors")
    sp.add_argument("left")
    sp.add_argument("right")
    add("segal-compare", cmd_segal, "compare strict and pseudo composable pairs").add_argument("file")
    return p


def _normalize_args(a) -> None:
    if a.command == "pushout":
        a.generic = a.inclusion_generic is not None
        a.inclusion = a.inclusion_generic or a.inclusion_formula
        if a.inclusion is None:
            raise StructureError("pushout needs --formula INCLUSION or --generic INCLUSION")
    if a.command == "check":
        # ``check --we tau F.dc`` and ``check --we --topology tau F.dc`` are both accepted
        rest = list(a.args)
        if a.topology is None and len(rest) == 2:
            a.topology = rest.pop(0)
        if len(rest) != 1:
            raise StructureError("check takes exactly one input file")
        a.file = rest[0]
        a.topology = a.topology or "tau"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        budget = Budget.from_env(max_cells=a.max_cells, max_path=a.max_path, max_squares=a.max_squares)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR
    rep = Report(a.command, budget)
    try:
        _normalize_args(a)
        status = a.fn(a, rep)
    except BudgetExceeded as e:
        rep.data["error"] = {"type": "budget", "bound": e.bound, "message": str(e)}
        rep.say(f"error: budget {e.bound} exceeded")
        status = ERROR
    except (DocumentError, StructureError, UnsupportedInclusion, OSError) as e:
        rep.data["error"] = {"type": type(e).__name__, "message": str(e)}
        rep.say(f"error: {e}")
        status = ERROR
    try:
        rep.emit(status, a.json)
    except BrokenPipeError:
        sys.stderr.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
