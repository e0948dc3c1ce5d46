"""JSON documents for categories, double categories and the other artifacts.

A document is ``{"kind": ..., "version": 1, "payload": {...}}``.  Identifiers
are JSON scalars or arrays; arrays are read back as tuples so that they are
hashable.  Composition tables are lists of ``[f, g, fg]`` triples and
identities are listed explicitly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import jsonschema

from .arrange import Arrangement, Subdivision
from .colim import Diagram
from .core import (DoubleCategory, DoubleFunctor, DoubleScheme, FinCategory, Functor, StructureError, Violation,
                   sortkey)
from .nerve import SimplicialTruncation

FORMAT_VERSION = 1
KINDS = ("category", "double_category", "double_functor", "scheme", "subdivision", "diagram", "truncation")


class DocumentError(StructureError):
    """Unreadable, schema-invalid or structurally invalid document."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 field: Optional[str] = None, violations: Optional[List[Violation]] = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        where += f" in field {field}" if field else ""
        super().__init__(message + where)
        self.line, self.column, self.field = line, column, field
        self.violations = violations or []


@dataclass(eq=False)
class Document:
    kind: str
    payload: Dict[str, Any]
    version: int = FORMAT_VERSION

    def as_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "version": self.version, "payload": self.payload}


# --------------------------------------------------------------------------
# identifiers


def to_json_id(x: Any) -> Any:
    if isinstance(x, tuple):
        return [to_json_id(v) for v in x]
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    if isinstance(x, frozenset):
        return [to_json_id(v) for v in sorted(x, key=sortkey)]
    return repr(x)


def from_json_id(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(from_json_id(v) for v in x)
    return x


def _pairs(m: Dict) -> List[list]:
    return [[to_json_id(k), to_json_id(v)] for k, v in sorted(m.items(), key=lambda kv: sortkey(kv[0]))]


def _unpairs(rows) -> Dict:
    return {from_json_id(k): from_json_id(v) for k, v in rows}


# --------------------------------------------------------------------------
# schemas

_PAIRS = {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}}
_TRIPLES = {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}}
_CATEGORY = {
    "type": "object",
    "required": ["objects", "morphisms", "identities", "composition"],
    "properties": {
        "objects": {"type": "array"},
        "morphisms": _TRIPLES,
        "identities": _PAIRS,
        "composition": _TRIPLES,
    },
}
_DOUBLE = {
    "type": "object",
    "required": ["horizontal", "vertical", "squares", "hcomp", "vcomp", "idv", "idh"],
    "properties": {
        "horizontal": _CATEGORY,
        "vertical": _CATEGORY,
        "squares": {"type": "array", "items": {"type": "array", "minItems": 5, "maxItems": 5}},
        "hcomp": _TRIPLES,
        "vcomp": _TRIPLES,
        "idv": _PAIRS,
        "idh": _PAIRS,
    },
}
_FUNCTOR_MAPS = {"type": "object", "required": ["objects", "morphisms"],
                 "properties": {"objects": _PAIRS, "morphisms": _PAIRS}}
_DOUBLE_MAPS = {"type": "object", "required": ["objects", "horizontal", "vertical", "squares"],
                "properties": {k: _PAIRS for k in ("objects", "horizontal", "vertical", "squares")}}
_DOUBLE_FUNCTOR = dict(_DOUBLE_MAPS, required=_DOUBLE_MAPS["required"] + ["source", "target"],
                       properties=dict(_DOUBLE_MAPS["properties"], source=_DOUBLE, target=_DOUBLE))
_SCHEME = {"type": "object", "required": ["horizontal", "vertical", "squares"],
           "properties": {"horizontal": _CATEGORY, "vertical": _CATEGORY,
                          "squares": _DOUBLE["properties"]["squares"]}}
_CELL = {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4}
_SUBDIVISION = {"type": "object", "required": ["cells"],
                "properties": {"cells": {"type": "array", "items": _CELL, "minItems": 1},
                               "labels": {"type": "array"}}}
_DIAGRAM = {"type": "object", "required": ["index", "node_kind", "nodes", "edges"],
            "properties": {
                "index": _CATEGORY,
                "node_kind": {"enum": ["category", "double_category"]},
                "nodes": {"type": "array", "items": {"type": "object", "required": ["name", "value"]}},
                "edges": {"type": "array", "items": {"type": "object", "required": ["morphism", "map"]}}}}
_LEVEL_MAP = {"type": "object", "required": ["k", "i", "map"],
              "properties": {"k": {"type": "integer"}, "i": {"type": "integer"}, "map": _FUNCTOR_MAPS}}
_TRUNCATION = {"type": "object", "required": ["n", "levels", "faces", "degeneracies"],
               "properties": {"n": {"type": "integer", "minimum": 0},
                              "discrete": {"type": "boolean"},
                              "levels": {"type": "array", "items": _CATEGORY},
                              "faces": {"type": "array", "items": _LEVEL_MAP},
                              "degeneracies": {"type": "array", "items": _LEVEL_MAP}}}

SCHEMAS = {
    "category": _CATEGORY,
    "double_category": _DOUBLE,
    "double_functor": _DOUBLE_FUNCTOR,
    "scheme": _SCHEME,
    "subdivision": _SUBDIVISION,
    "diagram": _DIAGRAM,
    "truncation": _TRUNCATION,
}
_ENVELOPE = {"type": "object", "required": ["kind", "version", "payload"],
             "properties": {"kind": {"enum": list(KINDS)}, "version": {"const": FORMAT_VERSION},
                            "payload": {"type": "object"}}}


# --------------------------------------------------------------------------
# encoders


def _enc_category(C: FinCategory) -> Dict[str, Any]:
    return {
        "objects": [to_json_id(a) for a in C.objects],
        "morphisms": [[to_json_id(f), to_json_id(s), to_json_id(t)] for f, (s, t) in C.mor.items()],
        "identities": [[to_json_id(a), to_json_id(C.ident[a])] for a in C.objects],
        "composition": [[to_json_id(f), to_json_id(g), to_json_id(h)]
                        for (f, g), h in sorted(C.comp.items(), key=lambda kv: sortkey(kv[0]))],
    }


def _enc_squares(sq: Dict) -> List[list]:
    return [[to_json_id(s)] + [to_json_id(x) for x in bd] for s, bd in sq.items()]


def _enc_double(D: DoubleCategory) -> Dict[str, Any]:
    trip = lambda tab: [[to_json_id(a), to_json_id(b), to_json_id(c)]
                        for (a, b), c in sorted(tab.items(), key=lambda kv: sortkey(kv[0]))]
    return {"horizontal": _enc_category(D.hor), "vertical": _enc_category(D.ver), "squares": _enc_squares(D.sq),
            "hcomp": trip(D.hcomp), "vcomp": trip(D.vcomp), "idv": _pairs(D.idv), "idh": _pairs(D.idh)}


def _enc_double_maps(F: DoubleFunctor) -> Dict[str, Any]:
    return {"objects": _pairs(F.ob), "horizontal": _pairs(F.hor), "vertical": _pairs(F.ver), "squares": _pairs(F.sq)}


def _enc_functor_maps(F: Functor) -> Dict[str, Any]:
    return {"objects": _pairs(F.ob), "morphisms": _pairs(F.mor)}


def encode(x: Any) -> Document:
    """Wrap a value in a document of the matching kind."""
    if isinstance(x, FinCategory):
        return Document("category", _enc_category(x))
    if isinstance(x, DoubleCategory):
        return Document("double_category", _enc_double(x))
    if isinstance(x, DoubleFunctor):
        return Document("double_functor", dict(_enc_double_maps(x), source=_enc_double(x.src),
                                                target=_enc_double(x.tgt)))
    if isinstance(x, DoubleScheme):
        return Document("scheme", {"horizontal": _enc_category(x.hor), "vertical": _enc_category(x.ver),
                                   "squares": _enc_squares(x.squares)})
    if isinstance(x, Arrangement):
        cells = x.subdivision.sorted_cells()
        return Document("subdivision", {"cells": [list(c) for c in cells],
                                        "labels": [to_json_id(x.cells[c]) for c in cells]})
    if isinstance(x, Subdivision):
        return Document("subdivision", {"cells": [list(c) for c in x.sorted_cells()]})
    if isinstance(x, Diagram):
        double = any(isinstance(v, DoubleCategory) for v in x.nodes.values())
        enc_node = _enc_double if double else _enc_category
        enc_map = _enc_double_maps if double else _enc_functor_maps
        return Document("diagram", {
            "index": _enc_category(x.index),
            "node_kind": "double_category" if double else "category",
            "nodes": [{"name": to_json_id(i), "value": enc_node(x.nodes[i])} for i in x.index.objects],
            "edges": [{"morphism": to_json_id(u), "map": enc_map(F)}
                      for u, F in sorted(x.edges.items(), key=lambda kv: sortkey(kv[0]))]})
    if isinstance(x, SimplicialTruncation):
        lm = lambda tab: [{"k": k, "i": i, "map": _enc_functor_maps(F)} for (k, i), F in sorted(tab.items())]
        return Document("truncation", {"n": x.n, "discrete": x.discrete,
                                       "levels": [_enc_category(x.levels[k]) for k in range(x.n + 1)],
                                       "faces": lm(x.faces), "degeneracies": lm(x.degens)})
    raise StructureError(f"no document kind for {type(x).__name__}")


# --------------------------------------------------------------------------
# decoders


def _dec_category(p: Dict[str, Any]) -> FinCategory:
    objs = [from_json_id(a) for a in p["objects"]]
    mor = {from_json_id(f): (from_json_id(s), from_json_id(t)) for f, s, t in p["morphisms"]}
    comp = {(from_json_id(f), from_json_id(g)): from_json_id(h) for f, g, h in p["composition"]}
    return FinCategory(objs, mor, _unpairs(p["identities"]), comp)


def _dec_double(p: Dict[str, Any]) -> DoubleCategory:
    H, V = _dec_category(p["horizontal"]), _dec_category(p["vertical"])
    sq = {from_json_id(r[0]): tuple(from_json_id(x) for x in r[1:]) for r in p["squares"]}
    tab = lambda rows: {(from_json_id(a), from_json_id(b)): from_json_id(c) for a, b, c in rows}
    return DoubleCategory(H, V, sq, tab(p["hcomp"]), tab(p["vcomp"]), _unpairs(p["idv"]), _unpairs(p["idh"]))


def _dec_double_maps(p, src: DoubleCategory, tgt: DoubleCategory) -> DoubleFunctor:
    return DoubleFunctor(src, tgt, _unpairs(p["objects"]), _unpairs(p["horizontal"]), _unpairs(p["vertical"]),
                         _unpairs(p["squares"]))


def _dec_functor_maps(p, src: FinCategory, tgt: FinCategory) -> Functor:
    return Functor(src, tgt, _unpairs(p["objects"]), _unpairs(p["morphisms"]))


def decode(doc: Document) -> Any:
    """The value carried by a document (no structural validation)."""
    p, kind = doc.payload, doc.kind
    if kind == "category":
        return _dec_category(p)
    if kind == "double_category":
        return _dec_double(p)
    if kind == "double_functor":
        return _dec_double_maps(p, _dec_double(p["source"]), _dec_double(p["target"]))
    if kind == "scheme":
        sq = {from_json_id(r[0]): tuple(from_json_id(x) for x in r[1:]) for r in p["squares"]}
        return DoubleScheme(_dec_category(p["horizontal"]), _dec_category(p["vertical"]), sq)
    if kind == "subdivision":
        cells = [tuple(c) for c in p["cells"]]
        if "labels" in p:
            if len(p["labels"]) != len(cells):
                raise DocumentError("labels and cells differ in length", field="payload.labels")
            return Arrangement.build(zip(cells, (from_json_id(x) for x in p["labels"])))
        return Subdivision.of(cells)
    if kind == "diagram":
        index = _dec_category(p["index"])
        double = p["node_kind"] == "double_category"
        nodes = {from_json_id(n["name"]): (_dec_double if double else _dec_category)(n["value"]) for n in p["nodes"]}
        edges = {}
        for e in p["edges"]:
            u = from_json_id(e["morphism"])
            if u not in index.mor:
                raise DocumentError(f"edge on unknown index morphism {u!r}", field="payload.edges")
            s, t = index.mor[u]
            dec = _dec_double_maps if double else _dec_functor_maps
            edges[u] = dec(e["map"], nodes[s], nodes[t])
        return Diagram(index, nodes, edges)
    if kind == "truncation":
        n = p["n"]
        if len(p["levels"]) != n + 1:
            raise DocumentError("expected n + 1 levels", field="payload.levels")
        levels = {k: _dec_category(c) for k, c in enumerate(p["levels"])}
        faces = {(f["k"], f["i"]): _dec_functor_maps(f["map"], levels[f["k"]], levels[f["k"] - 1])
                 for f in p["faces"]}
        degens = {(f["k"], f["i"]): _dec_functor_maps(f["map"], levels[f["k"]], levels[f["k"] + 1])
                  for f in p["degeneracies"]}
        return SimplicialTruncation(n, levels, faces, degens, bool(p.get("discrete", False)))
    raise DocumentError(f"unknown kind {kind!r}", field="kind")


# --------------------------------------------------------------------------
# text and files


def parse(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"parse error: {e.msg}", line=e.lineno, column=e.colno) from None
    _check_schema(raw, _ENVELOPE, "")
    _check_schema(raw["payload"], SCHEMAS[raw["kind"]], "payload")
    return Document(raw["kind"], raw["payload"], raw["version"])


def _check_schema(value, schema, prefix: str) -> None:
    err = jsonschema.exceptions.best_match(jsonschema.Draft7Validator(schema).iter_errors(value))
    if err is not None:
        path = ".".join([prefix] * bool(prefix) + [str(p) for p in err.absolute_path]) or "(document)"
        raise DocumentError(f"schema violation: {err.message}", field=path)


def dumps(doc: Document) -> str:
    """Normalized text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc.as_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def value_of(doc: Document, validate: bool = True) -> Any:
    """Decode and, unless disabled, run the structural validators."""
    try:
        x = decode(doc)
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed payload: {e!r}") from None
    if validate:
        bad = (x.subdivision if isinstance(x, Arrangement) else x).validate()
        if bad:
            raise DocumentError("validation failed: " + "; ".join(map(str, bad[:5])), violations=bad)
    return x


def load(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def store(doc: Document, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def load_value(path: str, kinds=None, validate: bool = True) -> Any:
    doc = load(path)
    if kinds is not None and doc.kind not in kinds:
        raise DocumentError(f"expected a {' or '.join(kinds)} document, found {doc.kind}", field="kind")
    return value_of(doc, validate)
