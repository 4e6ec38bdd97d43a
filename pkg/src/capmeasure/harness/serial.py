"""JSON-safe encoding of instances and witnesses, and its inverse.

Objects are encoded as single-key tagged dicts (``{"space": ...}``,
``{"ext": "1/2"}``) so a witness can be written out and later rebuilt
exactly.  Plain dicts, lists and scalars pass through.
"""

from __future__ import annotations

import json

from ..capspace import CapStructure, RawLambdaTable
from ..extlat import ExtReal
from ..filtercalc import BUILTIN_CLASSES, Carrier, Filter, FilterClass, Map, Relation, product_carrier

TAGS = ("ext", "carrier", "space", "table", "filter", "map", "relation", "class")


def _carrier(c: Carrier) -> dict:
    if c.factors:
        return {"factors": [_carrier(f) for f in c.factors]}
    return {"elements": list(c.elements)}


def _uncarrier(d: dict) -> Carrier:
    if "factors" in d:
        return product_carrier(*(_uncarrier(f) for f in d["factors"]))
    return Carrier(tuple(d["elements"]))


def to_jsonable(obj):
    if isinstance(obj, ExtReal):
        return {"ext": str(obj)}
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Carrier):
        return {"carrier": _carrier(obj)}
    if isinstance(obj, CapStructure):
        return {"space": {"carrier": _carrier(obj.carrier), "matrix": obj.tokens()}}
    if isinstance(obj, RawLambdaTable):
        rows = [[m, [str(v) for v in obj.values[m]]] for m in sorted(obj.values)]
        return {"table": {"carrier": _carrier(obj.carrier), "rows": rows}}
    if isinstance(obj, Filter):
        return {"filter": {"carrier": _carrier(obj.carrier), "core": list(obj.carrier.labels(obj.mask))}}
    if isinstance(obj, Relation):
        tag = "map" if isinstance(obj, Map) else "relation"
        pairs = sorted([list(p) for p in obj.graph],
                       key=lambda p: (obj.domain.index(p[0]), obj.codomain.index(p[1])))
        return {tag: {"domain": _carrier(obj.domain), "codomain": _carrier(obj.codomain), "pairs": pairs}}
    if isinstance(obj, FilterClass):
        return {"class": obj.name}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (frozenset, set)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_jsonable(obj):
    if isinstance(obj, list):
        return [from_jsonable(v) for v in obj]
    if not isinstance(obj, dict):
        return obj
    if len(obj) == 1:
        (tag, body), = obj.items()
        if tag == "ext":
            return ExtReal(body)
        if tag == "carrier":
            return _uncarrier(body)
        if tag == "space":
            return CapStructure(_uncarrier(body["carrier"]), body["matrix"])
        if tag == "table":
            return RawLambdaTable(_uncarrier(body["carrier"]), {m: vec for m, vec in body["rows"]})
        if tag == "filter":
            c = _uncarrier(body["carrier"])
            return Filter(c, c.mask(body["core"]))
        if tag in ("map", "relation"):
            cls = Map if tag == "map" else Relation
            graph = frozenset(tuple(p) for p in body["pairs"])
            return cls(_uncarrier(body["domain"]), _uncarrier(body["codomain"]), graph)
        if tag == "class":
            return BUILTIN_CLASSES[body]
    return {k: from_jsonable(v) for k, v in obj.items()}


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, no trailing whitespace."""
    return json.dumps(to_jsonable(obj), sort_keys=True, ensure_ascii=False, separators=(",", ": "))
