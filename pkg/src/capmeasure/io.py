"""Reading and writing space and map files.

Plain-text space file::

    # comments and blank lines are ignored
    carrier a b
    matrix
    0 2
    3 0

Row ``i`` lists the values of the point filter at the i-th carrier element,
one column per evaluation point.  Instead of ``matrix`` a ``table`` section
may give one line per proper filter, ``core : values`` with the core written
as comma-separated labels (``a,b : 3 2``); the result is a raw table that may
or may not satisfy the axioms.

Plain-text map file::

    map
    a -> x
    b -> x

Files ending in ``.json`` use the same fields as a JSON object:
``{"carrier": [...], "matrix": [[...]]}``, ``{"carrier": [...], "table":
[{"core": [...], "values": [...]}]}`` and ``{"map": {"a": "x"}}``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional, Union

from .capspace import CapStructure, LambdaSpace, RawLambdaTable
from .errors import CarrierMismatch, ParseError
from .extlat import ExtReal, ex
from .filtercalc import Carrier, Map

_TOKEN = re.compile(r"\S+")
PathLike = Union[str, Path]


def _tokens(line: str) -> list:
    """(column, token) pairs, columns 1-based."""
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield no, line


def _value(tok: str, path, line, col) -> ExtReal:
    try:
        return ex(tok)
    except ValueError as exc:
        raise ParseError(str(exc), path, line, col) from None


def _is_json(path: Optional[PathLike]) -> bool:
    return path is not None and str(path).lower().endswith(".json")


# spaces ------------------------------------------------------------------

def parse_space(text: str, path: Optional[PathLike] = None) -> LambdaSpace:
    """Parse the plain-text space format.

    A ``matrix`` section gives a :class:`CapStructure` (which rejects a
    nonzero diagonal with :class:`AxiomViolation`); a ``table`` section
    gives a :class:`RawLambdaTable`.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty space file", path, 1, 1)
    no, line = lines[0]
    toks = _tokens(line)
    if toks[0][1] != "carrier":
        raise ParseError(f"expected 'carrier', found {toks[0][1]!r}", path, no, toks[0][0])
    labels = [t for _, t in toks[1:]]
    if not labels:
        raise ParseError("carrier needs at least one element", path, no, len(line) + 1)
    seen = set()
    for col, t in toks[1:]:
        if t in seen:
            raise ParseError(f"duplicate carrier element {t!r}", path, no, col)
        seen.add(t)
    carrier = Carrier(tuple(labels))
    n = carrier.n
    if len(lines) < 2:
        raise ParseError("expected 'matrix' or 'table' after the carrier line", path, no + 1, 1)
    no, line = lines[1]
    head = _tokens(line)
    kind = head[0][1]
    if kind not in ("matrix", "table") or len(head) > 1:
        raise ParseError(f"expected 'matrix' or 'table', found {line.strip()!r}", path, no, head[0][0])
    body = lines[2:]

    if kind == "matrix":
        if len(body) != n:
            at = body[n] if len(body) > n else (no + 1, "")
            raise ParseError(f"matrix needs {n} rows, found {len(body)}", path, at[0], 1)
        rows = []
        for no, line in body:
            toks = _tokens(line)
            if len(toks) != n:
                raise ParseError(f"row needs {n} entries, found {len(toks)}", path, no,
                                 toks[n][0] if len(toks) > n else len(line) + 1)
            rows.append([_value(t, path, no, col) for col, t in toks])
        return CapStructure(carrier, rows)

    values = {}
    for no, line in body:
        if ":" not in line:
            raise ParseError("table line must look like 'core : values'", path, no, 1)
        left, right = line.split(":", 1)
        offset = len(left) + 1
        core = [c.strip() for c in left.split(",") if c.strip()]
        if not core:
            raise ParseError("empty core; the degenerate filter is fixed at 0", path, no, 1)
        for c in core:
            if c not in carrier:
                raise ParseError(f"unknown element {c!r}", path, no, line.index(c) + 1)
        mask = carrier.mask(core)
        if mask in values:
            raise ParseError(f"duplicate row for {carrier.render(mask)}", path, no, 1)
        toks = [(col + offset, t) for col, t in _tokens(right)]
        if len(toks) != n:
            raise ParseError(f"row needs {n} entries, found {len(toks)}", path, no, offset + 1)
        values[mask] = [_value(t, path, no, col) for col, t in toks]
    return RawLambdaTable(carrier, values)


def _space_from_json(obj, path) -> LambdaSpace:
    if not isinstance(obj, dict) or "carrier" not in obj:
        raise ParseError("expected an object with a 'carrier' field", path)
    carrier = Carrier(tuple(str(x) for x in obj["carrier"]))

    def val(v, where):
        try:
            return ex(str(v))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}", path) from None

    if "matrix" in obj:
        rows = obj["matrix"]
        if len(rows) != carrier.n or any(len(r) != carrier.n for r in rows):
            raise ParseError(f"matrix must be {carrier.n}x{carrier.n}", path)
        return CapStructure(carrier, [[val(v, f"matrix[{i}][{j}]") for j, v in enumerate(r)]
                                      for i, r in enumerate(rows)])
    if "table" in obj:
        values = {}
        for k, row in enumerate(obj["table"]):
            core = [str(c) for c in row.get("core", ())]
            bad = [c for c in core if c not in carrier]
            if not core or bad:
                raise ParseError(f"table[{k}]: bad core {core}", path)
            vec = row.get("values", ())
            if len(vec) != carrier.n:
                raise ParseError(f"table[{k}]: needs {carrier.n} values", path)
            values[carrier.mask(core)] = [val(v, f"table[{k}]") for v in vec]
        return RawLambdaTable(carrier, values)
    raise ParseError("expected a 'matrix' or 'table' field", path)


def _load_json(text: str, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from None


def loads_space(text: str, path: Optional[PathLike] = None, as_json: Optional[bool] = None) -> LambdaSpace:
    if as_json is None:
        as_json = _is_json(path)
    if as_json:
        return _space_from_json(_load_json(text, path), path)
    return parse_space(text, path)


def load_space(path: PathLike) -> LambdaSpace:
    return loads_space(Path(path).read_text(encoding="utf-8"), path)


def format_space(S: LambdaSpace) -> str:
    c = S.carrier
    lines = ["carrier " + " ".join(c.elements)]
    if isinstance(S, CapStructure):
        lines.append("matrix")
        width = max(len(str(v)) for r in S.matrix for v in r)
        lines += [" ".join(str(v).rjust(width) for v in r) for r in S.matrix]
    else:
        lines.append("table")
        for m in sorted(S.values, key=lambda m: (bin(m).count("1"), m)):
            lines.append(",".join(c.labels(m)) + " : " + " ".join(str(v) for v in S.values[m]))
    return "\n".join(lines) + "\n"


def space_to_json(S: LambdaSpace) -> dict:
    c = S.carrier
    if isinstance(S, CapStructure):
        return {"carrier": list(c.elements), "matrix": S.tokens()}
    return {"carrier": list(c.elements),
            "table": [{"core": list(c.labels(m)), "values": [str(v) for v in S.values[m]]}
                      for m in sorted(S.values)]}


# maps --------------------------------------------------------------------

def parse_map(text: str, path: Optional[PathLike] = None) -> dict:
    """Parse the plain-text map format into a label dict (carriers are checked later)."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty map file", path, 1, 1)
    no, line = lines[0]
    head = _tokens(line)
    if head[0][1] != "map" or len(head) > 1:
        raise ParseError(f"expected 'map', found {line.strip()!r}", path, no, head[0][0])
    out: dict = {}
    for no, line in lines[1:]:
        toks = _tokens(line)
        if len(toks) != 3 or toks[1][1] != "->":
            raise ParseError("map line must look like 'x -> y'", path, no, toks[0][0])
        (cx, x), _, (_, y) = toks
        if x in out:
            raise ParseError(f"{x!r} mapped twice", path, no, cx)
        out[x] = y
    return out


def loads_map(text: str, path: Optional[PathLike] = None, as_json: Optional[bool] = None) -> dict:
    if as_json is None:
        as_json = _is_json(path)
    if not as_json:
        return parse_map(text, path)
    obj = _load_json(text, path)
    if not isinstance(obj, dict) or not isinstance(obj.get("map"), dict):
        raise ParseError("expected an object with a 'map' field", path)
    return {str(k): str(v) for k, v in obj["map"].items()}


def load_map(path: PathLike, X: Carrier, Y: Carrier) -> Map:
    mapping = loads_map(Path(path).read_text(encoding="utf-8"), path)
    bad = [x for x in mapping if x not in X] + [y for y in mapping.values() if y not in Y]
    if bad:
        raise CarrierMismatch(f"{path}: labels {bad} are not in the domain/codomain carriers")
    missing = [x for x in X.elements if x not in mapping]
    if missing:
        raise CarrierMismatch(f"{path}: no image given for {missing}")
    return Map.from_dict(X, Y, mapping)


def format_map(f: Map) -> str:
    return "map\n" + "".join(f"{x} -> {y}\n" for x, y in f.as_dict().items())
