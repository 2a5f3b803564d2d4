"""JSON encodings.  Rationals travel as lowest-terms strings, ``-inf`` as ``"-inf"``.

``encode_*`` return plain JSON values; ``dumps`` gives the byte-stable text
form (sorted keys, two-space indent, trailing newline).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cohomology import AbstractGraph, CohomologyTable, Region
from .curve import Edge, TropicalCurve
from .errors import InputError
from .logvalue import decode_log_value, decode_rational, encode_log_value, encode_rational
from .mumford import SkeletonEdge, SkeletonGraph
from .tropicalize import ModificationMap, PiecewiseAffineFunction
from .valuation import LogDistanceMatrix, require_valid, validate_ultrametric


class SchemaError(InputError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON ({exc})") from None


# -- field helpers ----------------------------------------------------------------


def _get(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    val = obj[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return val


def _list(val, path) -> list:
    if not isinstance(val, list):
        raise SchemaError(path, "expected a list")
    return val


def _log(val, path):
    try:
        return decode_log_value(val)
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from None


def _rat(val, path) -> Fraction:
    try:
        return decode_rational(val)
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from None


def _int(val, path) -> int:
    if not isinstance(val, int) or isinstance(val, bool):
        raise SchemaError(path, "expected an integer")
    return val


def _wrap(fn, path):
    try:
        return fn()
    except SchemaError:
        raise
    except InputError as exc:
        raise SchemaError(path, str(exc)) from None


# -- matrices ----------------------------------------------------------------------


def encode_matrix(m: LogDistanceMatrix) -> dict:
    return {"n": m.n, "labels": list(m.labels),
            "L": [[encode_log_value(x) for x in row] for row in m.L]}


def decode_matrix(obj, validate: bool = True) -> LogDistanceMatrix:
    """With ``validate`` the ultrametric inequality is enforced too."""
    n = _int(_get(obj, "n", "$"), "$.n")
    rows = _list(_get(obj, "L", "$"), "$.L")
    labels = _list(obj.get("labels", []), "$.labels")
    if len(rows) != n:
        raise SchemaError("$.L", f"expected {n} rows")
    L = []
    for i, row in enumerate(rows):
        row = _list(row, f"$.L[{i}]")
        if len(row) != n:
            raise SchemaError(f"$.L[{i}]", f"expected {n} entries")
        L.append(tuple(_log(x, f"$.L[{i}][{j}]") for j, x in enumerate(row)))
    if not all(isinstance(x, str) for x in labels):
        raise SchemaError("$.labels", "labels are strings")
    if labels and len(labels) != n:
        raise SchemaError("$.labels", f"expected {n} labels")
    m = LogDistanceMatrix(tuple(L), tuple(labels))
    _wrap(lambda: (require_valid if validate else validate_ultrametric)(m), "$.L")
    return m


# -- curves --------------------------------------------------------------------------


def encode_curve(X: TropicalCurve) -> dict:
    edges = []
    for e in X.edges:
        d = {"tail": e.tail, "direction": list(e.direction),
             "length": "inf" if e.length is None else encode_rational(e.length),
             "weight": e.weight}
        if e.head is None:
            d["free"] = True
        else:
            d["head"] = e.head
        edges.append(d)
    return {"r": X.r,
            "vertices": [{"id": i, "coords": [encode_log_value(x) for x in p]}
                         for i, p in enumerate(X.vertices)],
            "edges": edges}


def decode_curve(obj) -> TropicalCurve:
    r = _int(_get(obj, "r", "$"), "$.r")
    ids = {}
    verts = []
    for i, v in enumerate(_list(_get(obj, "vertices", "$"), "$.vertices")):
        p = f"$.vertices[{i}]"
        vid = _int(_get(v, "id", p), f"{p}.id")
        if vid in ids:
            raise SchemaError(f"{p}.id", f"duplicate id {vid}")
        ids[vid] = i
        coords = _list(_get(v, "coords", p), f"{p}.coords")
        verts.append(tuple(_log(x, f"{p}.coords[{j}]") for j, x in enumerate(coords)))
    edges = []
    for i, e in enumerate(_list(_get(obj, "edges", "$"), "$.edges")):
        p = f"$.edges[{i}]"
        tail = _int(_get(e, "tail", p), f"{p}.tail")
        if tail not in ids:
            raise SchemaError(f"{p}.tail", f"unknown vertex {tail}")
        if e.get("free") is True:
            if "head" in e:
                raise SchemaError(p, "an edge is either free or has a head")
            head = None
        else:
            head = _int(_get(e, "head", p), f"{p}.head")
            if head not in ids:
                raise SchemaError(f"{p}.head", f"unknown vertex {head}")
            head = ids[head]
        direction = [_int(x, f"{p}.direction[{j}]")
                     for j, x in enumerate(_list(_get(e, "direction", p), f"{p}.direction"))]
        raw = _get(e, "length", p)
        length = None if raw == "inf" else _rat(raw, f"{p}.length")
        if length is not None and length <= 0:
            raise SchemaError(f"{p}.length", "lengths are positive or \"inf\"")
        weight = _int(e.get("weight", 1), f"{p}.weight")
        edges.append(Edge(ids[tail], head, tuple(direction), length, weight))
    return _wrap(lambda: TropicalCurve(r, tuple(verts), tuple(edges)), "$")


# -- regions, tables, skeletons, functions ----------------------------------------------


def encode_region(region: Region) -> dict:
    def key(x):
        return (0, x, "") if isinstance(x, int) else (1, 0, str(x))

    return {"vertices": sorted(region.vertices, key=key),
            "edges": sorted(region.edges, key=key),
            "boundary": sorted(region.boundary, key=key)}


def decode_region(obj, ambient) -> Region:
    fields = {}
    for name in ("vertices", "edges", "boundary"):
        raw = _list(obj.get(name, []) if isinstance(obj, dict) else None, f"$.{name}")
        for j, x in enumerate(raw):
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise SchemaError(f"$.{name}[{j}]", "ids are integers or strings")
        fields[name] = frozenset(raw)
    return _wrap(lambda: Region(ambient, fields["vertices"], fields["edges"], fields["boundary"]), "$")


def encode_table(t: CohomologyTable) -> dict:
    return {"h": [list(row) for row in t.h], "hc": [list(row) for row in t.hc]}


def decode_table(obj) -> CohomologyTable:
    h = _list(_get(obj, "h", "$"), "$.h")
    hc = _list(_get(obj, "hc", "$"), "$.hc")
    return _wrap(lambda: CohomologyTable(tuple(map(tuple, h)), tuple(map(tuple, hc))), "$")


def encode_skeleton(S: SkeletonGraph) -> dict:
    return {"vertices": list(S.vertices),
            "edges": [{"id": e.id, "ends": list(e.ends), "length": encode_rational(e.length)}
                      for e in S.edges]}


def decode_skeleton(obj) -> SkeletonGraph:
    verts = _list(_get(obj, "vertices", "$"), "$.vertices")
    edges = []
    for i, e in enumerate(_list(_get(obj, "edges", "$"), "$.edges")):
        p = f"$.edges[{i}]"
        ends = _list(_get(e, "ends", p), f"{p}.ends")
        if len(ends) != 2:
            raise SchemaError(f"{p}.ends", "an edge has two ends")
        length = _rat(e.get("length", "1"), f"{p}.length")
        edges.append(SkeletonEdge(str(_get(e, "id", p)), (str(ends[0]), str(ends[1])), length))
    return _wrap(lambda: SkeletonGraph(tuple(str(v) for v in verts), tuple(edges)), "$")


def encode_paf(P: PiecewiseAffineFunction) -> dict:
    return {"values": {str(v): encode_log_value(x) for v, x in sorted(P.values.items())},
            "slopes": {str(k): s for k, s in sorted(P.slopes.items())}}


def decode_paf(obj, base: TropicalCurve) -> PiecewiseAffineFunction:
    def keyed(name, conv):
        raw = _get(obj, name, "$", dict)
        out = {}
        for key, val in raw.items():
            try:
                out[int(key)] = conv(val, f"$.{name}.{key}")
            except ValueError:
                raise SchemaError(f"$.{name}.{key}", "keys are integer ids") from None
        return out

    values = keyed("values", _log)
    slopes = keyed("slopes", _int)
    return _wrap(lambda: PiecewiseAffineFunction(base, values, slopes), "$")


def encode_modification(mod: ModificationMap) -> dict:
    return {"source": encode_curve(mod.source), "target": encode_curve(mod.target),
            "added_rays": [{"vertex": v, "edge": k, "weight": w} for v, k, w in mod.added_rays]}


def encode_abstract(G: AbstractGraph) -> dict:
    return {"vertices": list(G.vertices),
            "edges": [{"id": k, "tail": a, "head": b} for k, (a, b) in G.edges.items()]}
