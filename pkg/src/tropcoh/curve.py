"""Embedded weighted tropical curves in ``T^r = [-inf, inf)^r``.

A curve is a finite connected graph of straight cells.  Vertices carry
coordinates in ``T^r``; a vertex with a ``-inf`` coordinate is a *vertex at
infinity* and has exactly one incident edge.  Every edge stores its primitive
integer direction explicitly, oriented tail to head, together with its lattice
length (``None`` for unbounded cells) and a positive integer weight.  Rays that
leave ``T^r`` through a positive direction end in a free end (``head is None``).

Edge kinds, by endpoints:

* finite tail, finite head: ``head = tail + length * direction``;
* finite tail, head at infinity: ``direction <= 0``, the head is ``-inf``
  exactly where the direction is negative;
* finite tail, free end: some direction entry is positive;
* tail at infinity, free end: a full line ``{x_i free}`` parallel to the
  unit vector ``e_i``, where ``i`` is the only ``-inf`` coordinate of the tail.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError
from .linalg import primitive, rank
from .logvalue import NEG_INF, LogValue, as_log_value, is_neg_inf

Point = tuple  # tuple[LogValue, ...]


class CurveError(InputError):
    """Structurally invalid curve data."""


def at_infinity(point: Sequence[LogValue]) -> bool:
    return any(is_neg_inf(x) for x in point)


def _coord_key(point: Sequence[LogValue]):
    return tuple((0, 0) if is_neg_inf(x) else (1, x) for x in point)


def translate(point: Sequence[LogValue], direction: Sequence[int], t: Fraction) -> Point:
    return tuple(x if is_neg_inf(x) else x + t * d for x, d in zip(point, direction))


def _limit_point(point: Point, direction: Sequence[int]) -> Point:
    """End point of the ray ``point + t * direction`` as ``t -> inf`` (needs direction <= 0)."""
    return tuple(NEG_INF if d < 0 else x for x, d in zip(point, direction))


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int | None
    direction: tuple[int, ...]
    length: Fraction | None
    weight: int = 1

    @property
    def free(self) -> bool:
        return self.head is None

    @property
    def bounded(self) -> bool:
        return self.length is not None

    def ends(self) -> tuple[int, ...]:
        return (self.tail,) if self.head is None else (self.tail, self.head)


@dataclass(frozen=True)
class TropicalCurve:
    r: int
    vertices: tuple[Point, ...]
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        verts = tuple(tuple(as_log_value(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        edges = []
        for e in self.edges:
            length = None if e.length is None else Fraction(e.length)
            edges.append(Edge(int(e.tail), None if e.head is None else int(e.head),
                              tuple(int(x) for x in e.direction), length, int(e.weight)))
        object.__setattr__(self, "edges", tuple(edges))
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self) -> None:
        r = self.r
        if r < 1:
            raise CurveError("ambient dimension must be at least 1")
        if not self.vertices:
            raise CurveError("curve needs at least one vertex")
        seen = {}
        for i, v in enumerate(self.vertices):
            if len(v) != r:
                raise CurveError(f"vertex {i} has {len(v)} coordinates, expected {r}")
            if v in seen:
                raise CurveError(f"vertices {seen[v]} and {i} coincide")
            seen[v] = i
        nv = len(self.vertices)
        for k, e in enumerate(self.edges):
            where = f"edge {k}"
            if not 0 <= e.tail < nv or (e.head is not None and not 0 <= e.head < nv):
                raise CurveError(f"{where}: endpoint out of range")
            if e.head == e.tail:
                raise CurveError(f"{where}: loops cannot be embedded")
            if len(e.direction) != r:
                raise CurveError(f"{where}: direction has wrong length")
            prim, content = primitive(e.direction)
            if content != 1:
                raise CurveError(f"{where}: direction {e.direction} is not primitive")
            if e.weight < 1:
                raise CurveError(f"{where}: weight must be a positive integer, got {e.weight}")
            tail = self.vertices[e.tail]
            head = None if e.head is None else self.vertices[e.head]
            if at_infinity(tail):
                inf = [i for i, x in enumerate(tail) if is_neg_inf(x)]
                unit = tuple(1 if i == inf[0] else 0 for i in range(r))
                if head is not None or len(inf) != 1 or e.direction != unit or e.length is not None:
                    raise CurveError(f"{where}: an edge leaving a vertex at infinity must be "
                                     "a free line along the unit vector of its -inf coordinate")
                continue
            if head is None:
                if e.length is not None or max(e.direction) <= 0:
                    raise CurveError(f"{where}: free ends need infinite length and a positive direction entry")
            elif at_infinity(head):
                if e.length is not None:
                    raise CurveError(f"{where}: edges to infinity have infinite length")
                if max(e.direction) > 0 or _limit_point(tail, e.direction) != head:
                    raise CurveError(f"{where}: head at infinity inconsistent with direction")
            else:
                if e.length is None or e.length <= 0:
                    raise CurveError(f"{where}: bounded edge needs positive length")
                if translate(tail, e.direction, e.length) != head:
                    raise CurveError(f"{where}: head != tail + length * direction")
        for v in range(nv):
            if at_infinity(self.vertices[v]) and len(self.incidence[v]) != 1:
                raise CurveError(f"vertex at infinity {v} must have valence 1")
        if not self.is_connected():
            raise CurveError("curve is not connected")

    @cached_property
    def incidence(self) -> dict[int, list[tuple[int, tuple[int, ...]]]]:
        """``v -> [(edge id, outgoing primitive direction at v)]``."""
        inc: dict[int, list] = {v: [] for v in range(len(self.vertices))}
        for k, e in enumerate(self.edges):
            inc[e.tail].append((k, e.direction))
            if e.head is not None:
                inc[e.head].append((k, tuple(-x for x in e.direction)))
        return inc

    def is_connected(self) -> bool:
        adj = defaultdict(set)
        for e in self.edges:
            if e.head is not None:
                adj[e.tail].add(e.head)
                adj[e.head].add(e.tail)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v] - seen:
                seen.add(u)
                stack.append(u)
        return len(seen) == len(self.vertices)

    def is_finite_vertex(self, v: int) -> bool:
        return not at_infinity(self.vertices[v])

    def valence(self, v: int) -> int:
        return len(self.incidence[v])

    def local_dim(self, v: int) -> int:
        if not self.is_finite_vertex(v):
            return 0
        return rank([d for _, d in self.incidence[v]], self.r)

    def point_on_edge(self, k: int, t: Fraction) -> Point:
        e = self.edges[k]
        tail = self.vertices[e.tail]
        if at_infinity(tail):
            raise CurveError("edge has no finite reference point")
        return translate(tail, e.direction, Fraction(t))

    def weights(self) -> list[int]:
        return [e.weight for e in self.edges]


# -- checks ---------------------------------------------------------------------


@dataclass(frozen=True)
class BalancingReport:
    balanced: bool
    defects: dict[int, tuple[int, ...]]

    def __bool__(self) -> bool:
        return self.balanced


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    bad_vertices: tuple[tuple[int, int, int], ...] = ()
    bad_edges: tuple[tuple[int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.smooth


def balancing_defect(X: TropicalCurve, v: int) -> tuple[int, ...]:
    total = [0] * X.r
    for k, d in X.incidence[v]:
        w = X.edges[k].weight
        for i, x in enumerate(d):
            total[i] += w * x
    return tuple(total)


def check_balancing(X: TropicalCurve) -> BalancingReport:
    """Weighted sum of outgoing primitive directions at every finite vertex.

    Vertices at infinity are exempt.
    """
    defects = {}
    for v in range(len(X.vertices)):
        if not X.is_finite_vertex(v):
            continue
        d = balancing_defect(X, v)
        if any(d):
            defects[v] = d
    return BalancingReport(not defects, defects)


def check_smooth(X: TropicalCurve) -> SmoothnessReport:
    """All weights 1 and ``val(v) == dim(v) + 1`` at every vertex."""
    bad_v = []
    for v in range(len(X.vertices)):
        val, dim = X.valence(v), X.local_dim(v)
        if val != dim + 1:
            bad_v.append((v, val, dim))
    bad_e = tuple((k, e.weight) for k, e in enumerate(X.edges) if e.weight != 1)
    return SmoothnessReport(not bad_v and not bad_e, tuple(bad_v), bad_e)


# -- subdivision and canonical form ---------------------------------------------


def _with(X: TropicalCurve, vertices, edges) -> TropicalCurve:
    return TropicalCurve(X.r, tuple(vertices), tuple(edges))


def subdivide_at(X: TropicalCurve, k: int, t) -> TropicalCurve:
    """Split edge ``k`` at parameter ``t`` measured from its tail.

    The tail piece keeps id ``k``; the head piece gets the next free edge id and
    the new vertex the next free vertex id.
    """
    t = Fraction(t)
    e = X.edges[k]
    if at_infinity(X.vertices[e.tail]):
        raise CurveError("cannot parameterize an edge leaving a vertex at infinity; use insert_vertex")
    if t <= 0 or (e.length is not None and t >= e.length):
        raise CurveError(f"subdivision parameter {t} not strictly inside edge {k}")
    p = X.point_on_edge(k, t)
    new_v = len(X.vertices)
    rest = None if e.length is None else e.length - t
    edges = list(X.edges)
    edges[k] = Edge(e.tail, new_v, e.direction, t, e.weight)
    edges.append(Edge(new_v, e.head, e.direction, rest, e.weight))
    return _with(X, X.vertices + (p,), edges)


def locate_point(X: TropicalCurve, z: Sequence[LogValue]):
    """Where ``z`` sits on ``X``: ``("vertex", v)``, ``("edge", k, t)`` or ``None``.

    For full lines leaving a vertex at infinity ``t`` is ``None``.
    """
    z = tuple(as_log_value(x) for x in z)
    if len(z) != X.r:
        raise CurveError("point has wrong dimension")
    for v, p in enumerate(X.vertices):
        if p == z:
            return ("vertex", v)
    for k, e in enumerate(X.edges):
        tail = X.vertices[e.tail]
        if at_infinity(tail):
            i = e.direction.index(1)
            if not is_neg_inf(z[i]) and all(z[j] == tail[j] for j in range(X.r) if j != i):
                return ("edge", k, None)
            continue
        t = None
        ok = True
        for j, d in enumerate(e.direction):
            if d == 0:
                if z[j] != tail[j]:
                    ok = False
                    break
            else:
                if is_neg_inf(z[j]):
                    ok = False
                    break
                tj = (z[j] - tail[j]) / d
                if t is None:
                    t = tj
                elif tj != t:
                    ok = False
                    break
        if not ok or t is None or t <= 0:
            continue
        if e.length is not None and t >= e.length:
            continue
        return ("edge", k, t)
    return None


def insert_vertex(X: TropicalCurve, z: Sequence[LogValue]) -> tuple[TropicalCurve, int]:
    """Make ``z`` a vertex of ``X`` (subdividing an edge if needed)."""
    loc = locate_point(X, z)
    if loc is None:
        raise CurveError(f"point {z} does not lie on the curve")
    if loc[0] == "vertex":
        return X, loc[1]
    _, k, t = loc
    if t is not None:
        return subdivide_at(X, k, t), len(X.vertices)
    e = X.edges[k]
    z = tuple(as_log_value(x) for x in z)
    new_v = len(X.vertices)
    edges = list(X.edges)
    down = tuple(-x for x in e.direction)
    edges[k] = Edge(new_v, e.tail, down, None, e.weight)
    edges.append(Edge(new_v, None, e.direction, None, e.weight))
    return _with(X, X.vertices + (z,), edges), new_v


def _orient(a: int | None, b: int | None, d: tuple[int, ...], length, weight, verts) -> Edge:
    """Edge between endpoints ``a`` and ``b`` (``None`` = free end), ``d`` pointing a -> b."""
    neg = tuple(-x for x in d)
    if a is None:
        a, b, d = b, a, neg
        neg = tuple(-x for x in d)
    if a is None:
        raise CurveError("edge with two free ends")
    if b is None:
        return Edge(a, None, d, None, weight)
    a_inf, b_inf = at_infinity(verts[a]), at_infinity(verts[b])
    if a_inf and b_inf:
        raise CurveError("edge between two vertices at infinity")
    if a_inf or (not b_inf and _coord_key(verts[b]) < _coord_key(verts[a])):
        a, b, d = b, a, neg
    return Edge(a, b, d, length, weight)


def _merge_pass(verts: dict, edges: dict) -> None:
    """Erase removable 2-valent vertices in place."""
    changed = True
    while changed:
        changed = False
        inc = defaultdict(list)
        for k, (a, b, d, _, _) in edges.items():
            inc[a].append((k, d, b))
            if b is not None:
                inc[b].append((k, tuple(-x for x in d), a))
        for v, p in list(verts.items()):
            if at_infinity(p) or len(inc[v]) != 2:
                continue
            (k1, d1, u1), (k2, d2, u2) = inc[v]
            if edges[k1][4] != edges[k2][4] or d1 != tuple(-x for x in d2):
                continue
            if u1 is None and u2 is None:
                continue
            if (u1 is None or u2 is None) and any(
                    u is not None and at_infinity(verts[u]) and sum(map(is_neg_inf, verts[u])) != 1
                    for u in (u1, u2)):
                continue
            l1, l2 = edges[k1][3], edges[k2][3]
            length = None if l1 is None or l2 is None else l1 + l2
            w = edges[k1][4]
            del edges[k1], edges[k2], verts[v]
            edges[k1] = (u1, u2, d2, length, w)
            changed = True
            break


def canonicalize(X: TropicalCurve) -> TropicalCurve:
    """Canonical representative up to weight-preserving subdivision.

    Finite 2-valent vertices between equal-weight edges with opposite outgoing
    directions are erased; vertices are sorted by coordinates (``-inf`` first),
    edges are oriented (finite endpoint first, then lexicographically smaller
    endpoint first) and sorted by ``(tail, head, direction)`` with free ends last.
    """
    verts = dict(enumerate(X.vertices))
    edges = {k: (e.tail, e.head, e.direction, e.length, e.weight) for k, e in enumerate(X.edges)}
    _merge_pass(verts, edges)
    return _assemble(X.r, verts, edges)


def _assemble(r: int, verts: dict, edges: dict) -> TropicalCurve:
    order = sorted(verts, key=lambda v: _coord_key(verts[v]))
    new_id = {v: i for i, v in enumerate(order)}
    new_verts = [verts[v] for v in order]
    out = []
    for a, b, d, length, w in edges.values():
        a2 = None if a is None else new_id[a]
        b2 = None if b is None else new_id[b]
        out.append(_orient(a2, b2, d, length, w, new_verts))
    nv = len(new_verts)
    out.sort(key=lambda e: (e.tail, nv if e.head is None else e.head, e.direction, e.weight))
    return TropicalCurve(r, tuple(new_verts), tuple(out))


def same_curve(X: TropicalCurve, Y: TropicalCurve) -> bool:
    """Equality up to weight-preserving subdivision."""
    return X.r == Y.r and canonicalize(X) == canonicalize(Y)


def project(X: TropicalCurve, keep: Iterable[int]) -> TropicalCurve:
    """Image under the coordinate projection onto ``keep`` (0-based, in order).

    Contracted edges disappear, surviving directions are re-primitivized with
    lengths scaled by the content, and the result is canonicalized.
    """
    keep = list(keep)
    if not keep:
        raise CurveError("keep must be nonempty")
    if len(set(keep)) != len(keep) or not all(0 <= i < X.r for i in keep):
        raise CurveError(f"invalid coordinate subset {keep}")
    key_of: dict[Point, int] = {}
    verts: dict[int, Point] = {}

    def vid(p: Point) -> int:
        if p not in key_of:
            key_of[p] = len(key_of)
            verts[key_of[p]] = p
        return key_of[p]

    proj = [tuple(p[i] for i in keep) for p in X.vertices]
    for p in proj:
        vid(p)
    edges = {}
    for k, e in enumerate(X.edges):
        d, g = primitive([e.direction[i] for i in keep])
        if g == 0:
            continue
        a = vid(proj[e.tail])
        length = None if e.length is None else e.length * g
        if e.head is not None:
            b = vid(proj[e.head])
        elif max(d) > 0:
            b = None
        else:
            # a free ray whose outward coordinates were all dropped now runs to infinity
            b = vid(_limit_point(proj[e.tail], d))
        edges[k] = (a, b, d, length, e.weight)
    used = {v for a, b, *_ in edges.values() for v in (a, b) if v is not None}
    if not edges:
        used = {vid(proj[0])}
    verts = {v: p for v, p in verts.items() if v in used}
    _merge_pass(verts, edges)
    return _assemble(len(keep), verts, edges)
