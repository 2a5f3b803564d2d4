"""Dimensions ``h^{p,q}`` and ``h^{p,q}_c`` of open regions of curves and graphs.

Cohomology of the sheaves ``L^p`` (``p = 0, 1``) is computed from cellular
complexes.  Coefficients: ``F^0`` is ``Q`` on every cell; ``F^1`` is ``Q`` on
edges, the dual of the span of incident directions at a finite vertex of an
embedded curve, the zero-sum vectors ``{c in Q^val : sum c = 0}`` at a vertex
of an abstract graph, and ``0`` at a vertex at infinity.  Restriction from a
vertex to an edge evaluates a form on the edge's tail-to-head direction.

With compact support the complex runs over the open cells of ``V``; for
ordinary cohomology every edge reaching a removed boundary point or a free end
is cut short at a trim vertex, leaving a compact core.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable

from .curve import TropicalCurve, at_infinity, check_smooth
from .errors import InputError
from .linalg import independent_rows, rank, solve_coordinates

ORDINARY = "ordinary"
COMPACT = "compact"


class RegionError(InputError):
    pass


# -- abstract graphs ------------------------------------------------------------


@dataclass(frozen=True)
class AbstractGraph:
    """Loop-free multigraph with optional free ends; every vertex treated as smooth.

    ``edges`` maps an edge id to ``(tail, head)``; ``head`` is ``None`` for a
    free end.
    """

    vertices: tuple[Hashable, ...]
    edges: dict[Hashable, tuple[Hashable, Hashable | None]]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        for k, (a, b) in self.edges.items():
            if a not in vs or (b is not None and b not in vs):
                raise InputError(f"edge {k!r} has an unknown endpoint")
            if a == b:
                raise InputError(f"edge {k!r} is a loop; subdivide it first")

    def incident(self, v) -> list[tuple[Hashable, str]]:
        out = []
        for k, (a, b) in self.edges.items():
            if a == v:
                out.append((k, "tail"))
            if b == v:
                out.append((k, "head"))
        return out

    def flipped(self, keys: Iterable) -> "AbstractGraph":
        """Same graph with the given bounded edges reversed."""
        keys = set(keys)
        edges = {k: ((b, a) if k in keys and b is not None else (a, b))
                 for k, (a, b) in self.edges.items()}
        return AbstractGraph(self.vertices, edges)


def abstract_from_curve(X: TropicalCurve) -> AbstractGraph:
    """Forget coordinates; keeps vertex and edge ids and valences."""
    return AbstractGraph(tuple(range(len(X.vertices))),
                         {k: (e.tail, e.head) for k, e in enumerate(X.edges)})


# -- cell data ---------------------------------------------------------------------


@dataclass
class _Cells:
    vertices: list
    edges: dict                     # id -> (tail, head | None)
    dim1: dict                      # vertex -> dim F^1
    rows: dict                      # (edge, "tail"|"head") -> restriction row of F^1
    finite: dict                    # vertex -> not at infinity


def _curve_cells(X: TropicalCurve) -> _Cells:
    dim1, rows, finite = {}, {}, {}
    for v in range(len(X.vertices)):
        finite[v] = X.is_finite_vertex(v)
        inc = X.incidence[v]
        if not finite[v]:
            dim1[v] = 0
            for k, _ in inc:
                rows[(k, "tail" if X.edges[k].tail == v else "head")] = []
            continue
        outgoing = [d for _, d in inc]
        basis = [outgoing[i] for i in independent_rows(outgoing)]
        dim1[v] = len(basis)
        for k, _ in inc:
            e = X.edges[k]
            end = "tail" if e.tail == v else "head"
            rows[(k, end)] = solve_coordinates(basis, e.direction)
    edges = {k: (e.tail, e.head) for k, e in enumerate(X.edges)}
    return _Cells(list(range(len(X.vertices))), edges, dim1, rows, finite)


def _graph_cells(G: AbstractGraph) -> _Cells:
    dim1, rows = {}, {}
    for v in G.vertices:
        inc = G.incident(v)
        n = len(inc)
        dim1[v] = max(n - 1, 0)
        for i, (k, end) in enumerate(inc):
            # outgoing coordinate c_i of a zero-sum vector in the basis e_j - e_last
            c = [Fraction(1) if j == i else Fraction(0) for j in range(n - 1)]
            if i == n - 1:
                c = [Fraction(-1)] * (n - 1)
            sign = 1 if end == "tail" else -1
            rows[(k, end)] = [sign * x for x in c]
    return _Cells(list(G.vertices), dict(G.edges), dim1, rows, {v: True for v in G.vertices})


# -- regions ---------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Open set ``V = C \\ B`` of an ambient curve, abstract graph or skeleton.

    ``vertices`` and ``edges`` form the closed subcomplex ``C``; ``boundary``
    is the set ``B`` of removed vertices.
    """

    ambient: object
    vertices: frozenset
    edges: frozenset
    boundary: frozenset = field(default=frozenset())

    def __post_init__(self):
        for name in ("vertices", "edges", "boundary"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        _check_region(self)

    @classmethod
    def whole(cls, ambient) -> "Region":
        if hasattr(ambient, "to_abstract"):
            return cls(ambient, frozenset(ambient.vertices), frozenset(e.id for e in ambient.edges))
        cells = _ambient_cells(ambient)
        return cls(ambient, frozenset(cells.vertices), frozenset(cells.edges), frozenset())

    @property
    def interior_vertices(self) -> frozenset:
        return self.vertices - self.boundary

    def end_count(self) -> int:
        """Number of ends: boundary points plus free ends inside ``C``."""
        if hasattr(self.ambient, "to_abstract"):
            return len(self.boundary)
        cells = _ambient_cells(self.ambient)
        return len(self.boundary) + sum(1 for k in self.edges if cells.edges[k][1] is None)


_CELL_CACHE: dict[int, tuple[object, _Cells]] = {}


def _ambient_cells(ambient) -> _Cells:
    key = id(ambient)
    hit = _CELL_CACHE.get(key)
    if hit is not None and hit[0] is ambient:
        return hit[1]
    if isinstance(ambient, TropicalCurve):
        cells = _curve_cells(ambient)
    elif isinstance(ambient, AbstractGraph):
        cells = _graph_cells(ambient)
    elif hasattr(ambient, "to_abstract"):
        cells = _graph_cells(ambient.to_abstract()[0])
    else:
        raise InputError(f"unsupported ambient {type(ambient).__name__}")
    if len(_CELL_CACHE) > 512:
        _CELL_CACHE.clear()
    _CELL_CACHE[key] = (ambient, cells)
    return cells


def _check_region(region: Region) -> None:
    amb = region.ambient
    if hasattr(amb, "to_abstract"):
        # skeleton regions are checked on the loop-free refinement
        _check_cells_region(*_skeleton_region(region))
        return
    _check_cells_region(_ambient_cells(amb), region.vertices, region.edges, region.boundary)


def _check_cells_region(cells: _Cells, C_v, C_e, B) -> None:
    unknown_v = set(C_v) - set(cells.vertices)
    unknown_e = set(C_e) - set(cells.edges)
    if unknown_v or unknown_e:
        raise RegionError(f"unknown cells: vertices {sorted(map(str, unknown_v))}, "
                          f"edges {sorted(map(str, unknown_e))}")
    if not set(B) <= set(C_v):
        raise RegionError("boundary vertices must belong to C")
    if not C_v and not C_e:
        raise RegionError("region is empty")
    for k in C_e:
        a, b = cells.edges[k]
        if a not in C_v or (b is not None and b not in C_v):
            raise RegionError(f"C is not closed: edge {k!r} has an endpoint outside C")
    for v in B:
        if not cells.finite[v]:
            raise RegionError(f"boundary vertex {v!r} is at infinity")
    for v in set(C_v) - set(B):
        for k, (a, b) in cells.edges.items():
            if (a == v or b == v) and k not in C_e:
                raise RegionError(f"not open at {v!r}: incident edge {k!r} missing from C")
    if not set(C_v) - set(B) and not C_e:
        raise RegionError("region is empty")


def _skeleton_region(region: Region, loop_points: int = 2):
    G, pieces = region.ambient.to_abstract(loop_points)
    C_v, C_e = set(region.vertices), set()
    for k in region.edges:
        new_edges, new_verts = pieces[k]
        C_e.update(new_edges)
        C_v.update(new_verts)
    return _ambient_cells(G), C_v, C_e, set(region.boundary)


def _region_data(region: Region, loop_points: int = 2):
    if hasattr(region.ambient, "to_abstract"):
        return _skeleton_region(region, loop_points)
    return _ambient_cells(region.ambient), set(region.vertices), set(region.edges), set(region.boundary)


# -- complexes -------------------------------------------------------------------


@dataclass(frozen=True)
class SheafComplex:
    """``d: C^0 -> C^1`` with ``d`` given as a matrix (rows: ``C^1`` basis)."""

    p: int
    support: str
    c0: tuple[tuple[object, int], ...]
    c1: tuple[tuple[object, int], ...]
    d: tuple[tuple[Fraction, ...], ...]

    @property
    def dim0(self) -> int:
        return sum(n for _, n in self.c0)

    @property
    def dim1(self) -> int:
        return sum(n for _, n in self.c1)

    def rank(self) -> int:
        return rank(self.d, self.dim0)

    def kernel_dim(self) -> int:
        return self.dim0 - self.rank()

    def cokernel_dim(self) -> int:
        return self.dim1 - self.rank()


def core_cells(region: Region, trim=Fraction(1, 2), loop_points: int = 2):
    """Vertices and edges of the compact core used for ordinary cohomology.

    Returns ``(vertices, edges)`` with edges as ``(id, tail, head)``; trim
    vertices are tuples ``("trim", edge, end, trim)``.
    """
    cells, C_v, C_e, B = _region_data(region, loop_points)
    verts = sorted(C_v - B, key=repr)
    edges = []
    for k in sorted(C_e, key=repr):
        a, b = cells.edges[k]
        ta = ("trim", k, "tail", trim) if a in B else a
        hb = ("trim", k, "head", trim) if b is None or b in B else b
        for t in (ta, hb):
            if isinstance(t, tuple) and t and t[0] == "trim":
                verts.append(t)
        edges.append((k, ta, hb))
    return verts, edges


def build_complex(region: Region, p: int, support: str = ORDINARY,
                  trim=Fraction(1, 2), loop_points: int = 2) -> SheafComplex:
    """Cellular complex computing ``H^*(V, L^p)`` or ``H^*_c(V, L^p)``.

    ``trim`` is the cut parameter of the trim vertices (ordinary support only);
    it labels cells and does not affect the result.
    """
    if p not in (0, 1):
        raise InputError("p must be 0 or 1")
    if support not in (ORDINARY, COMPACT):
        raise InputError(f"unknown support {support!r}")
    cells, C_v, C_e, B = _region_data(region, loop_points)

    def vdim(v) -> int:
        if isinstance(v, tuple) and v and v[0] == "trim":
            return 1
        return 1 if p == 0 else cells.dim1[v]

    def restriction(v, k, end) -> list:
        if isinstance(v, tuple) and v and v[0] == "trim":
            return [Fraction(1)]
        return [Fraction(1)] if p == 0 else list(cells.rows[(k, end)])

    if support == COMPACT:
        c0 = [v for v in sorted(C_v - B, key=repr)]
        ends = []
        for k in sorted(C_e, key=repr):
            a, b = cells.edges[k]
            ends.append((k, a if a not in B else None, b if b is not None and b not in B else None))
    else:
        c0, core = core_cells(region, trim, loop_points)
        ends = core

    offset, col = {}, 0
    for v in c0:
        offset[v] = col
        col += vdim(v)
    rows = []
    for k, a, b in ends:
        row = [Fraction(0)] * col
        if b is not None:
            for i, x in enumerate(restriction(b, k, "head")):
                row[offset[b] + i] += x
        if a is not None:
            for i, x in enumerate(restriction(a, k, "tail")):
                row[offset[a] + i] -= x
        rows.append(tuple(row))
    return SheafComplex(p, support, tuple((v, vdim(v)) for v in c0),
                        tuple((k, 1) for k, _, _ in ends), tuple(rows))


@dataclass(frozen=True)
class CohomologyTable:
    """``h[p][q]`` and ``hc[p][q]`` for ``p, q in {0, 1}``."""

    h: tuple[tuple[int, int], tuple[int, int]]
    hc: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        for name in ("h", "hc"):
            t = tuple(tuple(int(x) for x in row) for row in getattr(self, name))
            if len(t) != 2 or any(len(row) != 2 for row in t) or any(x < 0 for row in t for x in row):
                raise InputError(f"{name} must be a 2x2 table of non-negative integers")
            object.__setattr__(self, name, t)


def cohomology_table(region: Region, trim=Fraction(1, 2), loop_points: int = 2) -> CohomologyTable:
    h, hc = [[0, 0], [0, 0]], [[0, 0], [0, 0]]
    for p in (0, 1):
        cx = build_complex(region, p, ORDINARY, trim, loop_points)
        h[p][0], h[p][1] = cx.kernel_dim(), cx.cokernel_dim()
        cx = build_complex(region, p, COMPACT, trim, loop_points)
        hc[p][0], hc[p][1] = cx.kernel_dim(), cx.cokernel_dim()
    return CohomologyTable(tuple(map(tuple, h)), tuple(map(tuple, hc)))


@dataclass(frozen=True)
class PDResult:
    ok: bool
    failures: tuple[tuple[int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def pd_check(t: CohomologyTable) -> PDResult:
    """``h^{p,q} == h_c^{1-p,1-q}`` for all four ``(p, q)``."""
    bad = tuple((p, q) for p in (0, 1) for q in (0, 1) if t.h[p][q] != t.hc[1 - p][1 - q])
    return PDResult(not bad, bad)


def euler_check(region: Region) -> bool:
    t = cohomology_table(region)
    verts, edges = core_cells(region)
    return t.h[0][0] - t.h[0][1] == len(verts) - len(edges)


def in_validated_envelope(region: Region) -> bool:
    """False for regions of non-smooth embedded curves, where the cellular model is unverified."""
    amb = region.ambient
    return not isinstance(amb, TropicalCurve) or check_smooth(amb).smooth


# -- region constructions ----------------------------------------------------------


def preimage_region(mod, region: Region) -> Region:
    """``delta^{-1}(V)`` on the source of a ModificationMap.

    Lifted cells keep their ids; a downward ray lies over its foot, so it is
    included exactly when the foot is an interior vertex of the region.
    """
    if region.ambient is not mod.target and region.ambient != mod.target:
        raise RegionError("region does not live on the modification target")
    verts, edges = set(region.vertices), set(region.edges)
    for v, k, _ in mod.added_rays:
        if v in region.vertices and v not in region.boundary:
            edges.add(k)
            verts.add(mod.source.edges[k].head)
    return Region(mod.source, frozenset(verts), frozenset(edges), region.boundary)


def refine_region(region: Region, subdivided: TropicalCurve, k: int) -> Region:
    """Region on ``subdivide_at(region.ambient, k, t)`` covering the same open set."""
    old = region.ambient
    new_v, new_e = len(old.vertices), len(old.edges)
    if k in region.edges:
        return Region(subdivided, region.vertices | {new_v}, region.edges | {new_e}, region.boundary)
    return Region(subdivided, region.vertices, region.edges, region.boundary)


def random_region(ambient, rng: random.Random, open_edge_prob: float = 0.2) -> Region:
    """Random open region: a random set of interior vertices with their stars.

    Boundary points are the far ends of star edges; some edges away from the
    chosen vertices are added as open intervals.
    """
    if hasattr(ambient, "to_abstract"):
        ambient = ambient.to_abstract()[0]
    cells = _ambient_cells(ambient)
    verts = list(cells.vertices)
    while True:
        W = {v for v in verts if rng.random() < 0.5}
        if not W:
            W = {rng.choice(verts)}
        grown = True
        while grown:
            grown = False
            for k, (a, b) in cells.edges.items():
                for u, w in ((a, b), (b, a)):
                    if u in W and w is not None and w not in W and not cells.finite[w]:
                        W.add(w)
                        grown = True
        C_e = {k for k, (a, b) in cells.edges.items() if a in W or b in W}
        for k, (a, b) in cells.edges.items():
            if k in C_e or not cells.finite[a] or (b is not None and not cells.finite[b]):
                continue
            if rng.random() < open_edge_prob:
                C_e.add(k)
        C_v = set(W)
        for k in C_e:
            a, b = cells.edges[k]
            C_v.add(a)
            if b is not None:
                C_v.add(b)
        B = C_v - W
        try:
            return Region(ambient, frozenset(C_v), frozenset(C_e), frozenset(B))
        except RegionError:
            continue


def simple_curve_region(X: TropicalCurve, core_vertices: Iterable[int],
                        core_edges: Iterable[int]) -> tuple[Region, int]:
    """Region retracting onto a subtree of ``X``; every other half-edge at the core is cut.

    ``core_edges`` may contain free ends (each counts as an end) and edges to
    vertices at infinity.  Cuts happen at the midpoint of bounded edges and at
    parameter 1 on unbounded ones, on a subdivided copy of ``X``.  Returns the
    region and its end count.
    """
    from .curve import subdivide_at

    W, F = set(core_vertices), set(core_edges)
    if not W:
        raise RegionError("core needs at least one vertex")
    parent = {v: v for v in W}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for k in F:
        e = X.edges[k]
        if e.tail not in W or (e.head is not None and e.head not in W):
            raise RegionError(f"core edge {k} leaves the core")
        if e.head is None:
            continue
        a, b = find(e.tail), find(e.head)
        if a == b:
            raise RegionError("closure contains a cycle")
        parent[a] = b
    if len({find(v) for v in W}) != 1:
        raise RegionError("core is not connected")
    for v in W:
        if not X.is_finite_vertex(v) and not all(k in F for k, _ in X.incidence[v]):
            raise RegionError(f"the edge at infinity vertex {v} must be in the core")

    C_v, C_e, B = set(W), set(F), set()
    cur = X
    for k, e in enumerate(X.edges):
        if k in F:
            continue
        ends = [v in W for v in e.ends()]
        if not any(ends):
            continue
        if e.head is None or (e.head is not None and not X.is_finite_vertex(e.head)):
            cur = subdivide_at(cur, k, 1)
            c = len(cur.vertices) - 1
            C_e.add(k)
        elif all(ends):
            cur = subdivide_at(cur, k, e.length * 2 / 3)
            c2, k2 = len(cur.vertices) - 1, len(cur.edges) - 1
            cur = subdivide_at(cur, k, e.length / 3)
            c = len(cur.vertices) - 1
            C_v.add(c2)
            C_e |= {k, k2}
            B.add(c2)
        elif ends[0]:
            cur = subdivide_at(cur, k, e.length / 2)
            c = len(cur.vertices) - 1
            C_e.add(k)
        else:
            cur = subdivide_at(cur, k, e.length / 2)
            c = len(cur.vertices) - 1
            C_e.add(len(cur.edges) - 1)
        C_v.add(c)
        B.add(c)
    region = Region(cur, frozenset(C_v), frozenset(C_e), frozenset(B))
    return region, region.end_count()


def random_simple_curve_region(X: TropicalCurve, rng: random.Random, max_size: int = 4):
    """Random subtree core grown from a finite vertex; see ``simple_curve_region``."""
    finite = [v for v in range(len(X.vertices)) if X.is_finite_vertex(v)]
    start = rng.choice(finite)
    W, F = {start}, set()
    target = rng.randint(1, max_size)
    while True:
        options = []
        for k, e in enumerate(X.edges):
            if k in F:
                continue
            if e.head is None and e.tail in W:
                options.append(k)
            elif e.head is not None and (e.tail in W) != (e.head in W):
                options.append(k)
        if not options or len(W) + len(F) >= target + 1:
            break
        k = rng.choice(options)
        e = X.edges[k]
        F.add(k)
        if e.head is not None:
            W.add(e.head if e.tail in W else e.tail)
    # a vertex at infinity in the core forces nothing else; its edge is already in F
    return simple_curve_region(X, W, F)
