"""Skeletons of Mumford curves and the closed-form dimension tables.

A Mumford curve enters only through its skeleton: a connected metric multigraph
whose vertices all have genus 0.  The genus of the curve is the first Betti
number of the skeleton, and every vertex is a smooth point of the cellular
model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable

from .cohomology import (
    AbstractGraph,
    CohomologyTable,
    Region,
    RegionError,
    cohomology_table,
    pd_check,
)
from .errors import InputError


@dataclass(frozen=True)
class SkeletonEdge:
    id: str
    ends: tuple[str, str]
    length: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "ends", tuple(str(v) for v in self.ends))
        object.__setattr__(self, "length", Fraction(self.length))

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class SkeletonGraph:
    vertices: tuple[str, ...]
    edges: tuple[SkeletonEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        edges = tuple(e if isinstance(e, SkeletonEdge) else SkeletonEdge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        vs = set(self.vertices)
        if not vs or len(vs) != len(self.vertices):
            raise InputError("skeleton needs distinct vertex ids")
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate edge ids")
        for e in edges:
            if not set(e.ends) <= vs:
                raise InputError(f"edge {e.id} has an unknown endpoint")
            if e.length <= 0:
                raise InputError(f"edge {e.id} needs positive length")
        valence = {v: 0 for v in vs}
        for e in edges:
            for v in e.ends:
                valence[v] += 1
        if any(n == 0 for n in valence.values()):
            raise InputError("every skeleton vertex needs valence at least 1")
        if not self._connected():
            raise InputError("skeleton is not connected")

    def _connected(self) -> bool:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            parent[find(e.ends[0])] = find(e.ends[1])
        return len({find(v) for v in self.vertices}) == 1

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def edge(self, eid: str) -> SkeletonEdge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def _fresh(self, base: str, taken: set) -> str:
        name, n = base, 1
        while name in taken:
            n += 1
            name = f"{base}#{n}"
        taken.add(name)
        return name

    def subdivide(self, eid: str, ts: Iterable) -> tuple["SkeletonGraph", list[str], list[str]]:
        """Cut edge ``eid`` at the given distances from ``ends[0]``.

        Returns the new skeleton, the new vertex ids (in order along the edge)
        and the piece edge ids; the first piece keeps ``eid``.
        """
        e = self.edge(eid)
        ts = sorted(Fraction(t) for t in ts)
        if not ts or ts[0] <= 0 or ts[-1] >= e.length or len(set(ts)) != len(ts):
            raise InputError("cut points must be distinct and strictly inside the edge")
        taken_v, taken_e = set(self.vertices), {x.id for x in self.edges}
        new_v = [self._fresh(f"{eid}@{t}", taken_v) for t in ts]
        chain = [e.ends[0]] + new_v + [e.ends[1]]
        cuts = [Fraction(0)] + ts + [e.length]
        pieces = []
        for i in range(len(chain) - 1):
            pid = eid if i == 0 else self._fresh(f"{eid}.{i}", taken_e)
            pieces.append(SkeletonEdge(pid, (chain[i], chain[i + 1]), cuts[i + 1] - cuts[i]))
        edges = []
        for x in self.edges:
            edges.extend(pieces if x.id == eid else [x])
        return SkeletonGraph(self.vertices + tuple(new_v), tuple(edges)), new_v, [p.id for p in pieces]

    def to_abstract(self, loop_points: int = 2) -> tuple[AbstractGraph, dict]:
        """Loop-free abstract graph; loops get ``loop_points`` interior vertices.

        The second value maps each skeleton edge id to ``(piece edge ids,
        interior vertex ids)`` in the abstract graph.
        """
        if loop_points < 2:
            raise InputError("loops need at least two subdivision points")
        verts = list(self.vertices)
        edges: dict[Hashable, tuple] = {}
        pieces = {}
        for e in self.edges:
            if not e.is_loop:
                edges[e.id] = e.ends
                pieces[e.id] = ([e.id], [])
                continue
            inner = [("loop", e.id, i) for i in range(1, loop_points + 1)]
            verts.extend(inner)
            chain = [e.ends[0]] + inner + [e.ends[0]]
            ids = [("loop", e.id, "e", i) for i in range(len(chain) - 1)]
            for pid, a, b in zip(ids, chain, chain[1:]):
                edges[pid] = (a, b)
            pieces[e.id] = (ids, inner)
        return AbstractGraph(tuple(verts), edges), pieces


# -- closed-form tables ------------------------------------------------------------


def theorem_table_global(g: int) -> CohomologyTable:
    """``h^{p,q} = 1`` if ``p == q`` else ``g``; compact and ordinary agree."""
    if g < 0:
        raise InputError("genus must be non-negative")
    t = ((1, g), (g, 1))
    return CohomologyTable(t, t)


def theorem_table_simple(k: int) -> CohomologyTable:
    """Tables of a strictly simple open set with ``k`` boundary points."""
    if k < 1:
        raise InputError("a strictly simple set has at least one boundary point")
    return CohomologyTable(((1, 0), (k - 1, 0)), ((0, k - 1), (0, 1)))


# -- strictly simple regions -----------------------------------------------------


@dataclass(frozen=True)
class SimpleRegionSpec:
    """A tree ``core_vertices`` + ``core_edges``; every other half-edge at the core is cut.

    Alternatively ``segment = (edge id, t0, t1)`` selects an open interval
    inside one edge.
    """

    core_vertices: tuple[str, ...] = ()
    core_edges: tuple[str, ...] = ()
    segment: tuple[str, Fraction, Fraction] | None = None


def make_simple_region(S: SkeletonGraph, spec: SimpleRegionSpec) -> tuple[Region, int]:
    """Region on a refinement of ``S`` and its end count ``k``.

    Raises RegionError if the closure of the region contains a cycle.
    """
    if spec.segment is not None:
        eid, t0, t1 = spec.segment
        S2, (c0, c1), pieces = S.subdivide(eid, [t0, t1])
        region = Region(S2, frozenset({c0, c1}), frozenset({pieces[1]}), frozenset({c0, c1}))
        return region, 2

    W = [str(v) for v in spec.core_vertices]
    F = [str(k) for k in spec.core_edges]
    if not W:
        raise RegionError("core needs at least one vertex")
    Wset, Fset = set(W), set(F)
    if not Wset <= set(S.vertices) or len(Wset) != len(W) or len(Fset) != len(F):
        raise RegionError("bad core vertex list")
    parent = {v: v for v in W}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for k in F:
        e = S.edge(k)
        if not set(e.ends) <= Wset:
            raise RegionError(f"core edge {k} leaves the core")
        a, b = find(e.ends[0]), find(e.ends[1])
        if a == b:
            raise RegionError("closure contains a cycle; region is not strictly simple")
        parent[a] = b
    if len({find(v) for v in W}) != 1:
        raise RegionError("core is not connected")

    cur = S
    C_v, C_e, B = set(W), set(F), set()
    for e in S.edges:
        if e.id in Fset:
            continue
        inside = [v in Wset for v in e.ends]
        if not any(inside):
            continue
        if all(inside):
            cur, (c0, c1), pieces = cur.subdivide(e.id, [e.length / 3, 2 * e.length / 3])
            C_v |= {c0, c1}
            C_e |= {pieces[0], pieces[2]}
            B |= {c0, c1}
        elif inside[0]:
            cur, (c,), pieces = cur.subdivide(e.id, [e.length / 2])
            C_v.add(c)
            C_e.add(pieces[0])
            B.add(c)
        else:
            cur, (c,), pieces = cur.subdivide(e.id, [e.length / 2])
            C_v.add(c)
            C_e.add(pieces[1])
            B.add(c)
    if not B:
        raise RegionError("core is the whole skeleton; it is compact, not strictly simple")
    return Region(cur, frozenset(C_v), frozenset(C_e), frozenset(B)), len(B)


def random_simple_spec(S: SkeletonGraph, rng: random.Random, max_size: int = 4) -> SimpleRegionSpec:
    """Random subtree grown from a random vertex (or, sometimes, an edge segment)."""
    if rng.random() < 0.15:
        e = rng.choice(S.edges)
        return SimpleRegionSpec(segment=(e.id, e.length / 3, 2 * e.length / 3))
    start = rng.choice(S.vertices)
    W, F = [start], []
    target = rng.randint(1, max_size)
    edges = list(S.edges)
    while len(W) < target:
        options = [e for e in edges if not e.is_loop and (e.ends[0] in W) != (e.ends[1] in W)]
        if not options:
            break
        e = rng.choice(options)
        F.append(e.id)
        W.append(e.ends[1] if e.ends[0] in W else e.ends[0])
    return SimpleRegionSpec(tuple(W), tuple(F))


def random_skeleton(g: int, rng: random.Random, max_vertices: int = 7) -> SkeletonGraph:
    """Random connected multigraph of genus ``g`` (loops and parallel edges allowed)."""
    if g < 0:
        raise InputError("genus must be non-negative")
    n = rng.randint(2 if g == 0 else 1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    edges = []

    def length():
        return Fraction(rng.randint(1, 6), rng.randint(1, 3))

    for i in range(1, n):
        edges.append(SkeletonEdge(f"e{len(edges)}", (names[rng.randrange(i)], names[i]), length()))
    for _ in range(g):
        a, b = rng.choice(names), rng.choice(names)
        edges.append(SkeletonEdge(f"e{len(edges)}", (a, b), length()))
    rng.shuffle(edges)
    return SkeletonGraph(tuple(names), tuple(edges))


def circle() -> SkeletonGraph:
    return SkeletonGraph(("v",), (SkeletonEdge("e", ("v", "v"), 1),))


def theta() -> SkeletonGraph:
    return SkeletonGraph(("u", "w"), tuple(SkeletonEdge(f"e{i}", ("u", "w"), i + 1) for i in range(3)))


# -- verification -------------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonReport:
    genus: int
    table: CohomologyTable
    global_ok: bool
    simple_checked: int
    simple_failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.global_ok and not self.simple_failures


def verify_skeleton(S: SkeletonGraph, seed: int = 0, regions: int = 10) -> SkeletonReport:
    """Compare cellular tables with the closed forms on ``S`` and on simple regions of it."""
    rng = random.Random(seed)
    g = S.genus
    table = cohomology_table(Region.whole(S))
    global_ok = table == theorem_table_global(g)
    failures = []
    specs = [SimpleRegionSpec((v,)) for v in S.vertices]
    specs += [random_simple_spec(S, rng) for _ in range(regions)]
    checked = 0
    for spec in specs:
        try:
            region, k = make_simple_region(S, spec)
        except RegionError:
            continue
        t = cohomology_table(region)
        checked += 1
        if t != theorem_table_simple(k) or not pd_check(t):
            failures.append(f"{spec}: k={k} got {t}")
    return SkeletonReport(g, table, global_ok, checked, tuple(failures))
