"""Tropicalizations of linear embeddings ``x -> (x - a_1, ..., x - a_r)``.

Two independent constructions are provided.  ``tropicalize_direct`` writes
down the tree of discs of the configuration; ``tropicalize_incremental`` starts
from ``T`` and adds one point at a time by a tropical modification along the
iterated-maximum function.  Their agreement is the central cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import (
    CurveError,
    Edge,
    TropicalCurve,
    at_infinity,
    balancing_defect,
    canonicalize,
    check_balancing,
    insert_vertex,
    locate_point,
    project,
    same_curve,
    subdivide_at,
    translate,
)
from .errors import InputError, InvariantViolation
from .linalg import primitive
from .logvalue import NEG_INF, LogValue, as_log_value, is_neg_inf
from .valuation import LogDistanceMatrix, require_valid

# -- the tree of discs ----------------------------------------------------------


def _path_point(L, i: int, s: Fraction) -> tuple:
    """Image of the closed disc of log-radius ``s`` around ``a_i``."""
    return tuple(s if k == i else max(L[i][k], s) for k in range(len(L)))


def _leaf(L, i: int) -> tuple:
    return tuple(NEG_INF if k == i else L[i][k] for k in range(len(L)))


def tropicalize_direct(m: LogDistanceMatrix) -> TropicalCurve:
    """Tree-of-discs construction of ``Trop(A^1)`` for the configuration ``m``.

    The path of ``a_i`` (discs ``D(a_i, e^s)``, ``s`` from ``-inf`` to ``inf``)
    breaks exactly at the radii ``L[i][k]``; between consecutive break radii
    the coordinates of points inside the disc grow with slope 1 and the others
    stay put.  All paths end in the common ray ``(1, ..., 1)``.
    """
    require_valid(m)
    L, r = m.L, m.n
    if r == 1:
        return TropicalCurve(1, ((NEG_INF,),), (Edge(0, None, (1,), None),))
    verts: dict[tuple, int] = {}
    edges: dict[tuple, Edge] = {}

    def vid(p):
        return verts.setdefault(p, len(verts))

    for i in range(r):
        radii = sorted({L[i][k] for k in range(r) if k != i})
        low = vid(_path_point(L, i, radii[0]))
        leaf = vid(_leaf(L, i))
        down = tuple(-1 if k == i else 0 for k in range(r))
        edges[(low, leaf)] = Edge(low, leaf, down, None)
        for s0, s1 in zip(radii, radii[1:]):
            a = vid(_path_point(L, i, s0))
            b = vid(_path_point(L, i, s1))
            d = tuple(1 if k == i or L[i][k] <= s0 else 0 for k in range(r))
            edges[(a, b)] = Edge(a, b, d, s1 - s0)
        top = vid(_path_point(L, i, radii[-1]))
        edges[(top, None)] = Edge(top, None, (1,) * r, None)
    points = sorted(verts, key=verts.get)
    return canonicalize(TropicalCurve(r, tuple(points), tuple(edges.values())))


# -- the iterated maximum ------------------------------------------------------


def p_value(b_column: Sequence[LogValue], z: Sequence[LogValue]) -> LogValue:
    """``max(z_i, log|b - a_i|)`` for a minimal coordinate ``z_i``.

    Agreement over all minimizing ``i``, and with ``max(z_j, log|b - a_j|)``
    for every ``j`` where that maximum is attained uniquely, is asserted.
    """
    z = tuple(as_log_value(x) for x in z)
    beta = tuple(as_log_value(x) for x in b_column)
    if len(z) != len(beta):
        raise InputError("point and b-column have different lengths")
    zmin = min(z)
    candidates = {max(z[i], beta[i]) for i in range(len(z)) if z[i] == zmin}
    if len(candidates) != 1:
        raise InvariantViolation(f"P not well defined at {z}: {candidates}")
    value = candidates.pop()
    for j in range(len(z)):
        if z[j] != beta[j] and max(z[j], beta[j]) != value:
            raise InvariantViolation(f"unique-maximum formula disagrees at {z}, coordinate {j}")
    return value


def curve_matrix(X: TropicalCurve) -> LogDistanceMatrix | None:
    """Recover ``L`` from the leaves of a tropicalized line, if ``X`` is one.

    The leaf of ``a_i`` is the vertex whose only ``-inf`` coordinate is ``i``;
    its other coordinates are ``L[i][k]``.
    """
    leaves = {}
    for p in X.vertices:
        inf = [i for i, x in enumerate(p) if is_neg_inf(x)]
        if len(inf) == 1:
            leaves[inf[0]] = p
    if sorted(leaves) != list(range(X.r)):
        return None
    return LogDistanceMatrix(tuple(leaves[i] for i in range(X.r)))


def eval_P(X: TropicalCurve, b_column: Sequence[LogValue], z: Sequence[LogValue],
           m: LogDistanceMatrix | None = None) -> LogValue:
    """Value of the iterated-maximum function of a new point ``b`` at ``z`` on ``X``.

    ``b_column[i] = log|b - a_i|`` must extend the configuration's matrix
    ultrametrically; the matrix is read off ``X``'s leaves unless given.
    """
    b = tuple(as_log_value(x) for x in b_column)
    if len(b) != X.r or any(is_neg_inf(x) for x in b):
        raise InputError("b-column must have one finite entry per coordinate")
    if m is None:
        m = curve_matrix(X)
    if m is not None:
        require_valid(m.extend(b))
    if locate_point(X, z) is None:
        raise InputError(f"point {tuple(z)} is not on the curve")
    return p_value(b, z)


# -- piecewise affine functions and modification ---------------------------------


@dataclass(frozen=True)
class PiecewiseAffineFunction:
    """Continuous function on ``base`` affine with integer slope on every edge.

    ``values`` holds the value at every finite vertex (values at vertices at
    infinity may be given and are otherwise derived); ``slopes[k]`` is the
    slope along edge ``k`` per unit of its tail-to-head primitive direction.
    """

    base: TropicalCurve
    values: dict[int, LogValue]
    slopes: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", {int(v): as_log_value(x) for v, x in self.values.items()})
        object.__setattr__(self, "slopes", {int(k): int(s) for k, s in self.slopes.items()})
        X = self.base
        for k in range(len(X.edges)):
            if k not in self.slopes:
                raise InputError(f"missing slope for edge {k}")
        for v in range(len(X.vertices)):
            if X.is_finite_vertex(v) and (v not in self.values or is_neg_inf(self.values[v])):
                raise InputError(f"missing finite value at vertex {v}")
        for k, e in enumerate(X.edges):
            s = self.slopes[k]
            if e.head is not None and X.is_finite_vertex(e.tail) and X.is_finite_vertex(e.head):
                if self.values[e.head] - self.values[e.tail] != s * e.length:
                    raise InputError(f"edge {k}: values and slope disagree")
        for v in range(len(X.vertices)):
            if not X.is_finite_vertex(v):
                self.value(v)

    def value(self, v: int) -> LogValue:
        X = self.base
        if X.is_finite_vertex(v):
            return self.values[v]
        ((k, _),) = X.incidence[v]
        e = X.edges[k]
        s = self.slopes[k]
        given = self.values.get(v)
        if e.tail == v:
            # full line leaving this vertex: P is constant along it
            if s != 0:
                raise InputError(f"edge {k}: nonzero slope on a line through infinity; subdivide first")
            if given is None or is_neg_inf(given):
                raise InputError(f"vertex {v}: value needed on a line through infinity")
            return given
        if s > 0:
            raise InputError(f"edge {k}: P would tend to +inf towards vertex {v}")
        derived = self.values[e.tail] if s == 0 else NEG_INF
        if given is not None and given != derived:
            raise InputError(f"vertex {v}: given value {given} contradicts slope on edge {k}")
        return derived

    def at(self, k: int, t) -> LogValue:
        e = self.base.edges[k]
        return self.values[e.tail] + self.slopes[k] * Fraction(t)

    def subdivide(self, k: int, t) -> "PiecewiseAffineFunction":
        """Same function on ``subdivide_at(base, k, t)``."""
        X2 = subdivide_at(self.base, k, t)
        values = dict(self.values)
        values[len(self.base.vertices)] = self.at(k, t)
        slopes = dict(self.slopes)
        slopes[len(self.base.edges)] = self.slopes[k]
        return PiecewiseAffineFunction(X2, values, slopes)


@dataclass(frozen=True)
class ModificationMap:
    """``delta: source -> target`` forgetting the last coordinate.

    Source vertex ``v`` and edge ``k`` lift target vertex ``v`` and edge ``k``
    for ids below the target's counts; the added downward rays and their
    vertices at infinity come after.  ``added_rays`` lists
    ``(source vertex, ray edge, weight)``.
    """

    source: TropicalCurve
    target: TropicalCurve
    added_rays: tuple[tuple[int, int, int], ...]

    def projects_onto_target(self) -> bool:
        return project(self.source, range(self.target.r)) == canonicalize(self.target)


def modify(P: PiecewiseAffineFunction) -> ModificationMap:
    """Graph of ``P`` completed by downward rays to a balanced curve in ``T^(r+1)``."""
    X = P.base
    r = X.r
    verts = [tuple(X.vertices[v]) + (P.value(v),) for v in range(len(X.vertices))]
    edges = []
    for k, e in enumerate(X.edges):
        raw = tuple(e.direction) + (P.slopes[k],)
        d, g = primitive(raw)
        length = None if e.length is None else e.length * g
        edges.append(Edge(e.tail, e.head, d, length, e.weight))
    lifted = TropicalCurve(r + 1, tuple(verts), tuple(edges))
    rays = []
    for v in range(len(X.vertices)):
        if not X.is_finite_vertex(v):
            continue
        defect = balancing_defect(lifted, v)
        if any(defect[:r]):
            raise InputError(f"vertex {v}: defect {defect} is not vertical; "
                             "the base curve is unbalanced there")
        c = defect[r]
        if c < 0:
            raise InputError(f"vertex {v}: rebalancing needs an upward ray of weight {-c}")
        if c > 0:
            foot = verts[v][:r] + (NEG_INF,)
            verts.append(foot)
            edges.append(Edge(v, len(verts) - 1, (0,) * r + (-1,), None, c))
            rays.append((v, len(edges) - 1, c))
    source = TropicalCurve(r + 1, tuple(verts), tuple(edges))
    report = check_balancing(source)
    if not report:
        raise InvariantViolation(f"modification is unbalanced at {report.defects}")
    return ModificationMap(source, X, tuple(rays))


def project_transition(X: TropicalCurve, keep: Sequence[int]) -> TropicalCurve:
    """Transition map to the sub-embedding on coordinates ``keep`` (0-based)."""
    if not list(keep):
        raise InputError("keep must be nonempty")
    return project(X, keep)


# -- incremental construction ------------------------------------------------------


def _edge_breakpoints(X: TropicalCurve, k: int, beta: Sequence[Fraction]) -> list[Fraction]:
    """Parameters along edge ``k`` where the minimizing coordinate or an active term may change."""
    e = X.edges[k]
    tail = X.vertices[e.tail]
    ts = set()
    fin = [j for j in range(X.r) if not is_neg_inf(tail[j])]
    for j in fin:
        if e.direction[j]:
            ts.add((beta[j] - tail[j]) / e.direction[j])
    for i, j in itertools.combinations(fin, 2):
        if e.direction[i] != e.direction[j]:
            ts.add((tail[j] - tail[i]) / (e.direction[i] - e.direction[j]))
    upper = e.length
    return sorted(t for t in ts if t > 0 and (upper is None or t < upper))


def _slopes_for(X: TropicalCurve, values: dict, beta) -> dict[int, int]:
    slopes = {}
    for k, e in enumerate(X.edges):
        if not X.is_finite_vertex(e.tail):
            raise InvariantViolation("line through infinity survived subdivision at z_s")
        if e.length is not None:
            diff = values[e.head] - values[e.tail]
            s = diff / e.length
        else:
            s = p_value(beta, X.point_on_edge(k, 1)) - values[e.tail]
        if s.denominator != 1:
            raise InvariantViolation(f"edge {k}: non-integral slope {s}")
        s = int(s)
        probes = _edge_breakpoints(X, k, beta)
        probes.append(e.length if e.length is not None else (probes[-1] + 1 if probes else Fraction(1)))
        for t in probes:
            if e.length is not None and t == e.length:
                continue
            if p_value(beta, X.point_on_edge(k, t)) != values[e.tail] + s * t:
                raise InvariantViolation(f"P is not affine on edge {k}")
        slopes[k] = s
    return slopes


def incremental_step(X: TropicalCurve, b_column: Sequence[LogValue],
                     m: LogDistanceMatrix | None = None) -> ModificationMap:
    """Add one point ``b`` with ``log|b - a_i| = b_column[i]`` by modifying along ``P_b``."""
    beta = tuple(as_log_value(x) for x in b_column)
    if m is not None:
        require_valid(m.extend(beta))
    if locate_point(X, beta) is None:
        raise InvariantViolation(f"z_s = {beta} is not on the curve")
    Xs, zs = insert_vertex(X, beta)
    values = {v: p_value(beta, Xs.vertices[v]) for v in range(len(Xs.vertices))}
    slopes = _slopes_for(Xs, values, beta)
    mod = modify(PiecewiseAffineFunction(Xs, values, slopes))
    if [(v, w) for v, _, w in mod.added_rays] != [(zs, 1)]:
        raise InvariantViolation(f"expected one weight-1 ray at z_s, got {mod.added_rays}")
    return mod


def tropicalize_incremental_steps(m: LogDistanceMatrix) -> list[ModificationMap]:
    """All modifications ``Trop(a_1..a_k) -> Trop(a_1..a_{k-1})``, ``k = 2..n``."""
    require_valid(m)
    X = TropicalCurve(1, ((NEG_INF,),), (Edge(0, None, (1,), None),))
    steps = []
    for k in range(1, m.n):
        mod = incremental_step(X, m.column(k), m.restrict(range(k)))
        steps.append(mod)
        X = canonicalize(mod.source)
    return steps


def tropicalize_incremental(m: LogDistanceMatrix) -> TropicalCurve:
    require_valid(m)
    steps = tropicalize_incremental_steps(m)
    if not steps:
        return TropicalCurve(1, ((NEG_INF,),), (Edge(0, None, (1,), None),))
    return canonicalize(steps[-1].source)


def tropicalize(m: LogDistanceMatrix, method: str = "direct") -> TropicalCurve:
    """Dispatch on ``method`` in ``{"direct", "incremental", "both"}``.

    ``"both"`` raises InvariantViolation unless the two constructions agree.
    """
    if method == "direct":
        return tropicalize_direct(m)
    if method == "incremental":
        return tropicalize_incremental(m)
    if method == "both":
        a, b = tropicalize_direct(m), tropicalize_incremental(m)
        if not same_curve(a, b):
            raise InvariantViolation("direct and incremental tropicalizations differ")
        return a
    raise InputError(f"unknown method {method!r}")


# -- piecewise affine functions from tropical polynomials --------------------------


def _term_value(term, point) -> LogValue:
    c, m = term
    total = c
    for x, e in zip(point, m):
        if e == 0:
            continue
        if is_neg_inf(x):
            return NEG_INF
        total += e * x
    return total


def _envelope_breaks(lines: list[tuple[Fraction, int]], upper) -> list[Fraction]:
    """Break points in ``(0, upper)`` of ``t -> max(a + s t)`` over ``(a, s)`` pairs."""
    cand = set()
    for (a1, s1), (a2, s2) in itertools.combinations(lines, 2):
        if s1 != s2:
            t = (a2 - a1) / (s1 - s2)
            if t > 0 and (upper is None or t < upper):
                cand.add(t)
    breaks = []
    for t in sorted(cand):
        top = max(a + s * t for a, s in lines)
        active = [s for a, s in lines if a + s * t == top]
        if min(active) != max(active):
            breaks.append(t)
    return breaks


def paf_from_tropical_polynomial(X: TropicalCurve, terms) -> PiecewiseAffineFunction:
    """Restriction of ``z -> max_j (c_j + <m_j, z>)`` to ``X``, subdivided at its kinks.

    Exponents ``m_j`` must be non-negative and one term must be constant, so
    the function is finite on all of ``T^r``.  Being convex, its restriction
    never needs an upward ray in ``modify``.
    """
    terms = [(Fraction(c), tuple(int(x) for x in m)) for c, m in terms]
    if any(len(m) != X.r or min(m) < 0 for _, m in terms):
        raise InputError("exponent vectors must be non-negative and of length r")
    if not any(not any(m) for _, m in terms):
        raise InputError("a constant term is required")
    for k, e in enumerate(X.edges):
        if not X.is_finite_vertex(e.tail):
            x = next(i for i, d in enumerate(e.direction) if d)
            X, _ = insert_vertex(X, tuple(Fraction(0) if i == x else X.vertices[e.tail][i]
                                          for i in range(X.r)))
    for k in range(len(X.edges)):
        e = X.edges[k]
        tail = X.vertices[e.tail]
        lines = []
        for c, m in terms:
            a = _term_value((c, m), tail)
            lines.append((a, sum(x * d for x, d in zip(m, e.direction))))
        for t in reversed(_envelope_breaks(lines, e.length)):
            X = subdivide_at(X, k, t)
    values = {v: max(_term_value(t, p) for t in terms) for v, p in enumerate(X.vertices)}
    slopes = {}
    for k, e in enumerate(X.edges):
        tail = X.vertices[e.tail]
        lines = [(_term_value(t, tail), sum(x * d for x, d in zip(t[1], e.direction))) for t in terms]
        top = max(a for a, _ in lines)
        slopes[k] = max(s for a, s in lines if a == top)
    finite_values = {v: x for v, x in values.items() if X.is_finite_vertex(v)}
    return PiecewiseAffineFunction(X, finite_values, slopes)


def random_tropical_polynomial(r: int, rng, terms: int = 3, max_exp: int = 2, spread: int = 4):
    out = [(Fraction(rng.randint(-spread, spread), rng.randint(1, 2)), (0,) * r)]
    for _ in range(terms - 1):
        m = tuple(rng.randint(0, max_exp) for _ in range(r))
        out.append((Fraction(rng.randint(-spread, spread), rng.randint(1, 2)), m))
    return out
