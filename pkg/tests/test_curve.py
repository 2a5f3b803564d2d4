from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropcoh.acceptance import flip_edges, relabel
from tropcoh.curve import (
    CurveError,
    Edge,
    TropicalCurve,
    balancing_defect,
    canonicalize,
    check_balancing,
    check_smooth,
    insert_vertex,
    locate_point,
    project,
    same_curve,
    subdivide_at,
)
from tropcoh.logvalue import NEG_INF
from tropcoh.tropicalize import tropicalize_direct
from tropcoh.valuation import from_padic_points

from conftest import ultrametrics

I = NEG_INF
O = (F(0), F(0))


def star(directions, weight=1):
    """Curve with one vertex at the origin of T^2 and rays in the given directions."""
    verts = [O]
    edges = []
    for d in directions:
        if max(d) > 0:
            edges.append(Edge(0, None, d, None, weight))
        else:
            verts.append(tuple(I if x < 0 else F(0) for x in d))
            edges.append(Edge(0, len(verts) - 1, d, None, weight))
    return TropicalCurve(2, tuple(verts), tuple(edges))


def test_balanced_tripod():
    X = star([(1, 1), (-1, 0), (0, -1)])
    assert check_balancing(X).balanced
    assert check_smooth(X).smooth


def test_single_ray_defect():
    X = star([(1, 0)])
    report = check_balancing(X)
    assert not report.balanced
    assert report.defects == {0: (1, 0)}
    assert balancing_defect(X, 0) == (1, 0)


def test_four_valent_not_smooth():
    X = star([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert X.valence(0) == 4 and X.local_dim(0) == 2
    assert check_balancing(X).balanced
    assert not check_smooth(X).smooth


def test_weight_two_not_smooth():
    X = star([(1, 1), (-1, 0), (0, -1)], weight=2)
    assert check_balancing(X).balanced
    assert not check_smooth(X).smooth


def test_tree_of_discs_015_balanced(curve015):
    finite = [v for v in range(len(curve015.vertices)) if curve015.is_finite_vertex(v)]
    assert [curve015.vertices[v] for v in finite] == [(-1, 0, -1), (0, 0, 0)]
    for v in finite:
        assert balancing_defect(curve015, v) == (0, 0, 0)


@pytest.mark.parametrize("bad", [
    dict(r=2, vertices=(O, (F(1), F(2))), edges=(Edge(0, 1, (1, 1), F(1)),)),      # head mismatch
    dict(r=2, vertices=(O,), edges=(Edge(0, None, (-1, 0), None),)),                # free end pointing down
    dict(r=2, vertices=(O,), edges=(Edge(0, None, (2, 2), None),)),                 # not primitive
    dict(r=2, vertices=(O,), edges=(Edge(0, None, (1, 1), None, 0),)),              # weight 0
    dict(r=2, vertices=(O, O), edges=()),                                            # duplicate vertex
    dict(r=2, vertices=(O, (F(3), F(3))), edges=()),                                 # disconnected
    dict(r=2, vertices=(O, (I, F(0))), edges=(Edge(0, 1, (-1, 0), F(2)),)),          # finite length to infinity
])
def test_invalid_curves_rejected(bad):
    with pytest.raises(CurveError):
        TropicalCurve(**bad)


def test_subdivide_unit_edge():
    X = TropicalCurve(2, (O, (F(1), F(1))), (Edge(0, 1, (1, 1), F(1)),))
    Y = subdivide_at(X, 0, F(1, 2))
    assert Y.vertices[2] == (F(1, 2), F(1, 2))
    assert canonicalize(Y) == canonicalize(X)


def test_subdivide_ray():
    X = TropicalCurve(2, (O,), (Edge(0, None, (1, 1), None),))
    Y = subdivide_at(X, 0, 3)
    assert Y.vertices[1] == (3, 3)
    assert Y.edges[0].length == 3 and Y.edges[1].head is None
    assert same_curve(X, Y)


def test_subdivide_outside_edge_rejected():
    X = TropicalCurve(2, (O, (F(1), F(1))), (Edge(0, 1, (1, 1), F(1)),))
    with pytest.raises(CurveError):
        subdivide_at(X, 0, 1)


def test_canonicalize_keeps_trivalent(curve01):
    assert canonicalize(curve01).vertices == curve01.vertices


def test_locate_and_insert(curve01):
    origin = curve01.vertices.index(O)
    assert locate_point(curve01, O) == ("vertex", origin)
    kind, k, t = locate_point(curve01, (F(2), F(2)))
    assert kind == "edge" and t == 2
    assert locate_point(curve01, (F(1), F(2))) is None
    Y, v = insert_vertex(curve01, (F(-3), F(0)))
    assert Y.vertices[v] == (-3, 0)
    assert same_curve(Y, curve01)


def test_insert_on_line_through_infinity():
    T = TropicalCurve(1, ((I,),), (Edge(0, None, (1,), None),))
    Y, v = insert_vertex(T, (F(5),))
    assert Y.vertices[v] == (5,)
    assert same_curve(Y, T)


def test_projection_examples(curve01, curve015):
    assert project(curve015, [0, 1]) == curve01
    assert project(curve015, [0, 1, 2]) == canonicalize(curve015)
    T = TropicalCurve(1, ((I,),), (Edge(0, None, (1,), None),))
    assert project(curve015, [0]) == T


@given(ultrametrics(), st.randoms(use_true_random=False))
def test_canonical_form_ignores_labels_and_orientation(m, rnd):
    X = tropicalize_direct(m)
    assert canonicalize(X) == X
    assert canonicalize(relabel(X, rnd)) == X


@given(ultrametrics(), st.randoms(use_true_random=False), st.integers(1, 9))
def test_subdivision_then_canonicalize_is_identity(m, rnd, num):
    X = tropicalize_direct(m)
    choices = [k for k, e in enumerate(X.edges) if X.is_finite_vertex(e.tail)]
    if not choices:
        return
    k = rnd.choice(choices)
    e = X.edges[k]
    t = F(num, 10) * (e.length if e.length is not None else 5)
    Y = subdivide_at(X, k, t)
    assert check_balancing(Y).balanced
    assert canonicalize(Y) == X


@given(ultrametrics(), st.randoms(use_true_random=False))
def test_flipping_edges_preserves_balancing(m, rnd):
    X = tropicalize_direct(m)
    Y = flip_edges(X, [k for k in range(len(X.edges)) if rnd.random() < 0.5])
    assert check_balancing(Y).balanced and check_smooth(Y).smooth
    assert canonicalize(Y) == X


@given(ultrametrics(n_max=6), st.data())
def test_projection_forgets_points(m, data):
    """Dropping coordinates is tropicalizing the sub-configuration."""
    keep = sorted(data.draw(st.sets(st.integers(0, m.n - 1), min_size=1)))
    assert project(tropicalize_direct(m), keep) == tropicalize_direct(m.restrict(keep))
