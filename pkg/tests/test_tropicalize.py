import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropcoh.curve import Edge, TropicalCurve, canonicalize, check_balancing, check_smooth, project
from tropcoh.errors import InputError, InvariantViolation
from tropcoh.logvalue import NEG_INF
from tropcoh.tropicalize import (
    PiecewiseAffineFunction,
    eval_P,
    modify,
    p_value,
    paf_from_tropical_polynomial,
    random_tropical_polynomial,
    tropicalize,
    tropicalize_direct,
    tropicalize_incremental,
    tropicalize_incremental_steps,
)
from tropcoh.valuation import from_padic_points, padic_valuation

from conftest import ultrametrics

I = NEG_INF
T = TropicalCurve(1, ((I,),), (Edge(0, None, (1,), None),))


# -- sampling oracle ------------------------------------------------------------------
# A type-2/3 point of the Berkovich line is a disc D(c, |t|); its image is
# (max(log|c - a_j|, log t))_j.  Sampling centres c in Q and radii on a grid
# must land on the curve, and every cell must be hit.


def on_edge(X, k, z):
    """Independent membership test for a finite point on edge k (interior or endpoint)."""
    e = X.edges[k]
    tail = X.vertices[e.tail]
    if any(x is I for x in tail):
        i = e.direction.index(1)
        return all(z[j] == tail[j] for j in range(X.r) if j != i)
    ts = {(z[j] - tail[j]) / d for j, d in enumerate(e.direction) if d}
    if any(d == 0 and z[j] != tail[j] for j, d in enumerate(e.direction)) or len(ts) != 1:
        return False
    (t,) = ts
    return t >= 0 and (e.length is None or t <= e.length)


def sample_image(p, points, rng, count=300):
    samples = []
    for _ in range(count):
        if rng.random() < 0.5:
            c = F(rng.choice(points))
        else:
            c = F(rng.randint(-60, 60), rng.choice([1, p, p * p, 3]))
        s = F(rng.randint(-24, 24), 4)        # log base p of the radius
        z = []
        for a in points:
            d = c - a
            z.append(s if d == 0 else max(F(-padic_valuation(d, p)), s))
        samples.append(tuple(z))
    return samples


@pytest.mark.parametrize("p,points", [
    (5, [0, 1]), (5, [0, 1, 5]), (2, [0, 1, 2, 4, 3]), (3, [0, 9, 1, 27, F(1, 3)]), (7, [1, 8, 50, 0]),
])
def test_sampling_oracle(p, points):
    X = tropicalize_direct(from_padic_points(p, points))
    hit = set()
    rng = random.Random(f"{p}{points}")
    for z in sample_image(p, points, rng, 600):
        ks = [k for k in range(len(X.edges)) if on_edge(X, k, z)]
        assert ks, f"sample {z} is not on the curve"
        hit.update(ks)
    assert hit == set(range(len(X.edges)))


# -- worked examples -------------------------------------------------------------------


def test_r1_is_T():
    assert tropicalize_direct(from_padic_points(5, [0])) == T


def test_r2(curve01):
    X = curve01
    assert set(X.vertices) == {(0, 0), (I, 0), (0, I)}
    dirs = sorted(e.direction for e in X.edges)
    assert dirs == [(-1, 0), (0, -1), (1, 1)]
    assert all(e.weight == 1 for e in X.edges)


def test_r3_finite_vertices(curve015):
    finite = {v for v in curve015.vertices if I not in v}
    assert finite == {(0, 0, 0), (-1, 0, -1)}
    assert len(curve015.edges) == 5


def test_P_on_T():
    assert eval_P(T, [F(0)], [F(-5)]) == 0
    assert eval_P(T, [F(0)], [F(3)]) == 3


def test_P_on_r2(curve01):
    assert eval_P(curve01, [F(-1), F(0)], [F(0), F(0)]) == 0
    assert eval_P(curve01, [F(-1), F(0)], [F(-1), F(0)]) == -1
    assert p_value([F(-1), F(0)], [F(-1), F(0)]) == -1


def test_P_rejects_non_ultrametric_extension(curve01):
    with pytest.raises(InputError):
        eval_P(curve01, [F(-1), F(-2)], [F(0), F(0)])


def test_modify_T():
    X, v = T, None
    # P(z) = max(z, 0) on T, with a vertex at 0
    from tropcoh.curve import insert_vertex
    Xs, v = insert_vertex(T, (F(0),))
    values = {v: F(0)}
    slopes = {}
    for k, e in enumerate(Xs.edges):
        slopes[k] = 1 if e.tail == v and e.head is None else 0
    mod = modify(PiecewiseAffineFunction(Xs, values, slopes))
    src = canonicalize(mod.source)
    assert set(src.vertices) == {(0, 0), (I, 0), (0, I)}
    assert [w for _, _, w in mod.added_rays] == [1]
    assert src == tropicalize_direct(from_padic_points(5, [0, 1]))


def test_affine_function_adds_no_rays(curve015):
    # P(z) = z_1 + 2 on a curve where z_1 never hits -inf is affine: slope <d, e_2> per edge.
    X = curve015
    values = {v: p[1] + 2 for v, p in enumerate(X.vertices) if X.is_finite_vertex(v)}
    slopes = {k: e.direction[1] for k, e in enumerate(X.edges)}
    mod = modify(PiecewiseAffineFunction(X, values, slopes))
    assert mod.added_rays == ()
    assert mod.projects_onto_target()


def test_incremental_examples(curve01, curve015):
    for pts in ([0, 1], [0, 1, 5]):
        m = from_padic_points(5, pts)
        assert tropicalize_incremental(m) == tropicalize_direct(m)
    steps = tropicalize_incremental_steps(from_padic_points(5, [0, 1, 5]))
    last = steps[-1]
    ((v, _, w),) = last.added_rays
    assert last.source.vertices[v] == (-1, 0, -1) and w == 1
    assert project(last.source, [0, 1]) == curve01


def test_tropicalize_dispatch():
    m = from_padic_points(5, [0, 1, 5, 25])
    assert tropicalize(m, "both") == tropicalize(m, "direct") == tropicalize(m, "incremental")
    with pytest.raises(InputError):
        tropicalize(m, "sideways")


def test_paf_rejects_bad_slope(curve01):
    values = {v: F(0) for v in range(3) if curve01.is_finite_vertex(v)}
    slopes = {k: (1 if e.head is None else 0) for k, e in enumerate(curve01.edges)}
    slopes[0] = 1           # positive slope towards a vertex at infinity
    with pytest.raises(InputError):
        PiecewiseAffineFunction(curve01, values, slopes)


def test_upward_ray_rejected(curve01):
    # -max(z1, z2) style concavity at the origin needs an upward ray
    values = {v: F(0) for v in range(3) if curve01.is_finite_vertex(v)}
    slopes = {k: (-1 if e.head is None else 0) for k, e in enumerate(curve01.edges)}
    with pytest.raises(InputError):
        modify(PiecewiseAffineFunction(curve01, values, slopes))


# -- properties ------------------------------------------------------------------------


@given(ultrametrics())
def test_direct_equals_incremental(m):
    assert tropicalize_direct(m) == tropicalize_incremental(m)


@given(ultrametrics())
def test_structure_of_tropicalization(m):
    X = tropicalize_direct(m)
    assert check_balancing(X).balanced
    assert check_smooth(X).smooth
    assert all(e.weight == 1 for e in X.edges)
    assert X.is_connected()
    # n leaves at infinity plus one free end
    assert sum(1 for v in X.vertices if I in v) == m.n
    assert sum(1 for e in X.edges if e.head is None) == 1


@given(ultrametrics(), st.randoms(use_true_random=False))
def test_permutation_equivariance(m, rnd):
    perm = list(range(m.n))
    rnd.shuffle(perm)
    X = tropicalize_direct(m)
    Y = tropicalize_direct(m.permute(perm))
    assert project(X, perm) == Y


@given(ultrametrics(n_max=6))
def test_every_step_projects_back(m):
    for mod in tropicalize_incremental_steps(m):
        assert mod.projects_onto_target()
        assert [w for _, _, w in mod.added_rays] == [1]


@given(ultrametrics(n_max=5), st.randoms(use_true_random=False))
def test_tropical_polynomial_modifications(m, rnd):
    X = tropicalize_direct(m)
    P = paf_from_tropical_polynomial(X, random_tropical_polynomial(X.r, rnd))
    mod = modify(P)
    assert check_balancing(mod.source).balanced
    assert mod.projects_onto_target()
    assert all(w >= 1 for _, _, w in mod.added_rays)


def test_inconsistent_p_value_raises():
    with pytest.raises(InvariantViolation):
        p_value([F(0), F(-1)], [F(-3), F(-3)])
