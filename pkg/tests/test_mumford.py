import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropcoh.cohomology import Region, RegionError, cohomology_table, pd_check
from tropcoh.errors import InputError
from tropcoh.mumford import (
    SimpleRegionSpec,
    SkeletonEdge,
    SkeletonGraph,
    circle,
    make_simple_region,
    random_simple_spec,
    random_skeleton,
    theorem_table_global,
    theorem_table_simple,
    theta,
    verify_skeleton,
)

from conftest import seeds


def tree():
    return SkeletonGraph(("a", "b", "c", "d"),
                         (SkeletonEdge("x", ("a", "b")), SkeletonEdge("y", ("a", "c")),
                          SkeletonEdge("z", ("a", "d"), F(5, 2))))


@pytest.mark.parametrize("g", [0, 1, 5])
def test_global_table(g):
    t = theorem_table_global(g)
    assert t.h == ((1, g), (g, 1)) and t.hc == t.h


def test_simple_table_examples():
    assert theorem_table_simple(1).h[1][0] == 0 and theorem_table_simple(1).hc[1][1] == 1
    assert theorem_table_simple(2).h[1][0] == 1 and theorem_table_simple(2).hc[0][1] == 1
    assert theorem_table_simple(6).h[1][0] == 5
    with pytest.raises(InputError):
        theorem_table_simple(0)


def test_cellular_tables_of_named_skeletons():
    assert cohomology_table(Region.whole(circle())) == theorem_table_global(1)
    assert cohomology_table(Region.whole(theta())).h[1][0] == 2
    assert cohomology_table(Region.whole(tree())) == theorem_table_global(0)


def test_theta_vertex_region():
    region, k = make_simple_region(theta(), SimpleRegionSpec(("u",)))
    assert k == 3
    assert cohomology_table(region) == theorem_table_simple(3)


def test_segment_region():
    region, k = make_simple_region(theta(), SimpleRegionSpec(segment=("e1", F(1, 2), F(3, 2))))
    assert k == 2
    assert cohomology_table(region) == theorem_table_simple(2)


def test_cycle_rejected():
    with pytest.raises(RegionError):
        make_simple_region(theta(), SimpleRegionSpec(("u", "w"), ("e0", "e1")))


def test_whole_skeleton_is_not_simple():
    with pytest.raises(RegionError):
        make_simple_region(tree(), SimpleRegionSpec(("a", "b", "c", "d"), ("x", "y", "z")))


def test_skeleton_validation():
    with pytest.raises(InputError):
        SkeletonGraph(("a", "b"), (SkeletonEdge("e", ("a", "a")),))      # b isolated
    with pytest.raises(InputError):
        SkeletonGraph(("a", "b"), (SkeletonEdge("e", ("a", "b"), 0),))
    with pytest.raises(InputError):
        SkeletonGraph(("a", "b", "c", "d"),
                      (SkeletonEdge("e", ("a", "b")), SkeletonEdge("f", ("c", "d"))))


def test_subdivide_keeps_first_piece_id():
    S2, new_v, pieces = theta().subdivide("e2", [1, 2])
    assert pieces[0] == "e2" and len(pieces) == 3 and len(new_v) == 2
    assert sum(S2.edge(p).length for p in pieces) == 3
    assert S2.genus == 2


def test_loop_to_abstract():
    G, pieces = circle().to_abstract(3)
    assert len(G.vertices) == 4 and len(G.edges) == 4
    assert len(pieces["e"][0]) == 4


@given(st.sampled_from([0, 1, 2, 3, 5]), seeds)
def test_random_skeleton_global_table(g, seed):
    S = random_skeleton(g, random.Random(seed))
    assert S.genus == g
    assert cohomology_table(Region.whole(S)) == theorem_table_global(g)


@given(st.integers(0, 5), seeds)
def test_simple_regions_on_skeletons(g, seed):
    rng = random.Random(seed)
    S = random_skeleton(g, rng)
    try:
        region, k = make_simple_region(S, random_simple_spec(S, rng))
    except RegionError:
        return
    t = cohomology_table(region)
    assert t == theorem_table_simple(k)
    assert pd_check(t)


@given(st.integers(0, 4), seeds)
def test_verify_skeleton(g, seed):
    report = verify_skeleton(random_skeleton(g, random.Random(seed)), seed=seed, regions=5)
    assert report.ok and report.genus == g
