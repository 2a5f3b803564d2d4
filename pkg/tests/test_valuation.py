import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropcoh.errors import InputError
from tropcoh.logvalue import NEG_INF
from tropcoh.valuation import (
    LogDistanceMatrix,
    StructureError,
    UltrametricError,
    from_padic_points,
    is_prime,
    padic_valuation,
    random_ultrametric,
    require_valid,
    validate_ultrametric,
)

from conftest import seeds, ultrametrics

I = NEG_INF


def mat(*rows):
    return LogDistanceMatrix(tuple(tuple(r) for r in rows))


def test_two_points_ok():
    assert validate_ultrametric(mat([I, 0], [0, I])).ok


def test_three_points_ok():
    assert validate_ultrametric(mat([I, 0, -1], [0, I, 0], [-1, 0, I])).ok


def test_three_points_violation_reported_one_based():
    report = validate_ultrametric(mat([I, 0, -1], [0, I, -2], [-1, -2, I]))
    assert not report.ok
    assert (1, 2, 3) in report.violations
    with pytest.raises(UltrametricError):
        require_valid(mat([I, 0, -1], [0, I, -2], [-1, -2, I]))


def test_structural_errors():
    with pytest.raises(StructureError):
        validate_ultrametric(mat([I, 0], [1, I]))
    with pytest.raises(StructureError):
        validate_ultrametric([[I, 0], [0]])
    report = validate_ultrametric(mat([I, I], [I, I]))
    assert not report.ok and report.structural


@pytest.mark.parametrize("p,points,entries", [
    (5, [0, 1], {(0, 1): 0}),
    (5, [0, 1, 5], {(0, 1): 0, (0, 2): -1, (1, 2): 0}),
    (2, [0, F(1, 2)], {(0, 1): 1}),
])
def test_from_padic_points(p, points, entries):
    m = from_padic_points(p, points)
    for (i, j), v in entries.items():
        assert m[i, j] == v and m[j, i] == v
    assert all(m[i, i] is NEG_INF for i in range(m.n))


def test_from_padic_points_errors():
    with pytest.raises(InputError):
        from_padic_points(6, [0, 1])
    with pytest.raises(InputError):
        from_padic_points(5, [1, 1])


def test_padic_valuation():
    assert padic_valuation(50, 5) == 2
    assert padic_valuation(F(3, 25), 5) == -2
    assert padic_valuation(7, 5) == 0
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_random_ultrametric_small_cases():
    one = random_ultrametric(1, 3)
    assert one.L == ((NEG_INF,),)
    two = random_ultrametric(2, 3)
    assert -6 <= two[0, 1] <= 6
    assert validate_ultrametric(random_ultrametric(6, 11)).ok


def test_random_ultrametric_deterministic():
    assert random_ultrametric(7, 42) == random_ultrametric(7, 42)


@given(st.integers(1, 9), seeds)
def test_random_ultrametric_always_valid(n, seed):
    m = random_ultrametric(n, seed)
    assert m.n == n
    assert validate_ultrametric(m).ok


@given(ultrametrics())
def test_ultrametric_triangle_oracle(m):
    """Brute-force restatement of the inequality, independent of the validator."""
    n = m.n
    for i, j, k in itertools.permutations(range(n), 3):
        assert m[i, j] <= max(m[i, k], m[k, j])
    for i in range(n):
        for j in range(n):
            assert m[i, j] == m[j, i]


@given(st.sampled_from([2, 3, 5]),
       st.lists(st.integers(-500, 500), min_size=2, max_size=6, unique=True))
def test_padic_points_isosceles(p, pts):
    """Among any three points, the two largest distances coincide."""
    m = from_padic_points(p, pts)
    for i, j, k in itertools.combinations(range(m.n), 3):
        a, b, c = sorted([m[i, j], m[i, k], m[j, k]])
        assert b == c


@given(ultrametrics(), st.randoms(use_true_random=False))
def test_restrict_and_permute_preserve_validity(m, rnd):
    perm = list(range(m.n))
    rnd.shuffle(perm)
    assert validate_ultrametric(m.permute(perm)).ok
    assert validate_ultrametric(m.restrict(perm[: max(1, m.n // 2)])).ok
