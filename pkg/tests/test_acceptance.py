"""Acceptance criteria; prints one PASS/FAIL line per criterion.

Run standalone with ``python3 tests/test_acceptance.py [seed]`` or via pytest.
"""

import sys

import pytest

from tropcoh.acceptance import CRITERIA, run_acceptance, run_criterion

SEED = 0


@pytest.fixture(scope="module")
def results():
    return {r.number: r for r in run_acceptance(SEED)}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(results, number, capsys):
    result = results[number]
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def test_deterministic_under_seed():
    a, b = run_criterion(6, seed=3), run_criterion(6, seed=3)
    assert (a.passed, a.cases, a.detail) == (b.passed, b.cases, b.detail)


def test_parallel_matches_serial():
    serial = run_acceptance(seed=1, jobs=1)
    parallel = run_acceptance(seed=1, jobs=2)
    assert [(r.number, r.passed, r.cases) for r in serial] == [(r.number, r.passed, r.cases) for r in parallel]


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else SEED
    outcome = run_acceptance(seed)
    for r in outcome:
        print(r.line())
    sys.exit(0 if all(r.passed for r in outcome) else 1)
