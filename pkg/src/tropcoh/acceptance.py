"""Deterministic acceptance driver behind ``tropcoh selftest``.

Every criterion draws its random cases from ``random.Random`` instances seeded
by strings derived from the run seed, so a fixed seed reproduces every case.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cohomology import (
    Region,
    abstract_from_curve,
    cohomology_table,
    euler_check,
    pd_check,
    preimage_region,
    random_region,
    random_simple_curve_region,
    refine_region,
)
from .curve import Edge, TropicalCurve, canonicalize, check_balancing, check_smooth, subdivide_at
from .errors import InputError
from .mumford import (
    make_simple_region,
    random_simple_spec,
    random_skeleton,
    theorem_table_global,
    theorem_table_simple,
)
from .tropicalize import (
    modify,
    paf_from_tropical_polynomial,
    random_tropical_polynomial,
    tropicalize_direct,
    tropicalize_incremental,
    tropicalize_incremental_steps,
)
from .valuation import random_ultrametric

GENERA = (0, 1, 2, 3, 5)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    cases: int
    seconds: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] criterion {self.number}: {self.name} ({self.cases} cases, {self.seconds:.2f}s)"
        return text + (f" -- {self.detail}" if self.detail else "")


def _rng(seed: int, *tags) -> random.Random:
    return random.Random(":".join(map(str, (seed,) + tags)))


def _matrix(seed: int, i: int, n_min: int = 1, n_max: int = 8):
    rng = _rng(seed, "matrix", i)
    n = rng.randint(n_min, n_max)
    return random_ultrametric(n, rng.randrange(2**32))


def _curve(seed: int, i: int, n_min: int = 2) -> TropicalCurve:
    return tropicalize_direct(_matrix(seed, i, n_min))


# -- criteria ------------------------------------------------------------------------
# Each returns (passed, cases, detail).


def global_tables(seed: int, cases: int):
    bad, count = [], 0
    for g in GENERA:
        for i in range(20):
            S = random_skeleton(g, _rng(seed, "c1", g, i))
            count += 1
            t = cohomology_table(Region.whole(S))
            if t != theorem_table_global(g):
                bad.append(f"g={g} #{i}: {t.h}")
    return not bad, count, "; ".join(bad[:3])


def simple_tables(seed: int, cases: int, per_k: int = 5):
    """Collect ``per_k`` strictly simple regions for each k in 1..6 on both ambient kinds."""
    bad, count = [], 0
    for kind in ("skeleton", "curve"):
        seen = {k: 0 for k in range(1, 7)}
        attempt = 0
        while min(seen.values()) < per_k and attempt < 4000:
            rng = _rng(seed, "c2", kind, attempt)
            attempt += 1
            try:
                if kind == "skeleton":
                    S = random_skeleton(rng.randint(0, 5), rng)
                    region, k = make_simple_region(S, random_simple_spec(S, rng, max_size=5))
                else:
                    X = _curve(seed, f"c2-{attempt}")
                    region, k = random_simple_curve_region(X, rng, max_size=5)
            except InputError:
                continue
            if k not in seen or seen[k] >= per_k:
                continue
            seen[k] += 1
            count += 1
            t = cohomology_table(region)
            if t != theorem_table_simple(k):
                bad.append(f"{kind} k={k}: h={t.h} hc={t.hc}")
        missing = [k for k, c in seen.items() if c < per_k]
        if missing:
            bad.append(f"{kind}: too few regions for k={missing}")
    return not bad, count, "; ".join(bad[:3])


def oracle_equivalence(seed: int, cases: int):
    bad = []
    for i in range(cases):
        m = _matrix(seed, i)
        if tropicalize_direct(m) != tropicalize_incremental(m):
            bad.append(f"#{i} (n={m.n})")
    return not bad, cases, "; ".join(bad[:3])


def structural(seed: int, cases: int):
    bad = []
    for i in range(cases):
        m = _matrix(seed, i)
        for X in (tropicalize_direct(m), tropicalize_incremental(m)):
            if not check_balancing(X):
                bad.append(f"#{i}: unbalanced")
            if not check_smooth(X):
                bad.append(f"#{i}: not smooth")
            if any(e.weight != 1 for e in X.edges):
                bad.append(f"#{i}: weight != 1")
    return not bad, cases, "; ".join(bad[:3])


def modification_invariance(seed: int, cases: int):
    bad, count = [], 0
    for i in range(cases):
        rng = _rng(seed, "c5", i)
        X = _curve(seed, f"c5-{i}")
        P = paf_from_tropical_polynomial(X, random_tropical_polynomial(X.r, rng))
        mod = modify(P)
        count += 1
        if not _same_tables(mod, rng):
            bad.append(f"polynomial #{i}")
    steps_done, j = 0, 0
    while steps_done < cases:
        steps = tropicalize_incremental_steps(_matrix(seed, f"c5s-{j}", 2))
        rng = _rng(seed, "c5s", j)
        j += 1
        for mod in steps:
            if steps_done >= cases:
                break
            steps_done += 1
            count += 1
            if not _same_tables(mod, rng):
                bad.append(f"step {steps_done}")
    return not bad, count, "; ".join(bad[:3])


def _same_tables(mod, rng) -> bool:
    regions = [Region.whole(mod.target), random_region(mod.target, rng)]
    for V in regions:
        if cohomology_table(V) != cohomology_table(preimage_region(mod, V)):
            return False
    return True


def poincare_duality(seed: int, cases: int):
    bad = []
    for i in range(cases):
        rng = _rng(seed, "c6", i)
        if i % 2 == 0:
            ambient = _curve(seed, f"c6-{i}")
        else:
            ambient = random_skeleton(rng.randint(0, 5), rng)
        t = cohomology_table(random_region(ambient, rng))
        if not pd_check(t):
            bad.append(f"#{i}: h={t.h} hc={t.hc}")
    return not bad, cases, "; ".join(bad[:3])


# -- property suite --------------------------------------------------------------------


def flip_edges(X: TropicalCurve, keys) -> TropicalCurve:
    """Reverse the given bounded edges between finite vertices."""
    keys = set(keys)
    edges = []
    for k, e in enumerate(X.edges):
        if k in keys and e.length is not None:
            e = Edge(e.head, e.tail, tuple(-x for x in e.direction), e.length, e.weight)
        edges.append(e)
    return TropicalCurve(X.r, X.vertices, tuple(edges))


def relabel(X: TropicalCurve, rng: random.Random) -> TropicalCurve:
    """Same curve with shuffled vertex ids, shuffled edges and random orientations."""
    perm = list(range(len(X.vertices)))
    rng.shuffle(perm)
    verts = [None] * len(perm)
    for old, new in enumerate(perm):
        verts[new] = X.vertices[old]
    edges = [Edge(perm[e.tail], None if e.head is None else perm[e.head], e.direction, e.length, e.weight)
             for e in X.edges]
    rng.shuffle(edges)
    Y = TropicalCurve(X.r, tuple(verts), tuple(edges))
    return flip_edges(Y, [k for k in range(len(edges)) if rng.random() < 0.5])


def _prop_orientation(seed: int, i: int) -> bool:
    rng = _rng(seed, "p-orient", i)
    if i % 2 == 0:
        X = _curve(seed, f"po-{i}")
        V = random_region(X, rng)
        flips = [k for k in range(len(X.edges)) if rng.random() < 0.5]
        W = Region(flip_edges(X, flips), V.vertices, V.edges, V.boundary)
    else:
        G = random_skeleton(rng.randint(0, 4), rng).to_abstract()[0]
        V = random_region(G, rng)
        flips = [k for k in G.edges if rng.random() < 0.5]
        W = Region(G.flipped(flips), V.vertices, V.edges, V.boundary)
    return cohomology_table(V) == cohomology_table(W)


def _prop_subdivision(seed: int, i: int) -> bool:
    rng = _rng(seed, "p-subdiv", i)
    X = _curve(seed, f"ps-{i}")
    V = random_region(X, rng)
    choices = [k for k, e in enumerate(X.edges) if X.is_finite_vertex(e.tail)]
    k = rng.choice(choices)
    e = X.edges[k]
    if e.length is None:
        t = Fraction(rng.randint(1, 9), rng.randint(1, 3))
    else:
        t = e.length * Fraction(rng.randint(1, 9), 10)
    X2 = subdivide_at(X, k, t)
    return cohomology_table(V) == cohomology_table(refine_region(V, X2, k))


def _prop_trim(seed: int, i: int) -> bool:
    rng = _rng(seed, "p-trim", i)
    ambient = _curve(seed, f"pt-{i}") if i % 2 == 0 else random_skeleton(rng.randint(0, 4), rng)
    if i % 2 == 1:
        V = random_region(ambient, rng) if rng.random() < 0.5 else Region.whole(ambient)
    else:
        V = random_region(ambient, rng)
    base = cohomology_table(V)
    trim = Fraction(rng.randint(1, 9), 10)
    if cohomology_table(V, trim=trim) != base:
        return False
    if hasattr(ambient, "to_abstract") and V.ambient is ambient:
        return cohomology_table(V, loop_points=rng.randint(3, 5)) == base
    return True


def _prop_euler(seed: int, i: int) -> bool:
    rng = _rng(seed, "p-euler", i)
    ambient = _curve(seed, f"pe-{i}") if i % 2 == 0 else random_skeleton(rng.randint(0, 4), rng)
    return euler_check(random_region(ambient, rng))


def _prop_embedded_abstract(seed: int, i: int) -> bool:
    rng = _rng(seed, "p-abstract", i)
    X = _curve(seed, f"pa-{i}")
    V = random_region(X, rng)
    W = Region(abstract_from_curve(X), V.vertices, V.edges, V.boundary)
    return cohomology_table(V) == cohomology_table(W)


def _prop_canonical(seed: int, i: int) -> bool:
    rng = _rng(seed, "p-canon", i)
    X = _curve(seed, f"pc-{i}", n_min=1)
    C = canonicalize(X)
    Y = relabel(X, rng)
    choices = [k for k, e in enumerate(Y.edges) if Y.is_finite_vertex(e.tail)]
    if choices and rng.random() < 0.5:
        k = rng.choice(choices)
        e = Y.edges[k]
        Y = subdivide_at(Y, k, Fraction(1, 2) if e.length is None else e.length / 2)
    return canonicalize(C) == C and canonicalize(Y) == C


PROPERTIES: dict[str, Callable[[int, int], bool]] = {
    "orientation independence": _prop_orientation,
    "subdivision invariance": _prop_subdivision,
    "trim-point invariance": _prop_trim,
    "Euler characteristic": _prop_euler,
    "embedded/abstract agreement": _prop_embedded_abstract,
    "canonicalize idempotence": _prop_canonical,
}


def property_suite(seed: int, cases: int):
    bad = []
    for name, prop in PROPERTIES.items():
        failed = [i for i in range(cases) if not prop(seed, i)]
        if failed:
            bad.append(f"{name} failed on cases {failed[:5]}")
    return not bad, cases * len(PROPERTIES), "; ".join(bad)


# -- driver ----------------------------------------------------------------------------

CRITERIA = (
    (1, "global tables [[1,g],[g,1]] on random skeletons", global_tables, None),
    (2, "strictly simple tables for k = 1..6", simple_tables, None),
    (3, "direct == incremental tropicalization", oracle_equivalence, 200),
    (4, "balanced, smooth, all weights 1", structural, 200),
    (5, "modification invariance of region tables", modification_invariance, 100),
    (6, "Poincare duality on random regions", poincare_duality, 100),
    (7, "property suite", property_suite, 100),
)


def run_criterion(number: int, seed: int = 0, cases: int | None = None) -> CriterionResult:
    for num, name, fn, default in CRITERIA:
        if num == number:
            break
    else:
        raise InputError(f"no criterion {number}")
    n = default if cases is None or default is None else max(cases, default)
    start = time.perf_counter()
    try:
        passed, count, detail = fn(seed, n)
    except Exception as exc:  # report, do not abort the other criteria
        passed, count, detail = False, 0, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, passed, count, time.perf_counter() - start, detail)


def run_acceptance(seed: int = 0, cases: int | None = None, jobs: int = 1) -> list[CriterionResult]:
    """Run all criteria; ``cases`` raises the per-criterion case counts (never lowers them)."""
    numbers = [c[0] for c in CRITERIA]
    if jobs <= 1:
        results = [run_criterion(n, seed, cases) for n in numbers]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_criterion, n, seed, cases) for n in numbers]
            results = [f.result() for f in futures]
    return sorted(results, key=lambda r: r.number)
