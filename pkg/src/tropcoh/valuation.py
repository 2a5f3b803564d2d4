"""Ultrametric log-distance data for finite configurations of field points.

A configuration ``a_1, ..., a_n`` of distinct points in a non-archimedean field
is recorded only through the matrix ``L[i][j] = log|a_i - a_j|``.  Everything
downstream (tree of discs, the iterated-maximum function, modifications) is a
function of this matrix.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .logvalue import NEG_INF, LogValue, as_log_value, is_neg_inf


class StructureError(InputError):
    """Input is not a square symmetric matrix with the required diagonal."""


class UltrametricError(InputError):
    """Matrix violates the ultrametric inequality."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"ultrametric inequality fails at {self.violations[:5]}")


@dataclass(frozen=True)
class LogDistanceMatrix:
    L: tuple[tuple[LogValue, ...], ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(as_log_value(x) for x in row) for row in self.L)
        object.__setattr__(self, "L", rows)
        if self.labels:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        else:
            object.__setattr__(self, "labels", tuple(f"a{i + 1}" for i in range(len(rows))))

    @property
    def n(self) -> int:
        return len(self.L)

    def __getitem__(self, ij: tuple[int, int]) -> LogValue:
        i, j = ij
        return self.L[i][j]

    def restrict(self, keep: Sequence[int]) -> "LogDistanceMatrix":
        keep = list(keep)
        return LogDistanceMatrix(
            tuple(tuple(self.L[i][j] for j in keep) for i in keep),
            tuple(self.labels[i] for i in keep),
        )

    def column(self, k: int, upto: int | None = None) -> tuple[Fraction, ...]:
        """``(L[k][i])_{i < upto}``: the log-distances from point ``k`` to the earlier ones."""
        upto = k if upto is None else upto
        return tuple(self.L[k][i] for i in range(upto))

    def extend(self, b_column: Sequence[LogValue], label: str = "b") -> "LogDistanceMatrix":
        """Matrix of the configuration with one more point at the given log-distances."""
        b = [as_log_value(x) for x in b_column]
        if len(b) != self.n:
            raise StructureError(f"column of length {len(b)} for {self.n} points")
        rows = [list(row) + [b[i]] for i, row in enumerate(self.L)]
        rows.append(b + [NEG_INF])
        return LogDistanceMatrix(tuple(map(tuple, rows)), self.labels + (label,))

    def permute(self, perm: Sequence[int]) -> "LogDistanceMatrix":
        return self.restrict(perm)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[tuple[int, int, int], ...] = ()
    structural: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _structural_problems(L) -> list[str]:
    n = len(L)
    problems = []
    if n < 1:
        return ["matrix must have at least one point"]
    for i, row in enumerate(L):
        if len(row) != n:
            problems.append(f"row {i} has length {len(row)}, expected {n}")
    if problems:
        return problems
    for i in range(n):
        if not is_neg_inf(L[i][i]):
            problems.append(f"diagonal entry ({i},{i}) must be -inf")
        for j in range(i + 1, n):
            if L[i][j] != L[j][i]:
                problems.append(f"entries ({i},{j}) and ({j},{i}) differ")
            if is_neg_inf(L[i][j]):
                problems.append(f"entry ({i},{j}) is -inf: points must be distinct")
    return problems


def validate_ultrametric(m: LogDistanceMatrix | Sequence[Sequence[LogValue]]) -> ValidationReport:
    """Check symmetry, diagonal, finiteness and ``L[i][j] <= max(L[i][k], L[k][j])``.

    Raises StructureError for non-square or asymmetric input; ultrametric
    violations are reported as 1-based triples ``(i, j, k)``.
    """
    L = m.L if isinstance(m, LogDistanceMatrix) else [[as_log_value(x) for x in row] for row in m]
    problems = _structural_problems(L)
    shape = [p for p in problems if "length" in p or "differ" in p or "at least" in p]
    if shape:
        raise StructureError("; ".join(shape))
    n = len(L)
    bad = []
    for i, j, k in itertools.permutations(range(n), 3):
        if L[i][j] > max(L[i][k], L[k][j]):
            bad.append((i + 1, j + 1, k + 1))
    return ValidationReport(not problems and not bad, tuple(bad), tuple(problems))


def require_valid(m: LogDistanceMatrix) -> LogDistanceMatrix:
    report = validate_ultrametric(m)
    if report.structural:
        raise StructureError("; ".join(report.structural))
    if report.violations:
        raise UltrametricError(report.violations)
    return m


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def padic_valuation(x: Fraction | int, p: int) -> int:
    """Exact ``v_p`` of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is +inf")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def from_padic_points(p: int, points: Sequence, labels: Sequence[str] | None = None) -> LogDistanceMatrix:
    """Log-distance matrix of rationals in ``Q_p`` with ``log|x| = -v_p(x)`` (base ``p``)."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    pts = [Fraction(a) for a in points]
    if not pts:
        raise InputError("need at least one point")
    if len(set(pts)) != len(pts):
        raise InputError("points must be pairwise distinct")
    n = len(pts)
    L = [[NEG_INF] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        L[i][j] = L[j][i] = Fraction(-padic_valuation(pts[i] - pts[j], p))
    if labels is None:
        labels = [str(a) for a in pts]
    return LogDistanceMatrix(tuple(map(tuple, L)), tuple(labels))


def random_ultrametric(
    n: int,
    seed: int,
    low: Fraction | int = -6,
    high: Fraction | int = 6,
    denominator: int = 2,
    max_children: int = 4,
) -> LogDistanceMatrix:
    """Random ultrametric built from a random cluster tree.

    Each internal cluster gets a radius on the grid ``(1/denominator) Z``,
    strictly below its parent's; points in different children of a cluster are
    at exactly that radius.  The root radius lies in ``[low, high]``; deep trees
    may push inner radii below ``low`` when the grid runs out.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if denominator < 1 or max_children < 2:
        raise ValueError("denominator >= 1 and max_children >= 2 required")
    low, high = Fraction(low), Fraction(high)
    if low > high:
        raise ValueError("low must not exceed high")
    rng = random.Random(seed)
    step = Fraction(1, denominator)
    lo_k = math.ceil(low / step)
    L = [[NEG_INF] * n for _ in range(n)]

    def grid_below(upper_k: int | None) -> int:
        hi_k = math.floor(high / step) if upper_k is None else upper_k - 1
        if hi_k < lo_k:
            return hi_k
        return rng.randint(lo_k, hi_k)

    def build(idx: list[int], upper_k: int | None) -> None:
        if len(idx) < 2:
            return
        k = grid_below(upper_k)
        radius = k * step
        parts = rng.randint(2, min(max_children, len(idx)))
        rng.shuffle(idx)
        cuts = sorted(rng.sample(range(1, len(idx)), parts - 1))
        groups = [idx[a:b] for a, b in zip([0] + cuts, cuts + [len(idx)])]
        for ga, gb in itertools.combinations(groups, 2):
            for i in ga:
                for j in gb:
                    L[i][j] = L[j][i] = radius
        for g in groups:
            build(list(g), k)

    build(list(range(n)), None)
    return LogDistanceMatrix(tuple(map(tuple, L)))
