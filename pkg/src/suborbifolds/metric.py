"""Numeric check that the quotient metric and the induced intrinsic metric
coincide on an invariant subspace.

Everything stays exact (rational squared distances, exact minima) until
the final square roots. Straight segments suffice as candidate paths
because the subspace is affine and the metric flat; refinement sums are
monotone in the partition depth, mirroring the sup over partitions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classify import ChartModel, SuborbifoldCandidate, check_saturated
from .errors import (
    CandidateNotSaturated,
    NonOrthogonalGroup,
    PointsNotInSubspace,
)
from .groups import FiniteMatrixGroup, Subgroup
from .linalg import (
    AffineSubspace,
    Vec,
    contains_point,
    identity as identity_matrix,
    mat_mul,
    mat_vec,
    transpose,
    vec,
    vec_add,
    vec_scale,
)

DEFAULT_DEPTH = 8
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MetricProbe:
    group: FiniteMatrixGroup
    subgroup: Subgroup
    subspace: AffineSubspace
    sample_pairs: tuple[tuple[Vec, Vec], ...]
    partition_depth: int = DEFAULT_DEPTH
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        _require_orthogonal(self.group)
        for x, y in self.sample_pairs:
            if not (contains_point(self.subspace, x)
                    and contains_point(self.subspace, y)):
                raise PointsNotInSubspace(f"sample pair ({x}, {y}) leaves the subspace")


def _require_orthogonal(group) -> None:
    parent = group.parent if isinstance(group, Subgroup) else group
    ident = identity_matrix(parent.ambient_dim)
    members = group.members if isinstance(group, Subgroup) else range(parent.order)
    for i in members:
        m = parent.matrix_of(i)
        if mat_mul(transpose(m), m) != ident:
            raise NonOrthogonalGroup(f"element {i} is not orthogonal")


def _sq_dist(x: Vec, y: Vec) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(x, y))


def _min_orbit_sq_dist(matrices, x: Vec, y: Vec) -> Fraction:
    return min(_sq_dist(x, mat_vec(m, y)) for m in matrices)


def _matrices(group) -> list:
    if isinstance(group, Subgroup):
        return [group.parent.matrix_of(i) for i in group.members]
    return [e.matrix for e in group.elements]


def quotient_distance(group, x, y) -> float:
    """min over the group of the Euclidean distance |x - g y|."""
    _require_orthogonal(group)
    x, y = vec(x), vec(y)
    return math.sqrt(_min_orbit_sq_dist(_matrices(group), x, y))


def _segment_sum(matrices, start: Vec, end: Vec, pieces: int) -> float:
    total = 0.0
    prev = start
    for i in range(1, pieces + 1):
        t = Fraction(i, pieces)
        current = vec_add(vec_scale(1 - t, start), vec_scale(t, end))
        total += math.sqrt(_min_orbit_sq_dist(matrices, prev, current))
        prev = current
    return total


def intrinsic_quotient_distance(probe: MetricProbe, x, y) -> float:
    """Length-infimum distance induced by the ambient quotient metric.

    For each subgroup element h the straight segment from x to h y is
    refined dyadically up to the probe depth; the sup over depths is
    taken (monotone), then the min over h.
    """
    x, y = vec(x), vec(y)
    if not (contains_point(probe.subspace, x) and contains_point(probe.subspace, y)):
        raise PointsNotInSubspace("query points must lie in the subspace")
    group_matrices = _matrices(probe.group)
    best = None
    for h in probe.subgroup.members:
        target = mat_vec(probe.group.matrix_of(h), y)
        sup = 0.0
        for depth in range(probe.partition_depth + 1):
            sup = max(sup, _segment_sum(group_matrices, x, target, 2 ** depth))
        if best is None or sup < best:
            best = sup
    return best


@dataclass(frozen=True)
class PairResult:
    x: Vec
    y: Vec
    quotient: float
    intrinsic: float

    @property
    def deviation(self) -> float:
        return abs(self.quotient - self.intrinsic)


@dataclass(frozen=True)
class MetricReport:
    pairs: tuple[PairResult, ...]
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max((p.deviation for p in self.pairs), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    @property
    def hint(self) -> str | None:
        # A saturated probe that misses tolerance needs a deeper refinement,
        # not a counterexample report.
        if self.passed:
            return None
        return "increase partition depth"


def lemma_metrics_check(probe: MetricProbe) -> MetricReport:
    """Per-pair comparison of the two metrics on the quotient of the subspace."""
    chart = ChartModel(probe.group.ambient_dim, probe.group)
    cand = SuborbifoldCandidate(chart, probe.subgroup, probe.subspace)
    if not check_saturated(cand).holds:
        raise CandidateNotSaturated("metric lemma requires a saturated candidate")
    results = []
    for x, y in probe.sample_pairs:
        quotient = quotient_distance(probe.subgroup, x, y)
        intrinsic = intrinsic_quotient_distance(probe, x, y)
        results.append(PairResult(vec(x), vec(y), quotient, intrinsic))
    return MetricReport(tuple(results), probe.tolerance)
