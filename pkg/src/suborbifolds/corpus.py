"""Built-in corpus: worked examples with known classification verdicts.

Each case builds a candidate, classifies it and compares against the
expected verdicts. The corpus doubles as the ground truth for the
acceptance suite and the `corpus` CLI command.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import (
    ChartModel,
    SuborbifoldCandidate,
    classify,
    full_obstruction_probe,
)
from .errors import CorpusMismatch
from .groups import generate_group, realify
from .linalg import (
    affine_subspace,
    mat,
    single_point,
    vec,
    whole_space,
)
from .metric import MetricProbe, lemma_metrics_check

ROT4_GEN = mat([[0, -1], [1, 0]])
ROT2 = mat([[-1, 0], [0, -1]])
SIGN_X = mat([[-1, 0], [0, 1]])
SIGN_Y = mat([[1, 0], [0, -1]])


def rot4_chart() -> ChartModel:
    return ChartModel(2, generate_group([ROT4_GEN]))


def line_chart() -> ChartModel:
    return ChartModel(1, generate_group([mat([[-1]])]))


def klein_chart() -> ChartModel:
    return ChartModel(2, generate_group([SIGN_X, SIGN_Y]))


def z4_realified_chart() -> ChartModel:
    gen = realify([[(0, 1), (0, 0)], [(0, 0), (-1, 0)]])
    return ChartModel(4, generate_group([gen]))


def x_axis():
    return affine_subspace([0, 0], [[1, 0]])


def plane_diagonal():
    return affine_subspace([0, 0], [[1, 1]])


def r4_diagonal():
    return affine_subspace([0, 0, 0, 0], [[1, 0, 1, 0], [0, 1, 0, 1]])


def second_complex_axis():
    return affine_subspace([0, 0, 0, 0], [[0, 0, 1, 0], [0, 0, 0, 1]])


def rotation_line_candidate() -> SuborbifoldCandidate:
    """Rotation-by-pi subgroup acting on the x-axis in the order-4 chart."""
    chart = rot4_chart()
    delta = chart.group.subgroup_from_matrices([ROT2])
    return SuborbifoldCandidate(chart, delta, x_axis())


def diagonal_half_turn_candidate() -> SuborbifoldCandidate:
    """Diagonal line under the sign-flip group, subgroup {I, -I}."""
    chart = klein_chart()
    delta = chart.group.subgroup_from_matrices([ROT2])
    return SuborbifoldCandidate(chart, delta, plane_diagonal())


def complex_axis_candidate() -> SuborbifoldCandidate:
    """Second complex axis under the realified order-4 action."""
    chart = z4_realified_chart()
    return SuborbifoldCandidate(
        chart, chart.group.full_subgroup(), second_complex_axis()
    )


def product_diagonal_candidate() -> SuborbifoldCandidate:
    """Diagonal of the doubled order-4 chart with the diagonal subgroup."""
    from .maps import product_chart

    chart = rot4_chart()
    product = product_chart(chart, chart)
    delta = product.combined.group.subgroup_from_indices(
        product.pair_index(g, g) for g in range(chart.group.order)
    )
    return SuborbifoldCandidate(product.combined, delta, r4_diagonal())


def point_candidate(chart: ChartModel) -> SuborbifoldCandidate:
    return SuborbifoldCandidate(
        chart, chart.group.full_subgroup(), single_point([0] * chart.ambient_dim)
    )


def open_candidate(chart: ChartModel) -> SuborbifoldCandidate:
    return SuborbifoldCandidate(
        chart, chart.group.full_subgroup(), whole_space(chart.ambient_dim)
    )


@dataclass(frozen=True)
class CorpusCase:
    name: str
    build: callable
    expected: dict
    search_all_delta: bool = False
    checks: tuple = ()

    def run(self) -> dict:
        cand = self.build()
        report = classify(cand, search_all_delta=self.search_all_delta)
        actual = {
            "saturated": report.saturated.holds,
            "full": None if report.full is None else report.full.holds,
            "embedded": None if report.embedded is None else report.embedded.holds,
        }
        extras = {}
        for check in self.checks:
            extras.update(check(cand, report))
        return {"actual": actual, "extras": extras, "candidate": cand,
                "report": report}


def _fullness_witness_check(expected_matrix, expected_point):
    def check(cand, report):
        witness = report.full.witness
        ok = (
            witness is not None
            and witness.element.matrix == expected_matrix
            and witness.point == vec(expected_point)
        )
        return {"fullness_witness": ok}

    return check


def _obstruction_check(point, expect_consistent):
    def check(cand, report):
        probe = full_obstruction_probe(cand, point)
        return {
            "obstruction_consistent": probe.consistent,
            "obstruction_expected": probe.consistent == expect_consistent,
            "sub_isotropy": probe.sub_isotropy,
            "omega_isotropy": probe.omega_isotropy,
        }

    return check


def _no_complement_check(cand, report):
    cert = report.embedded.certificate
    return {
        "no_complement_certificate": cert is not None,
        "searched_all_delta": report.embedded.searched_all_delta,
    }


CASES = (
    CorpusCase(
        "rotation-line",
        rotation_line_candidate,
        {"saturated": True, "full": False, "embedded": True,
         "fullness_witness": True},
        checks=(_fullness_witness_check(ROT4_GEN, [0, 0]),),
    ),
    CorpusCase(
        "point-in-rotation-chart",
        lambda: point_candidate(rot4_chart()),
        {"saturated": True, "full": True, "embedded": True},
    ),
    CorpusCase(
        "point-in-line-chart",
        lambda: point_candidate(line_chart()),
        {"saturated": True, "full": True, "embedded": True},
    ),
    CorpusCase(
        "point-in-sign-chart",
        lambda: point_candidate(klein_chart()),
        {"saturated": True, "full": True, "embedded": True},
    ),
    CorpusCase(
        "open-rotation-chart",
        lambda: open_candidate(rot4_chart()),
        {"saturated": True, "full": True, "embedded": True},
    ),
    CorpusCase(
        "open-line-chart",
        lambda: open_candidate(line_chart()),
        {"saturated": True, "full": True, "embedded": True},
    ),
    CorpusCase(
        "open-sign-chart",
        lambda: open_candidate(klein_chart()),
        {"saturated": True, "full": True, "embedded": True},
    ),
    CorpusCase(
        "product-diagonal",
        product_diagonal_candidate,
        {"saturated": True, "full": False, "embedded": True},
    ),
    CorpusCase(
        "diagonal-half-turn",
        diagonal_half_turn_candidate,
        {"saturated": True, "full": False, "embedded": True,
         "obstruction_expected": True, "obstruction_consistent": False},
        checks=(_obstruction_check([0, 0], expect_consistent=False),),
    ),
    CorpusCase(
        "complex-axis",
        complex_axis_candidate,
        {"saturated": True, "full": True, "embedded": False,
         "no_complement_certificate": True, "searched_all_delta": True},
        search_all_delta=True,
        checks=(_no_complement_check,),
    ),
)


def metric_probes() -> dict[str, MetricProbe]:
    """Corpus probes for the metric-coincidence lemma."""
    rot = rot4_chart()
    klein = klein_chart()
    return {
        "rotation-line": MetricProbe(
            rot.group,
            rot.group.subgroup_from_matrices([ROT2]),
            x_axis(),
            tuple(
                (vec([a, 0]), vec([b, 0]))
                for a, b in [(1, -2), (0, 1), (Fraction(1, 2), Fraction(-1, 3)),
                             (2, 2), (-1, 3)]
            ),
        ),
        "diagonal-half-turn": MetricProbe(
            klein.group,
            klein.group.subgroup_from_matrices([ROT2]),
            plane_diagonal(),
            tuple(
                (vec([a, a]), vec([b, b]))
                for a, b in [(1, -1), (0, 2), (Fraction(1, 3), Fraction(-1, 2)),
                             (-2, 1), (1, 1)]
            ),
        ),
    }


@dataclass
class CorpusReport:
    results: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def run_corpus(name_filter: str | None = None, cases=CASES,
               raise_on_mismatch: bool = False) -> CorpusReport:
    report = CorpusReport()
    start = time.perf_counter()
    for case in cases:
        if name_filter and name_filter not in case.name:
            continue
        t0 = time.perf_counter()
        outcome = case.run()
        elapsed = time.perf_counter() - t0
        observed = dict(outcome["actual"])
        observed.update(
            {k: v for k, v in outcome["extras"].items() if k in case.expected}
        )
        mismatched = {
            key: (case.expected[key], observed.get(key))
            for key in case.expected
            if observed.get(key) != case.expected[key]
        }
        entry = {
            "name": case.name,
            "expected": case.expected,
            "observed": observed,
            "extras": outcome["extras"],
            "passed": not mismatched,
            "seconds": elapsed,
        }
        report.results.append(entry)
        if mismatched:
            report.mismatches.append((case.name, mismatched))
    report.elapsed_seconds = time.perf_counter() - start
    if raise_on_mismatch and report.mismatches:
        raise CorpusMismatch(report.mismatches)
    return report


def run_metric_corpus(depth: int | None = None, tolerance: float | None = None):
    """Run the metric-lemma probes; returns {name: MetricReport}."""
    out = {}
    for name, probe in metric_probes().items():
        if depth is not None or tolerance is not None:
            probe = MetricProbe(
                probe.group, probe.subgroup, probe.subspace, probe.sample_pairs,
                depth if depth is not None else probe.partition_depth,
                tolerance if tolerance is not None else probe.tolerance,
            )
        out[name] = lemma_metrics_check(probe)
    return out
