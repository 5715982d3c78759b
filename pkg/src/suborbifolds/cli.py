"""Command-line interface.

Exit codes: 0 success, 1 corpus/check mismatch, 2 input error,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import corpus as corpus_mod
from .classify import (
    chart_from_group,
    classify,
    isotropy_point,
    isotropy_sub_point,
)
from .errors import SuborbifoldError
from .groups import DEFAULT_MAX_ORDER
from .linalg import DimensionMismatch, rat, rat_str, vec
from .maps import (
    fibered_product,
    graph_suborbifold,
    image_suborbifold,
    intersect_full,
    preimage_suborbifold,
)
from .metric import MetricProbe, lemma_metrics_check
from .scene import (
    _lookup,
    candidate_json,
    classification_json,
    dump_machine_report,
    fingerprint_json,
    metric_report_json,
    parse_scene,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _parse_point(text: str):
    return vec([rat(part.strip()) for part in text.split(",")])


def _load_scene(args):
    if not args.scene:
        raise SuborbifoldError("this command requires --scene")
    try:
        with open(args.scene) as fh:
            text = fh.read()
    except OSError as exc:
        raise SuborbifoldError(f"cannot read scene file: {exc}") from exc
    return parse_scene(text, max_order=args.max_order)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "machine":
        output = dump_machine_report(payload)
    else:
        output = "\n".join(text_lines) + "\n"
    sys.stdout.write(output)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(output)


def _verdict_text(name: str, verdict) -> str:
    if verdict is None:
        return f"{name}: n/a"
    mark = "yes" if (verdict.holds if hasattr(verdict, "holds") else verdict) else "no"
    return f"{name}: {mark}"


def cmd_classify(args) -> int:
    scene = _load_scene(args)
    names = [args.candidate] if args.candidate else sorted(scene.candidates)
    results = {}
    lines = []
    for name in names:
        cand = _lookup(scene.candidates, name, "candidate")
        points = tuple(_parse_point(p) for p in args.isotropy_point or ())
        report = classify(cand, search_all_delta=args.search_all_delta,
                          isotropy_points=points)
        results[name] = {
            "candidate": candidate_json(cand),
            "classification": classification_json(report),
        }
        lines.append(f"[{name}]")
        lines.append("  " + _verdict_text("saturated", report.saturated))
        lines.append("  " + _verdict_text("full", report.full))
        lines.append("  " + _verdict_text("embedded", report.embedded))
        if report.saturated.witness is not None:
            lines.append(f"  saturation witness: element "
                         f"{report.saturated.witness.element.index} at "
                         f"{[rat_str(c) for c in report.saturated.witness.point]}")
        if report.full is not None and report.full.witness is not None:
            lines.append(f"  fullness witness: element "
                         f"{report.full.witness.element.index} at "
                         f"{[rat_str(c) for c in report.full.witness.point]}")
        for point, fp in report.induced_isotropy_at:
            lines.append(f"  isotropy at {[rat_str(c) for c in point]}: "
                         f"{fp.describe()}")
    _emit(args, {"command": "classify", "results": results,
                 "timing": {"seconds": None}}, lines)
    return EXIT_OK


def cmd_isotropy(args) -> int:
    scene = _load_scene(args)
    point = _parse_point(args.point)
    if args.candidate:
        cand = _lookup(scene.candidates, args.candidate, "candidate")
        fp = isotropy_sub_point(cand, point)
        subject = f"candidate {args.candidate}"
    elif args.group:
        group = _lookup(scene.groups, args.group, "group")
        fp = isotropy_point(chart_from_group(group), point)
        subject = f"group {args.group}"
    else:
        raise SuborbifoldError("isotropy needs --candidate or --group")
    payload = {
        "command": "isotropy",
        "subject": subject,
        "point": [rat_str(c) for c in point],
        "fingerprint": fingerprint_json(fp),
        "timing": {"seconds": None},
    }
    _emit(args, payload, [f"isotropy of {subject} at "
                          f"{[rat_str(c) for c in point]}: {fp.describe()}"])
    return EXIT_OK


def _construction(args, name: str, build) -> int:
    scene = _load_scene(args)
    result = build(scene)
    payload = {
        "command": name,
        "result": candidate_json(result),
        "timing": {"seconds": None},
    }
    lines = [
        f"{name}: candidate of dimension {result.v.dim} "
        f"in ambient dimension {result.chart.ambient_dim}",
        f"  subgroup order {result.delta.order} "
        f"of chart group order {result.chart.group.order}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_intersect(args) -> int:
    def build(scene):
        a = _lookup(scene.candidates, args.left, "candidate")
        b = _lookup(scene.candidates, args.right, "candidate")
        return intersect_full(a, b)

    return _construction(args, "intersect", build)


def cmd_preimage(args) -> int:
    def build(scene):
        f = _lookup(scene.maps, args.map, "map")
        if args.value is not None:
            from .maps import regular_value_preimage

            return regular_value_preimage(f, _parse_point(args.value))
        q = _lookup(scene.candidates, args.target, "candidate")
        return preimage_suborbifold(f, q)

    return _construction(args, "preimage", build)


def cmd_graph(args) -> int:
    def build(scene):
        return graph_suborbifold(_lookup(scene.maps, args.map, "map"))

    return _construction(args, "graph", build)


def cmd_image(args) -> int:
    def build(scene):
        f = _lookup(scene.maps, args.map, "map")
        cand = _lookup(scene.candidates, args.candidate, "candidate")
        return image_suborbifold(f, cand)

    return _construction(args, "image", build)


def cmd_fibered(args) -> int:
    def build(scene):
        f1 = _lookup(scene.maps, args.left_map, "map")
        f2 = _lookup(scene.maps, args.right_map, "map")
        return fibered_product(f1, f2)

    return _construction(args, "fibered-product", build)


def cmd_metric_check(args) -> int:
    if args.scene:
        scene = _load_scene(args)
        probes = scene.probes
        if args.probe:
            probes = {args.probe: _lookup(scene.probes, args.probe, "probe")}
    else:
        probes = corpus_mod.metric_probes()
        if args.probe:
            probes = {args.probe: _lookup(probes, args.probe, "probe")}
    results = {}
    lines = []
    all_passed = True
    for name, probe in sorted(probes.items()):
        if args.depth is not None or args.tol is not None:
            probe = MetricProbe(
                probe.group, probe.subgroup, probe.subspace, probe.sample_pairs,
                args.depth if args.depth is not None else probe.partition_depth,
                args.tol if args.tol is not None else probe.tolerance,
            )
        report = lemma_metrics_check(probe)
        results[name] = metric_report_json(report)
        all_passed = all_passed and report.passed
        status = "PASS" if report.passed else "FAIL"
        lines.append(f"[{name}] {status} max deviation "
                     f"{report.max_deviation:.3e} (tol {report.tolerance:.1e})")
        if report.hint:
            lines.append(f"  hint: {report.hint}")
    _emit(args, {"command": "metric-check", "results": results,
                 "timing": {"seconds": None}}, lines)
    return EXIT_OK if all_passed else EXIT_MISMATCH


def cmd_corpus(args) -> int:
    cases = [c for c in corpus_mod.CASES
             if not args.filter or args.filter in c.name]
    start = time.perf_counter()
    if args.parallel and args.parallel > 1:
        with ThreadPoolExecutor(max_workers=args.parallel) as pool:
            reports = list(
                pool.map(lambda c: corpus_mod.run_corpus(cases=[c]), cases)
            )
        report = corpus_mod.CorpusReport()
        for sub in reports:
            report.results.extend(sub.results)
            report.mismatches.extend(sub.mismatches)
    else:
        report = corpus_mod.run_corpus(cases=cases)
    report.elapsed_seconds = time.perf_counter() - start
    lines = []
    results = {}
    for entry in report.results:
        status = "PASS" if entry["passed"] else "FAIL"
        lines.append(f"[{entry['name']}] {status}")
        if not entry["passed"]:
            for key in entry["expected"]:
                if entry["observed"].get(key) != entry["expected"][key]:
                    lines.append(
                        f"  {key}: expected {entry['expected'][key]}, "
                        f"observed {entry['observed'].get(key)}"
                    )
        results[entry["name"]] = {
            "expected": entry["expected"],
            "observed": entry["observed"],
            "passed": entry["passed"],
        }
    lines.append(
        f"{len(report.results)} cases, {len(report.mismatches)} mismatches "
        f"({report.elapsed_seconds:.2f}s)"
    )
    _emit(args, {"command": "corpus", "results": results,
                 "ok": report.ok,
                 "timing": {"seconds": report.elapsed_seconds}}, lines)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", help="path to a JSON scene file")
    common.add_argument("--report", help="also write the output to this file")
    common.add_argument("--format", choices=["text", "machine"], default="text")
    common.add_argument("--parallel", type=int, default=1,
                        help="worker count for batch commands")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER,
                        help="bound on generated group orders")
    common.add_argument("--depth", type=int, default=None,
                        help="partition depth for metric checks")
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance for metric checks")

    parser = argparse.ArgumentParser(
        prog="suborb",
        description="Exact classification of affine suborbifold candidates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="classify candidates from a scene")
    p.add_argument("--candidate", help="candidate name (default: all)")
    p.add_argument("--search-all-delta", action="store_true",
                   help="search the whole subgroup lattice for embeddedness")
    p.add_argument("--isotropy-point", action="append",
                   help="comma-separated point; repeatable")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("isotropy", parents=[common],
                       help="isotropy fingerprint at a point")
    p.add_argument("--candidate", help="candidate name (suborbifold isotropy)")
    p.add_argument("--group", help="group name (ambient isotropy)")
    p.add_argument("--point", required=True, help="comma-separated point")
    p.set_defaults(func=cmd_isotropy)

    p = sub.add_parser("intersect", parents=[common],
                       help="transverse intersection of two full candidates")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("preimage", parents=[common],
                       help="preimage of a full candidate or a regular value")
    p.add_argument("--map", required=True)
    p.add_argument("--target", help="target candidate name")
    p.add_argument("--value", help="regular value, comma-separated")
    p.set_defaults(func=cmd_preimage)

    p = sub.add_parser("graph", parents=[common],
                       help="graph of an equivariant map as a candidate")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("image", parents=[common],
                       help="image of a candidate under an injective immersion")
    p.add_argument("--map", required=True)
    p.add_argument("--candidate", required=True)
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("fibered-product", parents=[common],
                       help="fibered product of two submersions")
    p.add_argument("--left-map", required=True)
    p.add_argument("--right-map", required=True)
    p.set_defaults(func=cmd_fibered)

    p = sub.add_parser("metric-check", parents=[common],
                       help="quotient vs intrinsic metric coincidence")
    p.add_argument("--probe", help="probe name (default: all)")
    p.set_defaults(func=cmd_metric_check)

    p = sub.add_parser("corpus", parents=[common],
                       help="run the built-in example corpus")
    p.add_argument("--filter", help="substring filter on case names")
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SuborbifoldError, DimensionMismatch) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except AssertionError as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
