"""Declarative scene files and machine-readable report serialization.

A scene is a JSON document naming groups (generator lists), subgroups,
affine subspaces, candidates, equivariant maps and metric probes, plus a
list of queries. Rationals are strings "p/q" (the "/q" may be omitted);
parsing is exact. The machine report format is deterministic JSON with
sorted keys; timing lives under a single "timing" key so reports can be
compared modulo timing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .classify import (
    ClassificationReport,
    EmbeddedResult,
    FullnessWitness,
    SaturationWitness,
    SuborbifoldCandidate,
    Verdict,
    chart_from_group,
)
from .errors import ParseError, UnresolvedName
from .groups import (
    Fingerprint,
    FiniteMatrixGroup,
    GroupHom,
    Subgroup,
    _closure_indices,
    generate_group,
)
from .linalg import (
    AffineSubspace,
    DimensionMismatch,
    affine_subspace,
    mat,
    rat_str,
    vec,
)
from .maps import EquivariantAffineMap
from .metric import MetricProbe, MetricReport


@dataclass
class SceneFile:
    groups: dict[str, FiniteMatrixGroup] = field(default_factory=dict)
    subgroups: dict[str, Subgroup] = field(default_factory=dict)
    subspaces: dict[str, AffineSubspace] = field(default_factory=dict)
    candidates: dict[str, SuborbifoldCandidate] = field(default_factory=dict)
    maps: dict[str, EquivariantAffineMap] = field(default_factory=dict)
    probes: dict[str, MetricProbe] = field(default_factory=dict)
    queries: list[dict] = field(default_factory=list)


def _lookup(table: dict, name: str, kind: str):
    if name not in table:
        raise UnresolvedName(f"unknown {kind} {name!r}")
    return table[name]


def parse_scene(text: str, max_order: int | None = None) -> SceneFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid scene JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError("scene must be a JSON object")
    scene = SceneFile()
    kwargs = {} if max_order is None else {"max_order": max_order}
    try:
        for name, gens in raw.get("groups", {}).items():
            scene.groups[name] = generate_group([mat(g) for g in gens], **kwargs)
        for name, spec in raw.get("subgroups", {}).items():
            parent = _lookup(scene.groups, spec["parent"], "group")
            if "generator_indices" in spec:
                closure = _closure_indices(parent, set(spec["generator_indices"]))
                scene.subgroups[name] = parent.subgroup_from_indices(closure)
            else:
                scene.subgroups[name] = parent.subgroup_from_matrices(
                    [mat(m) for m in spec["generators"]]
                )
        for name, spec in raw.get("subspaces", {}).items():
            scene.subspaces[name] = affine_subspace(
                spec["base"], spec.get("basis", [])
            )
        for name, spec in raw.get("candidates", {}).items():
            group = _lookup(scene.groups, spec["group"], "group")
            if "subgroup" in spec:
                subgroup = _lookup(scene.subgroups, spec["subgroup"], "subgroup")
            else:
                subgroup = group.full_subgroup()
            subspace = _lookup(scene.subspaces, spec["subspace"], "subspace")
            scene.candidates[name] = SuborbifoldCandidate(
                chart_from_group(group), subgroup, subspace
            )
        for name, spec in raw.get("maps", {}).items():
            domain = chart_from_group(
                _lookup(scene.groups, spec["domain"], "group")
            )
            codomain = chart_from_group(
                _lookup(scene.groups, spec["codomain"], "group")
            )
            theta_pairs = dict(tuple(p) for p in spec["theta"])
            if set(theta_pairs) != set(range(domain.group.order)):
                raise ParseError(
                    f"map {name!r}: theta must map every domain element index"
                )
            theta = GroupHom(
                domain.group,
                codomain.group,
                tuple(theta_pairs[i] for i in range(domain.group.order)),
            )
            scene.maps[name] = EquivariantAffineMap(
                domain, codomain, mat(spec["matrix"]), vec(spec["offset"]), theta
            )
        for name, spec in raw.get("probes", {}).items():
            group = _lookup(scene.groups, spec["group"], "group")
            subgroup = _lookup(scene.subgroups, spec["subgroup"], "subgroup")
            subspace = _lookup(scene.subspaces, spec["subspace"], "subspace")
            pairs = tuple((vec(x), vec(y)) for x, y in spec["pairs"])
            scene.probes[name] = MetricProbe(
                group, subgroup, subspace, pairs,
                spec.get("depth", 8), spec.get("tolerance", 1e-9),
            )
        scene.queries = list(raw.get("queries", []))
        for query in scene.queries:
            if "command" not in query:
                raise ParseError(f"query without a command: {query}")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed scene entry: {exc}") from exc
    except DimensionMismatch as exc:
        raise ParseError(str(exc)) from exc
    return scene


# ---------------------------------------------------------------------------
# Report serialization (deterministic, rationals as strings)


def vec_json(v) -> list[str]:
    return [rat_str(x) for x in v]


def mat_json(m) -> list[list[str]]:
    return [[rat_str(x) for x in row] for row in m]


def subspace_json(v: AffineSubspace) -> dict:
    return {
        "ambient_dim": v.ambient_dim,
        "base": vec_json(v.base_point),
        "basis": [vec_json(b) for b in v.basis],
        "dim": v.dim,
    }


def fingerprint_json(fp: Fingerprint) -> dict:
    return {
        "order": fp.order,
        "element_orders": list(fp.element_orders),
        "abelian": fp.abelian,
    }


def subgroup_json(s: Subgroup) -> dict:
    return {"member_indices": list(s.members)}


def witness_json(w) -> dict | None:
    if w is None:
        return None
    if isinstance(w, (SaturationWitness, FullnessWitness)):
        return {
            "element_index": w.element.index,
            "element_matrix": mat_json(w.element.matrix),
            "point": vec_json(w.point),
        }
    return {"detail": str(w)}


def verdict_json(v: Verdict | None) -> dict | None:
    if v is None:
        return None
    return {"holds": v.holds, "witness": witness_json(v.witness)}


def embedded_json(e: EmbeddedResult | None) -> dict | None:
    if e is None:
        return None
    out: dict = {"holds": e.holds, "searched_all_delta": e.searched_all_delta}
    if e.effective_delta is not None:
        out["effective_delta"] = subgroup_json(e.effective_delta)
    if e.certificate is not None:
        out["no_complement_certificate"] = {
            "group_order": e.certificate.group_order,
            "kernel_order": e.certificate.kernel_order,
            "subgroups_checked": e.certificate.subgroups_checked,
        }
    return out


def classification_json(report: ClassificationReport) -> dict:
    return {
        "saturated": verdict_json(report.saturated),
        "full": verdict_json(report.full),
        "embedded": embedded_json(report.embedded),
        "kernel": subgroup_json(report.kernel),
        "isotropy": [
            {"point": vec_json(p), "fingerprint": fingerprint_json(fp)}
            for p, fp in report.induced_isotropy_at
        ],
    }


def candidate_json(cand: SuborbifoldCandidate) -> dict:
    return {
        "ambient_dim": cand.chart.ambient_dim,
        "group_order": cand.chart.group.order,
        "delta": subgroup_json(cand.delta),
        "subspace": subspace_json(cand.v),
    }


def metric_report_json(report: MetricReport) -> dict:
    return {
        "passed": report.passed,
        "max_deviation": report.max_deviation,
        "tolerance": report.tolerance,
        "hint": report.hint,
        "pairs": [
            {
                "x": vec_json(p.x),
                "y": vec_json(p.y),
                "quotient": p.quotient,
                "intrinsic": p.intrinsic,
                "deviation": p.deviation,
            }
            for p in report.pairs
        ],
    }


def dump_machine_report(payload: dict) -> str:
    """Canonical JSON: sorted keys, no float repr surprises beyond repr()."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def strip_timing(payload):
    """Recursively drop timing fields (for byte-identical comparisons)."""
    if isinstance(payload, dict):
        return {
            k: strip_timing(v)
            for k, v in payload.items()
            if k not in ("timing", "seconds", "elapsed_seconds")
        }
    if isinstance(payload, list):
        return [strip_timing(v) for v in payload]
    return payload
