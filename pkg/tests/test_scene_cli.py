"""Scene parsing and CLI behavior: errors, exit codes, determinism,
witness replay from machine reports."""
import json

import pytest

from suborbifolds.cli import main
from suborbifolds.errors import ParseError, UnresolvedName
from suborbifolds.linalg import mat, mat_vec, rat, vec, contains_point
from suborbifolds.scene import parse_scene, strip_timing

SCENE = {
    "groups": {
        "rot4": [[[0, -1], [1, 0]]],
    },
    "subgroups": {
        "half_turn": {"parent": "rot4", "generators": [[[-1, 0], [0, -1]]]},
        "trivial": {"parent": "rot4", "generator_indices": []},
    },
    "subspaces": {
        "x_axis": {"base": [0, 0], "basis": [[1, 0]]},
        "origin": {"base": [0, 0]},
    },
    "candidates": {
        "rotation_line": {
            "group": "rot4", "subgroup": "half_turn", "subspace": "x_axis"
        },
        "bad_line": {
            "group": "rot4", "subgroup": "trivial", "subspace": "x_axis"
        },
        "origin_point": {"group": "rot4", "subspace": "origin"},
    },
    "probes": {
        "line_probe": {
            "group": "rot4", "subgroup": "half_turn", "subspace": "x_axis",
            "pairs": [[["1/2", 0], [-1, 0]], [[0, 0], [3, 0]]],
        }
    },
    "queries": [{"command": "classify", "candidate": "rotation_line"}],
}


@pytest.fixture
def scene_path(tmp_path):
    p = tmp_path / "scene.json"
    p.write_text(json.dumps(SCENE))
    return str(p)


def test_parse_scene_builds_objects():
    scene = parse_scene(json.dumps(SCENE))
    assert scene.groups["rot4"].order == 4
    assert scene.subgroups["half_turn"].order == 2
    assert scene.subgroups["trivial"].order == 1
    assert scene.candidates["rotation_line"].v.dim == 1
    assert scene.candidates["origin_point"].delta.order == 4
    assert len(scene.probes["line_probe"].sample_pairs) == 2
    assert scene.queries[0]["command"] == "classify"
    # rationals round-trip exactly
    x, _ = scene.probes["line_probe"].sample_pairs[0]
    assert x == vec(["1/2", 0])


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_scene("{not json")
    assert "line" in str(err.value)


def test_parse_error_on_malformed_entry():
    bad = {"groups": {"g": [[[1, 0], [0, 1]]]},
           "subspaces": {"v": {"basis": [[1, 0]]}}}  # missing base
    with pytest.raises(ParseError):
        parse_scene(json.dumps(bad))


def test_unresolved_name():
    bad = {"groups": {}, "subgroups": {"s": {"parent": "nope",
                                             "generator_indices": []}}}
    with pytest.raises(UnresolvedName):
        parse_scene(json.dumps(bad))


def test_theta_must_cover_domain():
    bad = {
        "groups": {"a": [[[-1]]], "b": [[[1]]]},
        "maps": {"f": {"domain": "a", "codomain": "b",
                       "matrix": [[0]], "offset": [0],
                       "theta": [[0, 0]]}},
    }
    with pytest.raises(ParseError):
        parse_scene(json.dumps(bad))


def test_cli_classify_exit_codes(scene_path, capsys):
    assert main(["classify", "--scene", scene_path,
                 "--candidate", "rotation_line"]) == 0
    out = capsys.readouterr().out
    assert "saturated: yes" in out and "full: no" in out

    assert main(["classify", "--scene", scene_path,
                 "--candidate", "missing"]) == 2
    assert main(["classify", "--scene", "/does/not/exist.json"]) == 2


def test_cli_corpus_ok(capsys):
    assert main(["corpus"]) == 0
    out = capsys.readouterr().out
    assert "0 mismatches" in out
    assert main(["corpus", "--parallel", "4"]) == 0


def test_cli_metric_check(capsys):
    assert main(["metric-check"]) == 0
    assert main(["metric-check", "--depth", "4", "--tol", "1e-30"]) == 1


def test_machine_report_deterministic(scene_path, capsys):
    outputs = []
    for _ in range(2):
        assert main(["classify", "--scene", scene_path,
                     "--format", "machine"]) == 0
        payload = json.loads(capsys.readouterr().out)
        outputs.append(json.dumps(strip_timing(payload), sort_keys=True))
    assert outputs[0] == outputs[1]


def test_machine_witness_replays(scene_path, capsys):
    assert main(["classify", "--scene", scene_path,
                 "--candidate", "rotation_line", "--format", "machine"]) == 0
    payload = json.loads(capsys.readouterr().out)
    result = payload["results"]["rotation_line"]["classification"]
    witness = result["full"]["witness"]
    m = mat([[rat(x) for x in row] for row in witness["element_matrix"]])
    p = vec([rat(x) for x in witness["point"]])
    # the reported element really fixes the reported point of the subspace
    assert mat_vec(m, p) == p
    sub = payload["results"]["rotation_line"]["candidate"]["subspace"]
    from suborbifolds.linalg import affine_subspace

    v = affine_subspace([rat(x) for x in sub["base"]],
                        [[rat(x) for x in b] for b in sub["basis"]])
    assert contains_point(v, p)
    assert witness["element_index"] not in (
        payload["results"]["rotation_line"]["candidate"]["delta"]
        ["member_indices"]
    )


def test_machine_saturation_witness_replays(scene_path, capsys):
    assert main(["classify", "--scene", scene_path,
                 "--candidate", "bad_line", "--format", "machine"]) == 0
    payload = json.loads(capsys.readouterr().out)
    result = payload["results"]["bad_line"]["classification"]
    assert result["saturated"]["holds"] is False
    witness = result["saturated"]["witness"]
    m = mat([[rat(x) for x in row] for row in witness["element_matrix"]])
    p = vec([rat(x) for x in witness["point"]])
    # gx lies in the subspace but differs from hx for the only h available
    gx = mat_vec(m, p)
    assert gx != p


def test_cli_isotropy(scene_path, capsys):
    assert main(["isotropy", "--scene", scene_path,
                 "--candidate", "rotation_line", "--point", "0,0"]) == 0
    assert "order 2" in capsys.readouterr().out
    assert main(["isotropy", "--scene", scene_path,
                 "--group", "rot4", "--point", "1,0"]) == 0
    assert "order 1" in capsys.readouterr().out
    # a point off the subspace is an input error
    assert main(["isotropy", "--scene", scene_path,
                 "--candidate", "rotation_line", "--point", "0,1"]) == 2


def test_cli_report_file(scene_path, tmp_path, capsys):
    report = tmp_path / "out.json"
    assert main(["classify", "--scene", scene_path, "--format", "machine",
                 "--report", str(report)]) == 0
    on_disk = report.read_text()
    assert on_disk == capsys.readouterr().out
    json.loads(on_disk)


def test_cli_metric_check_scene_probe(scene_path, capsys):
    assert main(["metric-check", "--scene", scene_path,
                 "--probe", "line_probe"]) == 0
    assert "PASS" in capsys.readouterr().out
