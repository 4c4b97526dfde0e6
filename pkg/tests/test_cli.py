import io
import json

import pytest

from tropaz import jsonio
from tropaz.cli import run

from conftest import FIXTURES

EX1 = str(FIXTURES / "ex1.json")
UNIFORM = str(FIXTURES / "uniform.json")


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, (jsonio.loads(buf.getvalue()) if buf.getvalue() else None)


def test_arctic_segment():
    code, doc = call("arctic", "--config", EX1)
    assert code == 0
    segs = [s for s in doc["data"]["segments"] if s["a"] != s["b"]]
    assert len(segs) == 1
    assert {tuple(segs[0]["a"]), tuple(segs[0]["b"])} == {("0", "-1"), ("-1", "0")}


def test_check_passes():
    code, doc = call("check", "--config", EX1, "--samples", "50")
    assert code == 0
    assert doc["data"]["passed"]
    assert len(doc["data"]["suites"]) == 13


def test_uniform_tension_warns_and_curve_fails(capsys):
    code, doc = call("tension", "--config", UNIFORM)
    assert code == 0
    assert all(e["estar"] == "0" for e in doc["data"]["table"])
    assert "NotSmooth" in doc["data"]["warning"]
    assert call("curve", "--config", UNIFORM)[0] == 3
    assert call("check", "--config", UNIFORM)[0] == 3
    assert "NotSmooth" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus", "--config", EX1],
        ["tension"],
        ["tension", "--config", "/nonexistent.json"],
        ["gibbs", "--config", EX1, "--mu", "1", "--edges", "0,0,S"],
        ["limitshape", "--config", EX1, "--grid", "1x9"],
        ["ronkin", "--config", EX1, "--beta", "2", "--xy", "5,5", "--nodes", "100"],
    ],
)
def test_validation_errors(argv):
    assert call(*argv)[0] == 2


def test_guard_violation():
    assert call("aztec-marginals", "--config", EX1, "--N", "60", "--beta", "1")[0] == 3


def test_negative_values_parse():
    code, doc = call("gibbs", "--config", EX1, "--mu", "-1,0", "--edges", "0,0,S")
    assert code == 0
    assert doc["data"]["marginals"][0]["p"] == "1"


def test_gibbs_beta_anchor():
    code, doc = call("gibbs-beta", "--config", EX1, "--edge", "0,0,S", "--beta", "12", "--mu", "-1,0", "--nodes", "32")
    assert code == 0
    assert abs(float(doc["data"]["result"]["probability"]) - 1) < 1e-3


def test_precision_env(monkeypatch):
    monkeypatch.setenv("TROPAZ_PRECISION_BITS", "80")
    code, doc = call("ronkin", "--config", EX1, "--beta", "2", "--xy", "5,5", "--nodes", "16")
    assert code == 0
    assert doc["manifest"]["precision_bits"] == 80
    assert doc["data"]["bits"] == 80


def test_limitshape_grid():
    code, doc = call("limitshape", "--config", EX1, "--grid", "3x3")
    assert doc["data"]["values"] == [["1", "1", "1"], ["1", "1", "1/2"], ["1", "1/2", "0"]]


def test_every_document_has_manifest_hash(tmp_path):
    cmds = [
        ["tension"], ["subdivision"], ["curve"], ["kirchhoff"], ["arctic"],
        ["aztec-marginals", "--N", "1", "--beta", "3"],
        ["aztec-height", "--N", "2", "--beta", "3"],
        ["sample", "--N", "2", "--beta", "1", "--seed", "3"],
    ]
    for argv in cmds:
        code, doc = call(argv[0], "--config", EX1, *argv[1:])
        assert code == 0
        assert doc["schema"] == "tropaz/1"
        assert doc["manifest_hash"] == jsonio.RunManifest(**doc["manifest"]).digest()


@pytest.mark.parametrize(
    "argv",
    [
        ["curve"],
        ["arctic"],
        ["limitshape", "--grid", "4x4"],
        ["sample", "--N", "3", "--beta", "1", "--seed", "11"],
        ["subdivision"],
    ],
)
def test_bytes_are_deterministic(tmp_path, argv):
    outs = []
    for _ in range(2):
        svg, out = tmp_path / "pic.svg", tmp_path / "doc.json"
        assert run([argv[0], "--config", EX1, *argv[1:], "--svg", str(svg), "--out", str(out)]) == 0
        outs.append((svg.read_bytes(), out.read_bytes()))
    assert outs[0] == outs[1]
    assert b"manifest_hash" in outs[0][0]


def test_render_object(tmp_path):
    svg = tmp_path / "a.svg"
    assert run(["render", "--config", EX1, "--object", "arctic", "--svg", str(svg)], stdout=io.StringIO()) == 0
    text = svg.read_text()
    assert text.count('class="segment"') == 1
    assert 'class="domain"' in text


def test_out_file(tmp_path):
    out = tmp_path / "t.json"
    assert run(["tension", "--config", EX1, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["kind"] == "tension"
