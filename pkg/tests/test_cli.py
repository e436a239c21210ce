import json

import pytest

from holocode.circuit_synth import partial_recovery_check
from holocode.circuits import CliffordCircuit
from holocode.cli import main
from holocode.graph_code import LogicalSet
from holocode.happy_network import preset
from holocode.pipeline import random_inputs

from . import reference as ref


def _run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_fidelity(capsys):
    rc, out, _ = _run(capsys, "fidelity", "--n1", 12, "--n2", 28, "--f1", "0.99994:0.00003", "--f2", "0.9981:0.0003")
    assert rc == 0 and out.strip() == "0.947 ± 0.008"
    rc, out, _ = _run(
        capsys, "fidelity", "--n1", 24, "--n2", 44, "--nm", 12,
        "--f1", "0.99994:0.00003", "--f2", "0.9981:0.0003", "--fm", "0.9972:0.0005",
    )
    assert out.strip() == "0.88 ± 0.02"


def test_verify_ame(capsys):
    rc, out, _ = _run(capsys, "verify", "--suite", "ame")
    assert rc == 0 and "20/20" in out and out.strip().endswith("PASS")


def test_verify_rt_entropy(capsys):
    rc, out, _ = _run(capsys, "verify", "--suite", "rt-entropy", "--trials", 3)
    assert rc == 0 and "S(dE) = 3.000000" in out


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["build", "--layout", "happy12", "--out", str(d / "state.json")]) == 0
    assert main(["graphify", "--in", str(d / "state.json"), "--hadamard", "3,6,9,12",
                 "--out", str(d / "graph.json"), "--record", str(d / "rec.json")]) == 0
    assert main(["extract", "--graph", str(d / "graph.json"), "--bulk", "A,B,C,D",
                 "--reduce-weight", "--out", str(d / "logicals.txt")]) == 0
    assert main(["encode", "--code", str(d / "graph.json"), "--out", str(d / "enc.txt")]) == 0
    (d / "region.json").write_text(json.dumps({"layout": "happy12", "region": "ab"}))
    assert main(["decode-partial", "--full", str(d / "graph.json"), "--region", str(d / "region.json"),
                 "--out", str(d / "dec.txt")]) == 0
    return d


def test_pipeline_outputs(pipeline):
    g = json.loads((pipeline / "graph.json").read_text())
    assert len(g["edges"]) == 48
    assert json.loads((pipeline / "rec.json").read_text()) == {"hadamard": [6, 9, 12, 15], "z": [0, 1, 2, 3]}
    ls = LogicalSet.from_text((pipeline / "logicals.txt").read_text())
    assert [r.to_string() for r in ls.logical_z] == ref.LOGICAL_Z_MIN
    enc = CliffordCircuit.from_text((pipeline / "enc.txt").read_text())
    dec = CliffordCircuit.from_text((pipeline / "dec.txt").read_text())
    region = preset("happy12").regions["ab"]
    for phi in random_inputs(ref.BULK, 2, seed=1):
        assert partial_recovery_check(enc, dec, phi, region.bulk) < 1e-10


def test_optimize(pipeline, capsys):
    out = pipeline / "opt.json"
    rc, _, err = _run(capsys, "optimize", "--in", pipeline / "graph.json", "--budget", 500, "--out", out)
    assert rc == 0 and "edges 48 -> 48" in err
    assert "local" in json.loads(out.read_text())


def test_deterministic(pipeline, tmp_path):
    assert main(["build", "--layout", "happy12", "--out", str(tmp_path / "state.json")]) == 0
    assert (tmp_path / "state.json").read_bytes() == (pipeline / "state.json").read_bytes()
    assert main(["encode", "--code", str(pipeline / "graph.json"), "--out", str(tmp_path / "enc.txt")]) == 0
    assert (tmp_path / "enc.txt").read_bytes() == (pipeline / "enc.txt").read_bytes()


def test_dot_export(pipeline, tmp_path):
    assert main(["graphify", "--in", str(pipeline / "state.json"), "--out", str(tmp_path / "g.dot")]) == 0
    assert (tmp_path / "g.dot").read_text().startswith("graph G {")


def test_bad_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "state": [1, 2,\n}\n')
    rc, _, err = _run(capsys, "graphify", "--in", bad)
    assert rc == 2
    assert f"{bad}:3:" in err


def test_missing_file_and_preset(capsys):
    assert _run(capsys, "graphify", "--in", "/nonexistent.json")[0] == 2
    assert _run(capsys, "build", "--layout", "nope")[0] == 2


def test_decoder_needs_local(pipeline, tmp_path, capsys):
    data = json.loads((pipeline / "graph.json").read_text())
    del data["local"]
    plain = tmp_path / "plain.json"
    plain.write_text(json.dumps(data))
    rc, _, err = _run(capsys, "decode-partial", "--full", plain, "--region", pipeline / "region.json")
    assert rc == 2 and "local" in err
