import io
import json
import subprocess
import sys

import pytest

from freecomm.cli import EXIT_FALSE, EXIT_INPUT, EXIT_OK, EXIT_REFUSAL, run
from freecomm.jsonio import from_json


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_word_commands():
    code, body = call_json("word", "reduce", "--word", "a b b^-1 a")
    assert code == EXIT_OK and body["word"] == "a^2"
    code, body = call_json("word", "root", "--word", "a b a b a b")
    assert body["exponent"] == 3 and body["root"]["word"] == "a b"
    code, body = call_json("word", "abel", "--word", "a a b", "--p", "2")
    assert body["vector"] == [0, 1]


def test_dp_command():
    code, text = call("conj", "dp", "--word", "a b a b", "--p", "2", "--text")
    assert code == EXIT_OK and text.strip() == "dp: 1"


def test_subgroup_commands():
    code, body = call_json("sub", "index", "--sub", "a^2; b; a b a^-1")
    assert body == {"index": 2, "rank": 3}
    code, body = call_json("sub", "intersect", "--sub", "a^2; b; a b a^-1", "--sub", "b^2; a; b a b^-1")
    assert (body["index"], body["rank"]) == (4, 5)
    code, _ = call_json("sub", "normal", "--sub", "a; b a^2 b^-1; b^3; b^-1 a b")
    assert code in (EXIT_OK, EXIT_FALSE)
    code, body = call_json("sub", "popen", "--sub", "a^4; b; a b a^-1; a^2 b a^-2; a^3 b a^-3", "--p", "2")
    assert code == EXIT_OK and len(body["chain"]) == 3
    code, body = call_json("sub", "popen", "--sub", "a^3; b; a b a^-1; a^2 b a^-2", "--p", "2")
    assert code == EXIT_FALSE


def test_hom_commands():
    code, body = call_json("hom", "apply", "--images", "a b; b", "--word", "a")
    assert body["word"] == "a b"
    code, body = call_json("hom", "det", "--images", "b; a")
    assert body["det"] == -1
    code, body = call_json("hom", "primitive", "--word", "a b a^-1 b^-1")
    assert code == EXIT_FALSE and body["primitive"] is False


def test_conj_witness_and_impossibility():
    code, body = call_json("conj", "witness", "--source", "a", "--target", "a^2", "--flavor", "commp", "--p", "2")
    assert code == EXIT_OK and body["verified"]
    assert from_json(body).verify()
    code, body = call_json("conj", "witness", "--source", "a^2", "--target", "a^3", "--flavor", "commp", "--p", "2")
    assert code == EXIT_FALSE and body["type"] == "impossibility"


def test_refusal_exit_code():
    code, body = call_json("conj", "bs", "--word", "a b a^-1 b^-1", "--p", "2", "--bound", "0")
    assert code == EXIT_REFUSAL and body["type"] == "refusal"


def test_usage_errors():
    assert call("word", "reduce", "--word", "a c")[0] == EXIT_INPUT
    assert call("word", "reduce")[0] == EXIT_INPUT
    assert call("bogus")[0] == EXIT_INPUT
    assert call("family", "spn", "--p", "3", "--n", "2")[0] == EXIT_INPUT


def test_decompose_pipeline(tmp_path):
    code, body = call_json("comm", "inner", "--word", "a", "--flavor", "commp", "--p", "2")
    src = tmp_path / "inner.json"
    src.write_text(json.dumps(body))
    code, cert = call_json("comm", "decompose", "--p", "2", "--input", str(src))
    assert code == EXIT_OK and cert["type"] == "decomposition"
    dst = tmp_path / "cert.json"
    dst.write_text(json.dumps(cert))
    code, res = call_json("verify", "certificate", "--input", str(dst))
    assert code == EXIT_OK and all(res["verified"].values())


def test_decompose_index_two_fixture(tmp_path):
    fixture = {
        "type": "commensuration",
        "context": ["a", "b"],
        "flavor": "pro-p",
        "p": 2,
        "U": ["a^2", "b", "a b a^-1"],
        "V": ["a^2", "b", "a b a^-1"],
        "images": ["a^2", "a b a^-1", "b"],
    }
    path = tmp_path / "iso.json"
    path.write_text(json.dumps(fixture))
    code, cert = call_json("comm", "decompose", "--p", "2", "--input", str(path), "--saut")
    assert code == EXIT_OK
    assert from_json(cert).check()


@pytest.mark.parametrize("suite,extra", [
    ("det-lemma", ["--d", "2", "--m", "3"]),
    ("r12", ["--d", "2", "--m", "2"]),
    ("nielsen", ["--d", "3"]),
    ("arithmetic", ["--m", "3", "--l", "6"]),
])
def test_verify_suites(suite, extra):
    code, text = call("verify", suite, "--text", *extra)
    assert code == EXIT_OK and ": PASS" in text.splitlines()[0]


def test_family_and_probe():
    code, body = call_json("family", "sm", "--m", "2")
    assert body["size"] == 36 and set(body["dets"]) == {1}
    code, body = call_json("probe", "k1", "--context", "x1 x2 x3", "--word", "x1^4", "--p", "2")
    assert code == EXIT_OK and from_json(body).verify()
    code, body = call_json("probe", "phi", "--p", "3", "--kmax", "2")
    assert code == EXIT_OK and body["passed"]


def test_outputs_reparse():
    for argv in (
        ["sub", "basis", "--sub", "a^2; b"],
        ["comm", "inner", "--word", "a b"],
        ["sub", "core", "--sub", "a; b a b^-1; b^2 a b^-2; b^3"],
        ["hom", "invert", "--images", "a b; b"],
    ):
        code, body = call_json(*argv)
        assert code == EXIT_OK
        from_json(body)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "freecomm", "conj", "dp", "--word", "a^6", "--p", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["dp"] == 3
