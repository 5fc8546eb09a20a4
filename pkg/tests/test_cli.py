import json

import pytest

from minap.cli import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, dumps, main, replay_document
from minap.decompose import minap_plan
from minap.textio import parse_descriptor


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_USAGE) == (0, 1, 2, 64)


def test_analyze_z2_plus_z3c(capsys):
    code, out, _ = run(capsys, "analyze", "Z(2) + Z(3)^c")
    assert code == EXIT_NEGATIVE
    assert "MinAP: NO" in out and "index 2" in out and "m=3" in out


def test_analyze_z2_plus_z3c_json(capsys):
    code, out, _ = run(capsys, "analyze", "Z(2) + Z(3)^c", "--json")
    doc = json.loads(out)
    w = doc["result"]["minap"]["witness"]
    assert code == 2 and w == {"kind": "m", "m": 3, "card": "2"}
    assert "minap-iff-zariski-connected" in doc["result"]["minap"]["route"]


def test_analyze_z(capsys):
    code, out, _ = run(capsys, "analyze", "Z")
    assert code == EXIT_OK and "MinAP: YES" in out


def test_plan_matches_module(capsys):
    code, out, _ = run(capsys, "plan", "Z + Z(2)^c", "--json")
    assert code == 0
    assert json.loads(out)["result"]["plan"] == minap_plan(parse_descriptor("Z + Z(2)^c")).to_json()


def test_plan_refusal_is_negative(capsys):
    code, _, _ = run(capsys, "plan", "Z(2)^w + Z(4)")
    assert code == EXIT_NEGATIVE


def test_pvnk(capsys):
    assert run(capsys, "pvnk", "Z(2)^w + Z(4)", "--sub", "G[2]")[0] == EXIT_OK
    assert run(capsys, "pvnk", "Z(2)^w + Z(4)", "--sub", "full")[0] == EXIT_NEGATIVE


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "Z(4^2)"],
        ["analyze", "Foo"],
        ["decompose", "wsplit", "Z(2)^w"],
        ["hm", "divide", "--arc", "1/2", "--eps", "1/2", "--g", "0", "--k", "2"],
        ["hm", "cyclic-sum", "--orders", "2,2,2", "--steps", "1"],
        ["extend", "--factors", "4", "--sub", "1", "--images", "1/2"],
    ],
)
def test_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_ERROR and err.startswith("error:")


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["analyze"], ["decompose", "weird", "Z"], ["hm", "prufer", "--p", "x", "--steps", "1"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_hm_commands(capsys):
    code, out, _ = run(capsys, "hm", "divide", "--arc", "1/2", "--eps", "1/2", "--g", "1: 1/2", "--k", "6")
    assert code == 0 and "h = 1: 1/12" in out
    code, out, _ = run(capsys, "hm", "torsion-divide", "--arc", "1/2", "--eps", "1/4", "--k", "6")
    assert code == 0 and "h = 7/8: 1/6" in out
    code, out, _ = run(capsys, "hm", "prufer", "--p", "2", "--steps", "1")
    assert code == 0 and "g = 1: 1/16" in out
    code, out, _ = run(capsys, "hm", "cyclic-sum", "--orders", "3,4,5,6,7", "--steps", "1", "--first", "1/2,1/4")
    assert code == 0 and "divisor 6, g = 7/8: 1/6" in out


def test_extend_command(capsys):
    code, out, _ = run(capsys, "extend", "--factors", "4", "--sub", "2", "--images", "1/2")
    assert code == 0 and "j'(1) = (1/4, 1/2)" in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"assume_ch": True}))
    code, out, _ = run(capsys, "decompose", "wsplit", "Q^w1 + Z(2)^c", "--config", str(cfg), "--json")
    assert code == 0 and json.loads(out)["args"]["assume_ch"] is True
    assert run(capsys, "decompose", "wsplit", "Q^w1 + Z(2)^c")[0] == EXIT_ERROR


COMMANDS = [
    ["analyze", "Z(2)+Z(3)^c"],
    ["analyze", " Z(12) + Q "],
    ["pvnk", "Z(2)^w + Z(2)^w + Z(4)", "--sub", "G[2]"],
    ["decompose", "nice", "Z(2)^5 + Z(4)^w + Z(8)^w"],
    ["decompose", "wsplit", "Z + Z(2)^c"],
    ["plan", "Z(3^inf) + Z(2)^c"],
    ["hm", "divide", "--arc", "1/2", "--eps", "1/2", "--g", "1/3: 1/2; 1: sqrt2", "--k", "7"],
    ["hm", "torsion-divide", "--arc", "1/3", "--eps", "1/5", "--k", "9", "--eta", "1/3"],
    ["hm", "prufer", "--p", "3", "--steps", "3"],
    ["hm", "cyclic-sum", "--orders", "3,4,5,6,7,8,9,10,11,12", "--steps", "2"],
    ["hm", "audit", "--n", "4", "--p", "2"],
    ["hm", "audit", "--n", "4", "--hds", "QmodZ", "--S", "1/2,1", "--budget", "30"],
    ["extend", "--factors", "2,4", "--sub", "1,2", "--images", "1/2"],
]


@pytest.mark.parametrize("argv", COMMANDS)
def test_certificates_replay(tmp_path, capsys, argv):
    main(argv + ["--json"])
    text = capsys.readouterr().out
    doc = json.loads(text)
    assert dumps(doc) + "\n" == text
    same, new = replay_document(doc)
    assert same and dumps(new) == dumps(doc)
    path = tmp_path / "cert.json"
    path.write_text(text)
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 0 and out.strip() == "replay: identical"


def test_tampered_certificate_mismatch(tmp_path, capsys):
    main(["analyze", "Z(2) + Z(3)^c", "--json"])
    doc = json.loads(capsys.readouterr().out)
    doc["result"]["essential_order"] = 6
    path = tmp_path / "bad.json"
    path.write_text(dumps(doc))
    code, out, _ = run(capsys, "replay", str(path))
    assert code == EXIT_ERROR and out.startswith("replay: MISMATCH")
