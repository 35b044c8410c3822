from __future__ import annotations

import csv
import dataclasses
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qekr import cli
from qekr.families import section52_subspace_pair


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def _leaves(node, path=()):
    if isinstance(node, dict):
        if set(node) >= {"value", "mode"}:
            yield path, node
            return
        for k, v in node.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _leaves(v, path + (i,))


def test_measure_example(capsys):
    doc = run_json(capsys, "measure", "--q", "2", "--n", "3", "--sigma", "1/8")
    p = doc["payload"]
    assert [layer["Phi"]["value"] for layer in p["layers"]] == ["64/135", "56/135", "14/135", "1/135"]
    assert p["stars"][0]["measure"] == {"value": "1/9", "mode": "exact"}
    assert p["bound"]["value"] == "1/9"
    assert all(c["agrees"] for c in p["cross_checks"].values())
    assert doc["header"]["command"] == "measure" and doc["ok"]


def test_measure_n0(capsys):
    p = run_json(capsys, "measure", "--q", "2", "--n", "0", "--sigma", "1/8")["payload"]
    assert p["layers"][0]["Phi"]["value"] == "1"


def test_measure_real_mode(capsys):
    p = run_json(capsys, "--precision", "128", "measure", "--q", "2", "--n", "3", "--sigma", "0.1", "--real")["payload"]
    assert p["total"]["mode"] == "real@128"


def test_negative_sigma(capsys):
    code, out, err = run(capsys, "measure", "--q", "2", "--n", "3", "--sigma=-1/2")
    assert code == 2 and out == ""
    assert "error: sigma must be positive" in err


def test_usage_errors(capsys):
    assert run(capsys, "measure", "--q", "2")[0] == 2
    assert run(capsys, "measure", "--q", "6", "--n", "2", "--sigma", "1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "--enum-cap", "10", "enumerate", "--q", "2", "--n", "4")
    assert code == 3 and "cap exceeded" in err
    code, _, _ = run(capsys, "--max-vertices", "10", "search", "--q", "2", "--n", "5", "--sigma", "1/64", "--t", "1")
    assert code == 3


def test_invariant_exit_code(capsys, monkeypatch):
    def broken(l, q):
        return dataclasses.replace(section52_subspace_pair(l, q), cross_intersecting=False)

    monkeypatch.setattr(cli, "section52_subspace_pair", broken)
    code, _, err = run(capsys, "counterexample", "--subspace")
    assert code == 4 and "invariant violated" in err


def test_enumerate_hex(capsys):
    code, out, _ = run(capsys, "enumerate", "--q", "2", "--n", "2", "--encoding", "hex")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# ")
    assert lines[1:] == ["-", "10", "11", "01", "10.01"]


def test_enumerate_layer_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--q", "3", "--n", "3", "--k", "1")
    rows = [json.loads(s) for s in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 13


def test_search(capsys):
    p = run_json(capsys, "search", "--q", "2", "--n", "3", "--sigma", "1/16", "--t", "1")["payload"]
    assert p["optimum"]["value"] == "1/17" and p["complete"]
    assert len(p["families"]) == 7


def test_certify_zeros(capsys):
    p = run_json(capsys, "certify", "--q", "2", "--n", "3", "--sigma", "1/8")["payload"]
    assert p["condition"] and p["threshold"]["value"] == "1/8"
    block0 = [e["value"]["value"] for e in p["blocks"][0]["eigenvalues"]]
    assert block0[1:] == ["0", "1/6", "0"]


def test_certify_full(capsys):
    doc = run_json(capsys, "certify", "--q", "2", "--n", "3", "--sigma", "1/16", "--full")
    assert doc["ok"]


def test_certify_fails_above_threshold(capsys):
    code, out, _ = run(capsys, "certify", "--q", "2", "--n", "4", "--sigma", "1/4")
    assert json.loads(out)["payload"]["condition"] is False
    assert code == 0


def test_counterexample(capsys):
    p = run_json(capsys, "counterexample")["payload"]
    assert p["subspace"]["comparison"] == "9 > 7"
    assert p["subsets"]["n"] == 34


def test_limits_csv(capsys):
    code, out, _ = run(capsys, "limits", "--theta", "0.3", "--t", "1", "--q", "2", "--n-max", "16")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# csv-v1 ")
    header = json.loads(lines[0][len("# csv-v1 "):])
    assert header["config"]["precision"] == 512
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert [int(r["n"]) for r in rows] == [10, 12, 14, 16]
    roots = [float(r["star_root"]) for r in rows]
    assert all(b > a for a, b in zip(roots, roots[1:]))


def test_tails_csv(capsys):
    code, out, _ = run(capsys, "tails", "--claim", "cl8", "--theta", "0.3", "--t", "1", "--q", "2", "--n-max", "12")
    assert code == 0 and out.splitlines()[1].startswith("n,")


def test_moments(capsys):
    p = run_json(capsys, "moments", "--theta", "1/2", "--n", "4", "--q", "2")["payload"]
    assert json.dumps(p).count('"exact"') > 0


def test_every_numeric_leaf_has_mode(capsys):
    for argv in (["measure", "--q", "3", "--n", "3", "--sigma", "1/5"],
                 ["certify", "--q", "2", "--n", "3", "--sigma", "1/16", "--full"],
                 ["moments", "--theta", "0.3", "--n", "9", "--q", "2"]):
        doc = run_json(capsys, *argv)
        leaves = list(_leaves(doc["payload"]))
        assert leaves
        for path, leaf in leaves:
            assert leaf["mode"] == "exact" or leaf["mode"].startswith("real@"), path
            if leaf["mode"] == "exact":
                Fraction(leaf["value"])


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["search", "--q", "2", "--n", "3", "--sigma", "1/8", "--t", "1"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    target = tmp_path / "out.json"
    assert cli.main(["--output", str(target)] + argv) == 0
    assert json.loads(target.read_text())["payload"] == json.loads(a)["payload"]


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("QEKR_PRECISION", "96")
    doc = run_json(capsys, "moments", "--theta", "0.3", "--n", "9", "--q", "2")
    assert doc["header"]["config"]["precision"] == 96
    doc = run_json(capsys, "--precision", "80", "moments", "--theta", "0.3", "--n", "9", "--q", "2")
    assert doc["header"]["config"]["precision"] == 80


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qekr", "measure", "--q", "2", "--n", "2", "--sigma", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["payload"]["total"]["value"] == "1"
