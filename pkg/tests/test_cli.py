import json
import os
import subprocess
import sys

import pytest

from qnetcode.cli import CSV_HEADER, main


def _kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines() if "=" in line)


@pytest.fixture
def inputs(tmp_path):
    def make(n):
        p = tmp_path / f"in{n}.json"
        p.write_text(json.dumps([{"theta": 0.3 + 0.4 * i, "phi": 0.7 * i} for i in range(n)]))
        return str(p)

    return make


def test_run_epr_k3(inputs, tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["run", "--k", "3", "--resource", "epr", "--perm", "cyclic", "--inputs", inputs(3), "--out", str(out)])
    assert code == 0
    kv = _kv(capsys.readouterr().out)
    assert kv["bottleneck_bits"] == "4"
    assert all(abs(float(f) - 1) < 1e-9 for f in kv["fidelities"].split(","))
    doc = json.loads(out.read_text())
    assert doc["manifest"]["command"] == "run"
    assert doc["manifest"]["input_digest"].startswith("sha256:")
    assert doc["result"]["bottleneck_bits"] == 4


def test_run_ghz_swap(inputs, tmp_path, capsys):
    code = main(["run", "--k", "2", "--resource", "ghz", "--perm", "swap", "--inputs", inputs(2), "--out", str(tmp_path / "g.json")])
    assert code == 0
    assert _kv(capsys.readouterr().out)["bottleneck_bits"] == "2"


def test_run_fixed_point_names_index(inputs, capsys):
    assert main(["run", "--k", "3", "--perm", "1,3,2", "--inputs", inputs(3)]) == 1
    assert "target 1" in capsys.readouterr().err


def test_run_passthrough(inputs, capsys):
    assert main(["run", "--k", "3", "--perm", "identity", "--passthrough", "--inputs", inputs(3)]) == 0
    assert _kv(capsys.readouterr().out)["bottleneck_bits"] == "0"


@pytest.mark.parametrize(
    "content",
    ['[{"theta": 90, "phi": 0}, {"theta": 0.1}]', '[{"theta_deg": 1.0}]', "not json", '{"theta": 1}'],
)
def test_run_bad_inputs(tmp_path, content, capsys):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert main(["run", "--k", "2", "--perm", "swap", "--inputs", str(p)]) == 1


def test_run_sample_is_reproducible(inputs, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        main(["run", "--k", "2", "--perm", "swap", "--inputs", inputs(2), "--sample", "4", "--seed", "3", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["result"]["samples"]) == 4


def test_sweep_row_and_header(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--theta-steps", "181", "--phi-steps", "1", "--phi", "0", "--c3", "0", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 182
    row = dict(zip(CSV_HEADER, lines[1 + 90].split(",")))
    assert float(row["theta"]) == pytest.approx(1.5707963267949)
    assert float(row["fidelity_eq21"]) == pytest.approx(1.0, abs=1e-12)
    assert row["physical"] == "true"
    manifest = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    assert manifest["command"] == "sweep"


def test_sweep_unphysical_requires_flag(tmp_path):
    out = tmp_path / "s.csv"
    args = ["sweep", "--theta-steps", "5", "--phi-steps", "3", "--c3", "0.5", "--out", str(out)]
    assert main(args) == 2
    assert not out.exists()
    assert main(args + ["--allow-unphysical"]) == 0
    rows = out.read_text().splitlines()[1:]
    assert rows and all(r.endswith(",false") for r in rows)


def test_sweep_input_errors(tmp_path):
    assert main(["sweep", "--theta-steps", "1", "--out", str(tmp_path / "x.csv")]) == 1
    assert main(["sweep", "--c3", "2", "--out", str(tmp_path / "x.csv")]) == 1
    assert main(["sweep", "--theta-steps", "3", "--out", str(tmp_path / "missing" / "x.csv")]) == 1


def test_sweep_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["sweep", "--theta-steps", "13", "--phi-steps", "7", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("c, d", [(("1", "-1", "1"), 1.0), (("0", "0", "0"), 0.0)])
def test_discord_values(c, d, capsys):
    assert main(["discord", "--c1", c[0], "--c2", c[1], "--c3", c[2]]) == 0
    assert float(_kv(capsys.readouterr().out)["discord"]) == pytest.approx(d, abs=1e-4)


def test_discord_both_agree(capsys):
    assert main(["discord", "--c1", "1", "--c2", "0", "--c3", "0", "--method", "both"]) == 0
    captured = capsys.readouterr()
    assert float(_kv(captured.out)["max_disagreement"]) < 1e-4
    assert "warning" not in captured.err


def test_discord_unphysical_exit_2(capsys):
    assert main(["discord", "--c1", "1", "--c2", "1", "--c3", "1", "--method", "closed"]) == 2
    assert main(["discord", "--c1", "1.5"]) == 1


def test_validate(tmp_path, capsys):
    assert main(["validate", "--c1", "1"]) == 0
    kv = _kv(capsys.readouterr().out)
    assert kv["physical"] == "true" and kv["ppt_separable"] == "true"
    assert main(["validate", "--c1", "1", "--c2", "0.5", "--c3", "0.5"]) == 2
    assert main(["validate", "--c1", "1", "--c2", "0.5", "--c3", "0.5", "--allow-unphysical"]) == 0


def test_validate_topology(tmp_path, capsys):
    good = tmp_path / "t.json"
    good.write_text(json.dumps({
        "nodes": [{"id": "a"}, {"id": "b"}],
        "edges": [{"from": "a", "to": "b", "kind": "classical", "capacity": 2}],
        "bottleneck": 0,
    }))
    assert main(["validate", "--topology", str(good)]) == 0
    assert _kv(capsys.readouterr().out)["bottleneck"] == "a->b"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "nodes": [{"id": "a"}, {"id": "b"}],
        "edges": [
            {"from": "a", "to": "b", "kind": "classical", "capacity": 2},
            {"from": "b", "to": "a", "kind": "classical", "capacity": 2},
        ],
        "bottleneck": 0,
    }))
    assert main(["validate", "--topology", str(bad)]) == 1
    assert "edges[" in capsys.readouterr().err


def test_butterfly_cli(tmp_path, capsys):
    out = tmp_path / "b.json"
    assert main(["butterfly-discord", "--out", str(out)]) == 0
    kv = _kv(capsys.readouterr().out)
    assert float(kv["fidelity_1"]) == pytest.approx(1) and kv["bottleneck_bits"] == "2"
    assert json.loads(out.read_text())["manifest"]["command"] == "butterfly-discord"
    assert main(["butterfly-discord", "--ch1", "1,1,1"]) == 2
    assert main(["butterfly-discord", "--theta1", "200"]) == 1


def test_usage_error_is_exit_1():
    assert main(["nope"]) == 1
    assert main(["run"]) == 1


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    out = subprocess.run(
        [sys.executable, "-m", "qnetcode", "discord", "--c1", "0.5"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert out.returncode == 0
    assert "discord=" in out.stdout


def test_validate_topology_only_skips_channel_report(tmp_path, capsys):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({
        "nodes": [{"id": "a"}, {"id": "b"}],
        "edges": [{"from": "a", "to": "b", "kind": "quantum", "capacity": 1}],
        "bottleneck": 0,
    }))
    assert main(["validate", "--topology", str(p)]) == 0
    assert "physical" not in _kv(capsys.readouterr().out)


def test_stdout_is_key_value_only(inputs, capsys):
    assert main(["run", "--k", "2", "--perm", "swap", "--inputs", inputs(2)]) == 0
    for line in capsys.readouterr().out.splitlines():
        assert "=" in line
