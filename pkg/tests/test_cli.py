import json

import numpy as np
import pytest

from relayrates.cli import apply_override, main
from relayrates.sweep import ConfigError


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def discrete_config():
    # three-node noiseless binary chain: Y2 = x1, Y3 = x2
    tab = np.zeros((2, 2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            tab[x1, x2, x1, x2] = 1.0
    return {
        "scenario": "discrete",
        "sweep": {"variable": "k", "start": 1, "stop": 1, "steps": 2},
        "channel": {
            "input_sizes": [2, 2],
            "output_sizes": [2, 2],
            "table": tab.tolist(),
            "inputs": [
                {"u_pmf": [0.5, 0.5], "x_map": [0, 1]},
                {"u_pmf": [0.5, 0.5], "x_map": [0, 1]},
            ],
        },
    }


def test_apply_override_nested_paths():
    cfg = {"channel": {"eta": 2.0}, "strategies": [{"k": 1}]}
    apply_override(cfg, "channel.eta", 4.0)
    apply_override(cfg, "strategies.0.k", 3)
    apply_override(cfg, "sweep.steps", 7)
    assert cfg == {"channel": {"eta": 4.0}, "strategies": [{"k": 3}],
                   "sweep": {"steps": 7}}
    with pytest.raises(ConfigError):
        apply_override(cfg, "strategies.9.k", 1)
    with pytest.raises(ConfigError):
        apply_override(cfg, "strategies.x.k", 1)
    with pytest.raises(ConfigError):
        apply_override(cfg, "channel.eta.deeper", 1)


def test_default_mrc_sweep_writes_csv_and_svg(tmp_path, capsys):
    out = tmp_path / "mrc.csv"
    svg = tmp_path / "mrc.svg"
    code = main([
        "mrc", "--out", str(out), "--svg", str(svg),
        "--set", "sweep.steps=3",
        "--set", "optimizer.budget=500", "--set", "optimizer.rounds=2",
    ])
    assert code == 0
    assert "wrote 3 rows" in capsys.readouterr().out
    assert out.exists() and svg.exists()
    header = out.read_text().splitlines()[0].split(",")
    assert "k2_rate_bits_per_use" in header


def test_validate_subcommand_ok_and_exit_code(tmp_path, capsys):
    cfg = {
        "scenario": "brc",
        "sweep": {"variable": "d12", "start": 0.5, "stop": 2.0, "steps": 3},
        "strategies": [{"which": "onehop"}],
        "channel": {},
    }
    path = write_json(tmp_path / "brc.json", cfg)
    assert main(["validate", "--config", path]) == 0
    assert "config OK: scenario brc" in capsys.readouterr().out


def test_validation_failure_exits_1(tmp_path, capsys):
    path = write_json(tmp_path / "bad.json", {"scenario": "mrc",
                                              "sweep": {}, "strategies": []})
    assert main(["validate", "--config", path]) == 1
    err = capsys.readouterr().err
    assert "config error" in err


def test_scenario_subcommand_mismatch_exits_1(tmp_path, capsys):
    cfg = {
        "scenario": "brc",
        "sweep": {"variable": "d12", "start": 0.5, "stop": 2.0, "steps": 3},
        "strategies": [{"which": "onehop"}],
        "channel": {},
    }
    path = write_json(tmp_path / "brc.json", cfg)
    assert main(["marc", "--config", path]) == 1
    assert "subcommand" in capsys.readouterr().err


def test_missing_config_file_exits_1(tmp_path, capsys):
    assert main(["mrc", "--config", str(tmp_path / "nope.json")]) == 1
    assert "config error" in capsys.readouterr().err


def test_discrete_requires_config(capsys):
    assert main(["discrete"]) == 1
    assert "--config is required" in capsys.readouterr().err


def test_discrete_sweep_runs(tmp_path, capsys):
    path = write_json(tmp_path / "dmc.json", discrete_config())
    out = tmp_path / "dmc.csv"
    assert main(["discrete", "--config", path, "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    vals = lines[1].split(",")
    assert header[:2] == ["k", "rate_bits_per_use"]
    assert float(vals[1]) == pytest.approx(1.0, abs=1e-12)


def test_runtime_error_exits_2(tmp_path, capsys):
    # a resource-capped run: the large scenario rejects huge node counts
    path = write_json(tmp_path / "large.json", {
        "scenario": "large",
        "sweep": {"variable": "node_count", "start": 9000, "stop": 9001,
                  "steps": 2},
        "channel": {"power": 10.0},
    })
    out = tmp_path / "large.csv"
    assert main(["large", "--config", path, "--out", str(out)]) == 2
    assert "runtime error" in capsys.readouterr().err


def test_override_values_are_json_decoded(tmp_path):
    out = tmp_path / "mrc.csv"
    code = main([
        "mrc", "--out", str(out),
        "--set", "sweep.steps=2", "--set", "sweep.log=false",
        "--set", "optimizer.budget=400", "--set", "optimizer.rounds=2",
        "--set", "strategies=" + json.dumps([{"k": 1}]),
    ])
    assert code == 0
    header = out.read_text().splitlines()[0].split(",")
    assert not any(c.startswith("k2_") for c in header)
