import csv
import json

import pytest

from mixbelief.cli import main
from mixbelief.config import ConfigError, build_config, read_config_file
from mixbelief.policy import file_hash, load_policy


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_exploit_grid_has_eleven_rows(tmp_path):
    out = tmp_path / "ex.csv"
    assert main(["exploit", "--lambdas", "0:1:0.1", "--budget", "200", "--out", str(out)]) == 0
    table = rows(out)
    assert table[0] == ["lambda", "br_utility"] and len(table) == 12
    meta = json.loads((tmp_path / "ex.csv.meta.json").read_text())
    assert meta["config"]["budget"] == 200
    for info in meta["policies"].values():
        assert file_hash(info["path"]) == info["sha1"]
        assert info["variation"] < 0.01


def test_policy_subcommand_writes_loadable_file(tmp_path):
    out = tmp_path / "p.policy"
    assert main(["policy", "--algorithm", "ismcts", "--budget", "100", "--schedule", "0.2,0.8", "--seat", "1", "--out", str(out)]) == 0
    pol = load_policy(out)
    assert pol.seat == 1 and pol.metadata["schedule"] == "0.2,0.8" and pol.metadata["algorithm"] == "ismcts"


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("game: liars_dice\nfaces: 3\nbudget: 50\nlambdas: [0.0, 1.0]\n")
    out = tmp_path / "t.csv"
    assert main(["tssr", "--config", str(cfg), "--set", "budget=60", "--seed", "4", "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "t.csv.meta.json").read_text())
    assert meta["config"]["budget"] == 60 and meta["config"]["seed"] == 4 and meta["config"]["faces"] == 3
    assert rows(out)[0] == ["lambda", "avg_tssr", "ci"] and len(rows(out)) == 3


def test_heatmap_and_match_schemas(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["heatmap", "--budget", "50", "--out", str(out)]) == 0
    assert rows(out)[0] == ["lambda0", "lambda1", "br_utility"] and len(rows(out)) == 5
    out = tmp_path / "m.csv"
    assert main(["match", "--faces", "3", "--budget", "100", "--lambdas", "0.0", "--n-games", "1000", "--out", str(out)]) == 0
    table = rows(out)
    assert table[0] == ["lambda", "win_rate", "ci_halfwidth"]
    assert abs(float(table[1][2]) - 0.031) < 0.002


def test_invalid_config_exits_2(tmp_path, capsys):
    assert main(["exploit", "--set", "colour=blue"]) == 2
    assert main(["exploit", "--lambdas", "0,1.5"]) == 2
    assert main(["exploit", "--game", "leduc", "--faces", "3"]) == 2
    assert main(["exploit", "--seat", "2"]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("game: [unclosed\n")
    assert main(["exploit", "--config", str(bad)]) == 2
    nested = tmp_path / "nested.yaml"
    nested.write_text("game:\n  name: leduc\n")
    assert main(["exploit", "--config", str(nested)]) == 2
    assert "invalid config" in capsys.readouterr().err


def test_non_convergence_exits_3(tmp_path):
    code = main(["policy", "--algorithm", "ismcts", "--budget", "10", "--batch-size", "1",
                 "--threshold", "0.000001", "--max-batches", "3", "--out", str(tmp_path / "p.policy")])
    assert code == 3


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MIXBELIEF_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["exploit", "--lambdas", "0", "--budget", "50"]) == 0
    assert (tmp_path / "env" / "exploit.csv").exists()
    assert (tmp_path / "env" / "policies").is_dir()


def test_byte_identical_reruns_any_workers(tmp_path):
    outs = []
    for k, workers in enumerate((1, 1, 2)):
        out = tmp_path / f"r{k}" / "ex.csv"
        args = ["exploit", "--algorithm", "ismcts", "--lambdas", "0,0.5,1", "--budget", "100", "--workers", str(workers), "--out", str(out)]
        assert main(args) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_build_config_defaults_and_types():
    cfg = build_config({"lambdas": "0:0.5:0.25", "first_only": "yes"})
    assert cfg.lambdas == [0.0, 0.25, 0.5] and cfg.first_only is True and cfg.budget == 1000
    with pytest.raises(ConfigError):
        build_config({"budget": 0})
    with pytest.raises(ConfigError):
        build_config({"algorithm": "cfr"})


def test_empty_config_file(tmp_path):
    p = tmp_path / "e.yaml"
    p.write_text("")
    assert read_config_file(p) == {}
