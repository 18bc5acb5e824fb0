import csv
import os

import pytest

from momlab.cli import main
from momlab.config import dump_config, parse_config
from momlab.errors import ConfigError
from momlab.svg import render_loglog_svg

MINIMAL = """\
# minimal sweep
label = mini
dist = gaussian(0, 1)
estimator = mom(rule=heavy_tail(3))
alpha_grid = 0.01, 0.02, 0.04
n = 1500
n_rep = 20
seed = 11
"""


def run_cli(*argv):
    return main(list(argv))


def test_sweep_minimal_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(MINIMAL)
    assert run_cli("sweep", str(cfg), "--out", str(tmp_path / "out")) == 0
    with open(tmp_path / "out" / "results.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    assert rows[0]["label"] == "mini"
    assert rows[0]["master_seed"] == "11"


def test_sweep_unknown_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.txt"
    cfg.write_text("dist = gaussian(0, 1)\nfooo = 1\n")
    assert run_cli("sweep", str(cfg)) == 2
    assert "unknown key" in capsys.readouterr().err


def test_sweep_hypothesis_violation_exits_3(tmp_path, capsys):
    cfg = tmp_path / "hyp.txt"
    cfg.write_text(
        "dist = gaussian(0, 1)\nestimator = mom(rule=heavy_tail(3))\n"
        "alpha_grid = 0.41, 0.45\nn = 1000\n"
    )
    assert run_cli("sweep", str(cfg)) == 3
    assert "Theorem 3.2 requires alpha <= 0.4" in capsys.readouterr().err


def test_config_round_trip():
    config = parse_config(MINIMAL + "attack = arbitrary_large(1e9, -)\nestimator = catoni(scale=auto, delta=0.1)\n")
    dumped = dump_config(config)
    assert parse_config(dumped) == config
    assert dump_config(parse_config(dumped)) == dumped


def test_dump_config_flag(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(MINIMAL)
    assert run_cli("sweep", str(cfg), "--dump-config") == 0
    text = capsys.readouterr().out
    assert parse_config(text) == parse_config(MINIMAL)


def test_config_logspace_and_errors():
    config = parse_config("dist = t(3)\nalpha_grid = logspace(0.001, 0.05, 12)\n")
    assert len(config.alpha_grid) == 12
    assert config.alpha_grid[0] == pytest.approx(0.001)
    with pytest.raises(ConfigError):
        parse_config("dist = dirichlet(3)\n")
    with pytest.raises(ConfigError):
        parse_config("dist = gaussian(0, 1)\nestimator = mom()\n")
    with pytest.raises(ConfigError):
        parse_config("n = 100\n")  # dist missing
    with pytest.raises(ConfigError):
        parse_config("dist = gaussian(0, 1)\nemit_svg = yes\n")


def test_env_seed_override(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(MINIMAL)
    monkeypatch.setenv("MOMLAB_SEED", "777")
    assert run_cli("sweep", str(cfg), "--out", str(tmp_path / "out")) == 0
    with open(tmp_path / "out" / "results.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["master_seed"] == "777"


def test_figure_unknown_id_exits_2(tmp_path, capsys):
    assert run_cli("figure", "9", "--out", str(tmp_path)) == 2


def test_figure_tiny_scale_writes_artifacts(tmp_path, capsys):
    assert run_cli("figure", "1a", "--scale", "0.001", "--out", str(tmp_path)) == 0
    assert (tmp_path / "results.csv").exists()
    assert (tmp_path / "figure-1a.svg").exists()
    with open(tmp_path / "slopes.csv") as fh:
        slopes = list(csv.DictReader(fh))
    assert {row["estimator"].split("(")[0] for row in slopes} == {"mom", "trimmed", "catoni"}


def test_bound_command_output(capsys):
    assert run_cli(
        "bound", "--theorem", "3.2", "--n", "1000000", "--alpha", "0.01",
        "--delta", "0.05", "--gamma", "2.5", "--sigma", "1",
    ) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "theorem,n,alpha,delta,params,constant,value,regime"
    fields = out[1].split(",")
    assert fields[0] == "3.2"
    assert float(fields[6]) == pytest.approx(13.794, abs=0.01)
    assert fields[7] == "bias_term_dominant"


def test_bound_command_missing_params_exits_2(capsys):
    assert run_cli("bound", "--theorem", "3.3", "--n", "100", "--alpha", "0.0", "--delta", "0.1") == 2


def test_bound_hypothesis_exit_3(capsys):
    code = run_cli(
        "bound", "--theorem", "3.2", "--n", "1000000", "--alpha", "0.45",
        "--delta", "0.05", "--gamma", "2.5", "--sigma", "1",
    )
    assert code == 3


def test_verify_invariants_suite(tmp_path, capsys):
    assert run_cli("verify", "invariants", "--out", str(tmp_path)) == 0
    with open(tmp_path / "verify.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert all(row["passed"] == "pass" for row in rows)
    assert {"suite", "check", "anchor", "measured", "comparison", "threshold", "passed"} == set(rows[0])


def test_svg_deterministic_bytes():
    curves = {"a:mom": [(0.01, 0.1), (0.02, 0.15), (0.04, 0.22)]}
    one = render_loglog_svg(curves, "t", 0.5, "0.1.0")
    two = render_loglog_svg(curves, "t", 0.5, "0.1.0")
    assert one == two
    assert one.startswith("<svg ")
    assert "stroke-dasharray" in one
    changed = render_loglog_svg(curves, "t", 0.5, "0.2.0")
    assert changed != one
