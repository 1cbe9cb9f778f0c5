import csv
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gda_lab import (
    BoundMode,
    ConfigError,
    Loss,
    grid_from_values,
    parse_config,
    predict_sweep,
    render_csv,
    run_sweep,
    serialize_config,
)
from gda_lab.cli import main
from gda_lab.experiment import SweepResult
from gda_lab.reports import BOUND_HEADER, SWEEP_HEADER, emit_csv


def test_parse_minimal_sweep_config():
    cfg = parse_config(
        '{"command":"sweep","d":[1],"m_S":[40],"gamma":[0],"runs":1,"master_seed":7}'
    )
    assert cfg.command == "sweep"
    assert cfg.dims == (1,)
    assert cfg.real_counts == (40,)
    assert cfg.gammas == (Fraction(0),)
    assert cfg.runs == 1
    assert cfg.master_seed == 7
    assert cfg.sigma == 0.6
    assert cfg.n_test == 10000
    assert cfg.loss is Loss.NLL


def test_parse_predict_defaults():
    cfg = parse_config('{"command":"predict","d":[1],"m_S":[10],"gamma":[0,1]}')
    assert cfg.mode is BoundMode.PREDICT
    assert cfg.delta == 0.05
    assert cfg.min_cap is False


def test_delta_range_error_names_field():
    with pytest.raises(ConfigError, match="delta"):
        parse_config('{"command":"predict","d":[1],"m_S":[10],"gamma":[0],"delta":1.5}')


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="m_s"):
        parse_config('{"command":"sweep","d":[1],"m_s":[40],"gamma":[0],"master_seed":1}')


def test_misspelled_optional_key_rejected():
    with pytest.raises(ConfigError, match="sigm"):
        parse_config(
            '{"command":"sweep","d":[1],"m_S":[4],"gamma":[0],"master_seed":1,"sigm":0.5}'
        )


def test_missing_required_key():
    with pytest.raises(ConfigError, match="master_seed"):
        parse_config('{"command":"sweep","d":[1],"m_S":[40],"gamma":[0]}')


def test_malformed_json():
    with pytest.raises(ConfigError, match="malformed JSON"):
        parse_config("{not json")


def test_list_element_errors_carry_index():
    with pytest.raises(ConfigError, match=r"gamma\[1\]"):
        parse_config(
            '{"command":"sweep","d":[1],"m_S":[4],"gamma":[0,-2],"master_seed":1}'
        )


def test_type_errors():
    with pytest.raises(ConfigError, match="runs"):
        parse_config(
            '{"command":"sweep","d":[1],"m_S":[4],"gamma":[0],"master_seed":1,"runs":true}'
        )
    with pytest.raises(ConfigError, match="loss"):
        parse_config(
            '{"command":"sweep","d":[1],"m_S":[4],"gamma":[0],"master_seed":1,"loss":"hinge"}'
        )


@pytest.mark.parametrize(
    "text",
    [
        '{"command":"sweep","d":[1,50],"m_S":[10,40],"gamma":[0,0.5,2],"master_seed":3,"runs":7,"loss":"zero-one"}',
        '{"command":"predict","d":[2],"m_S":[10],"gamma":[0,1],"delta":0.25,"mode":"high-prob","min_cap":true}',
        '{"command":"optimal-mg","d":50,"m_S":10,"gamma":[0,1,2,5],"delta":0.05}',
        '{"command":"kl-check","draws":5,"master_seed":11}',
        '{"command":"single-trial","d":1,"m_S":40,"gamma":0.1,"master_seed":2,"trial_index":3}',
    ],
)
def test_round_trip(text):
    cfg = parse_config(text)
    again = parse_config(serialize_config(cfg))
    assert again == cfg


@settings(deadline=None, max_examples=40)
@given(
    seed=st.integers(min_value=0, max_value=(1 << 64) - 1),
    runs=st.integers(min_value=1, max_value=10**6),
    gammas=st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=6),
)
def test_round_trip_property(seed, runs, gammas):
    doc = json.dumps(
        {
            "command": "sweep",
            "d": [1],
            "m_S": [10],
            "gamma": gammas,
            "master_seed": seed,
            "runs": runs,
        }
    )
    cfg = parse_config(doc)
    assert parse_config(serialize_config(cfg)) == cfg


def test_emit_csv_header_only(tmp_path):
    empty = SweepResult(
        rows=(), runs=1, master_seed=0, noise_std=0.6, test_count=100, loss=Loss.NLL
    )
    out = tmp_path / "empty.csv"
    emit_csv(empty, out)
    assert out.read_bytes() == (SWEEP_HEADER + "\n").encode()


def test_emit_csv_single_cell_round_trip(tmp_path):
    grid = grid_from_values([1], [10], [1])
    result = run_sweep(grid, runs=4, master_seed=21, test_count=100)
    out = tmp_path / "one.csv"
    emit_csv(result, out)
    text = out.read_text(encoding="utf-8")
    assert text.endswith("\n") and "\r" not in text
    rows = list(csv.DictReader(text.splitlines()))
    assert len(rows) == 1
    row = rows[0]
    cell = result.rows[0]
    assert int(row["d"]) == 1
    assert int(row["m_S"]) == 10
    assert float(row["gamma"]) == 1.0
    assert int(row["m_G"]) == 10
    assert int(row["runs"]) == 4
    assert float(row["mean_gen_error"]) == cell.mean_gen_error
    assert float(row["std_error"]) == cell.std_error
    assert float(row["mean_train_risk"]) == cell.mean_train_risk
    assert float(row["mean_test_risk"]) == cell.mean_test_risk
    assert int(row["redraw_count"]) == cell.redraw_count


def test_emit_csv_byte_identical_across_repeats_and_workers(tmp_path):
    grid = grid_from_values([1], [8, 12], [0, 1])
    first = run_sweep(grid, runs=5, master_seed=31, test_count=100)
    second = run_sweep(grid, runs=5, master_seed=31, test_count=100, workers=2)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(first, a)
    emit_csv(second, b)
    assert a.read_bytes() == b.read_bytes()


def test_bound_csv_schema(tmp_path):
    grid = grid_from_values([1], [40], [0, 1])
    table = predict_sweep(grid, delta=0.05, mode=BoundMode.PREDICT)
    text = render_csv(table)
    lines = text.splitlines()
    assert lines[0] == BOUND_HEADER
    fields = lines[1].split(",")
    assert fields[-2] == "predict"
    assert fields[-1] == ""  # delta column empty when the value is unused
    high = predict_sweep(grid, delta=0.05, mode=BoundMode.HIGH_PROB)
    assert render_csv(high).splitlines()[1].split(",")[-1] == "0.05"


def test_bound_csv_predict_mode_bytes_ignore_delta():
    grid = grid_from_values([1, 50], [10, 40], [0, 1, 5, 50])
    low = render_csv(predict_sweep(grid, delta=0.01, mode=BoundMode.PREDICT))
    high = render_csv(predict_sweep(grid, delta=0.5, mode=BoundMode.PREDICT))
    assert low == high


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_cli_sweep_end_to_end(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "sweep.json",
        {
            "command": "sweep",
            "d": [1],
            "m_S": [8],
            "gamma": [0, 1],
            "master_seed": 5,
            "runs": 3,
            "n_test": 50,
        },
    )
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == SWEEP_HEADER
    assert len(lines) == 3


def test_cli_sweep_missing_out_is_config_error(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "sweep.json",
        {"command": "sweep", "d": [1], "m_S": [8], "gamma": [0], "master_seed": 5, "runs": 1},
    )
    assert main(["sweep", "--config", str(cfg)]) == 2
    assert "out" in capsys.readouterr().err


def test_cli_command_mismatch(tmp_path, capsys):
    cfg = _write(
        tmp_path, "predict.json", {"command": "predict", "d": [1], "m_S": [8], "gamma": [0]}
    )
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_cli_bad_delta_exit_code(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "predict.json",
        {"command": "predict", "d": [1], "m_S": [8], "gamma": [0], "delta": 1.5},
    )
    assert main(["predict", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2
    assert "delta" in capsys.readouterr().err


def test_cli_predict_and_flags(tmp_path):
    cfg = _write(
        tmp_path,
        "predict.json",
        {"command": "predict", "d": [1, 50], "m_S": [10, 40], "gamma": [0, 1, 5]},
    )
    out = tmp_path / "bounds.csv"
    assert main(["predict", "--config", str(cfg), "--out", str(out), "--mode", "high-prob"]) == 0
    body = out.read_text().splitlines()
    assert body[0] == BOUND_HEADER
    assert all(line.split(",")[-2] == "high-prob" for line in body[1:])


def test_cli_single_trial_json(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "trial.json",
        {"command": "single-trial", "d": 1, "m_S": 20, "gamma": 1, "master_seed": 9},
    )
    assert main(["single-trial", "--config", str(cfg)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"gen_error", "train_risk", "test_risk", "redraws"}
    assert payload["gen_error"] >= 0.0


def test_cli_single_trial_redraw_exhaustion_exit_3(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "trial.json",
        {"command": "single-trial", "d": 1, "m_S": 3, "gamma": 1, "master_seed": 9},
    )
    assert main(["single-trial", "--config", str(cfg)]) == 3
    assert "runtime abort" in capsys.readouterr().err


def test_cli_optimal_mg(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "opt.json",
        {"command": "optimal-mg", "d": 50, "m_S": 10, "gamma": [0, 1, 2, 5, 10, 20, 50]},
    )
    out = tmp_path / "grid.csv"
    assert main(["optimal-mg", "--config", str(cfg), "--out", str(out)]) == 0
    captured = capsys.readouterr().out
    payload = json.loads(captured.splitlines()[0])
    assert payload["gamma"] == 0.0
    assert out.exists()


def test_cli_kl_check(tmp_path, capsys):
    cfg = _write(tmp_path, "kl.json", {"command": "kl-check", "draws": 3, "master_seed": 1})
    assert main(["kl-check", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "3/3 draws passed" in out


def test_cli_reproduce_predict_panel(tmp_path):
    out = tmp_path / "fig1c.csv"
    assert main(["reproduce", "fig1c", "--out", str(out)]) == 0
    assert out.exists()
    assert out.with_suffix(".png").exists()
    header = out.read_text().splitlines()[0]
    assert header == BOUND_HEADER


def test_cli_reproduce_truth_panel_small(tmp_path):
    out = tmp_path / "fig1b.csv"
    assert main(["reproduce", "fig1b", "--out", str(out), "--runs", "2"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == SWEEP_HEADER
    assert len(lines) == 8  # 7 gamma presets
    assert out.with_suffix(".png").exists()


def test_cli_workers_env_fallback(tmp_path, monkeypatch):
    cfg = _write(
        tmp_path,
        "sweep.json",
        {
            "command": "sweep",
            "d": [1],
            "m_S": [6],
            "gamma": [0],
            "master_seed": 5,
            "runs": 2,
            "n_test": 40,
        },
    )
    out = tmp_path / "sweep.csv"
    monkeypatch.setenv("GDA_LAB_WORKERS", "2")
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    monkeypatch.setenv("GDA_LAB_WORKERS", "zero")
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 2


def test_cli_seed_override_changes_output(tmp_path):
    cfg = _write(
        tmp_path,
        "sweep.json",
        {
            "command": "sweep",
            "d": [1],
            "m_S": [6],
            "gamma": [0],
            "master_seed": 5,
            "runs": 2,
            "n_test": 40,
        },
    )
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out_a)]) == 0
    assert main(["sweep", "--config", str(cfg), "--out", str(out_b), "--seed", "6"]) == 0
    assert out_a.read_bytes() != out_b.read_bytes()
