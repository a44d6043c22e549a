import json
import re

import pytest

from memcrit.cli import OUTPUT_ENV, main
from memcrit.devices import MODEL_IDS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_models(capsys):
    code, out, _ = run(capsys, "list-models")
    assert code == 0
    assert out.split() == list(MODEL_IDS)
    assert len(MODEL_IDS) == 8


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["sweep", "--rate", "fast"], ["sweep", "--param", "noequals"],
    ["kinetics", "--threshold-rule", "median"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "usage" in err


@pytest.mark.parametrize("argv", [
    ["sweep", "--model", "linear", "--rate", "10"],
    ["sweep"],
    ["sweep", "--model", "laiho", "--amp", "-1"],
    ["sweep", "--model", "laiho", "--param", "bogus=1"],
    ["reproduce", "fig99"],
    ["check", "--criterion", "12"],
])
def test_invalid_input_exits_1(capsys, tmp_path, argv):
    code, _, err = run(capsys, *argv, *(["--out", str(tmp_path)] if argv[0] != "check" else []))
    assert code == 1
    assert err.startswith("memcrit: error:")


def test_bad_config_file_exits_1(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"id": "x", "experiment": "sweep", "models": [], "waveform": {}}))
    code, _, err = run(capsys, "sweep", "--config", str(p), "--out", str(tmp_path))
    assert code == 1
    assert "models" in err


def test_config_of_other_kind_exits_1(capsys, tmp_path):
    from memcrit.config import canned_config_path
    code, _, err = run(capsys, "crs", "--config", str(canned_config_path("fig4a")))
    assert code == 1
    assert "kinetics" in err


def test_numerical_failure_exits_2(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({
        "id": "starved", "experiment": "sweep", "models": [{"model": "laiho"}],
        "waveform": {"type": "triangular", "amplitude_pos": 3, "amplitude_neg": -3,
                     "rates": [1]},
        "solver": {"max_steps": 5}}))
    code, _, err = run(capsys, "sweep", "--config", str(p), "--out", str(tmp_path))
    assert code == 2
    assert "numerical failure" in err
    assert not list(tmp_path.glob("starved_*"))


def test_sweep_writes_provenanced_outputs(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    code, out, _ = run(capsys, "sweep", "--model", "linear", "--window", "biolek",
                       "--amp", "2", "--rate", "10", "--rate", "100", "--format", "csv",
                       "--format", "json", "--id", "demo")
    assert code == 0
    report = json.loads((tmp_path / "demo_report.json").read_text())
    h = report["config_hash"]
    assert h in out
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["demo_iv.svg", "demo_linear-biolek_100Vps.csv", "demo_linear-biolek_100Vps.json",
                     "demo_linear-biolek_10Vps.csv", "demo_linear-biolek_10Vps.json",
                     "demo_report.json"]
    for p in tmp_path.iterdir():
        assert h in p.read_text(), p.name
    csv = (tmp_path / "demo_linear-biolek_10Vps.csv").read_text().splitlines()
    assert csv[:2] == [f"# config_hash={h}", "t,v_applied,v_device_a,i,x_a"]
    assert len(report["reports"]["linear-biolek"]["switching"]) == 2


def test_out_flag_beats_environment(capsys, tmp_path, monkeypatch):
    env, flag = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv(OUTPUT_ENV, str(env))
    code, _, _ = run(capsys, "crs", "--model", "linear-joglekar", "--amp", "10",
                     "--rate", "10", "--x0a", "0.001", "--x0b", "0.999", "--no-plots",
                     "--quiet", "--out", str(flag))
    assert code == 0
    assert not env.exists()
    assert sorted(p.suffix for p in flag.iterdir()) == [".csv", ".json"]


def test_reproduce_kinetics(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce", "fig4b", "--out", str(tmp_path))
    assert code == 0
    table = (tmp_path / "fig4b_kinetics.csv").read_text().splitlines()
    assert table[1] == "model,v_p,t_set,t_set_norm"
    assert len(table) == 2 + 4 * 5
    assert (tmp_path / "fig4b_kinetics.svg").exists()
    assert "wrote" in out


def test_measured_overlay(capsys, tmp_path):
    meas = tmp_path / "m.csv"
    meas.write_text("v_p,t_set\n0.7,1e-3\n1.4,1e-5\n")
    code, _, _ = run(capsys, "kinetics", "--model", "linear-shin", "--height", "0.7",
                     "--height", "1.4", "--measured", str(meas), "--out", str(tmp_path), "--quiet")
    assert code == 0
    assert "measured" in (tmp_path / "kinetics_kinetics.svg").read_text()


def test_check_single_criterion(capsys):
    code, out, _ = run(capsys, "check", "--criterion", "2", "--quiet")
    assert code == 0
    assert re.match(r"\[PASS\] criterion +2:", out.splitlines()[0])
    assert out.splitlines()[-1] == "1/1 criteria passed"


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "memcrit", "list-models"], capture_output=True,
                       text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.split() == list(MODEL_IDS)
