import json

import numpy as np
import pytest

from learndyn.cli import main
from learndyn.config import parse_config
from learndyn.errors import ConfigurationError
from learndyn.io import line_plot_svg, read_csv
from learndyn.scenarios import FigureRecipe, repro, run_scenario


def base_config(**overrides):
    doc = {
        "schema_version": 1,
        "T": 5.0,
        "h": 0.01,
        "models": [{"kind": "rd"}, {"kind": "anticipatory", "name": "ant"}],
        "signal": {"type": "analytic", "offset": [0.0, 0.5],
                   "terms": [{"amplitude": [1.0, 0.0], "omega": 1.0}]},
        "outputs": ["trajectory", "gaps", "regret", "svg"],
    }
    doc.update(overrides)
    return doc


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.mark.parametrize("doc, field", [
    (base_config(models=[]), "models"),
    (base_config(schema_version=2), "schema_version"),
    (base_config(T=-1), "T"),
    (base_config(h=0), "h"),
    (base_config(models=[{"kind": "mwu"}]), "models[0].kind"),
    (base_config(models=[{"kind": "exrd", "lam": -2}]), "models[0].lam"),
    (base_config(models=[{"kind": "bnn", "initial_state": [0.9, 0.9]}]), "models[0]"),
    (base_config(signal={"preset": "example9"}), "signal.preset"),
    (base_config(signal={"type": "analytic", "offset": [0, 0],
                         "terms": [{"amplitude": [1, 2, 3], "omega": 1}]}), "signal.terms[0].amplitude"),
    (base_config(outputs=["movie"]), "outputs[0]"),
    (base_config(models=[{"kind": "rd"}, {"kind": "rd"}]), "models"),
])
def test_config_errors_carry_field_path(doc, field):
    with pytest.raises(ConfigurationError) as info:
        parse_config(doc)
    assert info.value.path == field


def test_config_defaults():
    cfg = parse_config({"schema_version": 1, "models": [{"kind": "rd"}], "signal": {"preset": "example2"}})
    assert cfg.T == 1000.0 and cfg.h == 0.01
    assert cfg.models[0].n == 2


def test_run_scenario_outputs(tmp_path):
    cfg = parse_config(base_config())
    trajs, files = run_scenario(cfg, tmp_path)
    names = sorted(p.name for p in files)
    assert names == ["avg_reward.svg", "gaps.csv", "regret.json", "traj_ant.csv", "traj_rd.csv"]
    header, data = read_csv(tmp_path / "traj_rd.csv")
    assert header == ["t", "x_1", "x_2", "reward", "cum_reward", "avg_reward"]
    np.testing.assert_array_equal(data[:, -2], trajs[0].cum_reward)
    header, gaps = read_csv(tmp_path / "gaps.csv")
    assert header == ["t", "gap_ant"]
    regret = json.loads((tmp_path / "regret.json").read_text())
    assert set(regret) == {"rd", "ant"}


def test_csv_full_precision(tmp_path):
    cfg = parse_config(base_config(outputs=["trajectory"]))
    trajs, _ = run_scenario(cfg, tmp_path)
    line = (tmp_path / "traj_rd.csv").read_text(encoding="utf-8").splitlines()[7]
    values = [float(v) for v in line.split(",")]
    assert values[4] == trajs[0].cum_reward[6]


def test_simulate_and_compare_commands(tmp_path, capsys):
    cfg = write(tmp_path, base_config())
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "sim")]) == 0
    assert main(["compare", "--config", cfg, "--out", str(tmp_path / "cmp")]) == 0
    summary = json.loads((tmp_path / "cmp" / "compare.json").read_text())
    assert summary["ant"]["verdict"] == "uniform"
    assert summary["ant"]["matched_init"] is True
    assert "ant vs rd" in capsys.readouterr().out


def test_exit_codes(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 1
    assert main(["simulate", "--config", write(tmp_path, base_config(models=[])), "--out", str(tmp_path)]) == 1
    div = base_config(models=[{"kind": "rd"}], signal={"type": "analytic", "offset": [1e308, -1e308]})
    assert main(["simulate", "--config", write(tmp_path, div, "div.json"), "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as info:
        main(["repro", "example7", "--out", str(tmp_path)])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["verify", "nope"])
    assert info.value.code == 1


def test_verify_command(capsys, monkeypatch):
    assert main(["verify", "lemma1", "--seed", "7", "--trials", "50"]) == 0
    assert "PASS lemma1" in capsys.readouterr().out
    import learndyn.suites as suites

    monkeypatch.setitem(suites.SUITES, "lemma1", (lambda seed, trials: (-1.0, {}), 1))
    assert main(["verify", "lemma1", "--trials", "1"]) == 3


def test_sweep_freq_command(tmp_path):
    doc = {"schema_version": 1, "freq": {
        "pbar": [1.0, -0.4, 0.6], "qbar": [0.5, 0.1, -0.6],
        "phi": {"start": -1.5707963267948966, "stop": 1.5707963267948966, "num": 7},
        "a": [0.5, 1.0, 2.0],
        "filters": [{"name": "pe", "num": [2.0], "den": [1.0, 1.0]},
                    {"name": "e", "num": [1.0], "den": [1.0, 1.0]}]}}
    assert main(["sweep-freq", "--config", write(tmp_path, doc), "--out", str(tmp_path / "o")]) == 0
    header, data = read_csv(tmp_path / "o" / "sweep_J.csv")
    assert header[0] == "phi" and len(header) == 4 and data.shape == (7, 4)
    summary = json.loads((tmp_path / "o" / "sweep_summary.json").read_text())
    assert summary["pairs"][0]["predicted"] == ">" and summary["pairs"][0]["consistent"]
    no_freq = write(tmp_path, {"schema_version": 1}, "nofreq.json")
    assert main(["sweep-freq", "--config", no_freq, "--out", str(tmp_path / "o2")]) == 1


def test_repro_is_byte_identical_and_regenerable(tmp_path):
    a, _ = repro(FigureRecipe("example3", {"T": 10.0}), tmp_path / "a")
    b, _ = repro(FigureRecipe("example3", {"T": 10.0}), tmp_path / "b")
    assert a["strictly_positive"]
    for name in ("gaps.csv", "traj_rd.csv", "traj_anticipatory.csv", "summary.json", "avg_reward.svg", "gap.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    # the SVG is a pure function of the CSV data
    h_ant, ant = read_csv(tmp_path / "a" / "traj_anticipatory.csv")
    h_rd, rd = read_csv(tmp_path / "a" / "traj_rd.csv")
    line_plot_svg(tmp_path / "regen.svg", rd[:, 0], {"anticipatory": ant[:, -1], "rd": rd[:, -1]},
                  "example3: running average reward", "t", "average reward")
    assert (tmp_path / "regen.svg").read_bytes() == (tmp_path / "a" / "avg_reward.svg").read_bytes()


def test_repro_fig6(tmp_path):
    summary, files = repro("fig6", tmp_path)
    assert summary["factorization_residual"] < 1e-8
    header, data = read_csv(tmp_path / "fig6_J.csv")
    assert data.shape == (181, 10)
    assert np.all(np.abs(data[[0, -1], 1:]) < 1e-10)


def test_repro_unknown():
    with pytest.raises(ConfigurationError):
        repro("fig9", "/tmp/unused")
