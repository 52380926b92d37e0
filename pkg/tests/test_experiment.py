import json

import pytest

from afrelay import cli
from afrelay.experiment import (
    CSV_COLUMNS,
    ConfigError,
    Experiment,
    db_to_linear,
    emit_csv,
    load_experiment,
    parse_experiment,
    read_csv,
    report_to_csv,
    run,
)
from afrelay.montecarlo import McConfig

BASE = {
    "name": "small",
    "threshold_db": 0.0,
    "sweep_db": [10.0, 20.0, 30.0],
    "series": [{"label": "a", "symmetric": {"alpha": 1.2, "beta": 1.0, "hops": 3, "inr_db": 0.0}}],
}


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def test_db_to_linear():
    assert db_to_linear(0) == 1
    assert db_to_linear(10) == 10
    assert db_to_linear(3) == pytest.approx(1.9952623149688795, rel=1e-15)


def test_symmetric_shorthand_expands():
    exp = parse_experiment(BASE)
    assert len(exp.series[0].hops) == 3 and exp.series[0].is_symmetric
    cfg = exp.system(exp.series[0], 20.0)
    assert cfg.n_hops == 3
    assert cfg.hops[0].snr_desired == pytest.approx(100.0)
    assert cfg.power == 1.0 and cfg.mod_const == 2.0


def test_system_key_is_single_series():
    d = {k: v for k, v in BASE.items() if k != "series"}
    d["system"] = {"hops": [{"alpha": 1, "beta": 2, "inr_db": 3}, {"alpha": 2, "beta": 1, "inr_db": 0, "snr_offset_db": 5}]}
    exp = parse_experiment(d)
    assert len(exp.series) == 1 and not exp.series[0].is_symmetric


@pytest.mark.parametrize("cfg", [
    BASE,
    {**BASE, "mc": {"trials": 1000, "seed": 4, "chunk": 100}, "output": {"path": "x.csv"}, "power_db": 3.0},
])
def test_config_round_trip(cfg):
    exp = parse_experiment(cfg)
    again = parse_experiment(json.loads(json.dumps(exp.to_dict())))
    assert again == exp


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.update(sweep_db=[]), "sweep_db"),
    (lambda d: d.update(sweep_db=[1.0, 1.0]), "sweep_db"),
    (lambda d: d.update(sweep_db=[1.0, "x"]), "sweep_db[1]"),
    (lambda d: d["series"][0]["symmetric"].update(alpha=-1), "series[0].symmetric.alpha"),
    (lambda d: d["series"][0]["symmetric"].update(hops=0), "series[0].symmetric.hops"),
    (lambda d: d["series"][0]["symmetric"].pop("inr_db"), "series[0].symmetric.inr_db"),
    (lambda d: d.update(series=[]), "series"),
    (lambda d: d.update(mc={"trials": 0}), "mc"),
    (lambda d: d.update(output={"path": "a", "format": "xml"}), "output.format"),
    (lambda d: d.update(mod_const=0), "mod_const"),
])
def test_schema_errors_name_the_field(mutate, where):
    d = json.loads(json.dumps(BASE))
    mutate(d)
    with pytest.raises(ConfigError) as err:
        parse_experiment(d)
    assert err.value.path == where


def test_analysis_only_report_and_csv(tmp_path):
    exp = parse_experiment(BASE)
    report = run(exp)
    path = emit_csv(report, tmp_path / "out.csv")
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_csv(path)
    assert len(rows) == 3
    for row, mem in zip(rows, report.series[0].rows):
        assert row["outage_mc"] is None and row["mc_stderr"] is None
        for col in ("snr_db", "outage_low", "outage_high", "asymptote"):
            assert float(f"{row[col]:.12g}") == float(f"{getattr(mem, col):.12g}")
            assert row[col] == getattr(mem, col)
        assert row["outage_low"] <= row["outage_high"]


def test_nonsymmetric_adds_worst_hop_columns():
    d = {k: v for k, v in BASE.items() if k != "series"}
    d["system"] = {"hops": [{"alpha": 1.2, "beta": 2, "inr_db": 0}, {"alpha": 1.2, "beta": 2, "inr_db": -6}]}
    text = report_to_csv(run(parse_experiment(d)))
    header = text.splitlines()[0].split(",")
    assert header[:6] == CSV_COLUMNS
    assert header[6:] == ["outage_low_worst_hop", "outage_high_worst_hop"]


def test_mc_report_flags_nothing_for_correct_model():
    exp = parse_experiment(BASE)
    report = run(exp, McConfig.with_default_chunk(10**5, seed=3))
    assert report.violations == []
    assert all(r.outage_mc is not None for r in report.series[0].rows)


def test_emit_csv_io_error(tmp_path):
    report = run(parse_experiment(BASE))
    with pytest.raises(OSError) as err:
        emit_csv(report, tmp_path / "missing" / "out.csv")
    assert "missing" in str(err.value)


def test_load_experiment_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_experiment(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_experiment(bad)


# -- command line ----------------------------------------------------------

def test_cli_presets_list(capsys):
    assert cli.main(["presets", "list"]) == 0
    assert capsys.readouterr().out.split() == ["fig2", "fig3"]


def test_presets_are_valid_configs():
    for name in cli.preset_names():
        exp = load_experiment(cli.resolve_config(name))
        assert isinstance(exp, Experiment) and exp.mc is not None


def test_cli_run_analysis_only(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    out = tmp_path / "r.csv"
    assert cli.main(["run", str(cfg), "--out", str(out), "--analysis-only"]) == 0
    rows = read_csv(out)
    assert len(rows) == 3 and rows[0]["outage_mc"] is None
    assert "G_d=1.2" in capsys.readouterr().out


def test_cli_run_with_mc(tmp_path):
    cfg = write(tmp_path, BASE)
    out = tmp_path / "r.csv"
    assert cli.main(["run", str(cfg), "--out", str(out), "--trials", "20000", "--seed", "5"]) == 0
    assert all(r["outage_mc"] is not None for r in read_csv(out))


def test_cli_empty_sweep_is_exit_1(tmp_path, capsys):
    cfg = write(tmp_path, {**BASE, "sweep_db": []})
    assert cli.main(["run", str(cfg), "--out", str(tmp_path / "o.csv")]) == 1
    assert "sweep_db" in capsys.readouterr().err


def test_cli_negative_shape_is_exit_1(tmp_path, capsys):
    d = json.loads(json.dumps(BASE))
    d["series"][0]["symmetric"]["beta"] = -0.5
    assert cli.main(["gains", str(write(tmp_path, d))]) == 1
    assert "series[0].symmetric.beta" in capsys.readouterr().err


def test_cli_flags_bound_violation(tmp_path, monkeypatch):
    # a mis-specified model whose outage estimates fall far outside the bounds
    from afrelay import experiment

    def broken_sweep(config, threshold, scales, mc):
        from afrelay.montecarlo import McEstimate
        return [McEstimate.from_count(mc.trials, mc.trials) for _ in scales]

    monkeypatch.setattr(experiment, "simulate_outage_sweep", broken_sweep)
    cfg = write(tmp_path, BASE)
    assert cli.main(["run", str(cfg), "--out", str(tmp_path / "o.csv"), "--trials", "1000"]) == 2


def test_cli_gains_special_cases(tmp_path, capsys):
    d = json.loads(json.dumps(BASE))
    d["series"] = [{"label": "r", "symmetric": {"alpha": 1.0, "beta": 1.0, "hops": 2, "inr_db": 10.0}}]
    assert cli.main(["gains", str(write(tmp_path, d))]) == 0
    out = capsys.readouterr().out
    assert "G_d=1" in out and "Rayleigh desired links" in out and "Rayleigh interferers" in out


def test_fig2_preset_row_count(tmp_path):
    out = tmp_path / "fig2.csv"
    assert cli.main(["run", "fig2", "--out", str(out), "--analysis-only"]) == 0
    exp = load_experiment(cli.resolve_config("fig2"))
    assert len(read_csv(out)) == len(exp.sweep_db) * 2


def test_fig2_slopes_differ_by_alpha(tmp_path):
    exp = load_experiment(cli.resolve_config("fig2"))
    report = run(exp)
    import math
    slopes = []
    for s in report.series:
        a, b = s.rows[-2], s.rows[-1]
        slopes.append((math.log10(b.outage_low) - math.log10(a.outage_low)) / ((b.snr_db - a.snr_db) / 10))
    assert slopes[0] == pytest.approx(-1.2, rel=0.02)
    assert slopes[1] == pytest.approx(-2.3, rel=0.02)


def test_fig3_beta_curves_coincide_asymptotically():
    exp = load_experiment(cli.resolve_config("fig3"))
    report = run(exp)
    by_label = {s.label: s for s in report.series}
    for K in (2, 6):
        a = by_label[f"alpha=1, beta=0.8, K={K}"].rows[-1]
        b = by_label[f"alpha=1, beta=1.0, K={K}"].rows[-1]
        assert a.outage_low / b.outage_low == pytest.approx(1.0, abs=0.02)
        assert a.outage_high / b.outage_high == pytest.approx(1.0, abs=0.02)
