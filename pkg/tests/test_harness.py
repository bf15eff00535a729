import json

import pytest
from click.testing import CliRunner

from latticehydro.errors import ConfigurationError
from latticehydro.harness import (
    ConvergenceReport,
    config_from_dict,
    emit_report,
    load_config,
    run_experiment,
    run_flux_experiment,
    run_front_experiment,
    run_hydro_experiment,
    run_simulation,
)
from latticehydro.harness.cli import main as cli_main


def base_config(**over):
    data = {
        "kind": "hydro-exclusion",
        "n_list": [8, 16],
        "T": 0.25,
        "replicas": 3,
        "seed": 42,
        "rho0": {"kind": "constant", "params": {"value": 0.5}, "support": [-4, 0]},
        "zeta0": {"kind": "constant", "params": {"value": 0.5}, "support": [0, 4]},
        "du": 1 / 40,
        "n_times": 2,
        "out": "results",
    }
    data.update(over)
    return data


# -- config ------------------------------------------------------------------


def test_config_validation():
    cfg = config_from_dict(base_config())
    assert cfg.kind == "hydro-exclusion"
    assert len(cfg.config_hash) == 16
    with pytest.raises(ConfigurationError):
        config_from_dict(base_config(n_list=[16, 8]))
    with pytest.raises(ConfigurationError):
        config_from_dict(base_config(replicas=0))
    with pytest.raises(ConfigurationError):
        config_from_dict(base_config(kind="nonsense"))
    with pytest.raises(ConfigurationError):
        config_from_dict(base_config(frobnicate=1))
    with pytest.raises(ConfigurationError):
        # occupancy profile outside (0, 1]
        config_from_dict(
            base_config(zeta0={"kind": "constant", "params": {"value": 1.5},
                               "support": [0, 4]})
        )
    with pytest.raises(ConfigurationError):
        config_from_dict(base_config(kind="coupling"))  # missing zeta0_b


def test_config_hash_stable_and_sensitive():
    a = config_from_dict(base_config())
    b = config_from_dict(base_config())
    c = config_from_dict(base_config(seed=43))
    assert a.config_hash == b.config_hash
    assert a.config_hash != c.config_hash


def test_config_file_loading(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text(
        "kind: front\n"
        "N: [8]\n"
        "T: 0.25\n"
        "replicas: 2\n"
        "seed: 7\n"
        "rho0: {kind: constant, params: {value: 0.2}, support: [-4, 0]}\n"
        "du: 0.025\n"
    )
    cfg = load_config(path, seed=9, out=str(tmp_path))
    assert cfg.kind == "front" and cfg.seed == 9 and cfg.n_list == [8]


# -- reports -------------------------------------------------------------------


def test_emit_report_schema_and_idempotence(tmp_path):
    rep = ConvergenceReport("demo", "front", "abc123")
    rep.add_row(0.5, "X_over_N", 0.125, 0, 8, 42)
    rep.verdicts["ok"] = True
    csv_path, json_path = emit_report(rep, tmp_path)
    text = csv_path.read_text()
    assert text.splitlines()[0] == "t,observable_id,value,replica,N,seed"
    assert text.splitlines()[1] == "0.5,X_over_N,0.125,0,8,42"
    summary = json.loads(json_path.read_text())
    assert summary["experiment"] == "demo"
    assert summary["verdicts"] == {"ok": True}
    assert summary["config_hash"] == "abc123"
    first = (csv_path.read_bytes(), json_path.read_bytes())
    emit_report(rep, tmp_path)
    assert (csv_path.read_bytes(), json_path.read_bytes()) == first


def test_emit_empty_report(tmp_path):
    rep = ConvergenceReport("empty", "front", "000")
    csv_path, json_path = emit_report(rep, tmp_path)
    assert csv_path.read_text() == "t,observable_id,value,replica,N,seed\n"
    json.loads(json_path.read_text())


# -- experiments ------------------------------------------------------------------


def test_gap_transform_needs_positive_zeta_from_origin():
    # a zeta0 vanishing near the origin has no well-defined gap density there
    cfg = config_from_dict(
        base_config(
            kind="hydro-zr",
            zeta0={"kind": "constant", "params": {"value": 0.5}, "support": [1, 4]},
        )
    )
    with pytest.raises(ConfigurationError):
        run_hydro_experiment(cfg)


def test_degenerate_hydro_all_distances_tiny():
    # fully packed exclusion and empty dissipative side: the gap field is
    # identically zero, the dynamics is frozen, distances are exactly zero
    cfg = config_from_dict(
        base_config(
            kind="hydro-zr",
            rho0={"kind": "constant", "params": {"value": 0.0}, "support": [-4, 0]},
            zeta0={"kind": "constant", "params": {"value": 1.0}, "support": [0, 4]},
        )
    )
    rep = run_hydro_experiment(cfg)
    for n in cfg.n_list:
        assert rep.per_n[str(n)]["mean_distance"] <= 1.0 / n


def test_hydro_report_reproducible(tmp_path):
    cfg = config_from_dict(base_config(out=str(tmp_path / "a")))
    rep1 = run_hydro_experiment(cfg)
    rep2 = run_hydro_experiment(cfg)
    p1 = emit_report(rep1, tmp_path / "a")
    p2 = emit_report(rep2, tmp_path / "b")
    assert p1[0].read_bytes() == p2[0].read_bytes()
    assert p1[1].read_bytes() == p2[1].read_bytes()


def test_front_zero_profile_exact():
    cfg = config_from_dict(
        base_config(
            kind="front",
            rho0={"kind": "constant", "params": {"value": 0.0}, "support": [-4, 0]},
            zeta0=None,
        )
    )
    rep = run_front_experiment(cfg)
    assert rep.meta["v_T"] == 0.0
    for n in cfg.n_list:
        assert rep.per_n[str(n)]["mean"] == 0.0
        assert rep.verdicts[f"ci_contains_v_N{n}"]


def test_front_small_alpha_matches_linearized_speed():
    # rho0 = 0.01: the dilute limit, where v_1 = 0.01 sqrt(2/pi) = 0.00798
    cfg = config_from_dict(
        base_config(
            kind="front", zeta0=None, n_list=[256], T=1.0, replicas=40, seed=31,
            rho0={"kind": "constant", "params": {"value": 0.01}, "support": [-5, 0]},
            du=1 / 100,
        )
    )
    rep = run_front_experiment(cfg)
    stats = rep.per_n["256"]
    assert rep.meta["v_T"] == pytest.approx(0.00798, abs=2e-4)
    assert stats["ci_lo"] <= rep.meta["v_T"] <= stats["ci_hi"]


def test_flux_zero_profile_and_bound_keys():
    cfg = config_from_dict(
        base_config(
            kind="flux",
            rho0={"kind": "constant", "params": {"value": 0.0}, "support": [-4, 0]},
            zeta0=None,
        )
    )
    rep = run_flux_experiment(cfg)
    for n in cfg.n_list:
        assert rep.per_n[str(n)]["mean_int_g"] == 0.0
        assert rep.verdicts[f"bound_holds_N{n}"]


def test_flux_gap_trend_at_scale():
    cfg = config_from_dict(
        base_config(kind="flux", zeta0=None, n_list=[8, 32], replicas=12, seed=5)
    )
    rep = run_flux_experiment(cfg)
    assert "flux_gap_trend_decreasing" in rep.verdicts
    gaps = [rep.per_n[str(n)]["flux_gap_to_v"] for n in cfg.n_list]
    assert gaps[1] < gaps[0]


def test_workers_do_not_change_results():
    cfg1 = config_from_dict(base_config(replicas=4, workers=1))
    cfg2 = config_from_dict(base_config(replicas=4, workers=3))
    rep1 = run_hydro_experiment(cfg1)
    rep2 = run_hydro_experiment(cfg2)
    assert rep1.rows == rep2.rows
    assert rep1.per_n == rep2.per_n


def test_run_simulation_rows_and_warnings():
    cfg = config_from_dict(base_config(replicas=2, block_eps=0.25))
    rep = run_simulation(cfg)
    ids = {r[1] for r in rep.rows}
    assert "X_over_N" in ids and "int_g_origin" in ids
    assert any(i.startswith("xi:") for i in ids)
    assert "block_eps_sensitivity" in ids
    assert rep.per_n["8"]["block_eps_sensitivity_mean"] >= 0
    assert rep.verdicts == {"completed": True}


def test_unknown_kind_dispatch():
    cfg = config_from_dict(base_config(kind="front", zeta0=None))
    rep = run_experiment(cfg)
    assert rep.kind == "front"


# -- CLI ----------------------------------------------------------------------------


def _write_cfg(tmp_path, **over):
    data = base_config(out=str(tmp_path / "out"), **over)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return path


def test_cli_flux_and_exit_code(tmp_path):
    path = _write_cfg(tmp_path, kind="flux", zeta0=None, n_list=[8, 32],
                      replicas=12, seed=5)
    runner = CliRunner()
    result = runner.invoke(cli_main, ["--config", str(path), "flux"])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / "flux.csv").exists()
    summary = json.loads((tmp_path / "out" / "flux_summary.json").read_text())
    assert summary["passed"] is True


def test_cli_solve_writes_fields_and_sidecar(tmp_path):
    path = _write_cfg(tmp_path)
    runner = CliRunner()
    result = runner.invoke(cli_main, ["--config", str(path), "solve"])
    assert result.exit_code == 0, result.output
    out = tmp_path / "out"
    for name in ("rho.csv", "zeta.csv", "lambda.csv", "series.csv"):
        assert (out / name).exists()
    grid = json.loads((out / "grid.json").read_text())
    assert set(grid) >= {"du", "dt", "domain", "T", "scheme"}
    first = (out / "rho.csv").read_text().splitlines()
    assert first[0] == "t,u,value"
    series = (out / "series.csv").read_text().splitlines()
    assert series[0] == "t,a,v"


def test_cli_rejects_mismatched_kind(tmp_path):
    path = _write_cfg(tmp_path, kind="front", zeta0=None)
    runner = CliRunner()
    result = runner.invoke(cli_main, ["--config", str(path), "hydro"])
    assert result.exit_code != 0


def test_cli_potts_check_couple_stationarity(tmp_path):
    runner = CliRunner()
    p1 = _write_cfg(tmp_path, kind="potts-profile", replicas=2)
    r1 = runner.invoke(cli_main, ["--config", str(p1), "potts-check"])
    assert r1.exit_code == 0, r1.output
    assert (tmp_path / "out" / "hydro_interface_summary.json").exists()

    p2 = _write_cfg(
        tmp_path, kind="coupling", replicas=3, mode="stirring",
        zeta0={"kind": "constant", "params": {"value": 0.3}, "support": [0, 4]},
        zeta0_b={"kind": "constant", "params": {"value": 0.7}, "support": [0, 4]},
    )
    r2 = runner.invoke(cli_main, ["--config", str(p2), "couple"])
    assert r2.exit_code == 0, r2.output

    p3 = _write_cfg(tmp_path, kind="stationarity", alpha=1.0, replicas=4,
                    n_list=[12], T=0.5)
    r3 = runner.invoke(cli_main, ["--config", str(p3), "stationarity"])
    assert r3.exit_code == 0, r3.output

    p4 = _write_cfg(tmp_path, replicas=2)
    r4 = runner.invoke(cli_main, ["--config", str(p4), "simulate"])
    assert r4.exit_code == 0, r4.output


def test_cli_seed_override_changes_hash(tmp_path):
    path = _write_cfg(
        tmp_path, kind="front", zeta0=None,
        rho0={"kind": "constant", "params": {"value": 0.0}, "support": [-4, 0]},
    )
    runner = CliRunner()
    r1 = runner.invoke(cli_main, ["--config", str(path), "front"])
    s1 = json.loads((tmp_path / "out" / "front_summary.json").read_text())
    r2 = runner.invoke(cli_main, ["--config", str(path), "--seed", "777", "front"])
    s2 = json.loads((tmp_path / "out" / "front_summary.json").read_text())
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert s1["config_hash"] != s2["config_hash"]
