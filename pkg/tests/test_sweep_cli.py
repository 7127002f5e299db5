"""Sweep orchestration and CLI tests: determinism, schema, exit codes."""

from __future__ import annotations

import json
import os

import numpy as np
import pytest

import parasim
from parasim import ConfigError, SweepConfig
from parasim.cli import main
from parasim.sweep import (config_from_dict, failure_fraction,
                           run_sweep, write_sweep_csv)


def tiny_config(**overrides) -> dict:
    cfg = {
        "geometry": {"n_active": 2, "n_parasitic": 2,
                     "dx_over_lambda": 0.4, "dy_over_lambda": 0.5},
        "channel": {"n_paths": 4},
        "sweep": {"axis": "pmax_dbm", "values": [0.0, 10.0, 20.0]},
        "trials": 3,
        "seed": 5,
        "architectures": ["hrp-upa", "fd-ula"],
    }
    cfg.update(overrides)
    return cfg


def write_config(tmp_path, data, name="cfg.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestConfigValidation:
    def test_defaults_resolve(self):
        cfg = config_from_dict(tiny_config())
        assert cfg.n_active == 2 and cfg.link.range_m == 250.0

    def test_decreasing_values_rejected(self):
        with pytest.raises(ConfigError, match="strictly increasing"):
            config_from_dict(tiny_config(
                sweep={"axis": "pmax_dbm", "values": [5.0, 1.0]}))

    def test_empty_values_rejected(self):
        with pytest.raises(ConfigError, match="nonempty"):
            config_from_dict(tiny_config(
                sweep={"axis": "pmax_dbm", "values": []}))

    def test_unknown_axis_rejected(self):
        with pytest.raises(ConfigError, match="axis"):
            config_from_dict(tiny_config(
                sweep={"axis": "bogus", "values": [1.0]}))

    def test_unknown_architecture_rejected(self):
        with pytest.raises(ConfigError, match="unknown architectures"):
            config_from_dict(tiny_config(architectures=["warp-drive"]))

    def test_unknown_key_rejected(self):
        bad = tiny_config()
        bad["geometry"]["n_pixies"] = 3
        with pytest.raises(ConfigError, match="n_pixies"):
            config_from_dict(bad)

    def test_zero_trials_rejected(self):
        with pytest.raises(ConfigError, match="trials"):
            config_from_dict(tiny_config(trials=0))


class TestRunSweep:
    def test_row_structure(self):
        cfg = config_from_dict(tiny_config())
        result = run_sweep(cfg)
        assert len(result.rows) == 3 * 2
        for row in result.rows:
            assert row.trials + row.failures == cfg.trials
            assert row.axis == "pmax_dbm"

    def test_deterministic_rows(self):
        cfg = config_from_dict(tiny_config())
        a = run_sweep(cfg)
        b = run_sweep(cfg)
        assert a.rows == b.rows

    def test_worker_pool_matches_serial(self):
        cfg = config_from_dict(tiny_config(trials=4))
        serial = run_sweep(cfg, workers=1)
        parallel = run_sweep(cfg, workers=2)
        assert serial.rows == parallel.rows

    def test_shared_realization_reduces_to_same_channel(self):
        # hrp-upa on an N_P=0 geometry must match fd-ula row by row
        cfg = config_from_dict(tiny_config(
            geometry={"n_active": 3, "n_parasitic": 0,
                      "dx_over_lambda": 0.4, "dy_over_lambda": 0.5}))
        rows = run_sweep(cfg).rows
        by_arch = {}
        for r in rows:
            by_arch.setdefault(r.architecture, []).append(r.mean_se)
        assert np.allclose(by_arch["hrp-upa"], by_arch["fd-ula"], rtol=1e-12)

    def test_fd_ula_only_skips_parasitics(self):
        full = config_from_dict(tiny_config(architectures=["fd-ula"]))
        none = config_from_dict(tiny_config(
            architectures=["fd-ula"],
            geometry={"n_active": 2, "n_parasitic": 0,
                      "dx_over_lambda": 0.4, "dy_over_lambda": 0.5}))
        assert run_sweep(full).rows == run_sweep(none).rows

    def test_nparasitic_axis(self):
        cfg = config_from_dict(tiny_config(
            sweep={"axis": "n_parasitic", "values": [0, 2], "pmax_dbm": 10},
            architectures=["hrp-upa"]))
        rows = run_sweep(cfg).rows
        assert [r.axis_value for r in rows] == [0.0, 2.0]
        assert rows[1].mean_se > rows[0].mean_se


class TestSweepCsv:
    def test_schema_and_echo(self, tmp_path):
        cfg = config_from_dict(tiny_config())
        out = tmp_path / "out.csv"
        write_sweep_csv(run_sweep(cfg), str(out))
        lines = out.read_text().splitlines()
        comments = [ln for ln in lines if ln.startswith("#")]
        assert any("seed=5" in ln for ln in comments)
        header = next(ln for ln in lines if not ln.startswith("#"))
        assert header == ("axis,axis_value,architecture,mean_se_bps_hz,"
                          "mean_ee_bps_hz_w,mean_snr_db,trials,failures")
        data = [ln for ln in lines if not ln.startswith("#")][1:]
        assert len(data) == 6
        first = data[0].split(",")
        assert first[0] == "pmax_dbm" and first[2] in ("hrp-upa", "fd-ula")

    def test_byte_identical_reruns(self, tmp_path):
        cfg_path = write_config(tmp_path, tiny_config())
        out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        assert main(["sweep", "--config", cfg_path, "--out", out1]) == 0
        assert main(["sweep", "--config", cfg_path, "--out", out2]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_byte_identical_across_workers(self, tmp_path):
        cfg_path = write_config(tmp_path, tiny_config(trials=4))
        out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        assert main(["sweep", "--config", cfg_path, "--out", out1,
                     "--workers", "1"]) == 0
        assert main(["sweep", "--config", cfg_path, "--out", out2,
                     "--workers", "2"]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()


class TestCliExitCodes:
    def test_invalid_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"geometry": [,}', encoding="utf-8")
        code = main(["sweep", "--config", str(path),
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        err = capsys.readouterr().err
        assert "config error" in err and ":1:" in err

    def test_semantic_error_exits_2(self, tmp_path, capsys):
        path = write_config(tmp_path, tiny_config(trials=-1))
        assert main(["sweep", "--config", path,
                     "--out", str(tmp_path / "x.csv")]) == 2

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "x.csv")]) == 2

    def test_high_failure_rate_exits_3(self, tmp_path, monkeypatch):
        from parasim.sweep import SweepResult, SweepRow

        def fake_run_sweep(cfg, workers=1):
            rows = (SweepRow("pmax_dbm", 0.0, "hrp-upa", float("nan"),
                             float("nan"), float("nan"), 1, 2),)
            return SweepResult(config=cfg, rows=rows)

        monkeypatch.setattr("parasim.cli.run_sweep", fake_run_sweep)
        cfg_path = write_config(tmp_path, tiny_config())
        assert main(["sweep", "--config", cfg_path,
                     "--out", str(tmp_path / "x.csv")]) == 3

    def test_trials_and_seed_overrides(self, tmp_path):
        cfg_path = write_config(tmp_path, tiny_config())
        out = str(tmp_path / "x.csv")
        assert main(["sweep", "--config", cfg_path, "--out", out,
                     "--trials", "2", "--seed", "9"]) == 0
        text = open(out).read()
        assert "# trials=2" in text and "# seed=9" in text


class TestPatternCli:
    def test_fixedload_normalized(self, tmp_path):
        cfg = {
            "geometry": {"n_active": 2, "n_parasitic": 2,
                         "dx_over_lambda": 0.4, "dy_over_lambda": 0.5},
            "pattern": {
                "theta_deg": {"start": -180, "stop": 180, "points": 73},
                "reactances_ohm": [-10, 20, 40, 100],
            },
        }
        cfg_path = write_config(tmp_path, cfg)
        out = str(tmp_path / "p.csv")
        assert main(["pattern", "--config", cfg_path, "--mode", "fixedload",
                     "--out", out]) == 0
        lines = [ln for ln in open(out) if not ln.startswith("#")]
        assert lines[0].strip() == "theta_deg,pattern_db"
        values = np.array([[float(v) for v in ln.split(",")]
                           for ln in lines[1:]])
        assert values[:, 1].max() == pytest.approx(0.0, abs=1e-12)
        assert np.all(values[:, 1] <= 1e-12)

    def test_fixedload_open_circuit_flat(self, tmp_path):
        cfg = {
            "geometry": {"n_active": 1, "n_parasitic": 2,
                         "dx_over_lambda": 0.4, "dy_over_lambda": 0.5},
            "pattern": {"theta_deg": {"start": -90, "stop": 90, "points": 37}},
        }
        cfg_path = write_config(tmp_path, cfg)
        out = str(tmp_path / "p.csv")
        assert main(["pattern", "--config", cfg_path, "--mode", "fixedload",
                     "--out", out]) == 0
        lines = [ln for ln in open(out) if not ln.startswith("#")]
        db = np.array([float(ln.split(",")[1]) for ln in lines[1:]])
        assert np.abs(db).max() < 1e-4

    def test_maxgain_table(self, tmp_path):
        cfg = {
            "geometry": {"n_active": 1, "n_parasitic": 1,
                         "dx_over_lambda": 0.4, "dy_over_lambda": 0.5},
            "pattern": {
                "theta_deg": {"start": -60, "stop": 60, "points": 7},
                "oracle": {"multistarts": 6, "seed": 2},
            },
        }
        cfg_path = write_config(tmp_path, cfg)
        out = str(tmp_path / "p.csv")
        assert main(["pattern", "--config", cfg_path, "--mode", "maxgain",
                     "--out", out]) == 0
        lines = [ln for ln in open(out) if not ln.startswith("#")]
        assert lines[0].strip() == "theta_deg,g_closed_form,g_oracle"
        rows = np.array([[float(v) for v in ln.split(",")]
                         for ln in lines[1:]])
        assert rows.shape == (7, 3)
        # single parasitic: both routes coincide
        assert np.abs(10 * np.log10(rows[:, 2] / rows[:, 1])).max() < 0.05

    def test_maxgain_needs_single_active(self, tmp_path):
        cfg = {"geometry": {"n_active": 2, "n_parasitic": 1,
                            "dx_over_lambda": 0.4, "dy_over_lambda": 0.5},
               "pattern": {}}
        cfg_path = write_config(tmp_path, cfg)
        assert main(["pattern", "--config", cfg_path, "--mode", "maxgain",
                     "--out", str(tmp_path / "p.csv")]) == 2


class TestZmatrixCli:
    def test_export_import_roundtrip(self, tmp_path):
        cfg = {"geometry": {"n_active": 2, "n_parasitic": 2,
                            "dx_over_lambda": 0.4, "dy_over_lambda": 0.5}}
        cfg_path = write_config(tmp_path, cfg)
        out = str(tmp_path / "z.txt")
        assert main(["zmatrix", "--geom", cfg_path, "--out", out]) == 0
        z = parasim.import_impedance(out)
        spec = parasim.DipoleSpec.half_wave(7e9)
        geom = parasim.ArrayGeometry(2, 2, 0.4 * spec.wavelength,
                                     0.5 * spec.wavelength, spec)
        direct = parasim.assemble_impedance(geom)
        assert np.array_equal(z.full(), direct.full())


class TestShippedConfigs:
    @pytest.mark.parametrize("name", [
        "fig7_se_ee_vs_pmax.json", "baseline_vs_pmax.json",
        "fig9_se_vs_nparasitic.json", "fig10_se_vs_nactive.json",
        "fig11_se_vs_dx.json"])
    def test_sweep_configs_parse(self, name):
        root = os.path.join(os.path.dirname(__file__), "..", "configs")
        cfg, _ = parasim.load_config(os.path.join(root, name))
        assert cfg.trials == 500

    @pytest.mark.parametrize("name", [
        "fig4_pattern_np2.json", "fig5_pattern_config1.json"])
    def test_pattern_configs_parse(self, name):
        root = os.path.join(os.path.dirname(__file__), "..", "configs")
        cfg = parasim.load_pattern_config(os.path.join(root, name))
        assert cfg.theta_points >= 181
