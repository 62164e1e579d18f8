import json

import numpy as np
import pytest

from detctl import analysis
from detctl.cli import ConfigError, main, parse_simulate_config, parse_sweep_config


def base_config(**overrides):
    doc = {
        "grid": {"L": 1.0, "M": 32, "bc": "neumann"},
        "params": {"nu": 1.0, "alpha": 4.0, "mu": 10.0},
        "control": {"kind": "fourier", "N": 2, "include_mean": True},
        "sim": {
            "dt": 1e-3,
            "T": 0.2,
            "record_every": 1,
            "scheme": "etd1",
            "ic": {"kind": "random-band", "seed": 1, "kmax": 3, "amplitude": 1.0},
        },
        "experiment": {"name": "smoke"},
    }
    doc.update(overrides)
    return doc


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


class TestValidation:
    def test_negative_mu_names_field(self):
        doc = base_config()
        doc["params"]["mu"] = -1.0
        with pytest.raises(ConfigError, match="params.mu"):
            parse_simulate_config(doc)

    def test_unknown_key_rejected(self):
        doc = base_config()
        doc["sim"]["step_size"] = 0.1
        with pytest.raises(ConfigError, match="step_size"):
            parse_simulate_config(doc)

    def test_unknown_top_level_section(self):
        doc = base_config()
        doc["extra"] = {}
        with pytest.raises(ConfigError, match="extra"):
            parse_simulate_config(doc)

    def test_bad_ic_kind(self):
        doc = base_config()
        doc["sim"]["ic"] = {"kind": "plume"}
        with pytest.raises(ConfigError, match="sim.ic.kind"):
            parse_simulate_config(doc)

    def test_missing_section(self):
        doc = base_config()
        del doc["params"]
        with pytest.raises(ConfigError, match="params"):
            parse_simulate_config(doc)

    def test_empty_alphas(self):
        doc = {"sweep": {"alphas": [], "nu": 1.0, "L": 1.0,
                         "mu_rule": {"type": "proportional", "factor": 5.0},
                         "N_range": [1, 2]},
               "experiment": {"name": "s"}}
        with pytest.raises(ConfigError, match="alphas"):
            parse_sweep_config(doc)

    def test_bad_n_range(self):
        doc = {"sweep": {"alphas": [4.0], "nu": 1.0, "L": 1.0,
                         "mu_rule": {"type": "constant", "value": 1.0},
                         "N_range": [3, 1]},
               "experiment": {"name": "s"}}
        with pytest.raises(ConfigError, match="N_range"):
            parse_sweep_config(doc)

    def test_config_error_exit_code(self, tmp_path, capsys):
        doc = base_config()
        doc["params"]["mu"] = -2.0
        code = main(["simulate", write_config(tmp_path, doc), "--out-dir", str(tmp_path / "o")])
        assert code == 2
        assert "params.mu" in capsys.readouterr().err

    def test_unknown_suite_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "nonsense"])
        assert exc.value.code == 2


class TestSimulateCommand:
    def test_zero_ic_writes_zero_csv(self, tmp_path, capsys):
        doc = base_config()
        doc["sim"]["ic"] = {"kind": "constant", "value": 0.0}
        out = tmp_path / "out"
        code = main(["simulate", write_config(tmp_path, doc), "--out-dir", str(out)])
        assert code == 0
        data = np.genfromtxt(out / "trajectory.csv", delimiter=",", names=True)
        assert np.all(data["l2"] == 0.0)
        assert np.all(data["energy_residual"] == 0.0)
        summary = json.loads((out / "summary.json").read_text())
        assert summary["bound_checks"]["thm51"]["passed"] is True

    def test_determinism_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, base_config())
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", cfg, "--out-dir", str(a)]) == 0
        assert main(["simulate", cfg, "--out-dir", str(b)]) == 0
        assert (a / "trajectory.csv").read_bytes() == (b / "trajectory.csv").read_bytes()
        assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()

    def test_manifest_replay_reproduces_summary(self, tmp_path):
        cfg = write_config(tmp_path, base_config())
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", cfg, "--out-dir", str(a)]) == 0
        assert main(["simulate", str(a / "manifest.json"), "--out-dir", str(b)]) == 0
        assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()

    def test_blowup_exit_1_partial_csv(self, tmp_path, capsys):
        doc = base_config()
        # dt far beyond the explicit stability limit 0.5/(alpha+3u^2+mu)
        doc["params"] = {"nu": 1.0, "alpha": 30.0, "mu": 0.0}
        doc["control"] = None
        doc["sim"]["dt"] = 0.012
        doc["sim"]["T"] = 1.0
        doc["sim"]["ic"] = {"kind": "constant", "value": 0.05}
        out = tmp_path / "out"
        code = main(["simulate", write_config(tmp_path, doc), "--out-dir", str(out)])
        assert code == 1
        summary = json.loads((out / "summary.json").read_text())
        assert summary["blowup"] is not None
        data = np.genfromtxt(out / "trajectory.csv", delimiter=",", names=True)
        assert data.size >= 1

    def test_env_var_out_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DETCTL_OUT_DIR", str(tmp_path / "envout"))
        cfg = write_config(tmp_path, base_config())
        assert main(["simulate", cfg]) == 0
        assert (tmp_path / "envout" / "summary.json").exists()

    def test_csv_roundtrip_precision(self, tmp_path):
        cfg = write_config(tmp_path, base_config())
        out = tmp_path / "o"
        main(["simulate", cfg, "--out-dir", str(out)])
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[0] == "t,l2,h1x,h1,l4p4,gamma2,ih_l2,energy_residual"
        # 17 significant digits round-trip doubles exactly
        val = lines[1].split(",")[1]
        assert float(val) == float(format(float(val), ".17g"))


class TestSweepCommand:
    def test_single_cell_matches_direct_run(self, tmp_path):
        doc = {"sweep": {"alphas": [4.0], "nu": 1.0, "L": 1.0,
                         "mu_rule": {"type": "proportional", "factor": 5.0},
                         "N_range": [2, 2], "kind": "volume",
                         "ic": {"seed": 0, "kmax": 2, "amplitude": 1.0}},
               "experiment": {"name": "one-cell"}}
        out = tmp_path / "out"
        assert main(["sweep", write_config(tmp_path, doc), "--out-dir", str(out)]) == 0
        data = np.genfromtxt(out / "sweep.csv", delimiter=",", names=True)
        cfg, p = analysis.sweep_cell_config(1.0, 4.0, 1.0, 20.0, 2, kind="volume",
                                            ic_seed=0, ic_kmax=2, ic_amplitude=1.0)
        direct = analysis.terminal_ratio(cfg, p)
        assert data["terminal_ratio"] == pytest.approx(direct, rel=1e-12)
        assert int(data["minimal_N"]) == 2

    def test_jobs_parallel_same_output(self, tmp_path):
        doc = {"sweep": {"alphas": [4.0, 16.0], "nu": 1.0, "L": 1.0,
                         "mu_rule": {"type": "proportional", "factor": 5.0},
                         "N_range": [1, 3], "kind": "volume",
                         "ic": {"seed": 0, "kmax": 2, "amplitude": 1.0}},
               "experiment": {"name": "par"}}
        cfg = write_config(tmp_path, doc)
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["sweep", cfg, "--out-dir", str(a)]) == 0
        assert main(["sweep", cfg, "--out-dir", str(b), "--jobs", "3"]) == 0
        assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()
        assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()


class TestVerifyCommand:
    def test_interpolation_suite_passes(self, tmp_path, capsys):
        code = main(["verify", "interpolation", "--seed", "1", "--out-dir", str(tmp_path)])
        assert code == 0
        report = json.loads((tmp_path / "verify_interpolation.json").read_text())
        assert report["passed"] is True
        worst = report["properties"]["volume_defect_le_h_dphi"]["worst_ratio"]
        assert worst <= 1.0
