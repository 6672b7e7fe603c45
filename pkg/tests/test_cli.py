"""Command-line front-end: artifacts, determinism, error reporting."""

import json
import math
from pathlib import Path

import pytest

from spheredecon.cli import main

REPO = Path(__file__).resolve().parent.parent
CONFIGS = REPO / "demos" / "configs"
THETA_41 = 2 * math.pi / 41


def run(argv, capsys):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPartitionCommand:
    def test_writes_expected_json(self, tmp_path, capsys):
        out = tmp_path / "p.json"
        csv = tmp_path / "n.csv"
        code, _, err = run(["partition", "--n", 100, "--out-json", out, "--out-csv", csv], capsys)
        assert code == 0 and err == ""
        obj = json.loads(out.read_text())
        assert obj["s"] == 7
        assert obj["theta0"] == pytest.approx(1.0471975511965979, abs=1e-12)
        assert csv.read_text().splitlines()[0] == "theta,phi,weight"

    def test_small_n_fails_with_json_error(self, tmp_path, capsys):
        code, _, err = run(["partition", "--n", 49, "--out-json", tmp_path / "x.json"], capsys)
        assert code != 0
        payload = json.loads(err)
        assert "N >= 50" in payload["error"]

    def test_reruns_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(["partition", "--n", 500, "--out-json", a], capsys)
        run(["partition", "--n", 500, "--out-json", b], capsys)
        assert a.read_bytes() == b.read_bytes()


class TestFilterCommand:
    def test_cap_filter_with_fits(self, tmp_path, capsys):
        import numpy as np

        out = tmp_path / "f.json"
        code, _, _ = run(
            ["filter", "--kind", "cap", "--theta0", THETA_41, "--m-max", 1400,
             "--gamma", 1.5, "--zeta", 1.5, "--out", out],
            capsys,
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["m_max"] == 1400
        assert obj["provenance"] == "closed_form_cap"
        assert obj["decay_fit"]["gamma"] == 1.5
        assert obj["lower_fit"]["c0"] > 0
        # the emitted sequence spans the documented scaled range
        b = np.asarray(obj["b"])
        m = np.arange(1, 1401, dtype=float)
        scaled = (1 + m * (m + 1)) ** 0.75 * np.abs(b[1:])
        assert scaled.min() >= 0.4e-3
        assert scaled.max() <= (3**0.75 / 2) * math.sqrt(math.sin(THETA_41))

    def test_identity_filter(self, tmp_path, capsys):
        out = tmp_path / "id.json"
        code, _, _ = run(["filter", "--kind", "identity", "--m-max", 5, "--out", out], capsys)
        assert code == 0
        assert json.loads(out.read_text())["b"] == [1.0] * 6

    def test_missing_parameter_reported(self, tmp_path, capsys):
        code, _, err = run(["filter", "--kind", "cap", "--m-max", 5, "--out", tmp_path / "x"], capsys)
        assert code == 2
        assert "theta0" in json.loads(err)["error"]


class TestVerifyMzCommand:
    def test_epsilon_below_one_at_4x(self, tmp_path, capsys):
        out = tmp_path / "mz.json"
        code, _, _ = run(["verify-mz", "--n", 4 * 49, "--m", 6, "--out", out], capsys)
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["epsilon"] < 1.0
        assert obj["is_mz"] is True
        assert obj["A"] <= 1.0 <= obj["B"]

    def test_stdout_mode(self, capsys):
        code, out, _ = run(["verify-mz", "--n", 256, "--m", 3], capsys)
        assert code == 0
        assert json.loads(out)["m"] == 3


class TestSeedRequirements:
    def test_simulate_needs_seed_for_noise(self, tmp_path, capsys):
        filt = tmp_path / "f.json"
        run(["filter", "--kind", "identity", "--m-max", 4, "--out", filt], capsys)
        code, _, err = run(
            ["simulate", "--filter", filt, "--truth-m-max", 4, "--truth-sigma", 1.0,
             "--truth-seed", 3, "--n", 100, "--beta", 0.1, "--out", tmp_path / "m.csv"],
            capsys,
        )
        assert code == 2
        assert "--seed" in json.loads(err)["error"]

    def test_random_nodes_need_seed(self, tmp_path, capsys):
        code, _, err = run(
            ["nodes", "--n", 100, "--rule", "random_in_region", "--out", tmp_path / "n.csv"],
            capsys,
        )
        assert code == 2
        assert "node-seed" in json.loads(err)["error"]

    def test_random_nodes_with_seed(self, tmp_path, capsys):
        out = tmp_path / "n.csv"
        code, _, _ = run(
            ["nodes", "--n", 100, "--rule", "random_in_region", "--node-seed", 4,
             "--out", out],
            capsys,
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "theta,phi,weight" and len(lines) == 101


class TestConfigHandling:
    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 100, "bogus": 1}))
        code, _, err = run(
            ["partition", "--config", cfg, "--out-json", tmp_path / "p.json"], capsys
        )
        assert code == 2
        assert "bogus" in json.loads(err)["error"]

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 100}))
        out = tmp_path / "p.json"
        code, _, _ = run(["partition", "--config", cfg, "--n", 64, "--out-json", out], capsys)
        assert code == 0
        assert json.loads(out.read_text())["N"] == 64


class TestRoundTrip:
    def test_cap_scenario_end_to_end(self, tmp_path, capsys, monkeypatch):
        """simulate -> reconstruct -> certify on the bundled cap scenario."""
        monkeypatch.chdir(tmp_path)
        code, _, err = run(["filter", "--config", CONFIGS / "cap_filter.json"], capsys)
        assert code == 0, err
        code, _, err = run(
            ["simulate", "--filter", "cap41_filter.json", "--truth-m-max", 16,
             "--truth-sigma", 2.0, "--truth-seed", 7, "--n", 512, "--beta", 0.01,
             "--seed", 11, "--out", "meas.csv", "--sidecar", "meas_meta.json",
             "--save-truth", "truth.json"],
            capsys,
        )
        assert code == 0, err
        code, _, err = run(
            ["reconstruct", "--filter", "cap41_filter.json", "--measurements",
             "meas.csv", "--m", 7, "--out", "solution.json"],
            capsys,
        )
        assert code == 0, err
        code, _, err = run(
            ["certify", "--filter", "cap41_filter.json", "--n", 512, "--m", 7,
             "--omega", 2.0, "--gamma", 1.5, "--zeta", 1.5, "--beta", 0.01,
             "--truth", "truth.json", "--solution", "solution.json",
             "--out", "certificate.json"],
            capsys,
        )
        assert code == 0, err
        cert = json.loads(Path("certificate.json").read_text())
        assert cert["verification"]["passed"] is True
        assert cert["verification"]["pass_Hzeta"] is True
        assert cert["verification"]["pass_L2"] is True
        assert cert["bound_L2"] is not None
        sol = json.loads(Path("solution.json").read_text())
        assert sol["report"]["full_rank"] is True

    def test_experiment_command_bound_dominance(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run(["filter", "--config", CONFIGS / "cap_filter.json"], capsys)
        code, _, err = run(["experiment", "--config", CONFIGS / "cap_experiment.json"], capsys)
        assert code == 0, err
        lines = Path("cap41_curve.csv").read_text().strip().splitlines()
        assert lines[0] == "m,N,beta,measured_L2,measured_Hzeta,bound_Hzeta,bound_L2"
        rows = json.loads(Path("cap41_rows.json").read_text())
        assert len(rows) == 4
        for row in rows:
            assert row["passed"] is True
            assert row["measured_Hzeta"] <= row["bound_Hzeta"]
            assert row["measured_L2"] <= row["bound_L2"]

    def test_identity_noiseless_experiment(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run(["filter", "--kind", "identity", "--m-max", 20, "--out", "id.json"], capsys)
        code, _, err = run(
            ["experiment", "--filter", "id.json", "--omega", 2.0, "--gamma", 0.0,
             "--zeta", 0.0, "--m-grid", "3,4,5", "--beta", 0.0, "--truth-m-max", 12,
             "--truth-seed", 5, "--out", "id_curve.csv", "--out-json", "id_rows.json"],
            capsys,
        )
        assert code == 0, err
        rows = json.loads(Path("id_rows.json").read_text())
        for row in rows:
            assert row["measured_L2"] <= row["bound_Hzeta"]

    def test_experiment_rerun_identical(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run(["filter", "--kind", "identity", "--m-max", 10, "--out", "id.json"], capsys)
        args = ["experiment", "--filter", "id.json", "--omega", 2.0, "--gamma", 0.0,
                "--m-grid", "3,4", "--beta", 0.001, "--seed", 9, "--truth-m-max", 8,
                "--truth-seed", 2, "--out", "c1.csv"]
        run(args, capsys)
        first = Path("c1.csv").read_bytes()
        args[-1] = "c2.csv"
        run(args, capsys)
        assert first == Path("c2.csv").read_bytes()
