import json

import numpy as np
import pytest

from scs_mimo import ConfigError, ExperimentConfig, run_capacity, run_eigen_cdf, run_moments
from scs_mimo.cli import main
from scs_mimo.experiments import ResultTable, verify_embedded_hash


def small_moments_cfg(**kwargs):
    raw = {
        "experiment": "moments",
        "system": {"K": 2},
        "sweep": {"m_values": [8, 16], "d_values": [0.5]},
        "trials": 300,
        "seed": 5,
    }
    raw.update(kwargs)
    return ExperimentConfig.from_dict(raw)


class TestExperimentConfig:
    def test_defaults(self):
        cfg = ExperimentConfig.from_dict({}, experiment="moments")
        assert cfg.trials == 10_000
        assert cfg.m_values == (8, 16, 32, 64, 128, 256, 512)
        assert cfg.d_values == (0.3, 0.5, 1.0)

    def test_capacity_default_spacing_sweep(self):
        cfg = ExperimentConfig.from_dict({}, experiment="capacity")
        assert len(cfg.d_values) == 16
        assert cfg.d_values[0] == 0.1 and cfg.d_values[-1] == 2.0

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({}, experiment="nope")

    def test_unknown_system_key(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(
                {"system": {"bogus": 1}}, experiment="moments"
            )

    def test_empty_sweep_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(
                {"sweep": {"m_values": []}}, experiment="moments"
            )

    def test_cdf_trial_floor(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"trials": 50}, experiment="eigen-cdf")

    def test_from_file_roundtrip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"experiment": "moments", "seed": 9}))
        cfg = ExperimentConfig.from_file(str(path))
        assert cfg.seed == 9

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="no/such/file.json"):
            ExperimentConfig.from_file("no/such/file.json")

    def test_hash_stable(self):
        assert small_moments_cfg().config_hash() == small_moments_cfg().config_hash()
        assert (
            small_moments_cfg(seed=6).config_hash()
            != small_moments_cfg().config_hash()
        )


class TestResultTable:
    def test_ragged_rejected(self):
        with pytest.raises(ConfigError):
            ResultTable(columns=["a", "b"], rows=[[1.0]], metadata={})

    def test_csv_layout(self, tmp_path):
        table = ResultTable(
            columns=["x", "y"], rows=[[1.0, 2.5]], metadata={"seed": 1, "config": "{}"}
        )
        out = tmp_path / "t.csv"
        table.to_csv(out)
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# ")
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == "x,y"
        assert lines[header_idx + 1] == "1.0,2.5"

    def test_json_roundtrip(self, tmp_path):
        table = ResultTable(columns=["x"], rows=[[0.1]], metadata={"seed": 1})
        out = tmp_path / "t.json"
        table.to_json(out)
        payload = json.loads(out.read_text())
        assert payload["rows"] == [[0.1]]


class TestRunMoments:
    def test_rows_and_trends(self):
        table = run_moments(small_moments_cfg(sweep={"m_values": [8, 32, 128], "d_values": [0.3, 0.5]}, trials=800))
        assert len(table.rows) == 6
        d_col = table.column("d_over_lambda")
        m_col = table.column("m_antennas")
        assert list(zip(d_col, m_col)) == sorted(zip(d_col, m_col))
        assert np.all(table.column("ana_abs_mean") == 0.0)
        ana = table.column("ana_variance")
        for d in (0.3, 0.5):
            sel = ana[d_col == d]
            assert np.all(np.diff(sel) < 0)  # variance falls with M per spacing

    def test_wrong_experiment(self):
        with pytest.raises(ConfigError):
            run_moments(ExperimentConfig.from_dict({}, experiment="capacity"))


class TestRunEigenCdf:
    def test_shapes_and_monotone_cdfs(self):
        cfg = ExperimentConfig.from_dict(
            {"sweep": {"d_values": [0.5]}, "trials": 100}, experiment="eigen-cdf"
        )
        table = run_eigen_cdf(cfg)
        m = table.column("m_antennas")
        sparse = table.column("is_sparse")
        is_max = table.column("eig_is_max")
        prob = table.column("probability")
        value = table.column("eigenvalue")
        # 2 array sizes x (gaussian + 1 spacing) x 2 statistics x 100 samples
        assert len(table.rows) == 2 * 2 * 2 * 100
        for m_val in (6, 128):
            for sp in (0, 1):
                for mx in (0, 1):
                    sel = (m == m_val) & (sparse == sp) & (is_max == mx)
                    assert np.all(np.diff(value[sel]) >= 0)
                    assert np.all(np.diff(prob[sel]) > 0)
                    assert prob[sel][-1] == 1.0

    def test_massive_array_better_conditioned(self):
        cfg = ExperimentConfig.from_dict(
            {"sweep": {"d_values": [0.5]}, "trials": 150}, experiment="eigen-cdf"
        )
        table = run_eigen_cdf(cfg)
        m = table.column("m_antennas")
        sparse = table.column("is_sparse")
        is_max = table.column("eig_is_max")
        value = table.column("eigenvalue")

        def median_cond(m_val):
            sel = (m == m_val) & (sparse == 1)
            lo = np.sort(value[sel & (is_max == 0)])
            hi = np.sort(value[sel & (is_max == 1)])
            return np.median(hi) / np.median(lo)

        assert median_cond(128) * 10 < median_cond(6)


class TestRunCapacity:
    def test_baseline_constant_and_bounds(self):
        cfg = ExperimentConfig.from_dict(
            {
                "system": {"M": 64, "K": 4},
                "sweep": {"d_values": [0.1, 0.5, 1.0], "rho_values": [10.0]},
                "trials": 30,
            },
            experiment="capacity",
        )
        table = run_capacity(cfg)
        gauss = table.column("gaussian_per_user")
        assert np.all(gauss == gauss[0])
        sparse = table.column("sparse_per_user")
        assert np.all(sparse >= 0.0)
        assert np.all(sparse <= np.log2(1 + 10.0 * 64))
        assert np.all(table.column("asymptotic_per_user") == np.log2(1 + 10.0 * 64))

    def test_k_exceeding_m_rejected(self):
        cfg = ExperimentConfig.from_dict(
            {"system": {"M": 4, "K": 8}, "trials": 10}, experiment="capacity"
        )
        with pytest.raises(ConfigError):
            run_capacity(cfg)


class TestHashVerification:
    def test_csv_roundtrip(self, tmp_path):
        out = tmp_path / "m.csv"
        table = run_moments(small_moments_cfg())
        table.to_csv(out)
        verify_embedded_hash(out)  # must not raise

    def test_json_roundtrip(self, tmp_path):
        out = tmp_path / "m.json"
        run_moments(small_moments_cfg()).to_json(out)
        verify_embedded_hash(out)

    def test_tampered_config_detected(self, tmp_path):
        out = tmp_path / "m.csv"
        run_moments(small_moments_cfg()).to_csv(out)
        text = out.read_text().replace('"seed":5', '"seed":6')
        out.write_text(text)
        with pytest.raises(ConfigError, match="hash mismatch"):
            verify_embedded_hash(out)


class TestCli:
    def test_moments_roundtrip_and_determinism(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "system": {"K": 2},
                    "sweep": {"m_values": [8], "d_values": [0.5]},
                    "trials": 200,
                }
            )
        )
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        base = ["moments", "--config", str(cfg_path), "--seed", "42"]
        assert main(base + ["--out", str(out_a), "--threads", "1"]) == 0
        assert main(base + ["--out", str(out_b), "--threads", "4"]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_missing_config_exit_1(self, tmp_path, capsys):
        code = main(["moments", "--config", str(tmp_path / "absent.json")])
        assert code == 1
        assert "absent.json" in capsys.readouterr().err

    def test_validate_check_tampered_exit_1(self, tmp_path, capsys):
        out = tmp_path / "m.csv"
        run_moments(small_moments_cfg()).to_csv(out)
        out.write_text(out.read_text().replace('"seed":5', '"seed":6'))
        assert main(["validate", "--check", str(out)]) == 1

    def test_json_format(self, tmp_path):
        out = tmp_path / "m.json"
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {"sweep": {"m_values": [8], "d_values": [0.5]}, "trials": 150}
            )
        )
        code = main(
            [
                "moments",
                "--config",
                str(cfg_path),
                "--out",
                str(out),
                "--format",
                "json",
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["columns"][0] == "d_over_lambda"
