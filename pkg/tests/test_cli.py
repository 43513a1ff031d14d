import json
import math

import numpy as np
import pytest

from cvlearn.cli import main

from cvlearn.channels import eval_lambda, five_peak_example


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(tmp_path, payload, *extra):
    cfg = write_config(tmp_path, payload)
    out = tmp_path / "out"
    code = main(["--config", cfg, "--out", str(out), *extra])
    return code, out


def read_table(path):
    header = {}
    rows = []
    columns = None
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition("=")
            header[key] = val
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append(dict(zip(columns, line.split(","))))
    return header, columns, rows


@pytest.fixture(scope="module")
def fig2_artifacts(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("fig2")
    code, out = run_cli(
        tmp,
        {
            "command": "fig2",
            "seed": 5,
            "alpha_points": 101,
            "alpha_extent": 10.0,
            "beta_points": 17,
            "beta_max": 3.2,
            "mc_samples": 30000,
        },
    )
    assert code == 0
    return out


class TestFig2:
    @pytest.fixture
    def artifacts(self, fig2_artifacts):
        return fig2_artifacts

    def test_lambda_columns_closed_form(self, artifacts):
        header, _, rows = read_table(artifacts / "fig2_lambda.csv")
        assert header["schema"] == "cvlearn.v1"
        channel = five_peak_example(0.3, 1.6)
        for row in rows:
            beta = float(row["beta_re"])
            lam = complex(eval_lambda(channel, np.array([beta + 0j])))
            assert float(row["lambda_re"]) == pytest.approx(lam.real, abs=1e-12)
            assert float(row["lambda_ea_re"]) == pytest.approx(lam.real * math.exp(-math.exp(-4.0) * beta**2), abs=1e-12)
            assert float(row["lambda_vh_re"]) == pytest.approx(lam.real * math.exp(-(beta**2)), abs=1e-12)

    def test_mc_estimates_track_truth(self, artifacts):
        _, _, rows = read_table(artifacts / "fig2_lambda.csv")
        for row in rows:
            err = abs(float(row["est_ea_re"]) - float(row["lambda_re"]))
            assert err < 5 * float(row["est_ea_se"]) + 1e-9

    def test_densities_integrate_to_one(self, artifacts):
        _, _, rows = read_table(artifacts / "fig2_density.csv")
        pts = int(math.isqrt(len(rows)))
        h = 20.0 / (pts - 1)
        w = np.full(pts, h)
        w[0] = w[-1] = h / 2
        weight = np.outer(w, w).ravel()
        for col in ("p_true", "p_ea", "p_vh"):
            total = sum(float(r[col]) * wk for r, wk in zip(rows, weight))
            assert total == pytest.approx(1.0, abs=1e-4)


class TestAdvantage:
    def test_grid_and_flags(self, tmp_path):
        code, out = run_cli(
            tmp_path,
            {
                "command": "advantage",
                "seed": 0,
                "n_min": 6,
                "n_max": 12,
                "kappas": [1.0, 3.0],
                "rs": [1.0],
                "sigma": 0.3,
                "T_a": 0.9,
                "ef_variant": "finite_sigma",
            },
        )
        assert code == 0
        _, cols, rows = read_table(out / "advantage.csv")
        assert cols[:12] == [
            "n",
            "kappa",
            "eps",
            "delta",
            "sigma",
            "r",
            "T_b",
            "T_a",
            "log10_N_lower",
            "log10_N_upper",
            "log10_ratio",
            "valid",
        ]
        by_cell = {(int(r["n"]), float(r["kappa"])): r for r in rows}
        assert by_cell[(6, 1.0)]["valid"] == "0"
        assert "n_lt_8" in by_cell[(6, 1.0)]["valid_flags"]
        assert by_cell[(8, 3.0)]["valid"] == "0"
        assert "sigma_condition" in by_cell[(8, 3.0)]["valid_flags"]
        assert by_cell[(8, 1.0)]["valid"] == "1"
        assert math.isnan(float(by_cell[(10, 3.0)]["log10_ratio"]))

    def test_strict_mode_exit_code(self, tmp_path):
        code, _ = run_cli(
            tmp_path,
            {"command": "advantage", "n_min": 6, "n_max": 8, "kappas": [1.0], "rs": [1.0]},
            "--strict",
        )
        assert code == 3

    def test_vacuum_limit_constant_upper(self, tmp_path):
        code, out = run_cli(
            tmp_path,
            {"command": "advantage", "n_min": 8, "n_max": 40, "n_step": 4, "kappas": [1.0], "rs": [30.0]},
        )
        assert code == 0
        _, _, rows = read_table(out / "advantage.csv")
        uppers = {row["log10_N_upper"] for row in rows}
        assert len(uppers) == 1
        assert float(uppers.pop()) == pytest.approx(math.log10(8 * math.log(12.0) / 0.04), rel=1e-9)


class TestComplexity:
    def test_failure_rate_below_delta(self, tmp_path):
        code, out = run_cli(
            tmp_path,
            {
                "command": "complexity",
                "seed": 3,
                "trials": 100,
                "settings": [{"r": 1.0, "beta_norm_sq": 1.0}],
            },
        )
        assert code == 0
        _, _, rows = read_table(out / "complexity.csv")
        assert len(rows) == 1
        assert float(rows[0]["failure_rate"]) <= 1 / 3
        assert int(rows[0]["N"]) == math.ceil(8 * math.exp(2 * math.exp(-2.0)) * 25 * math.log(12.0))


class TestTail:
    def test_all_below_half(self, tmp_path):
        code, out = run_cli(tmp_path, {"command": "tail"})
        assert code == 0
        _, _, rows = read_table(out / "tail.csv")
        assert rows[0]["n"] == "8"
        assert rows[-1]["n"] == "14000"
        for row in rows:
            assert float(row["tail_prob"]) <= 0.5


class TestNoise:
    def test_zero_angle_rows_noiseless(self, tmp_path):
        for kind, col in (("phase_diffusion", "delta_deg"), ("crosstalk", "theta_deg")):
            code, out = run_cli(
                tmp_path,
                {"command": "noise", "kind": kind, "points": 7, "angles_deg": [0.0, 2.0], "n": 10, "beta_norm_sq_max": 20.0},
                "--format",
                "csv",
            )
            assert code == 0
            _, cols, rows = read_table(out / "noise.csv")
            assert col in cols
            for row in rows:
                if float(row[col]) == 0.0:
                    want = math.exp(-2 * math.exp(-3.0) * float(row["beta_norm_sq"]))
                    assert float(row["g_sq"]) == pytest.approx(want, abs=1e-10)


class TestGame:
    def test_summary_schema(self, tmp_path):
        code, out = run_cli(
            tmp_path,
            {"command": "game", "rounds": 60, "scheme": {"r": 2.0}, "format": "json"},
        )
        assert code == 0
        doc = json.loads((out / "game.json").read_text())
        assert doc["schema"] == "cvlearn.v1"
        assert set(doc["summary"]) == {"rounds", "N", "success_rate", "ci_low", "ci_high", "in_range_fraction"}
        assert doc["summary"]["rounds"] == 60
        assert doc["config"]["N"] == doc["summary"]["N"]


class TestDeterminism:
    def test_reruns_byte_identical(self, tmp_path):
        payload = {
            "command": "fig2",
            "seed": 9,
            "alpha_points": 21,
            "beta_points": 9,
            "mc_samples": 2000,
        }
        cfg = write_config(tmp_path, payload)
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            assert main(["--config", cfg, "--out", str(out)]) == 0
            outs.append((out / "fig2_lambda.csv").read_bytes() + (out / "fig2_density.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_thread_count_invariance(self, tmp_path):
        payload = {"command": "game", "rounds": 40, "scheme": {"r": 2.0}, "seed": 4}
        cfg = write_config(tmp_path, payload)
        blobs = []
        for tag, threads in (("t1", "1"), ("t4", "4")):
            out = tmp_path / tag
            assert main(["--config", cfg, "--out", str(out), "--threads", threads, "--format", "json"]) == 0
            blobs.append((out / "game.json").read_bytes())
        assert blobs[0] == blobs[1]

    def test_seed_flag_overrides(self, tmp_path):
        payload = {"command": "game", "rounds": 30, "scheme": {"r": 2.0}, "seed": 4}
        cfg = write_config(tmp_path, payload)
        out1, out2, out3 = tmp_path / "s4", tmp_path / "s5", tmp_path / "s4b"
        assert main(["--config", cfg, "--out", str(out1), "--format", "json"]) == 0
        assert main(["--config", cfg, "--out", str(out2), "--seed", "5", "--format", "json"]) == 0
        assert main(["--config", cfg, "--out", str(out3), "--seed", "4", "--format", "json"]) == 0
        assert (out1 / "game.json").read_bytes() == (out3 / "game.json").read_bytes()
        assert (out1 / "game.json").read_bytes() != (out2 / "game.json").read_bytes()


class TestErrors:
    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["--config", str(tmp_path / "nope.json")]) == 2
        assert "config error" in capsys.readouterr().err

    def test_unknown_command(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"command": "frobnicate"})
        assert main(["--config", cfg]) == 2
        assert "command" in capsys.readouterr().err

    def test_bad_field_type(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"command": "tail", "points": "forty"})
        assert main(["--config", cfg]) == 2
        assert "points" in capsys.readouterr().err

    def test_gaussian_variant_needs_sigma(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"command": "advantage", "ef_variant": "gaussian", "sigma": 0.0})
        assert main(["--config", cfg]) == 2
        assert "gaussian" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["--config", str(path)]) == 2
        assert "config error" in capsys.readouterr().err
