import json
import math

import numpy as np
import pytest

from parasitech.cli import EXIT_DATA, EXIT_FIT, EXIT_OK, EXIT_USAGE, run


def run_cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_series(tmp_path, name, times, values):
    path = tmp_path / name
    lines = ["t,value"] + [
        f"{float(t)!r},{float(v)!r}" for t, v in zip(times, values)
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def pair(tmp_path, rng):
    t = np.arange(1950, 1994)
    h = np.exp(rng.uniform(0.5, 3.0, t.size))
    p = 2.0 * h**1.5 * np.exp(rng.normal(0, 0.05, t.size))
    host = write_series(tmp_path, "host.csv", t, h)
    parasite = write_series(tmp_path, "parasite.csv", t, p)
    return host, parasite


class TestClassifyCommand:
    def test_with_test_mode(self, capsys):
        code, out, _ = run_cli(
            capsys, "classify", "--b", "1.74", "--se", "0.11", "--n", "44"
        )
        assert code == EXIT_OK
        assert "grade 3" in out
        assert "symbiosis" in out
        assert "!" in out
        assert "evolve rapidly" in out

    def test_point_mode(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--b", "0.23")
        assert code == EXIT_OK
        assert "grade 1" in out
        assert "parasitism" in out

    def test_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "classify", "--b", "1.19", "--format", "json"
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["grade"] == 3
        assert payload["symbol"] == "!"

    def test_bad_float_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "classify", "--b", "abc")
        assert code == EXIT_USAGE
        assert err.startswith("USAGE_ERROR:")

    def test_se_without_n(self, capsys):
        code, _, err = run_cli(capsys, "classify", "--b", "1.2", "--se", "0.1")
        assert code == EXIT_DATA
        assert err.startswith("DATA_ERROR:")

    def test_invalid_se_value(self, capsys):
        code, _, err = run_cli(
            capsys, "classify", "--b", "1.2", "--se", "-0.1", "--n", "10"
        )
        assert code == EXIT_DATA


class TestUsageErrors:
    def test_no_command(self, capsys):
        code, _, err = run_cli(capsys)
        assert code == EXIT_USAGE
        assert "USAGE_ERROR:" in err

    def test_unknown_command(self, capsys):
        code, _, err = run_cli(capsys, "explode")
        assert code == EXIT_USAGE

    def test_unknown_flag(self, capsys):
        code, _, err = run_cli(capsys, "classify", "--b", "1.0", "--frobnicate")
        assert code == EXIT_USAGE

    @pytest.mark.parametrize(
        "command",
        [
            "evolve",
            "evolve-multi",
            "fit-logistic",
            "forecast",
            "correlate",
            "classify",
            "simulate",
            "recover",
            "stats",
            "standardize",
        ],
    )
    def test_help_lists_flags_with_defaults(self, capsys, command):
        with pytest.raises(SystemExit) as exc:
            run([command, "--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "--help" in out
        assert "default" in out or "required" in out


class TestEvolveCommand:
    def test_text_report(self, capsys, pair):
        host, parasite = pair
        code, out, _ = run_cli(
            capsys, "evolve", "--host", str(host), "--parasite", str(parasite)
        )
        assert code == EXIT_OK
        assert "Evolutionary coefficient B" in out
        assert "grade 3" in out

    def test_json_deterministic(self, capsys, pair):
        host, parasite = pair
        args = (
            "evolve", "--host", str(host), "--parasite", str(parasite),
            "--format", "json",
        )
        code1, out1, _ = run_cli(capsys, *args)
        code2, out2, _ = run_cli(capsys, *args)
        assert code1 == code2 == EXIT_OK
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["meta"]["inputs"] == ["host.csv", "parasite.csv"]
        assert abs(payload["fits"][0]["b"] - 1.5) < 0.02

    def test_plot_data(self, capsys, pair, tmp_path):
        host, parasite = pair
        prefix = tmp_path / "plots" / "run"
        code, _, err = run_cli(
            capsys,
            "evolve", "--host", str(host), "--parasite", str(parasite),
            "--plot-data", str(prefix),
        )
        assert code == EXIT_OK
        assert (tmp_path / "plots" / "run_fit1_parasite.csv").exists()
        assert (tmp_path / "plots" / "run_trajectories.csv").exists()

    def test_missing_file_is_data_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys,
            "evolve", "--host", str(tmp_path / "nope.csv"),
            "--parasite", str(tmp_path / "nope2.csv"),
        )
        assert code == EXIT_DATA
        assert err.startswith("DATA_ERROR:")

    def test_no_overlap_is_data_error(self, capsys, tmp_path):
        h = write_series(tmp_path, "h.csv", [1, 2, 3, 4], [1.0, 2.0, 3.0, 4.0])
        p = write_series(tmp_path, "p.csv", [7, 8, 9, 10], [1.0, 2.0, 3.0, 4.0])
        code, _, err = run_cli(
            capsys, "evolve", "--host", str(h), "--parasite", str(p)
        )
        assert code == EXIT_DATA

    def test_multi(self, capsys, tmp_path, rng):
        t = np.arange(2008, 2019)
        h = np.exp(rng.uniform(0, 1, t.size))
        p2 = np.exp(rng.uniform(0, 2, t.size))
        p1 = h**0.5 * p2**0.3 * np.exp(rng.normal(0, 0.02, t.size))
        host = write_series(tmp_path, "cpu.csv", t, h)
        target = write_series(tmp_path, "cam.csv", t, p1)
        sibling = write_series(tmp_path, "ram.csv", t, p2)
        code, out, _ = run_cli(
            capsys,
            "evolve-multi", "--host", str(host),
            "--parasite", str(target), "--parasite", str(sibling),
            "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert len(payload["multi_fits"]) == 1
        fit = payload["multi_fits"][0]
        assert fit["target"] == "cam"
        assert fit["predictors"] == ["cpu", "ram"]

    def test_multi_needs_two_parasites(self, capsys, pair):
        host, parasite = pair
        code, _, err = run_cli(
            capsys,
            "evolve-multi", "--host", str(host), "--parasite", str(parasite),
        )
        assert code == EXIT_DATA


class TestFitLogisticCommand:
    def test_fit_and_forecast(self, capsys, tmp_path):
        t = np.linspace(0, 40, 20)
        values = 100.0 / (1.0 + np.exp(5.0 - 0.25 * t))
        path = write_series(tmp_path, "s.csv", t, values)
        code, out, _ = run_cli(
            capsys, "fit-logistic", "--input", str(path), "--format", "json"
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert abs(payload["k"] - 100.0) < 1e-3
        assert not payload["k_at_bound"]

        code, out, _ = run_cli(
            capsys, "forecast", "--input", str(path), "--to", "60", "--step", "5"
        )
        assert code == EXIT_OK
        lines = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert lines[0] == "t,value"
        last_t, last_v = (float(c) for c in lines[-1].split(","))
        assert last_t == 60.0
        assert abs(last_v - 100.0 / (1.0 + math.exp(5.0 - 0.25 * 60.0))) < 0.5

    def test_decreasing_series_is_fit_error(self, capsys, tmp_path):
        path = write_series(
            tmp_path, "down.csv", [0, 1, 2, 3, 4], [10.0, 8.0, 6.0, 4.0, 2.0]
        )
        code, _, err = run_cli(capsys, "fit-logistic", "--input", str(path))
        assert code == EXIT_FIT
        assert err.startswith("FIT_ERROR:")

    def test_forecast_before_last_observation(self, capsys, tmp_path):
        t = np.linspace(0, 40, 20)
        values = 100.0 / (1.0 + np.exp(5.0 - 0.25 * t))
        path = write_series(tmp_path, "s.csv", t, values)
        code, _, err = run_cli(
            capsys, "forecast", "--input", str(path), "--to", "10"
        )
        assert code == EXIT_DATA


class TestCorrelateCommand:
    def test_matrix(self, capsys, tmp_path, rng):
        t = np.arange(2000, 2016)
        a = write_series(tmp_path, "a.csv", t, np.exp(rng.uniform(0, 1, t.size)))
        b = write_series(tmp_path, "b.csv", t, np.exp(rng.uniform(0, 1, t.size)))
        code, out, _ = run_cli(
            capsys, "correlate", "--series", str(a), "--series", str(b),
            "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["names"] == ["a", "b"]
        assert payload["entries"][0][0]["r"] == 1.0

    def test_needs_two(self, capsys, tmp_path, rng):
        t = np.arange(2000, 2016)
        a = write_series(tmp_path, "a.csv", t, np.exp(rng.uniform(0, 1, t.size)))
        code, _, err = run_cli(capsys, "correlate", "--series", str(a))
        assert code == EXIT_DATA


class TestStatsAndStandardize:
    def test_stats_log(self, capsys, tmp_path):
        path = write_series(
            tmp_path, "s.csv", [1, 2, 3], [math.e, math.e**2, math.e**3]
        )
        code, out, _ = run_cli(
            capsys, "stats", "--input", str(path), "--log", "--format", "json"
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["scale"] == "log"
        assert abs(payload["mean"] - 2.0) < 1e-12
        assert abs(payload["sd"] - 1.0) < 1e-12

    def test_standardize(self, capsys, tmp_path):
        path = write_series(tmp_path, "s.csv", [1, 2, 3], [1.0, 2.0, 3.0])
        code, out, _ = run_cli(capsys, "standardize", "--input", str(path))
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == "t,z"
        zs = [float(l.split(",")[1]) for l in lines[1:]]
        np.testing.assert_allclose(zs, [-1.0, 0.0, 1.0])

    def test_standardize_constant_is_data_error(self, capsys, tmp_path):
        path = write_series(tmp_path, "s.csv", [1, 2, 3], [5.0, 5.0, 5.0])
        code, _, err = run_cli(capsys, "standardize", "--input", str(path))
        assert code == EXIT_DATA


class TestSimulateAndRecover:
    def test_simulate_then_evolve_composes(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys,
            "simulate",
            "--k1", "100", "--b1", "0.05", "--t1", "120",
            "--k2", "50", "--b2", "0.087", "--t2", "80",
            "--t-start", "0", "--t-end", "43", "--n", "44",
            "--noise", "0.02", "--missing", "0", "--seed", "7",
            "--out-prefix", str(tmp_path / "sim"),
        )
        assert code == EXIT_OK
        host_path = tmp_path / "sim_host.csv"
        parasite_path = tmp_path / "sim_parasite.csv"
        assert host_path.exists() and parasite_path.exists()
        assert str(host_path) in out

        code, out, _ = run_cli(
            capsys,
            "evolve", "--host", str(host_path), "--parasite", str(parasite_path),
            "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert abs(payload["fits"][0]["b"] - 1.74) < 0.1

    def test_seed_env_var(self, capsys, tmp_path, monkeypatch):
        def simulate(prefix):
            return run_cli(
                capsys,
                "simulate",
                "--k1", "100", "--b1", "0.05", "--t1", "120",
                "--k2", "50", "--b2", "0.087", "--t2", "80",
                "--t-start", "0", "--t-end", "43", "--n", "44",
                "--noise", "0.02",
                "--out-prefix", str(tmp_path / prefix),
            )

        monkeypatch.setenv("PARASITECH_SEED", "31")
        simulate("env")
        monkeypatch.setenv("PARASITECH_SEED", "32")
        simulate("env2")
        a = (tmp_path / "env_host.csv").read_text()
        b = (tmp_path / "env2_host.csv").read_text()
        assert a != b

        # explicit flag wins over the environment
        monkeypatch.setenv("PARASITECH_SEED", "31")
        run_cli(
            capsys,
            "simulate",
            "--k1", "100", "--b1", "0.05", "--t1", "120",
            "--k2", "50", "--b2", "0.087", "--t2", "80",
            "--t-start", "0", "--t-end", "43", "--n", "44",
            "--noise", "0.02", "--seed", "32",
            "--out-prefix", str(tmp_path / "flag"),
        )
        assert (tmp_path / "flag_host.csv").read_text() == b

    def test_recover(self, capsys, tmp_path):
        config = {
            "host": {"k": 100.0, "t_star": 120.0, "b": 0.05},
            "parasites": [{"k": 50.0, "t_star": 80.0, "b": 0.087}],
            "t_start": 0.0,
            "t_end": 43.0,
            "n_points": 44,
            "noise_sigma": 0.03,
            "missing_prob": 0.0,
            "seed": 5,
        }
        path = tmp_path / "sim.json"
        path.write_text(json.dumps(config))
        code, out, _ = run_cli(
            capsys,
            "recover", "--config", str(path), "--replicates", "25",
            "--early-phase", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["replicates"] == 25
        assert abs(payload["true_b"] - 1.74) < 1e-12
        assert abs(payload["bias"]) < 0.05
        assert len(payload["estimates"]) == 25

    def test_recover_bad_config(self, capsys, tmp_path):
        path = tmp_path / "sim.json"
        path.write_text("{\"host\": {}}")
        code, _, err = run_cli(
            capsys, "recover", "--config", str(path), "--replicates", "5"
        )
        assert code == EXIT_DATA
