import json
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ringheat.cli import main


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, map(float, ln.split(",")))) for ln in lines[1:]]
    return header, rows


class TestVerify:
    def test_default_run_passes(self, capsys):
        rc, out, _ = run(["verify"], capsys)
        assert rc == 0
        assert "all checks passed" in out
        assert "0.40480" in out  # the outer-flux gap is reported

    def test_json_report(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        rc, _, _ = run(["verify", "--out", str(report)], capsys)
        assert rc == 0
        data = json.loads(report.read_text())
        assert data["all_passed"]
        assert data["inconsistency"]["tau0_outer_gap"] == pytest.approx(0.405, abs=1e-3)
        names = {c["name"] for c in data["checks"]}
        assert "boundary_difference_C" in names

    def test_eps_zero_config_passes(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"reduced": {"A": 0.75, "B": 6.0, "eps": 0.0, "a": 1.0}}))
        rc, out, _ = run(["verify", "--config", str(cfg)], capsys)
        assert rc == 0

    def test_tampered_K_fails(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "reduced": {"A": 0.75, "B": 6.0, "eps": 0.5, "a": 1.0},
            "constants": {"C3": 0.125, "K": -5.0 / 18432.0 + 1e-3},
        }))
        rc, out, _ = run(["verify", "--config", str(cfg)], capsys)
        assert rc == 1
        lines = {ln.split()[0]: ln for ln in out.splitlines() if " PASS" in ln or " FAIL" in ln}
        assert "FAIL" in lines["boundary_difference_C"]
        assert "PASS" in lines["pde_theta_general"]  # any K solves the equation

    def test_malformed_config_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        rc, _, err = run(["verify", "--config", str(cfg)], capsys)
        assert rc == 2
        assert "error" in err

    def test_both_parameter_blocks_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "reduced": {"A": 0.75, "B": 6.0, "eps": 0.5, "a": 1.0},
            "physical": {"rho": 1.0, "Cp": 3.0, "k_cond": 24.0, "mu": 1.0,
                         "mu0": 0.5, "T0": 1.0, "R10": 2.0 ** 0.5, "R20": 1.0},
        }))
        rc, _, err = run(["verify", "--config", str(cfg)], capsys)
        assert rc == 2

    def test_unknown_config_key_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"reduced": {"A": 0.75, "B": 6.0, "eps": 0.5,
                                               "a": 1.0, "oops": 3}}))
        rc, _, err = run(["verify", "--config", str(cfg)], capsys)
        assert rc == 2


class TestSolve:
    def test_csv_contract_and_accuracy(self, tmp_path, capsys):
        out_path = tmp_path / "solve.csv"
        rc, out, _ = run(["solve", "--grid", "128", "--tau-end", "0.25",
                          "--bc-mode", "derived", "--out", str(out_path)], capsys)
        assert rc == 0
        header, rows = read_csv(out_path)
        assert header == ["tau", "eta", "theta_numeric", "theta_exact", "abs_err"]
        final_err = max(r["abs_err"] for r in rows if r["tau"] == 0.25)
        assert final_err < 1e-4
        assert "error_inf=" in out

    def test_t_end_zero_numeric_equals_exact(self, tmp_path, capsys):
        out_path = tmp_path / "zero.csv"
        rc, _, _ = run(["solve", "--grid", "16", "--tau-end", "0",
                        "--out", str(out_path)], capsys)
        assert rc == 0
        _, rows = read_csv(out_path)
        assert all(r["theta_numeric"] == r["theta_exact"] for r in rows)
        assert all(r["abs_err"] == 0.0 for r in rows)

    def test_paper_mode_warns(self, tmp_path, capsys):
        rc, _, err = run(["solve", "--grid", "16", "--bc-mode", "paper",
                          "--out", str(tmp_path / "p.csv")], capsys)
        assert rc == 0
        assert "inconsistent" in err

    def test_lf_line_endings_and_17_digits(self, tmp_path, capsys):
        out_path = tmp_path / "solve.csv"
        run(["solve", "--grid", "16", "--out", str(out_path)], capsys)
        raw = out_path.read_bytes()
        assert b"\r" not in raw
        # a round-trip-exact irrational node coordinate appears in full
        assert b"0.0625" in raw

    def test_deterministic_rerun_bit_identical(self, tmp_path, capsys):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["solve", "--grid", "32", "--out", str(p1)], capsys)
        run(["solve", "--grid", "32", "--out", str(p2)], capsys)
        assert p1.read_bytes() == p2.read_bytes()

    def test_csv_decimals_round_trip_exactly(self, tmp_path, capsys):
        from ringheat.temperature import theta_reference

        out_path = tmp_path / "zero.csv"
        run(["solve", "--grid", "16", "--tau-end", "0", "--out", str(out_path)], capsys)
        _, rows = read_csv(out_path)
        # parsing the 17-digit text recovers the computed doubles bit for bit
        for r in rows:
            assert r["theta_exact"] == float(theta_reference(r["tau"], r["eta"]))

    def test_euler_scheme_end_to_end(self, tmp_path, capsys):
        out_path = tmp_path / "euler.csv"
        rc, _, _ = run(["solve", "--grid", "64", "--scheme", "euler",
                        "--tau-end", "0.25", "--out", str(out_path)], capsys)
        assert rc == 0
        _, rows = read_csv(out_path)
        final_err = max(r["abs_err"] for r in rows if r["tau"] == 0.25)
        assert final_err < 5e-3  # first order in time, still converged

    def test_general_constants_require_dirichlet(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"reduced": {"A": 1.5, "B": 6.0, "eps": 0.5, "a": 1.0}}))
        rc, _, err = run(["solve", "--config", str(cfg), "--grid", "16",
                          "--out", str(tmp_path / "x.csv")], capsys)
        assert rc == 2
        rc, _, _ = run(["solve", "--config", str(cfg), "--grid", "16",
                        "--bc-mode", "dirichlet", "--out", str(tmp_path / "y.csv")], capsys)
        assert rc == 0

    def test_flag_overrides_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"solver": {"grid": 64}}))
        out_path = tmp_path / "s.csv"
        run(["solve", "--config", str(cfg), "--grid", "16", "--tau-end", "0",
             "--out", str(out_path)], capsys)
        _, rows = read_csv(out_path)
        assert len(rows) == 17  # 16 cells -> 17 nodes, single snapshot at tau = 0


class TestProfile:
    def test_reference_profile_boundaries(self, tmp_path, capsys):
        out_path = tmp_path / "prof.csv"
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"profile": {"tau": [0.0, 0.125, 1.0, 1e4],
                                               "n_eta": 101}}))
        rc, _, _ = run(["profile", "--config", str(cfg), "--out", str(out_path)], capsys)
        assert rc == 0
        header, rows = read_csv(out_path)
        assert header == ["tau", "eta", "theta"]
        assert len(rows) == 4 * 101
        t0 = [r for r in rows if r["tau"] == 0.0]
        assert abs(t0[0]["theta"]) < 1e-12 and abs(t0[-1]["theta"]) < 1e-12
        big = [r for r in rows if r["tau"] == 1e4]
        assert all(abs(r["theta"] - 5.0 / 6.0) < 1e-4 for r in big)

    def test_dimensional_columns_with_physical_block(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "physical": {"rho": 1.0, "Cp": 3.0, "k_cond": 24.0, "mu": 1.0,
                         "mu0": 0.5, "T0": 1.0, "R10": 2.0 ** 0.5, "R20": 1.0},
            "profile": {"tau": [0.0], "n_eta": 21},
        }))
        out_path = tmp_path / "prof.csv"
        rc, _, _ = run(["profile", "--config", str(cfg), "--out", str(out_path)], capsys)
        assert rc == 0
        header, rows = read_csv(out_path)
        assert header == ["tau", "eta", "theta", "t", "r", "T"]
        # dimensional output at t = 0 reproduces T0 * Theta(0, .)
        assert all(abs(r["T"] - 1.0 * r["theta"]) < 1e-12 for r in rows)
        assert all(r["t"] == 0.0 for r in rows)

    def test_c5_flag_shifts_level(self, tmp_path, capsys):
        out_path = tmp_path / "prof.csv"
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"profile": {"tau": [1e4], "n_eta": 5}}))
        rc, _, _ = run(["profile", "--config", str(cfg), "--c5", "2.0",
                        "--out", str(out_path)], capsys)
        _, rows = read_csv(out_path)
        assert all(abs(r["theta"] - 1.0) < 1e-4 for r in rows)

    def test_singular_time_request_exit_1(self, tmp_path, capsys):
        # tau at or below -C3 makes the general solution singular
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"profile": {"tau": [-0.2], "n_eta": 5}}))
        rc, _, err = run(["profile", "--config", str(cfg),
                          "--out", str(tmp_path / "p.csv")], capsys)
        assert rc == 1
        assert "singular" in err


class TestConvergence:
    def test_derived_mode_passes(self, capsys):
        rc, out, _ = run(["convergence", "--grid", "64,128,256"], capsys)
        assert rc == 0
        assert "error_inf" in out

    def test_paper_mode_expected_failure(self, capsys):
        rc, out, _ = run(["convergence", "--grid", "64,128,256",
                          "--bc-mode", "paper"], capsys)
        assert rc == 1
        assert "plateau" in out

    def test_single_level_usage_error(self, capsys):
        rc, _, err = run(["convergence", "--grid", "64"], capsys)
        assert rc == 2
        assert "at least 2" in err

    def test_table_csv(self, tmp_path, capsys):
        out_path = tmp_path / "conv.csv"
        rc, _, _ = run(["convergence", "--grid", "32,64", "--out", str(out_path)], capsys)
        assert rc == 0
        header, rows = read_csv(out_path)
        assert header == ["n_cells", "h", "error_inf", "observed_order"]
        assert rows[1]["observed_order"] == pytest.approx(2.0, abs=0.2)

    def test_levels_from_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"solver": {"levels": [32, 64]}}))
        rc, out, _ = run(["convergence", "--config", str(cfg)], capsys)
        assert rc == 0
        assert "32" in out and "64" in out

    def test_general_constants_dirichlet_study(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "reduced": {"A": 1.4, "B": 3.0, "eps": -0.6, "a": 2.0},
            "constants": {"C3": 0.25, "C5": 1.2},
        }))
        rc, out, _ = run(["convergence", "--config", str(cfg), "--grid", "32,64",
                          "--bc-mode", "dirichlet"], capsys)
        assert rc == 0


class TestConfigFuzz:
    scalars = st.one_of(st.none(), st.booleans(), st.floats(allow_nan=False),
                        st.integers(min_value=-10, max_value=10), st.text(max_size=8))
    blocks = st.dictionaries(
        st.sampled_from(["physical", "reduced", "constants", "solver",
                         "output", "profile", "bogus"]),
        st.one_of(scalars, st.dictionaries(st.text(max_size=12), scalars, max_size=4)),
        max_size=4)

    @settings(max_examples=30, deadline=None,
              suppress_health_check=[HealthCheck.too_slow])
    @given(cfg=blocks)
    def test_loader_never_crashes(self, cfg, tmp_path_factory):
        # any malformed config must come back as a clean exit code,
        # never an unhandled traceback
        path = tmp_path_factory.mktemp("fuzz") / "c.json"
        path.write_text(json.dumps(cfg))
        try:
            rc = main(["profile", "--config", str(path),
                       "--out", str(path.with_suffix(".csv"))])
        except Exception as e:  # noqa: BLE001 - the assertion is "no leak"
            raise AssertionError(f"config fuzz leaked {type(e).__name__}: {e}") from e
        assert rc in (0, 1, 2)


class TestEntryPoint:
    def test_console_script_runs(self):
        proc = subprocess.run([sys.executable, "-m", "ringheat.cli", "profile"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.startswith("tau,eta,theta")

    def test_unknown_subcommand_exit_2(self):
        proc = subprocess.run([sys.executable, "-m", "ringheat.cli", "frobnicate"],
                              capture_output=True, text=True)
        assert proc.returncode == 2
