import numpy as np
import pytest

import compproc as cp
from compproc.cli import main
from compproc.config import build_model, get_bool, model_keys, parse_kv


class TestParse:
    def test_comments_blanks_and_values(self):
        cfg = parse_kv("""
        # a comment
        type = II   # trailing comment
        lambda1 = 1.5

        beta1 = 2
        """)
        assert cfg == {"type": "II", "lambda1": "1.5", "beta1": "2"}

    def test_duplicate_key_rejected(self):
        with pytest.raises(cp.ConfigError, match="duplicate"):
            parse_kv("a = 1\na = 2")

    def test_missing_equals_rejected(self):
        with pytest.raises(cp.ConfigError, match="expected"):
            parse_kv("type II")

    def test_bool_parsing(self):
        assert get_bool({"k": "true"}, "k") is True
        assert get_bool({"k": "0"}, "k") is False
        with pytest.raises(cp.ConfigError):
            get_bool({"k": "maybe"}, "k")


class TestBuildModel:
    def test_type1_with_interactions(self):
        cfg = parse_kv("type = I\nlambda1 = 1\nlambda2 = 2\nalpha1 = 3\n"
                       "alpha2 = 4\ng1_index = 1.5\ng2_log_exponent = 2.0")
        m = build_model(cfg)
        assert isinstance(m, cp.TypeIModel)
        assert m.g1.index == 1.5 and m.g2.log_exponent == 2.0

    def test_type2(self):
        cfg = parse_kv("type = II\nlambda1 = 1\nlambda2 = 1\nalpha1 = 0\n"
                       "alpha2 = 0\nbeta1 = 1\nbeta2 = 1\nstrict_theorem2 = true")
        m = build_model(cfg)
        assert m.strict_theorem2

    def test_urn(self):
        m = build_model(parse_kv("type = urn\nalpha = 5\nbeta = 1"))
        assert isinstance(m, cp.AuxUrnModel)

    def test_invalid_hypothesis_named(self):
        cfg = parse_kv("type = II\nlambda1 = 0\nlambda2 = 1\nalpha1 = 1\n"
                       "alpha2 = 1\nbeta1 = 1\nbeta2 = 1\nstrict_theorem2 = true")
        with pytest.raises(cp.ConfigError, match="lambda1>0"):
            build_model(cfg)

    def test_unknown_type(self):
        with pytest.raises(cp.ConfigError, match="type"):
            model_keys({"type": "III"})


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SMALL_CLASSIFY = """
type = II
lambda1 = 1
lambda2 = 1
alpha1 = 2
alpha2 = 2
beta1 = 1
beta2 = 1
x1 = 1
x2 = 1
seeds = 5
master_seed = 11
max_jumps = 20000
burn_in = 0.5
"""


class TestCli:
    def test_unknown_key_is_exit_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_CLASSIFY + "typo_key = 3\n")
        assert main(["classify", "--config", cfg, "--out", str(tmp_path)]) == 2
        assert "typo_key" in capsys.readouterr().err

    def test_validation_failure_names_hypothesis(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "type = II\nlambda1 = 1\nlambda2 = 1\n"
                           "alpha1 = 1\nalpha2 = 1\nbeta1 = 0\nbeta2 = 1\n")
        assert main(["diagnostics", "--config", cfg, "--out", str(tmp_path)]) == 2
        assert "beta1>0" in capsys.readouterr().err

    def test_classify_run_and_rerun_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_CLASSIFY)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["classify", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["classify", "--config", cfg, "--out", str(out2),
                     "--workers", "4"]) == 0
        for name in ("classify.csv", "summary.txt"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_CLASSIFY)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["classify", "--config", cfg, "--out", str(out1)])
        main(["classify", "--config", cfg, "--out", str(out2), "--seed", "12"])
        assert (out1 / "classify.csv").read_bytes() != (out2 / "classify.csv").read_bytes()

    def test_set_override_wins(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_CLASSIFY)
        out = tmp_path / "o"
        assert main(["classify", "--config", cfg, "--out", str(out),
                     "--set", "seeds=2"]) == 0
        rows = [l for l in (out / "classify.csv").read_text().splitlines()
                if l and not l.startswith("#")]
        assert len(rows) == 1 + 2

    def test_outputs_self_describing(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_CLASSIFY)
        out = tmp_path / "o"
        main(["classify", "--config", cfg, "--out", str(out)])
        head = (out / "summary.txt").read_text().splitlines()
        assert head[0].startswith("# compproc 0.")
        assert any("master_seed = 11" in l for l in head)

    def test_simulate_writes_trajectory(self, tmp_path):
        cfg = write_config(tmp_path, "type = I\nlambda1 = 1\nlambda2 = 1\n"
                           "alpha1 = 1\nalpha2 = 1\nx1 = 20\nx2 = 20\n"
                           "max_jumps = 5000\nstop_on_boundary = true\n"
                           "master_seed = 3\nrecord = full\n")
        out = tmp_path / "o"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "trajectory.csv").read_text().splitlines()
        rows = [l for l in lines if not l.startswith("#")]
        assert rows[0] == "n,time,x1,x2"
        assert rows[1] == "0,0.0,20,20"
        last = rows[-1].split(",")
        assert last[2] == "0" or last[3] == "0"

    def test_urn_subcommand(self, tmp_path):
        cfg = write_config(tmp_path, "type = urn\nalpha = 5\nbeta = 1\n"
                           "x1 = 1\nx2 = 1\nn_steps = 2000\nseeds = 10\n"
                           "recursion_n = 10000\nmaster_seed = 5\n")
        out = tmp_path / "o"
        assert main(["urn", "--config", cfg, "--out", str(out)]) == 0
        text = (out / "summary.txt").read_text()
        assert "rho = 0.6666666666666666" in text
        assert (out / "urn_mc.csv").exists()
        assert (out / "urn_moments.csv").exists()

    def test_series_subcommand(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "type = II\nlambda1 = 1\nlambda2 = 1\n"
                           "alpha1 = 0\nalpha2 = 0\nbeta1 = 1\nbeta2 = 1\n"
                           "terms = 50\n")
        out = tmp_path / "o"
        assert main(["series", "--config", cfg, "--out", str(out)]) == 0
        text = (out / "summary.txt").read_text()
        assert "A_verdict = diverges" in text
        assert "At_verdict = undefined" in text

    def test_lyapunov_subcommand_small(self, tmp_path):
        cfg = write_config(tmp_path, "type = II\nlambda1 = 1\nlambda2 = 1\n"
                           "alpha1 = 1\nalpha2 = 1\nbeta1 = 1\nbeta2 = 1\n"
                           "function = power\nnu = 0.3\nmu = 0.6\n"
                           "strip = 0,1\nx_hi = 5000\n")
        out = tmp_path / "o"
        assert main(["lyapunov", "--config", cfg, "--out", str(out)]) == 0
        text = (out / "certificate.txt").read_text()
        assert "certified     True" in text
        assert "leading[y=0]" in text

    def test_lyapunov_not_certified_exit_1(self, tmp_path):
        cfg = write_config(tmp_path, "type = II\nlambda1 = 1\nlambda2 = 1\n"
                           "alpha1 = 0\nalpha2 = 0\nbeta1 = 1\nbeta2 = 1\n"
                           "function = power\nnu = 0.3\nmu = 0.6\n"
                           "strip = 0\nx_hi = 2000\n")
        out = tmp_path / "o"
        assert main(["lyapunov", "--config", cfg, "--out", str(out)]) == 1

    def test_diagnostics_subcommand(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "type = II\nlambda1 = 1\nlambda2 = 1\n"
                           "alpha1 = 3\nalpha2 = 2\nbeta1 = 1\nbeta2 = 1\n")
        out = tmp_path / "o"
        assert main(["diagnostics", "--config", cfg, "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "r = 0.618" in stdout
        assert "rho_tilde = 5.0" in stdout
        assert "y0 = 1" in stdout
