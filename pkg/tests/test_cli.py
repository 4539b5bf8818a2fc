import numpy as np
import pytest

from sparselms import cli
from sparselms.cli import ConfigError, parse_config


@pytest.fixture
def template_path(tmp_path):
    path = tmp_path / "template.ini"
    path.write_text(cli.TEMPLATE)
    return str(path)


MINI_CONFIG = """\
[channel]
n_taps = 16
sparsity = 4

[noise]
alpha = 1.2

[run]
iterations = 40
trials = 3
snr_db = 10.0
seed = 5

[algorithm.slms]

[algorithm.slms-za]
lambda = 2e-4
"""


@pytest.fixture
def mini_path(tmp_path):
    path = tmp_path / "mini.ini"
    path.write_text(MINI_CONFIG)
    return str(path)


class TestParseConfig:
    def test_template_matches_reference_parameterization(self, template_path):
        config = parse_config(template_path)
        assert config.n_taps == 128
        assert config.sparsity == 8
        assert config.n_iterations == 3000
        assert config.n_trials == 100
        assert config.snr_db == 10.0
        assert (config.noise.alpha, config.noise.beta,
                config.noise.gamma, config.noise.delta) == (1.2, 0.0, 1.0, 0.0)
        specs = {s.name: s for s in config.algorithms}
        assert set(specs) == {"lms", "slms", "lms-za", "slms-za", "lms-rza",
                              "slms-rza", "lms-rl1", "slms-rl1", "lms-lp", "slms-lp"}
        assert all(s.mu == 0.005 for s in specs.values())
        assert specs["slms-za"].rho_za == 2e-4
        assert specs["slms-rza"].rho_rza == 2e-3
        assert specs["slms-rza"].eps_rza == 20.0
        assert specs["slms-rl1"].rho_rl1 == 5e-5
        assert specs["slms-rl1"].delta_rl1 == 0.05
        assert specs["slms-lp"].rho_lp == 5e-6
        assert specs["slms-lp"].eps_lp == 0.05
        assert specs["slms-lp"].p == 0.5

    def test_omitted_p_defaults(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[algorithm.slms-lp]\nlambda = 1e-5\n")
        config = parse_config(str(path))
        assert config.algorithms[0].p == 0.5
        assert config.algorithms[0].rho_lp == 1e-5

    def test_unknown_key_named(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[channel]\nn_taps = 8\nspicyness = 3\n\n[algorithm.slms]\n")
        with pytest.raises(ConfigError, match="spicyness"):
            parse_config(str(path))

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[bogus]\nx = 1\n\n[algorithm.slms]\n")
        with pytest.raises(ConfigError, match="bogus"):
            parse_config(str(path))

    def test_unknown_algorithm_rejected(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[algorithm.super-lms]\nmu = 0.1\n")
        with pytest.raises(ConfigError, match="super-lms"):
            parse_config(str(path))

    def test_penalty_key_on_wrong_algorithm(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[algorithm.slms]\nlambda = 1e-4\n")
        with pytest.raises(ConfigError, match="lambda"):
            parse_config(str(path))

    def test_zero_sparsity_rejected(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[channel]\nsparsity = 0\n\n[algorithm.slms]\n")
        with pytest.raises(ConfigError):
            parse_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config(str(tmp_path / "nope.ini"))

    def test_malformed_syntax(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("this is not an ini file\n")
        with pytest.raises(ConfigError):
            parse_config(str(path))

    def test_bad_value_type(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[channel]\nn_taps = many\n\n[algorithm.slms]\n")
        with pytest.raises(ConfigError, match="n_taps"):
            parse_config(str(path))

    def test_no_algorithms(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[channel]\nn_taps = 8\n")
        with pytest.raises(ConfigError):
            parse_config(str(path))

    def test_missing_noise_section_means_no_noise(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[algorithm.slms]\n")
        assert parse_config(str(path)).noise is None


class TestCmdRun:
    def test_row_count_and_header(self, mini_path, tmp_path):
        out = str(tmp_path / "r.csv")
        code = cli.main(["run", "--config", mini_path, "--out", out,
                         "--trials", "2", "--iterations", "10"])
        assert code == 0
        lines = open(out).read().splitlines()
        assert lines[0] == "algorithm,iteration,mse_db,trials_diverged"
        assert len(lines) == 1 + 2 * 10

    def test_sorted_and_filtered(self, template_path, tmp_path):
        out = str(tmp_path / "r.csv")
        code = cli.main(["run", "--config", template_path, "--out", out,
                         "--trials", "2", "--iterations", "5",
                         "--algorithms", "slms-za,slms"])
        assert code == 0
        names = [line.split(",")[0] for line in open(out).read().splitlines()[1:]]
        assert names == ["slms"] * 5 + ["slms-za"] * 5

    def test_byte_identical_reruns(self, mini_path, tmp_path):
        out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        argv = ["run", "--config", mini_path, "--out", None]
        for out in (out1, out2):
            argv[-1] = out
            assert cli.main(argv) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_worker_count_does_not_change_bytes(self, mini_path, tmp_path):
        out1, out2 = str(tmp_path / "w1.csv"), str(tmp_path / "w2.csv")
        assert cli.main(["run", "--config", mini_path, "--out", out1, "--workers", "1"]) == 0
        assert cli.main(["run", "--config", mini_path, "--out", out2, "--workers", "2"]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_seed_override_changes_output(self, mini_path, tmp_path):
        out1, out2 = str(tmp_path / "s1.csv"), str(tmp_path / "s2.csv")
        assert cli.main(["run", "--config", mini_path, "--out", out1]) == 0
        assert cli.main(["run", "--config", mini_path, "--out", out2, "--seed", "6"]) == 0
        assert open(out1, "rb").read() != open(out2, "rb").read()

    def test_manifest_records_resolved_config(self, mini_path, tmp_path):
        out = str(tmp_path / "r.csv")
        assert cli.main(["run", "--config", mini_path, "--out", out,
                         "--trials", "2", "--seed", "9"]) == 0
        manifest = open(out + ".manifest").read()
        assert "tool_version = " in manifest
        assert "trials = 2" in manifest
        assert "seed = 9" in manifest
        assert "algorithm.slms-za.rho_za = 0.0002" in manifest
        assert "started_utc = " in manifest and "finished_utc = " in manifest

    def test_missing_config_exits_2(self, tmp_path):
        code = cli.main(["run", "--config", str(tmp_path / "nope.ini"),
                         "--out", str(tmp_path / "r.csv")])
        assert code == 2

    def test_bad_config_exits_2(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[channel]\nsparsity = 0\n\n[algorithm.slms]\n")
        code = cli.main(["run", "--config", str(path), "--out", str(tmp_path / "r.csv")])
        assert code == 2

    def test_bad_algorithm_override_exits_2(self, mini_path, tmp_path):
        code = cli.main(["run", "--config", mini_path, "--out", str(tmp_path / "r.csv"),
                         "--algorithms", "slms-l0"])
        assert code == 2

    def test_unwritable_out_exits_4(self, mini_path, tmp_path):
        code = cli.main(["run", "--config", mini_path,
                         "--out", str(tmp_path / "no" / "dir" / "r.csv")])
        assert code == 4

    def test_all_diverged_exits_3_but_writes_output(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[channel]\nn_taps = 16\nsparsity = 4\n\n[noise]\nalpha = 1.2\n\n"
                        "[run]\niterations = 300\ntrials = 2\nseed = 1\n\n"
                        "[algorithm.lms]\nmu = 50.0\n")
        out = str(tmp_path / "r.csv")
        code = cli.main(["run", "--config", str(path), "--out", out])
        assert code == 3
        lines = open(out).read().splitlines()
        assert len(lines) == 1 + 300
        assert lines[1].startswith("lms,1,nan,2")


class TestValidateNoise:
    def test_gaussian_defaults_pass(self, capsys):
        assert cli.main(["validate-noise", "--alpha", "2.0"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_heavy_tail_passes(self, capsys):
        assert cli.main(["validate-noise", "--alpha", "1.2",
                         "--samples", "100000", "--seed", "0"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        for t in ("0.10", "0.50", "1.00", "2.00"):
            assert t in out

    def test_tiny_sample_fails(self, capsys):
        assert cli.main(["validate-noise", "--alpha", "1.2",
                         "--samples", "20", "--seed", "0"]) == 3
        assert "FAIL" in capsys.readouterr().out

    def test_domain_violation_exits_2(self):
        assert cli.main(["validate-noise", "--alpha", "0"]) == 2
        assert cli.main(["validate-noise", "--alpha", "1.5", "--gamma", "-1"]) == 2
        assert cli.main(["validate-noise", "--alpha", "1.5", "--samples", "0"]) == 2


class TestTemplate:
    def test_round_trip(self, tmp_path, capsys):
        assert cli.main(["template"]) == 0
        text = capsys.readouterr().out
        path = tmp_path / "t.ini"
        path.write_text(text)
        config = parse_config(str(path))
        assert config.n_taps == 128

    def test_write_to_file(self, tmp_path):
        out = str(tmp_path / "t.ini")
        assert cli.main(["template", "--out", out]) == 0
        assert open(out).read() == cli.TEMPLATE
