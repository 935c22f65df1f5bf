import json
import subprocess
import sys

import numpy as np
import pytest

import yamabe.cli as cli
from yamabe.checks import CheckResult
from yamabe.config import (
    ConfigError,
    SamplingError,
    load_config,
    load_config_text,
    load_zoo,
    sample_points,
)
from yamabe.zoo import ZOO_NAMES, zoo_config_text

GOOD_CONFIG = """\
[chart]
coordinates = u, v
exclusion = v

[metric]
u.u = 1/v^2
v.v = 1/v^2

[field radial]
u = u
v = v

[oneform pi]
v = 1

[sampling]
box.u = -1, 1
box.v = 0.5, 2
count = 4
seed = 11
"""


class TestConfig:
    def test_zoo_names_all_load(self):
        assert ZOO_NAMES == ("euclidean2", "euclidean3", "euclidean4",
                             "flat_r2_complex", "hyperbolic2", "paper_sec5",
                             "sphere2")
        for name in ZOO_NAMES:
            config = load_zoo(name)
            assert config.metric is not None

    def test_paper_sec5_contents(self):
        config = load_zoo("paper_sec5")
        assert config.chart.coords == ("x", "y", "z")
        assert config.chart.exclusion is not None
        from yamabe.geometry import metric_at
        m = metric_at(config.metric, [0.0, 0.0, 2.0])
        assert np.allclose(m.matrix, np.diag([1 / 16, 1 / 16, 1.0]), atol=1e-15)
        assert config.frame is not None
        assert set(config.fields) >= {"Y", "X", "W", "vertical"}

    def test_euclidean3_identity(self):
        config = load_zoo("euclidean3")
        from yamabe.geometry import metric_at
        assert np.array_equal(metric_at(config.metric, [1.0, 2.0, 3.0]).matrix,
                              np.eye(3))

    def test_unknown_zoo(self):
        with pytest.raises(ConfigError):
            load_zoo("torus_nope")

    def test_good_config_text(self):
        config = load_config_text(GOOD_CONFIG, name="good")
        assert config.chart.coords == ("u", "v")
        assert "radial" in config.fields
        assert config.count == 4 and config.seed == 11

    def test_expression_error_carries_path(self):
        text = GOOD_CONFIG.replace("u.u = 1/v^2", "u.u = q + 1")
        with pytest.raises(ConfigError) as exc:
            load_config_text(text)
        assert any("metric.u.u" in p and "'q'" in p for p in exc.value.problems)

    def test_problems_aggregate_across_sections(self):
        text = GOOD_CONFIG.replace("u.u = 1/v^2", "u.u = q + 1").replace(
            "[field radial]\nu = u", "[field radial]\nu = sin(w)")
        with pytest.raises(ConfigError) as exc:
            load_config_text(text)
        joined = "\n".join(exc.value.problems)
        assert "metric.u.u" in joined
        assert "field radial.u" in joined

    def test_conflicting_mirror_entries_rejected(self):
        text = GOOD_CONFIG.replace("[field radial]",
                                   "v.u = 1\nu.v = 2\n\n[field radial]")
        with pytest.raises(ConfigError) as exc:
            load_config_text(text)
        assert any("mirror" in p for p in exc.value.problems)

    def test_missing_sampling_rejected(self):
        text = GOOD_CONFIG.split("[sampling]")[0]
        with pytest.raises(ConfigError):
            load_config_text(text)

    def test_dimension_mismatch_rejected(self):
        text = GOOD_CONFIG.replace("coordinates = u, v",
                                   "coordinates = u, v\ndimension = 3")
        with pytest.raises(ConfigError):
            load_config_text(text)

    def test_explicit_points(self):
        text = GOOD_CONFIG.replace("[sampling]", "[points]").replace(
            "box.u = -1, 1\nbox.v = 0.5, 2\ncount = 4\nseed = 11",
            "p0 = 0.5, 1\np1 = -0.25, 1.5")
        config = load_config_text(text)
        pts = sample_points(config)
        assert pts.shape == (2, 2)
        assert np.array_equal(pts[0], [0.5, 1.0])

    def test_config_file_roundtrip(self, tmp_path):
        path = tmp_path / "m.ini"
        path.write_text(GOOD_CONFIG)
        config = load_config(str(path))
        assert config.name.endswith("m.ini")


class TestSampling:
    def test_deterministic_for_seed(self):
        config = load_zoo("hyperbolic2")
        a = sample_points(config, seed=5)
        b = sample_points(config, seed=5)
        c = sample_points(config, seed=6)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_respects_boxes_and_exclusion(self):
        config = load_zoo("hyperbolic2")
        pts = sample_points(config, seed=1, count=30)
        assert np.all(pts[:, 1] >= 0.5) and np.all(pts[:, 1] <= 3.0)
        assert np.all(np.abs(pts[:, 1]) >= 1e-6)

    def test_exclusion_rejection(self):
        # exclusion everywhere zero: every draw is rejected
        text = GOOD_CONFIG.replace("exclusion = v", "exclusion = 0")
        config = load_config_text(text)
        with pytest.raises(SamplingError):
            sample_points(config)


class TestCli:
    def test_curvature_exit_zero(self, capsys):
        assert cli.main(["curvature", "--zoo", "euclidean2", "--samples", "2"]) == 0
        out = capsys.readouterr().out
        assert "scalar_curvature: 0.0" in out

    def test_classify_labels(self, capsys):
        assert cli.main(["classify", "--zoo", "euclidean3", "--field", "position",
                         "--samples", "3"]) == 0
        out = capsys.readouterr().out
        assert "concurrent" in out

    def test_curvature_report_carries_constant_curvature(self, tmp_path):
        path = tmp_path / "hyp.json"
        assert cli.main(["curvature", "--zoo", "hyperbolic2", "--samples", "4",
                         "--json", str(path)]) == 0
        report = json.loads(path.read_text())
        assert report["status"] == "pass"
        for entry in report["per_point"]:
            assert abs(entry["scalar_curvature"] - (-2.0)) <= 1e-10

    def test_classify_report_carries_leibniz_phi(self, tmp_path):
        path = tmp_path / "cls.json"
        assert cli.main(["classify", "--zoo", "euclidean3", "--field",
                         "exp_position", "--samples", "4", "--json", str(path)]) == 0
        report = json.loads(path.read_text())
        assert report["labels"] == ["torse-forming"]
        import math
        for entry in report["per_point"]:
            assert abs(entry["phi"] - math.exp(entry["point"][0])) <= 1e-9

    def test_soliton_defaults_from_config(self, capsys):
        assert cli.main(["soliton", "--zoo", "euclidean3", "--samples", "3"]) == 0
        out = capsys.readouterr().out
        assert "verdict: shrinking" in out
        assert "-0.666666666666" in out

    def test_star_soliton(self, capsys):
        assert cli.main(["soliton", "--zoo", "flat_r2_complex", "--kind", "star",
                         "--samples", "3"]) == 0
        out = capsys.readouterr().out
        assert "verdict: shrinking" in out

    def test_yamabe_kind_and_pss_connection(self, capsys):
        assert cli.main(["soliton", "--zoo", "euclidean3", "--kind", "yamabe",
                         "--samples", "3"]) == 0
        out = capsys.readouterr().out
        assert "lambda_formula: lambda = r - 1" in out
        assert "verdict: shrinking" in out
        assert cli.main(["soliton", "--zoo", "hyperbolic2", "--field", "scaling",
                         "--connection", "pss", "--samples", "3"]) == 0
        out = capsys.readouterr().out
        assert "connection: pss" in out
        assert "trace_residual_max: " in out

    def test_missing_field_is_config_error(self, capsys):
        assert cli.main(["classify", "--zoo", "euclidean3", "--field", "nope"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_pi_is_config_error(self, capsys):
        assert cli.main(["soliton", "--zoo", "sphere2", "--kind", "conformal",
                         "--connection", "ssm"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_bad_config_file(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text(GOOD_CONFIG.replace("u.u = 1/v^2", "u.u = 2*q"))
        assert cli.main(["curvature", "--config", str(path)]) == 2
        err = capsys.readouterr().err
        assert "metric.u.u" in err

    def test_sampling_failure_is_numeric_error(self, tmp_path, capsys):
        path = tmp_path / "stuck.ini"
        path.write_text(GOOD_CONFIG.replace("exclusion = v", "exclusion = 0"))
        assert cli.main(["curvature", "--config", str(path)]) == 3
        assert "numeric error" in capsys.readouterr().err

    def test_zero_field_is_numeric_error(self, tmp_path, capsys):
        path = tmp_path / "zero.ini"
        path.write_text(GOOD_CONFIG + "\n[field none]\nu = 0\n")
        assert cli.main(["classify", "--config", str(path), "--field", "none"]) == 3
        assert "numeric error" in capsys.readouterr().err

    def test_check_single_config_exit_zero(self, capsys):
        assert cli.main(["check", "--zoo", "euclidean2", "--seed", "3"]) == 0
        assert "status: pass" in capsys.readouterr().out

    def test_failing_check_exits_one(self, monkeypatch, capsys):
        monkeypatch.setattr(cli, "run_config_checks",
                            lambda config, seed: [CheckResult("forced", 1.0, 0.0)])
        assert cli.main(["check", "--zoo", "euclidean2"]) == 1
        assert "status: fail" in capsys.readouterr().out

    def test_json_report_and_human_share_numbers(self, tmp_path, capsys):
        path = tmp_path / "rep.json"
        assert cli.main(["soliton", "--zoo", "euclidean3", "--samples", "4",
                         "--json", str(path)]) == 0
        human = capsys.readouterr().out
        report = json.loads(path.read_text())

        def numbers(obj):
            if isinstance(obj, bool):
                return
            if isinstance(obj, (int, float)):
                yield obj
            elif isinstance(obj, dict):
                for v in obj.values():
                    yield from numbers(v)
            elif isinstance(obj, list):
                for v in obj:
                    yield from numbers(v)

        for num in numbers({k: v for k, v in report.items()
                            if k not in ("timestamp", "config_text")}):
            assert str(num) in human

    def test_json_determinism_excluding_timestamp(self, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for path in paths:
            assert cli.main(["curvature", "--zoo", "hyperbolic2", "--samples", "3",
                             "--seed", "9", "--json", str(path)]) == 0
        contents = []
        for path in paths:
            lines = [ln for ln in path.read_text().splitlines()
                     if '"timestamp"' not in ln]
            contents.append("\n".join(lines))
        assert contents[0] == contents[1]

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "yamabe", "classify", "--zoo", "euclidean2",
             "--field", "position", "--samples", "2"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "concurrent" in proc.stdout

    def test_paper_example(self, capsys):
        assert cli.main(["paper-example", "--samples", "5"]) == 0
        out = capsys.readouterr().out
        assert "status: pass" in out
        assert "not-torse-forming" in out  # the bundled Y field fit verdict


def test_zoo_config_texts_are_self_documenting():
    text = zoo_config_text("paper_sec5")
    assert "[chart]" in text and "[frame e1]" in text
    with pytest.raises(KeyError):
        zoo_config_text("nope")
