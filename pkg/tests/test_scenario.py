import json
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from sts_toa.errors import ConfigError
from sts_toa.scenario import (ScenarioConfig, ScenarioResult, emit_csv,
                              emit_svg, run_scenario)

DATA = Path(__file__).parent / "data"


def fig2(**overrides):
    return ScenarioConfig.from_dict({"preset": "fig2", **overrides})


class TestConfigParsing:
    def test_preset_expands(self):
        cfg = fig2()
        assert cfg.packet.x_i == -50.0 and cfg.packet.p_i == 2.0
        assert cfg.barrier_length == 10.0 and cfg.detector_x == 50.0
        assert cfg.v0_list == (0.0, 1.125, 1.8, 4.5)

    def test_override_keeps_other_preset_fields(self):
        cfg = fig2(barrier={"v0": [4.5]})
        assert cfg.v0_list == (4.5,)
        assert cfg.barrier_length == 10.0

    def test_missing_field_is_named(self):
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.from_dict({"packet": {"x_i": 0.0, "p_i": 1.0}})
        assert exc.value.field == "packet.delta"

    def test_unknown_model_rejected(self):
        with pytest.raises(ConfigError) as exc:
            fig2(models=["sts", "bogus"])
        assert exc.value.field == "models"

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict({"preset": "fig3"})

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ConfigError):
            fig2(detektor_x=50.0)

    def test_detector_inside_barrier_rejected(self):
        with pytest.raises(ConfigError) as exc:
            fig2(detector_x=5.0)
        assert exc.value.field == "detector_x"

    def test_method_validation(self):
        assert fig2(method="slices:40").n_slices == 40
        assert fig2(method="closed").n_slices is None
        for bad in ("slices", "slices:0", "open", "slices:-3"):
            with pytest.raises(ConfigError):
                fig2(method=bad)

    def test_degenerate_time_grid_rejected(self):
        with pytest.raises(ConfigError) as exc:
            fig2(tgrid={"t_min": 0.0, "t_max": 150.0, "n": 1})
        assert exc.value.field == "tgrid"

    def test_bad_json_rejected(self):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_json("{not json")
        with pytest.raises(ConfigError):
            ScenarioConfig.from_json("[1, 2]")

    def test_round_trip(self):
        cfg = fig2(method="slices:25", egrid={"e_min": 1.0, "e_max": 3.0, "n": 4096})
        again = ScenarioConfig.from_json(json.dumps(cfg.to_dict()))
        assert again == cfg


@pytest.fixture(scope="module")
def small_result():
    cfg = fig2(barrier={"v0": [0.0, 4.5]},
               tgrid={"t_min": 0.0, "t_max": 150.0, "n": 512},
               models=["sts", "kijowski_transmitted", "kijowski_free"])
    return run_scenario(cfg)


class TestRun:
    def test_models_coincide_without_barrier(self, small_result):
        pt = small_result.points[0]
        assert pt.v0 == 0.0
        rho = {n: d.density for n, d in pt.distributions.items()}
        assert np.max(np.abs(rho["sts"] - rho["kijowski_transmitted"])) < 1e-8
        assert np.max(np.abs(rho["sts"] - rho["kijowski_free"])) < 1e-8

    def test_points_sorted_by_height(self, small_result):
        assert [pt.v0 for pt in small_result.points] == [0.0, 4.5]

    def test_summary_is_json_serializable(self, small_result):
        text = json.dumps(small_result.summary())
        assert "l1_distance_sts_kijowski" in text

    def test_threaded_run_matches_serial(self):
        cfg = fig2(barrier={"v0": [0.0, 1.8]},
                   tgrid={"t_min": 0.0, "t_max": 150.0, "n": 256},
                   models=["sts"])
        serial = run_scenario(cfg, max_workers=1)
        threaded = run_scenario(cfg, max_workers=4)
        for a, b in zip(serial.points, threaded.points):
            np.testing.assert_array_equal(a.distributions["sts"].density,
                                          b.distributions["sts"].density)


class TestCsv:
    def test_header_and_column_population(self, small_result, tmp_path):
        paths = emit_csv(small_result, tmp_path / "out.csv")
        assert len(paths) == 2
        lines = paths[0].read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,rho_sts,rho_kijowski_transmitted,rho_kijowski_free,flux"
        row = lines[1].split(",")
        assert len(row) == 5
        assert row[1] and row[2] and row[3]    # three densities populated
        assert row[4] == ""                     # flux not requested

    def test_unrequested_models_leave_empty_fields(self, tmp_path):
        cfg = fig2(barrier={"v0": [1.8]},
                   tgrid={"t_min": 0.0, "t_max": 150.0, "n": 64},
                   models=["sts", "kijowski_free"])
        (path,) = emit_csv(run_scenario(cfg), tmp_path / "two.csv")
        row = path.read_text(encoding="utf-8").splitlines()[1].split(",")
        assert row[1] != "" and row[3] != ""
        assert row[2] == "" and row[4] == ""

    def test_rerun_is_byte_identical(self, small_result, tmp_path):
        a = emit_csv(small_result, tmp_path / "a.csv")
        b = emit_csv(run_scenario(small_result.config), tmp_path / "b.csv")
        for pa, pb in zip(a, b):
            assert pa.read_bytes() == pb.read_bytes()

    def test_lf_line_endings(self, small_result, tmp_path):
        (path, _) = emit_csv(small_result, tmp_path / "lf.csv")
        assert b"\r" not in path.read_bytes()

    def test_empty_bundle_rejected_before_any_file(self, small_result, tmp_path):
        hollow = ScenarioResult(config=small_result.config, points=[])
        target = tmp_path / "never.csv"
        with pytest.raises(ConfigError):
            emit_csv(hollow, target)
        assert not target.exists()

    def test_matches_golden_file(self, tmp_path):
        golden = DATA / "golden_fig2_v0_4p5.csv"
        cfg = fig2(barrier={"v0": [4.5]},
                   tgrid={"t_min": 0.0, "t_max": 150.0, "n": 512},
                   models=["sts", "kijowski_transmitted", "kijowski_free"])
        (path,) = emit_csv(run_scenario(cfg), tmp_path / "fresh.csv")
        got = np.genfromtxt(path, delimiter=",", skip_header=1)
        want = np.genfromtxt(golden, delimiter=",", skip_header=1)
        np.testing.assert_allclose(got[:, :4], want[:, :4], atol=1e-12)


class TestSvg:
    def test_four_panel_sweep(self, tmp_path):
        cfg = fig2(tgrid={"t_min": 0.0, "t_max": 150.0, "n": 256},
                   models=["sts", "kijowski_transmitted"])
        path = emit_svg(run_scenario(cfg), tmp_path / "sweep.svg")
        text = path.read_text(encoding="utf-8")
        assert text.count("V0 =") == 4
        assert "stroke-dasharray" in text          # dashed comparison curve
        assert ">t</text>" in text and "\U0001d4ab(t|x)" in text
        ET.parse(path)                              # well-formed XML

    def test_single_model_single_panel(self, tmp_path):
        cfg = fig2(barrier={"v0": [1.8]},
                   tgrid={"t_min": 0.0, "t_max": 150.0, "n": 128},
                   models=["sts"])
        path = emit_svg(run_scenario(cfg), tmp_path / "one.svg")
        root = ET.parse(path).getroot()
        # one density curve (the legend swatch is a <line>, not a polyline)
        assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 1

    def test_rerun_is_byte_identical(self, small_result, tmp_path):
        a = emit_svg(small_result, tmp_path / "a.svg")
        b = emit_svg(run_scenario(small_result.config), tmp_path / "b.svg")
        assert a.read_bytes() == b.read_bytes()
