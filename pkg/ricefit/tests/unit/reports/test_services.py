"""Tests unitaires des services de rapport."""

import json
import math
from io import StringIO

import numpy as np
import pytest

from apps.channel.bias import UnitBias
from apps.channel.rician import RicianParams
from apps.core.exceptions import ConfigError, InfeasibleCalibrationError
from apps.fitting.enums import FitMode, StopReason
from apps.fitting.services import FitResult
from apps.measurements.enums import ReferenceKind, SourceTag
from apps.measurements.models import Reference
from apps.reports import services
from apps.reports.enums import CalibrationMode
from apps.reports.services import (
    CURVE_POINTS,
    align_reference,
    apply_scenario,
    build_report,
    build_run_config,
    fit_bias,
    fit_entry,
    format_results_table,
    load_run_config,
    read_json,
    write_curves,
    write_report,
)
from tests.base import BaseServiceUnitTest
from tests.factories import DatasetFactory

ABSOLUTE_CONFIG = {"calibration": {"mode": "absolute", "sensitivity_dbm": -110.0}}


def make_result(mode=FitMode.BIASED, r_0=0.1, rmse=0.01):
    return FitResult(
        params=RicianParams(10.0, 1.0, r_0),
        rmse=rmse,
        iterations=12,
        converged=True,
        mode=mode,
        residual_count=40,
        amp_ref_dbm=3.0,
        stop_reason=StopReason.COST_TOLERANCE,
    )


class TestRunConfig(BaseServiceUnitTest):
    """Vérifie la résolution de la configuration et la calibration."""

    def get_service_module(self):
        return services

    def test_defaults_calibrated_relative_to_s(self):
        cfg = load_run_config(None)
        assert cfg.calibration.mode == CalibrationMode.RELATIVE_TO_S
        assert cfg.link_budget.noise_ref_dbm == pytest.approx(-8.933 + 3.0103, abs=1e-3)
        assert cfg.packet.payload_bytes == 50
        assert cfg.distance_window == (75.0, 125.0)
        assert cfg.reference.is_relative

    def test_absolute_calibration(self):
        cfg = build_run_config(ABSOLUTE_CONFIG)
        assert cfg.link_budget.sensitivity_dbm == -110.0
        expected = -110.0 - 8.933 + 3.0103
        assert cfg.link_budget.noise_ref_dbm == pytest.approx(expected, abs=1e-3)
        assert cfg.reference == Reference(ReferenceKind.ABSOLUTE_DBM, s_dbm=-110.0)

    def test_explicit_noise_ref_skips_calibration(self):
        cfg = build_run_config({"link_budget": {"noise_ref_dbm": -7.5}})
        assert cfg.link_budget.noise_ref_dbm == -7.5

    def test_open_distance_window(self):
        cfg = build_run_config({"distance_window": {"min_m": 10, "max_m": None}})
        assert cfg.distance_window == (10.0, math.inf)

    def test_invalid_document(self):
        with pytest.raises(ConfigError, match="payload_bytes"):
            build_run_config({"packet": {"payload_bytes": -1}})

    def test_infeasible_calibration(self):
        with pytest.raises(InfeasibleCalibrationError):
            build_run_config({"link_budget": {"alpha": 0.1}})

    def test_lm_options_forwarded(self):
        cfg = build_run_config({"fit": {"max_iterations": 7}})
        assert cfg.lm_options.max_iterations == 7

    def test_read_json_missing(self, tmp_path):
        missing = tmp_path / "nope.json"
        with pytest.raises(ConfigError, match="nope.json"):
            read_json(missing)

    def test_read_json_invalid(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError, match="invalid JSON"):
            read_json(path)


class TestAlignReference(BaseServiceUnitTest):
    """Vérifie l'alignement du jeu (cadre de référence et provenance)."""

    def get_service_module(self):
        return services

    def test_same_frame_untouched(self):
        ds = DatasetFactory()
        assert align_reference(ds, load_run_config(None)) is ds

    def test_relative_to_absolute(self):
        ds = DatasetFactory(rss=(-1.0, 2.0, 5.0))
        aligned = align_reference(ds, build_run_config(ABSOLUTE_CONFIG))
        self.assert_close(aligned.rss_db, [-111.0, -108.0, -105.0])
        assert not aligned.reference.is_relative

    def test_absolute_to_relative(self):
        ds = DatasetFactory(
            rss=(-111.0, -108.0, -105.0),
            reference=Reference(ReferenceKind.ABSOLUTE_DBM, s_dbm=-110.0),
        )
        aligned = align_reference(ds, load_run_config(None))
        self.assert_close(aligned.rss_db, [-1.0, 2.0, 5.0])
        assert aligned.reference.is_relative

    def test_absolute_without_sensitivity(self):
        ds = DatasetFactory(reference=Reference(ReferenceKind.ABSOLUTE_DBM))
        with pytest.raises(ConfigError, match="s_dbm"):
            align_reference(ds, load_run_config(None))

    def test_scenario_tags_unknown_source(self):
        ds = DatasetFactory(source_tag=SourceTag.UNKNOWN)
        tagged = apply_scenario(ds, build_run_config({"scenario": "concentrator"}))
        assert tagged.source_tag == SourceTag.CONCENTRATOR

    def test_scenario_keeps_declared_source(self):
        ds = DatasetFactory(source_tag=SourceTag.SYNTHETIC)
        cfg = build_run_config({"scenario": "drive-by"})
        assert apply_scenario(ds, cfg) is ds
        assert apply_scenario(DatasetFactory(), load_run_config(None)).source_tag == (
            SourceTag.DRIVE_BY
        )


class TestReport(BaseServiceUnitTest):
    """Vérifie le contenu du rapport JSON et du tableau texte."""

    def get_service_module(self):
        return services

    def test_fit_bias_by_mode(self):
        cfg = load_run_config(None)
        assert isinstance(fit_bias(FitMode.NAIVE, cfg), UnitBias)
        assert fit_bias(FitMode.BIASED, cfg).pkt == cfg.packet

    def test_fit_entry_db_values(self):
        entry = fit_entry(make_result(), load_run_config(None))
        self.assert_close(entry["K_dB"], 10.0)
        self.assert_close(entry["r_s_dB_20log10"], 3.0)
        self.assert_close(entry["r_0_dB_rel_S_20log10"], 3.0 - 20.0)
        assert entry["stop_reason"] == "cost_tolerance"

    def test_fit_entry_relative_to_absolute_sensitivity(self):
        entry = fit_entry(make_result(), build_run_config(ABSOLUTE_CONFIG))
        self.assert_close(entry["r_s_dB_20log10"], 113.0)

    def test_non_positive_offset_has_no_db_value(self):
        entry = fit_entry(make_result(r_0=-0.2), load_run_config(None))
        assert entry["r_0_dB_rel_S_20log10"] is None

    def test_build_report(self):
        cfg = build_run_config(
            {"scenario": "concentrator", "distance_window": {"max_m": None}}
        )
        results = [make_result(FitMode.NAIVE, rmse=0.02), make_result()]
        report = build_report(results, cfg, DatasetFactory(), 3.0, rmse_reduction=0.5)
        expected_keys = (
            "schema",
            "source_tag",
            "reference",
            "n_samples",
            "calibration",
            "fits",
        )
        for key in expected_keys:
            assert key in report
        assert report["distance_window"]["max_m"] is None
        assert report["scenario"]["tx_power_dbm"] == 14.0
        assert [fit["mode"] for fit in report["fits"]] == ["naive", "biased"]
        assert report["rmse_reduction"] == 0.5

    def test_write_report_is_strict_json(self):
        out = StringIO()
        report = build_report(
            [make_result()], load_run_config(None), DatasetFactory(), 3.0
        )
        write_report(report, out)
        assert json.loads(out.getvalue()) == report
        with pytest.raises(ValueError):
            write_report({"rmse": math.nan}, StringIO())

    def test_results_table(self):
        table = format_results_table(
            [make_result(r_0=-0.1)], load_run_config(None)
        ).splitlines()
        header = ["mode", "K", "[dB]", "r_s", "[dB]", "r_0", "[dB]", "RMSE"]
        assert table[0].split() == header
        assert table[1].split()[0] == "biased"
        assert "n/a" in table[1]

    def test_curves(self):
        amps = np.sort(np.linspace(0.5, 2.0, 30))
        out = StringIO()
        write_curves(amps, RicianParams(2.0, 1.0), UnitBias(), 0.0, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "r,ecdf,model_cdf,model_pdf"
        assert len(lines) == CURVE_POINTS + 1
        first = [float(v) for v in lines[1].split(",")]
        last = [float(v) for v in lines[-1].split(",")]
        assert first[0] == 0.5
        assert last[0] == 2.0
        assert last[1] == 1.0
