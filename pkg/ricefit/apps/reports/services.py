"""Services de la CLI : configuration résolue, rapports JSON et courbes CSV."""

import json
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from apps.channel.bias import (
    LinkBudget,
    PacketSpec,
    PacketSuccessBias,
    UnitBias,
    calibrate_noise_ref,
)
from apps.channel.censored import CensoredModel, sample_cdf, sample_pdf
from apps.channel.rician import RicianParams
from apps.core.exceptions import ConfigError
from apps.fitting.enums import FitMode
from apps.fitting.lm import LmOptions
from apps.fitting.services import FitResult
from apps.measurements.enums import ReferenceKind, SourceTag
from apps.measurements.models import Dataset, MeasurementRecord, Reference
from apps.measurements.services import ecdf

from .enums import SCENARIO_PRESETS, CalibrationMode
from .serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

# ─── Constants ───────────────────────────────────────────────────────

REPORT_SCHEMA_VERSION: int = 1
CURVE_POINTS: int = 512
CURVES_HEADER: str = "r,ecdf,model_cdf,model_pdf"
FLOAT_FORMAT: str = "{:.17g}"


@dataclass(frozen=True)
class Calibration:
    """Point de calibration (S, target_psr) et cadre des RSS."""

    mode: CalibrationMode
    sensitivity_dbm: float
    target_psr: float
    calib_payload_bytes: int


@dataclass(frozen=True)
class RunConfig:
    """Configuration validée, avec la chaîne de liaison calibrée."""

    link_budget: LinkBudget
    packet: PacketSpec
    calibration: Calibration
    lm_options: LmOptions
    distance_window: tuple[float, float]
    scenario: str | None = None
    truth: dict[str, Any] | None = None

    @property
    def reference(self) -> Reference:
        """Référence des RSS produits ou attendus par cette configuration."""
        if self.calibration.mode == CalibrationMode.RELATIVE_TO_S:
            return Reference(kind=ReferenceKind.RELATIVE_TO_S)
        return Reference(
            kind=ReferenceKind.ABSOLUTE_DBM, s_dbm=self.calibration.sensitivity_dbm
        )


def read_json(path: Path) -> Any:
    """Lit un document JSON ; fichier absent ou invalide : ConfigError."""
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def build_run_config(data: Any) -> RunConfig:
    """Valide le document et calibre la chaîne de liaison si nécessaire.

    Raises:
        ConfigError: champs invalides (liste des erreurs du serializer).
    """
    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        errors = json.dumps(serializer.errors, sort_keys=True)
        raise ConfigError(f"invalid config: {errors}")
    valid = serializer.validated_data

    cal = valid["calibration"]
    calibration = Calibration(
        mode=CalibrationMode(cal["mode"]),
        sensitivity_dbm=cal["sensitivity_dbm"],
        target_psr=cal["target_psr"],
        calib_payload_bytes=cal["calib_payload_bytes"],
    )
    lb_block = valid["link_budget"]
    lb = LinkBudget(
        noise_ref_dbm=lb_block["noise_ref_dbm"],
        bitrate_hz=lb_block["bitrate_hz"],
        bandwidth_hz=lb_block["bandwidth_hz"],
        sensitivity_dbm=calibration.sensitivity_dbm,
        alpha=lb_block["alpha"],
        beta=lb_block["beta"],
    )
    if lb.noise_ref_dbm is None:
        lb = calibrate_noise_ref(
            calibration.sensitivity_dbm,
            target_psr=calibration.target_psr,
            pkt=PacketSpec(calibration.calib_payload_bytes),
            lb_partial=lb,
        )

    window = valid["distance_window"]
    max_m = window["max_m"] if window["max_m"] is not None else math.inf
    truth = dict(valid["truth"]) if "truth" in valid else None
    return RunConfig(
        link_budget=lb,
        packet=PacketSpec(valid["packet"]["payload_bytes"]),
        calibration=calibration,
        lm_options=LmOptions(**valid["fit"]),
        distance_window=(window["min_m"], max_m),
        scenario=valid["scenario"],
        truth=truth,
    )


def load_run_config(path: Path | None) -> RunConfig:
    """Charge un fichier de configuration ; sans fichier, tous les défauts."""
    return build_run_config(read_json(path) if path is not None else {})


def align_reference(ds: Dataset, cfg: RunConfig) -> Dataset:
    """Exprime les rss_db du jeu dans le cadre de la calibration.

    Raises:
        ConfigError: jeu absolu, calibration relative à S, S inconnue.
    """
    target = cfg.calibration.mode
    if ds.reference.is_relative == (target == CalibrationMode.RELATIVE_TO_S):
        return ds
    if target == CalibrationMode.ABSOLUTE:
        offset = cfg.calibration.sensitivity_dbm
        reference = Reference(ReferenceKind.ABSOLUTE_DBM, s_dbm=offset)
    else:
        if ds.reference.s_dbm is None:
            raise ConfigError(
                "dataset is in absolute dBm but calibration is relative_to_s: "
                "declare '# s_dbm=' in the dataset or use absolute calibration"
            )
        offset = -ds.reference.s_dbm
        reference = Reference(ReferenceKind.RELATIVE_TO_S, s_dbm=ds.reference.s_dbm)
    records = tuple(
        MeasurementRecord(rec.distance_m, rec.rss_db + offset) for rec in ds.records
    )
    return replace(ds, records=records, reference=reference)


def apply_scenario(ds: Dataset, cfg: RunConfig) -> Dataset:
    """Étiquette un jeu de provenance inconnue avec le scénario configuré."""
    if cfg.scenario is None or ds.source_tag != SourceTag.UNKNOWN:
        return ds
    return replace(ds, source_tag=SourceTag(cfg.scenario))


def fit_bias(mode: FitMode, cfg: RunConfig) -> PacketSuccessBias | UnitBias:
    """Fonction de biais du mode : w physique (biased) ou w ≡ 1 (naive)."""
    if mode == FitMode.NAIVE:
        return UnitBias()
    return PacketSuccessBias(cfg.link_budget, cfg.packet)


def _db20(value: float, amp_ref_dbm: float, offset_db: float = 0.0) -> float | None:
    if value <= 0:
        return None
    return amp_ref_dbm + 20.0 * math.log10(value) - offset_db


def fit_entry(result: FitResult, cfg: RunConfig) -> dict[str, Any]:
    """Une entrée du rapport (colonnes du tableau de résultats).

    r_s et r_0 sont en unités d'amplitude normalisées par ``amp_ref_dbm``
    (convention 20·log10) ; leurs formes dB sont exprimées relativement à S.
    """
    p = result.params
    s_dbm = cfg.calibration.sensitivity_dbm
    return {
        "mode": str(result.mode),
        "K_linear": p.k_linear,
        "K_dB": p.k_db(),
        "r_s_linear": p.r_s,
        "r_s_dB_20log10": _db20(p.r_s, result.amp_ref_dbm, s_dbm),
        "r_0_linear": p.r_0,
        "r_0_dB_rel_S_20log10": _db20(p.r_0, result.amp_ref_dbm, s_dbm),
        "rmse": result.rmse,
        "ks_statistic": result.ks_statistic,
        "iterations": result.iterations,
        "converged": result.converged,
        "stop_reason": str(result.stop_reason),
        "n_samples": result.residual_count,
    }


def build_report(
    results: list[FitResult],
    cfg: RunConfig,
    ds: Dataset,
    amp_ref_dbm: float,
    rmse_reduction: float | None = None,
) -> dict[str, Any]:
    """Rapport JSON versionné (``schema``)."""
    min_m, max_m = cfg.distance_window
    report: dict[str, Any] = {
        "schema": REPORT_SCHEMA_VERSION,
        "source_tag": str(ds.source_tag),
        "reference": str(ds.reference.kind),
        "n_samples": len(ds),
        "amp_ref_dbm": amp_ref_dbm,
        "amplitude_convention": "r = 10^((rss_db - amp_ref_dbm) / 20)",
        "distance_window": {
            "min_m": min_m,
            "max_m": None if math.isinf(max_m) else max_m,
        },
        "calibration": {
            "mode": str(cfg.calibration.mode),
            "sensitivity_dbm": cfg.calibration.sensitivity_dbm,
            "target_psr": cfg.calibration.target_psr,
            "calib_payload_bytes": cfg.calibration.calib_payload_bytes,
            "noise_ref_dbm": cfg.link_budget.noise_ref_dbm,
            "payload_bytes": cfg.packet.payload_bytes,
        },
        "fits": [fit_entry(result, cfg) for result in results],
    }
    if cfg.scenario:
        report["scenario"] = {"name": cfg.scenario, **SCENARIO_PRESETS[cfg.scenario]}
    if rmse_reduction is not None:
        report["rmse_reduction"] = rmse_reduction
    return report


def write_report(report: dict[str, Any], stream: TextIO) -> None:
    """JSON indenté, clés triées ; NaN et infinis refusés."""
    json.dump(report, stream, indent=2, sort_keys=True, allow_nan=False)
    stream.write("\n")


def write_curves(
    amplitudes: np.ndarray,
    params: RicianParams,
    bias: PacketSuccessBias | UnitBias,
    amp_ref_dbm: float,
    stream: TextIO,
) -> None:
    """Courbes ``r,ecdf,model_cdf,model_pdf`` sur 512 points entre min et max."""
    model = CensoredModel(params, bias, amp_ref_dbm)
    grid = np.linspace(float(amplitudes[0]), float(amplitudes[-1]), CURVE_POINTS)
    empirical = ecdf(amplitudes)(grid)
    cdf = sample_cdf(grid, model)
    pdf = sample_pdf(grid, model)
    stream.write(CURVES_HEADER + "\n")
    for row in zip(grid, empirical, cdf, pdf, strict=True):
        stream.write(",".join(FLOAT_FORMAT.format(float(v)) for v in row) + "\n")


def format_results_table(results: list[FitResult], cfg: RunConfig) -> str:
    """Tableau texte : mode, K [dB], r_s [dB], r_0 [dB], RMSE."""
    lines = [
        f"{'mode':<8}{'K [dB]':>10}{'r_s [dB]':>10}{'r_0 [dB]':>10}{'RMSE':>10}",
    ]
    for result in results:
        entry = fit_entry(result, cfg)

        def cell(value: float | None) -> str:
            return f"{value:>10.2f}" if value is not None else f"{'n/a':>10}"

        lines.append(
            f"{entry['mode']:<8}{cell(entry['K_dB'])}{cell(entry['r_s_dB_20log10'])}"
            f"{cell(entry['r_0_dB_rel_S_20log10'])}{entry['rmse']:>10.4f}"
        )
    return "\n".join(lines)
