"""Transformations pures sur les jeux de mesures."""

import math
from dataclasses import replace

import numpy as np
from numpy.typing import ArrayLike, NDArray

from apps.core.exceptions import DomainError, EmptyDatasetError

from .enums import SourceTag
from .models import Dataset, EmpiricalCdf, MeasurementRecord, Reference

# ─── Constants ───────────────────────────────────────────────────────

PLACEHOLDER_DISTANCE_M: float = 100.0


def filter_distance(ds: Dataset, min_m: float, max_m: float = math.inf) -> Dataset:
    """Conserve les mesures avec min_m <= distance_m <= max_m (intervalle fermé)."""
    if math.isnan(min_m) or math.isnan(max_m) or min_m > max_m:
        raise DomainError(f"invalid distance window [{min_m}, {max_m}]")
    kept = tuple(rec for rec in ds.records if min_m <= rec.distance_m <= max_m)
    if not kept:
        raise EmptyDatasetError(
            f"no record in distance window [{min_m}, {max_m}] m "
            f"({len(ds.records)} records before filtering)"
        )
    return replace(ds, records=kept)


def to_amplitudes(ds: Dataset) -> tuple[NDArray[np.float64], float]:
    """Amplitudes triées normalisées par la moyenne des RSS en dB.

    r_i = 10^((rss_i - amp_ref_dbm) / 20), amp_ref_dbm = moyenne des rss_db.
    """
    ds.require_records()
    rss = ds.rss_db
    amp_ref_dbm = float(np.mean(rss))
    amplitudes = np.sort(np.power(10.0, (rss - amp_ref_dbm) / 20.0))
    return amplitudes, amp_ref_dbm


def from_amplitudes(
    amplitudes: ArrayLike,
    amp_ref_dbm: float,
    distance_m: float = PLACEHOLDER_DISTANCE_M,
    reference: Reference | None = None,
    source_tag: str = SourceTag.SYNTHETIC,
    metadata: dict[str, str] | None = None,
) -> Dataset:
    """Construit un Dataset à partir d'amplitudes (> 0) et de leur référence."""
    amps = np.asarray(amplitudes, dtype=float)
    if amps.size == 0:
        raise EmptyDatasetError("no amplitude to convert")
    if np.any(amps <= 0) or not np.all(np.isfinite(amps)):
        raise DomainError("amplitudes must be finite and > 0")
    rss = amp_ref_dbm + 20.0 * np.log10(amps)
    records = tuple(
        MeasurementRecord(distance_m=distance_m, rss_db=float(v)) for v in rss
    )
    return Dataset(
        records=records,
        reference=reference or Reference(),
        source_tag=source_tag,
        metadata=dict(metadata or {}),
    )


def ecdf(values: ArrayLike) -> EmpiricalCdf:
    """CDF empirique (copie triée) ; les ex aequo s'empilent."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyDatasetError("empirical CDF needs at least one value")
    return EmpiricalCdf(sorted_values=np.sort(arr))
