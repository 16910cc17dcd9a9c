"""Valeurs du domaine mesures (dataclasses immuables, sans persistance)."""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from apps.core.exceptions import DomainError, EmptyDatasetError

from .enums import ReferenceKind, SourceTag


@dataclass(frozen=True)
class MeasurementRecord:
    """Une mesure : distance émetteur-récepteur et RSS reçu."""

    distance_m: float
    rss_db: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.distance_m) or self.distance_m < 0:
            raise DomainError(
                f"distance_m must be finite and >= 0, got {self.distance_m}"
            )
        if not math.isfinite(self.rss_db):
            raise DomainError(f"rss_db must be finite, got {self.rss_db}")


@dataclass(frozen=True)
class Reference:
    """Référence des RSS : dBm absolus, ou dB relatifs à la sensibilité S.

    ``s_dbm`` est optionnel : la valeur absolue de S peut rester inconnue
    (confidentielle), tout le calcul se faisant alors relativement à S.
    """

    kind: ReferenceKind = ReferenceKind.ABSOLUTE_DBM
    s_dbm: float | None = None

    @property
    def is_relative(self) -> bool:
        """Vrai si les RSS sont exprimés relativement à S."""
        return self.kind == ReferenceKind.RELATIVE_TO_S


@dataclass(frozen=True)
class Dataset:
    """Ensemble de mesures avec sa provenance."""

    records: tuple[MeasurementRecord, ...]
    reference: Reference = field(default_factory=Reference)
    source_tag: str = SourceTag.UNKNOWN
    metadata: dict[str, str] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.records)

    def require_records(self) -> None:
        """Lève EmptyDatasetError si le jeu est vide."""
        if not self.records:
            raise EmptyDatasetError("dataset has no records")

    @property
    def rss_db(self) -> NDArray[np.float64]:
        """RSS des mesures, dans l'ordre du fichier."""
        return np.array([rec.rss_db for rec in self.records], dtype=float)

    @property
    def distances_m(self) -> NDArray[np.float64]:
        """Distances des mesures, dans l'ordre du fichier."""
        return np.array([rec.distance_m for rec in self.records], dtype=float)

    def summary(self) -> dict:
        """Résumé utilisé dans les logs des commandes."""
        self.require_records()
        rss = self.rss_db
        dist = self.distances_m
        return {
            "n_records": len(self.records),
            "source_tag": str(self.source_tag),
            "reference": str(self.reference.kind),
            "rss_min_db": float(rss.min()),
            "rss_max_db": float(rss.max()),
            "rss_mean_db": float(rss.mean()),
            "distance_min_m": float(dist.min()),
            "distance_max_m": float(dist.max()),
        }


@dataclass(frozen=True)
class EmpiricalCdf:
    """CDF empirique : F(x) = #{valeurs <= x} / n, continue à droite."""

    sorted_values: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.sorted_values.size == 0:
            raise EmptyDatasetError("empirical CDF needs at least one value")

    @property
    def n(self) -> int:
        """Nombre de valeurs."""
        return int(self.sorted_values.size)

    def __call__(self, x: float | NDArray[np.float64]) -> NDArray[np.float64] | float:
        counts = np.searchsorted(self.sorted_values, x, side="right")
        value = counts / self.n
        return float(value) if np.ndim(value) == 0 else value
