"""Lecture / écriture du format CSV des jeux de mesures.

Format ::

    # source_tag=drive-by
    # reference=relative_to_s
    distance_m,rss_db
    100.0,-95.5

Les lignes de commentaire ``# key=value`` précèdent l'en-tête ; les clés
inconnues sont conservées dans ``Dataset.metadata``.
"""

import csv
import logging
import math
from collections.abc import Iterable
from typing import TextIO

from apps.core.exceptions import DatasetParseError, DomainError

from .enums import ReferenceKind, SourceTag
from .models import Dataset, MeasurementRecord, Reference

logger = logging.getLogger(__name__)

# ─── Constants ───────────────────────────────────────────────────────

HEADER: tuple[str, str] = ("distance_m", "rss_db")
FLOAT_FORMAT: str = "{:.17g}"
RESERVED_KEYS: frozenset[str] = frozenset({"source_tag", "reference", "s_dbm"})


def _parse_metadata_line(line: str, line_no: int) -> tuple[str, str]:
    body = line.lstrip("#").strip()
    key, sep, value = body.partition("=")
    if not sep or not key.strip():
        raise DatasetParseError(
            f"malformed metadata comment {line.strip()!r}", line=line_no
        )
    return key.strip(), value.strip()


def _parse_float(raw: str, name: str, line_no: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise DatasetParseError(
            f"{name} is not a number: {raw!r}", line=line_no
        ) from None
    if not math.isfinite(value):
        raise DatasetParseError(f"{name} is not finite: {raw!r}", line=line_no)
    return value


def _reference_from_metadata(metadata: dict[str, str], line_no: int) -> Reference:
    raw_kind = metadata.get("reference", ReferenceKind.ABSOLUTE_DBM)
    if raw_kind not in ReferenceKind.values:
        raise DatasetParseError(
            f"unknown reference {raw_kind!r}, expected one of {ReferenceKind.values}",
            line=line_no,
        )
    s_dbm = None
    if "s_dbm" in metadata:
        s_dbm = _parse_float(metadata["s_dbm"], "s_dbm", line_no)
    return Reference(kind=ReferenceKind(raw_kind), s_dbm=s_dbm)


def load_csv(stream: Iterable[str]) -> Dataset:
    """Parse un flux texte (UTF-8) en ``Dataset``.

    Les numéros de ligne des erreurs sont 1-based et comptent les
    commentaires et l'en-tête.
    """
    metadata: dict[str, str] = {}
    metadata_line = 0
    records: list[MeasurementRecord] = []
    header_seen = False

    for line_no, raw_line in enumerate(stream, start=1):
        line = raw_line.lstrip("\ufeff").strip()
        if not line:
            continue
        if line.startswith("#"):
            # Après l'en-tête, les commentaires sont ignorés.
            if not header_seen:
                key, value = _parse_metadata_line(line, line_no)
                metadata[key] = value
                metadata_line = line_no
            continue
        row = [cell.strip() for cell in next(csv.reader([line]))]
        if not header_seen:
            if tuple(row) != HEADER:
                raise DatasetParseError(
                    f"expected header {','.join(HEADER)!r}, got {line!r}",
                    line=line_no,
                )
            header_seen = True
            continue
        if len(row) != len(HEADER):
            raise DatasetParseError(
                f"expected {len(HEADER)} fields, got {len(row)}", line=line_no
            )
        distance = _parse_float(row[0], "distance_m", line_no)
        rss = _parse_float(row[1], "rss_db", line_no)
        try:
            records.append(MeasurementRecord(distance_m=distance, rss_db=rss))
        except DomainError as exc:
            raise DatasetParseError(str(exc), line=line_no) from exc

    if not header_seen:
        raise DatasetParseError("missing header 'distance_m,rss_db'", line=1)
    if not records:
        raise DatasetParseError("dataset body is empty", line=1)

    reference = _reference_from_metadata(metadata, metadata_line)
    source_tag = metadata.get("source_tag", SourceTag.UNKNOWN)
    extra = {k: v for k, v in metadata.items() if k not in RESERVED_KEYS}

    logger.info(
        "dataset_loaded",
        extra={
            "n_records": len(records),
            "source_tag": source_tag,
            "reference": str(reference.kind),
        },
    )
    return Dataset(
        records=tuple(records),
        reference=reference,
        source_tag=source_tag,
        metadata=extra,
    )


def write_csv(ds: Dataset, stream: TextIO) -> None:
    """Écrit ``ds`` dans le format lu par ``load_csv`` (17 chiffres significatifs)."""
    stream.write(f"# source_tag={ds.source_tag}\n")
    stream.write(f"# reference={ds.reference.kind}\n")
    if ds.reference.s_dbm is not None:
        stream.write(f"# s_dbm={FLOAT_FORMAT.format(ds.reference.s_dbm)}\n")
    for key, value in ds.metadata.items():
        stream.write(f"# {key}={value}\n")
    stream.write(",".join(HEADER) + "\n")
    for rec in ds.records:
        stream.write(
            f"{FLOAT_FORMAT.format(rec.distance_m)},{FLOAT_FORMAT.format(rec.rss_db)}\n"
        )
