"""Enums for the measurements app."""

from django.db import models


class ReferenceKind(models.TextChoices):
    """Référence des valeurs rss_db d'un jeu de mesures."""

    ABSOLUTE_DBM = "absolute_dbm", "Absolute (dBm)"
    RELATIVE_TO_S = "relative_to_s", "Relative to sensitivity S (dB)"


class SourceTag(models.TextChoices):
    """Provenance d'un jeu de mesures."""

    DRIVE_BY = "drive-by", "Drive-by reading"
    CONCENTRATOR = "concentrator", "Fixed concentrator"
    SYNTHETIC = "synthetic", "Synthetic (ground truth known)"
    UNKNOWN = "unknown", "Unknown"
