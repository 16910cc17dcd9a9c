"""Enums for the reports app."""

from django.db import models


class CalibrationMode(models.TextChoices):
    """Cadre des valeurs de RSS dans lequel la sensibilité est exprimée."""

    ABSOLUTE = "absolute", "Absolute sensitivity (dBm)"
    RELATIVE_TO_S = "relative_to_s", "Everything relative to S (S = 0 dB)"


class FitSelection(models.TextChoices):
    """Ajustements demandés à la commande ``fit``."""

    NAIVE = "naive", "Naive only"
    BIASED = "biased", "Biased only"
    BOTH = "both", "Naive and biased"


class Scenario(models.TextChoices):
    """Scénarios de collecte (préréglages de métadonnées)."""

    DRIVE_BY = "drive-by", "Drive-by reading"
    CONCENTRATOR = "concentrator", "Fixed concentrator"


# Caractéristiques système des deux scénarios ; la chaîne de liaison
# reste issue de la calibration.
SCENARIO_PRESETS: dict[str, dict[str, float | str]] = {
    Scenario.DRIVE_BY: {
        "tx_power_dbm": 8.0,
        "modulation": "BFSK",
        "frequency_mhz": 868.95,
        "bandwidth_khz": 200.0,
    },
    Scenario.CONCENTRATOR: {
        "tx_power_dbm": 14.0,
        "modulation": "BFSK",
        "frequency_mhz": 868.95,
        "bandwidth_khz": 200.0,
    },
}
