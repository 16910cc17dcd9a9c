"""Application Django measurements."""

from django.apps import AppConfig


class MeasurementsConfig(AppConfig):
    """Configuration de l'application measurements."""

    name = "apps.measurements"
    verbose_name = "Measurements"
