"""Application Django reports."""

from django.apps import AppConfig


class ReportsConfig(AppConfig):
    """Configuration de l'application reports."""

    name = "apps.reports"
    verbose_name = "Reports"
