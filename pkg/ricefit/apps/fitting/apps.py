"""Application Django fitting."""

from django.apps import AppConfig


class FittingConfig(AppConfig):
    """Configuration de l'application fitting."""

    name = "apps.fitting"
    verbose_name = "Fitting"
