"""Application Django core."""

from django.apps import AppConfig


class CoreConfig(AppConfig):
    """Configuration de l'application core."""

    name = "apps.core"
    verbose_name = "Core"
