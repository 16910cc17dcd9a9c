"""Application Django synth."""

from django.apps import AppConfig


class SynthAppConfig(AppConfig):
    """Configuration de l'application synth."""

    name = "apps.synth"
    verbose_name = "Synthetic data"
