"""Application Django channel."""

from django.apps import AppConfig


class ChannelConfig(AppConfig):
    """Configuration de l'application channel."""

    name = "apps.channel"
    verbose_name = "Channel model"
