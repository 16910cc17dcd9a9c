"""Development settings for the ricefit project."""

from .base import *  # noqa: F401, F403

DEBUG = True

# Trace de chaque itération Levenberg-Marquardt en développement
LOGGING["loggers"]["apps"]["level"] = "DEBUG"  # noqa: F405
