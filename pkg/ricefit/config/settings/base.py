"""Base Django settings for the ricefit project.

ricefit est un outil en ligne de commande : pas de base de données, pas de
serveur HTTP. Django fournit la configuration, le logging et les commandes
de gestion (``manage.py fit``, ``manage.py simulate``, ``manage.py bias_curve``).
"""

from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Aucun secret n'est manipulé : la clé ne sert qu'à satisfaire Django.
SECRET_KEY = "ricefit-cli-no-secret"  # nosec B105

DEBUG = False

ALLOWED_HOSTS: list[str] = []

# Application definition
DJANGO_APPS = [
    "django.contrib.contenttypes",
]

THIRD_PARTY_APPS = [
    "rest_framework",
]

LOCAL_APPS = [
    "apps.core",
    "apps.channel",
    "apps.measurements",
    "apps.fitting",
    "apps.synth",
    "apps.reports",
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

# Pas de persistance : les jeux de mesures sont lus et écrits en CSV.
DATABASES: dict = {}

USE_I18N = False
USE_TZ = True
TIME_ZONE = "UTC"

# REST Framework : seuls les serializers servent (validation de RunConfig)
REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
}

# Logging structuré JSON
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "json": {
            "()": "pythonjsonlogger.jsonlogger.JsonFormatter",
            "format": "%(asctime)s %(levelname)s %(name)s %(message)s",
            "static_fields": {
                "app": "ricefit",
            },
        },
    },
    "handlers": {
        # stderr : stdout reste réservé aux tableaux et rapports des commandes
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "json",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "apps": {
            "handlers": ["console"],
            "level": "INFO",
            "propagate": False,
        },
        "apps.core.exceptions": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "apps.core.runs": {
            "handlers": ["console"],
            "level": "INFO",
            "propagate": False,
        },
    },
}
