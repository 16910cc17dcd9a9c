"""Settings for running tests.

Aucune base de données, aucun handler de logging.
"""

from .base import *  # noqa: F401, F403

# Disable logging during tests
LOGGING = {}
