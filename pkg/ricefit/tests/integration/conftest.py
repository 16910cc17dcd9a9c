"""Configuration pour les tests d'intégration.

Les tests d'intégration lancent les commandes de gestion sur des fichiers
écrits dans un répertoire temporaire ; aucune base de données n'est utilisée.
"""

from pathlib import Path

import pytest

INTEGRATION_DIR = Path(__file__).parent


def pytest_collection_modifyitems(items):
    """Ajoute le marker 'integration' aux tests de ce dossier."""
    for item in items:
        if INTEGRATION_DIR in item.path.parents:
            item.add_marker(pytest.mark.integration)
