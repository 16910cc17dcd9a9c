"""Configuration pour les tests unitaires.

Les tests unitaires n'écrivent aucun fichier et ne lancent aucune commande.
"""

from pathlib import Path

import pytest

UNIT_DIR = Path(__file__).parent


def pytest_collection_modifyitems(items):
    """Ajouter automatiquement le marker 'unit' aux tests de ce dossier."""
    for item in items:
        if UNIT_DIR in item.path.parents:
            item.add_marker(pytest.mark.unit)
