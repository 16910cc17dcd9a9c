"""Fixtures partagées pour tous les tests (unit + integration)."""

import pytest

from tests.factories import DatasetFactory, RicianParamsFactory


@pytest.fixture()
def rician_params():
    """Paramètres de Rice modérés (K = 1, r_s = 1, r_0 = 0)."""
    return RicianParamsFactory()


@pytest.fixture()
def small_dataset():
    """Jeu de 3 mesures à 50, 100 et 150 m."""
    return DatasetFactory(distances=(50.0, 100.0, 150.0), rss=(-95.0, -96.0, -97.0))
