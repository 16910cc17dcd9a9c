"""Fixtures des tests d'intégration des commandes."""

import pytest

from apps.measurements.csv_io import write_csv
from apps.synth.services import generate
from tests.factories import SynthConfigFactory


@pytest.fixture()
def synthetic_csv(tmp_path):
    """Jeu synthétique censuré de 400 mesures à 100 m, relatif à S."""
    path = tmp_path / "data.csv"
    result = generate(SynthConfigFactory(n_accepted=400, seed=11))
    with path.open("w", encoding="utf-8") as stream:
        write_csv(result.dataset, stream)
    return path
