"""Protocole commun des fonctions de biais w (RSS en dBm → probabilité)."""

from typing import Protocol, runtime_checkable

import numpy as np
from numpy.typing import ArrayLike, NDArray


@runtime_checkable
class BiasFunction(Protocol):
    """Probabilité qu'un paquet reçu à ``rss_dbm`` soit décodé.

    Les implémentations (PacketSuccessBias, UnitBias, doubles de test)
    respectent ce contrat sans héritage. ``breakpoints_dbm`` liste les
    discontinuités éventuelles, transmises aux quadratures.
    """

    breakpoints_dbm: tuple[float, ...]

    def __call__(self, rss_dbm: ArrayLike) -> NDArray[np.float64]:
        """Evaluate w, non-decreasing in rss_dbm, values in [0, 1]."""
        ...
