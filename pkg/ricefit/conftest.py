"""Fixtures partagées pour les tests ricefit."""

import numpy as np
import pytest

from apps.channel.bias import PacketSpec, calibrate_noise_ref


@pytest.fixture()
def calibrated_lb():
    """Chaîne de liaison calibrée relativement à S (S = 0 dB, 20 % à 20 octets)."""
    return calibrate_noise_ref(0.0)


@pytest.fixture()
def packet():
    """Paquet de 50 octets (M = 400 bits)."""
    return PacketSpec(50)


@pytest.fixture()
def rng():
    """Générateur déterministe pour les tests."""
    return np.random.Generator(np.random.PCG64(12345))
