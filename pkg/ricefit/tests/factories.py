"""Factories Factory-Boy pour les tests.

Chaque factory crée une valeur du domaine (dataclass immuable) avec des
valeurs réalistes par défaut, utilisable dans les tests unitaires et
d'intégration.
"""

import factory

from apps.channel.bias import LinkBudget, PacketSpec, calibrate_noise_ref
from apps.channel.rician import RicianParams
from apps.measurements.enums import ReferenceKind, SourceTag
from apps.measurements.models import Dataset, MeasurementRecord, Reference
from apps.synth.services import SynthConfig

# ╔══════════════════════════════════════════════════════════════════╗
# ║                           CHANNEL                                ║
# ╚══════════════════════════════════════════════════════════════════╝


class RicianParamsFactory(factory.Factory):
    """Factory pour RicianParams (K = 1, r_s = 1, r_0 = 0)."""

    class Meta:
        model = RicianParams

    k_linear = 1.0
    r_s = 1.0
    r_0 = 0.0


class LinkBudgetFactory(factory.Factory):
    """Factory pour LinkBudget, calibré relativement à S (S = 0 dB).

    ``LinkBudgetFactory(noise_ref_dbm=None)`` donne une chaîne non calibrée.
    """

    class Meta:
        model = LinkBudget

    noise_ref_dbm = factory.LazyFunction(lambda: calibrate_noise_ref(0.0).noise_ref_dbm)
    bitrate_hz = 100e3
    bandwidth_hz = 200e3
    sensitivity_dbm = 0.0
    alpha = 1.0
    beta = 1.0


class PacketSpecFactory(factory.Factory):
    """Factory pour PacketSpec (50 octets)."""

    class Meta:
        model = PacketSpec

    payload_bytes = 50


# ╔══════════════════════════════════════════════════════════════════╗
# ║                         MEASUREMENTS                             ║
# ╚══════════════════════════════════════════════════════════════════╝


class MeasurementRecordFactory(factory.Factory):
    """Factory pour MeasurementRecord."""

    class Meta:
        model = MeasurementRecord

    distance_m = 100.0
    rss_db = factory.Sequence(lambda n: -95.0 - 0.5 * (n % 20))


class DatasetFactory(factory.Factory):
    """Factory pour Dataset ; ``distances`` et ``rss`` décrivent les mesures."""

    class Meta:
        model = Dataset

    class Params:
        distances = (100.0, 100.0, 100.0)
        rss = (-95.0, -96.0, -97.0)

    records = factory.LazyAttribute(
        lambda o: tuple(
            MeasurementRecord(distance_m=d, rss_db=r)
            for d, r in zip(o.distances, o.rss, strict=True)
        )
    )
    reference = factory.LazyFunction(lambda: Reference(ReferenceKind.RELATIVE_TO_S))
    source_tag = SourceTag.DRIVE_BY
    metadata = factory.LazyFunction(dict)


# ╔══════════════════════════════════════════════════════════════════╗
# ║                            SYNTH                                 ║
# ╚══════════════════════════════════════════════════════════════════╝


class SynthConfigFactory(factory.Factory):
    """Factory pour SynthConfig : Rice modérée, légèrement censurée."""

    class Meta:
        model = SynthConfig

    true_params = factory.SubFactory(
        RicianParamsFactory, k_linear=2.0, r_s=1.0, r_0=0.2
    )
    lb = factory.SubFactory(LinkBudgetFactory)
    pkt = factory.SubFactory(PacketSpecFactory)
    amp_ref_dbm = 3.0
    n_accepted = 2000
    seed = 7
    unbiased = False
    reference = factory.LazyFunction(lambda: Reference(ReferenceKind.RELATIVE_TO_S))
