"""Tirage de Rice décalée puis acceptation de Bernoulli de probabilité w(r).

Reproduit le processus physique de réception : chaque amplitude tirée
n'est observée que si le paquet correspondant est décodé. L'échantillon
accepté suit donc f_sample sans jamais utiliser sa formule, ce qui en fait
un oracle indépendant du module censored.
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from apps.channel.bias import LinkBudget, PacketSpec, PacketSuccessBias, UnitBias
from apps.channel.censored import CensoredModel, amplitude_to_rss
from apps.channel.protocols import BiasFunction
from apps.channel.rician import RicianParams, to_standard
from apps.core.exceptions import DomainError, FullyCensoredError
from apps.measurements.enums import SourceTag
from apps.measurements.models import Dataset, Reference
from apps.measurements.services import PLACEHOLDER_DISTANCE_M, from_amplitudes

logger = logging.getLogger(__name__)

# ─── Constants ───────────────────────────────────────────────────────

BATCH_SIZE: int = 65536
MIN_ACCEPTANCE_MASS: float = 1e-6


@dataclass(frozen=True)
class SynthConfig:
    """Vérité terrain et chaîne de réception d'un jeu synthétique.

    ``unbiased=True`` remplace w par 1 (aucune censure).
    """

    true_params: RicianParams
    lb: LinkBudget
    pkt: PacketSpec
    amp_ref_dbm: float
    n_accepted: int
    seed: int
    unbiased: bool = False
    distance_m: float = PLACEHOLDER_DISTANCE_M
    reference: Reference = field(default_factory=Reference)

    def __post_init__(self) -> None:
        if int(self.n_accepted) != self.n_accepted or self.n_accepted < 1:
            raise DomainError(
                f"n_accepted must be an integer >= 1, got {self.n_accepted}"
            )
        if not self.unbiased:
            self.lb.require_noise_ref()

    @property
    def bias(self) -> BiasFunction:
        """Fonction de biais appliquée au tirage."""
        if self.unbiased:
            return UnitBias()
        return PacketSuccessBias(self.lb, self.pkt)

    def model(self) -> CensoredModel:
        """Modèle censuré correspondant (sa constante Z est le taux d'acceptation)."""
        return CensoredModel(self.true_params, self.bias, self.amp_ref_dbm)

    def as_dict(self) -> dict:
        """Vérité terrain sérialisable (métadonnée ``truth`` du CSV)."""
        p = self.true_params
        return {
            "k_db": p.k_db(),
            "k_linear": p.k_linear,
            "r_s": p.r_s,
            "r_0": p.r_0,
            "amp_ref_dbm": self.amp_ref_dbm,
            "noise_ref_dbm": self.lb.noise_ref_dbm,
            "payload_bytes": self.pkt.payload_bytes,
            "unbiased": self.unbiased,
            "n_accepted": self.n_accepted,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SynthResult:
    """Jeu généré et statistiques de la génération."""

    dataset: Dataset
    amplitudes: NDArray[np.float64] = field(repr=False)
    n_drawn: int
    n_accepted: int

    @property
    def acceptance_rate(self) -> float:
        """Fraction des tirages acceptés."""
        return self.n_accepted / self.n_drawn


def rician_samples(
    p: RicianParams, rng: np.random.Generator, size: int
) -> NDArray[np.float64]:
    """Tirages |(ν + σ·g1) + i·σ·g2| avec g1, g2 gaussiens centrés réduits."""
    nu, sigma = to_standard(p)
    g = rng.standard_normal((2, size))
    return np.hypot(nu + sigma * g[0], sigma * g[1])


def rician_sample(p: RicianParams, rng: np.random.Generator) -> float:
    """Un tirage de la distribution de Rice (sans décalage r_0)."""
    return float(rician_samples(p, rng, 1)[0])


def _check_acceptance(cfg: SynthConfig) -> float:
    try:
        mass = cfg.model().surviving_mass
    except FullyCensoredError:
        mass = 0.0
    if mass < MIN_ACCEPTANCE_MASS:
        raise DomainError(
            f"acceptance mass {mass:.3g} < {MIN_ACCEPTANCE_MASS}: "
            "generation would not terminate"
        )
    return mass


def generate(cfg: SynthConfig) -> SynthResult:
    """Génère ``cfg.n_accepted`` mesures acceptées, déterministe pour ``cfg.seed``.

    Les tirages sont faits par lots de taille fixe depuis PCG64(seed) : le
    résultat ne dépend que de la graine. Les amplitudes décalées <= 0 sont
    écartées avant le test d'acceptation.
    """
    expected_rate = _check_acceptance(cfg)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    bias = cfg.bias
    accepted: list[NDArray[np.float64]] = []
    n_accepted = 0
    n_drawn = 0

    while n_accepted < cfg.n_accepted:
        r = rician_samples(cfg.true_params, rng, BATCH_SIZE) + cfg.true_params.r_0
        u = rng.random(BATCH_SIZE)
        keep = r > 0
        keep[keep] = u[keep] < bias(amplitude_to_rss(r[keep], cfg.amp_ref_dbm))
        hits = np.flatnonzero(keep)
        missing = cfg.n_accepted - n_accepted
        if hits.size >= missing:
            # Le dernier lot s'arrête au n-ième accepté.
            hits = hits[:missing]
            n_drawn += int(hits[-1]) + 1
        else:
            n_drawn += BATCH_SIZE
        accepted.append(r[hits])
        n_accepted += hits.size

    amplitudes = np.concatenate(accepted)
    metadata = {
        "truth": json.dumps(cfg.as_dict(), sort_keys=True),
        "acceptance_rate": repr(n_accepted / n_drawn),
    }
    dataset = from_amplitudes(
        amplitudes,
        cfg.amp_ref_dbm,
        distance_m=cfg.distance_m,
        reference=cfg.reference,
        source_tag=SourceTag.SYNTHETIC,
        metadata=metadata,
    )
    logger.info(
        "synthetic_dataset_generated",
        extra={
            "n_accepted": n_accepted,
            "n_drawn": n_drawn,
            "acceptance_rate": n_accepted / n_drawn,
            "expected_acceptance_rate": expected_rate,
            "seed": cfg.seed,
        },
    )
    return SynthResult(
        dataset=dataset,
        amplitudes=amplitudes,
        n_drawn=n_drawn,
        n_accepted=n_accepted,
    )
