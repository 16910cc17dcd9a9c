"""Distribution censurée (biaisée) des échantillons observés.

    f_sample(r) = w(r) · f(r - r_0) / Z,    Z = ∫ w(r') · f(r' - r_0) dr'

Le dénominateur intègre la densité décalée : c'est la seule lecture pour
laquelle f_sample est normalisée. w est évaluée au RSS physique
``amp_ref_dbm + 20·log10(r)`` (convention d'amplitude en tension) ; les
amplitudes négatives (r_0 < 0) n'existent pas physiquement et sont exclues
du support, comme dans le générateur synthétique.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

from apps.core.exceptions import DomainError, FullyCensoredError

from .bias import LinkBudget, PacketSpec, PacketSuccessBias
from .protocols import BiasFunction
from .quadrature import PanelQuadrature, adaptive_integrate
from .rician import TAIL_SIGMAS, RicianParams, rician_mean, shifted_rician_pdf

logger = logging.getLogger(__name__)

# ─── Constants ───────────────────────────────────────────────────────

MIN_SURVIVING_MASS: float = 1e-12


def amplitude_to_rss(r: ArrayLike, amp_ref_dbm: float) -> NDArray[np.float64]:
    """RSS (dBm) = amp_ref_dbm + 20·log10(r) ; -inf en r = 0."""
    with np.errstate(divide="ignore"):
        return amp_ref_dbm + 20.0 * np.log10(np.asarray(r, dtype=float))


def rss_to_amplitude(rss_dbm: ArrayLike, amp_ref_dbm: float) -> NDArray[np.float64]:
    """Inverse de ``amplitude_to_rss``."""
    return np.power(10.0, (np.asarray(rss_dbm, dtype=float) - amp_ref_dbm) / 20.0)


@dataclass(frozen=True)
class CensoredModel:
    """Modèle de la distribution observée : Rice décalée pondérée par w.

    Immuable. La table de quadrature par panneaux est construite à la
    création du modèle puis réutilisée ; sa masse totale normalise la CDF,
    qui devient une fonction lisse des paramètres. Z par quadrature adaptative
    (``normalization``) n'est calculée qu'à la demande.
    """

    params: RicianParams
    bias: BiasFunction
    amp_ref_dbm: float = 0.0

    def __post_init__(self) -> None:
        mass = self._panels.total
        if not mass >= MIN_SURVIVING_MASS:
            raise FullyCensoredError(
                f"model {self.params} has surviving mass {mass:.3g} "
                f"< {MIN_SURVIVING_MASS}"
            )

    @cached_property
    def normalization(self) -> float:
        """Z par quadrature adaptative sur le support."""
        lower, upper = self.support()
        z = adaptive_integrate(
            self._weighted_density_scalar, lower, upper, points=self._breakpoints()
        )
        return min(z, 1.0)

    @classmethod
    def from_link_budget(
        cls,
        params: RicianParams,
        lb: LinkBudget,
        pkt: PacketSpec,
        amp_ref_dbm: float,
    ) -> "CensoredModel":
        """Modèle avec la fonction de biais physique (chaîne BFSK / FER)."""
        return cls(params, PacketSuccessBias(lb, pkt), amp_ref_dbm)

    @property
    def lb(self) -> LinkBudget | None:
        """Chaîne de liaison du biais physique (None pour un autre biais)."""
        return self.bias.lb if isinstance(self.bias, PacketSuccessBias) else None

    @property
    def pkt(self) -> PacketSpec | None:
        """Taille de paquet du biais physique (None pour un autre biais)."""
        return self.bias.pkt if isinstance(self.bias, PacketSuccessBias) else None

    @property
    def surviving_mass(self) -> float:
        """Probabilité qu'un échantillon physique soit reçu (= Z)."""
        return self.normalization

    def support(self) -> tuple[float, float]:
        """Intervalle d'intégration portant la masse de f_sample."""
        p = self.params
        lower = max(0.0, p.r_0, p.r_0 + p.nu - TAIL_SIGMAS * p.sigma)
        upper = p.r_0 + p.nu + TAIL_SIGMAS * p.sigma
        return lower, upper

    def weighted_density(self, r: ArrayLike) -> NDArray[np.float64]:
        """w(r) · f(r - r_0), non normalisée ; nulle pour r < max(0, r_0)."""
        arr = np.asarray(r, dtype=float)
        density = shifted_rician_pdf(np.where(arr > 0, arr, 0.0), self.params)
        live = (arr > 0) & (density > 0)
        weights = np.zeros_like(arr)
        if np.any(live):
            weights[live] = self.bias(amplitude_to_rss(arr[live], self.amp_ref_dbm))
        return np.where(live, weights * density, 0.0)

    def _weighted_density_scalar(self, r: float) -> float:
        return float(self.weighted_density(np.array([r]))[0])

    def _breakpoints(self) -> list[float]:
        points = [self.params.r_0 + self.params.nu]
        points.extend(
            float(rss_to_amplitude(b, self.amp_ref_dbm))
            for b in self.bias.breakpoints_dbm
        )
        return points

    @cached_property
    def _panels(self) -> PanelQuadrature:
        lower, upper = self.support()
        return PanelQuadrature(
            self.weighted_density, lower, upper, breakpoints=self._breakpoints()
        )


def normalization_constant(m: CensoredModel) -> float:
    """Z = ∫ w(r') f(r' - r_0) dr', calculée à la demande puis mise en cache."""
    return m.normalization


def sample_pdf(r: ArrayLike, m: CensoredModel) -> NDArray[np.float64] | float:
    """Densité f_sample(r) des mesures observées."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise DomainError("sample_pdf requires r >= 0")
    value = m.weighted_density(arr) / m.normalization
    return float(value) if value.ndim == 0 else value


def sample_cdf(r: ArrayLike, m: CensoredModel) -> NDArray[np.float64] | float:
    """CDF de f_sample, évaluée via le cache de panneaux du modèle."""
    arr = np.asarray(r, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("sample_cdf requires r >= 0")
    value = np.clip(m._panels.cumulative(arr) / m._panels.total, 0.0, 1.0)
    return float(value) if value.ndim == 0 else value


def sample_mean(m: CensoredModel) -> float:
    """Moyenne de f_sample par quadrature."""
    lower, upper = m.support()
    first = adaptive_integrate(
        lambda t: t * m._weighted_density_scalar(t),
        lower,
        upper,
        points=m._breakpoints(),
    )
    return first / m.normalization


def uncensored_mean(m: CensoredModel) -> float:
    """Moyenne de la densité décalée non censurée f(r - r_0)."""
    return m.params.r_0 + rician_mean(m.params)
