"""Fonction de biais w : probabilité de réception d'un paquet.

Chaîne de calcul :
  RSS (dBm) → SNR (dB) = RSS - noise_ref
            → εb/N0 (dB) = SNR + 10·log10(bandwidth / bitrate)
            → BER BFSK non cohérente = ½·exp(-εb/N0 / 2)
            → w = α·(1 - β·BER)^M = 1 - FER

La référence de bruit (plancher thermique + facteur de bruit) est inconnue :
elle est calibrée de sorte que les paquets de 20 octets soient reçus avec un
taux de succès de 20 % à la sensibilité S.
"""

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import ArrayLike, NDArray

from apps.core.exceptions import DomainError, InfeasibleCalibrationError

logger = logging.getLogger(__name__)

# ─── Constants ───────────────────────────────────────────────────────

BANDWIDTH_HZ_DEFAULT: float = 200e3
# Ordre de grandeur wM-Bus mode C ; seul le rapport bandwidth/bitrate compte
BITRATE_HZ_DEFAULT: float = 100e3
ALPHA_DEFAULT: float = 1.0  # détection de préambule idéale
BETA_DEFAULT: float = 1.0  # pas de FEC
PAYLOAD_BYTES_DEFAULT: int = 50
CALIBRATION_PAYLOAD_BYTES: int = 20
CALIBRATION_TARGET_PSR: float = 0.2


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class LinkBudget:
    """Constantes radio reliant le RSS au SNR binaire et au taux de succès.

    ``noise_ref_dbm`` vaut None tant que la calibration n'a pas eu lieu.
    """

    noise_ref_dbm: float | None = None
    bitrate_hz: float = BITRATE_HZ_DEFAULT
    bandwidth_hz: float = BANDWIDTH_HZ_DEFAULT
    sensitivity_dbm: float = 0.0
    alpha: float = ALPHA_DEFAULT
    beta: float = BETA_DEFAULT

    def __post_init__(self) -> None:
        _check_probability("alpha", self.alpha)
        _check_probability("beta", self.beta)
        if not self.bitrate_hz > 0:
            raise DomainError(f"bitrate_hz must be > 0, got {self.bitrate_hz}")
        if not self.bandwidth_hz > 0:
            raise DomainError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if self.noise_ref_dbm is not None and not math.isfinite(self.noise_ref_dbm):
            raise DomainError("noise_ref_dbm must be finite")

    @property
    def processing_gain_db(self) -> float:
        """10·log10(bandwidth / bitrate)."""
        return 10.0 * math.log10(self.bandwidth_hz / self.bitrate_hz)

    def with_noise_ref(self, noise_ref_dbm: float) -> "LinkBudget":
        """Copie avec la référence de bruit donnée."""
        return replace(self, noise_ref_dbm=noise_ref_dbm)

    def require_noise_ref(self) -> float:
        """Référence de bruit, ou DomainError si la chaîne n'est pas calibrée."""
        if self.noise_ref_dbm is None:
            raise DomainError("link budget is not calibrated (noise_ref_dbm unset)")
        return self.noise_ref_dbm


def bytes_to_m(payload_bytes: int) -> int:
    """Nombre de bits M d'un paquet de ``payload_bytes`` octets."""
    if isinstance(payload_bytes, bool) or int(payload_bytes) != payload_bytes:
        raise DomainError(f"payload_bytes must be an integer, got {payload_bytes!r}")
    if payload_bytes < 1:
        raise DomainError(f"payload_bytes must be >= 1, got {payload_bytes}")
    return 8 * int(payload_bytes)


@dataclass(frozen=True)
class PacketSpec:
    """Taille de paquet ; ``m_bits`` = 8 × ``payload_bytes``."""

    payload_bytes: int = PAYLOAD_BYTES_DEFAULT
    m_bits: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "m_bits", bytes_to_m(self.payload_bytes))


def ebn0_db(rss_dbm: ArrayLike, lb: LinkBudget) -> NDArray[np.float64] | float:
    """SNR binaire εb/N0 en dB."""
    value = np.asarray(rss_dbm, dtype=float) - lb.require_noise_ref()
    value = value + lb.processing_gain_db
    return float(value) if value.ndim == 0 else value


def rss_to_ebn0_linear(
    rss_dbm: ArrayLike, lb: LinkBudget
) -> NDArray[np.float64] | float:
    """SNR binaire εb/N0 linéaire (0 pour un RSS de -inf)."""
    value = np.power(10.0, np.asarray(ebn0_db(rss_dbm, lb)) / 10.0)
    return float(value) if value.ndim == 0 else value


def ber_bfsk(ebn0_linear: ArrayLike) -> NDArray[np.float64] | float:
    """BER de la BFSK non cohérente : ½·exp(-εb/N0 / 2)."""
    arr = np.asarray(ebn0_linear, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("ber_bfsk requires ebn0_linear >= 0")
    value = 0.5 * np.exp(-0.5 * arr)
    return float(value) if value.ndim == 0 else value


def _success_probability(
    ber: NDArray[np.float64], m_bits: int, alpha: float, beta: float
) -> NDArray[np.float64]:
    # α·(1 - β·BER)^M via log1p : pas de perte de précision pour BER ~ 0
    return alpha * np.exp(m_bits * np.log1p(-beta * ber))


def fer(
    ber: ArrayLike, m_bits: int, alpha: float = 1.0, beta: float = 1.0
) -> NDArray[np.float64] | float:
    """Taux d'erreur trame : 1 - α·(1 - β·BER)^M."""
    arr = np.asarray(ber, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise DomainError("fer requires 0 <= ber <= 1")
    if isinstance(m_bits, bool) or m_bits < 1:
        raise DomainError(f"m_bits must be a positive integer, got {m_bits}")
    _check_probability("alpha", alpha)
    _check_probability("beta", beta)
    value = 1.0 - _success_probability(arr, m_bits, alpha, beta)
    return float(value) if value.ndim == 0 else value


def bias_w(
    rss_dbm: ArrayLike, lb: LinkBudget, pkt: PacketSpec
) -> NDArray[np.float64] | float:
    """Probabilité de succès w = α·(1 - β·P_BFSK)^M au RSS donné."""
    ber = np.asarray(ber_bfsk(rss_to_ebn0_linear(rss_dbm, lb)))
    value = _success_probability(ber, pkt.m_bits, lb.alpha, lb.beta)
    return float(value) if value.ndim == 0 else value


def calibrate_noise_ref(
    sensitivity_dbm: float,
    target_psr: float = CALIBRATION_TARGET_PSR,
    pkt: PacketSpec | None = None,
    lb_partial: LinkBudget | None = None,
) -> LinkBudget:
    """Fixer noise_ref pour que bias_w(S) == target_psr (inversion exacte).

    (1 - β·P)^M = psr / α  →  P = (1 - (psr/α)^(1/M)) / β
    εb/N0 = -2·ln(2P), puis inversion de la chaîne en dB.

    Raises:
        DomainError: si target_psr n'est pas dans ]0, 1[.
        InfeasibleCalibrationError: si aucun RSS fini n'atteint target_psr.

    """
    pkt = pkt or PacketSpec(CALIBRATION_PAYLOAD_BYTES)
    lb_partial = lb_partial or LinkBudget()
    if not 0.0 < target_psr < 1.0:
        raise DomainError(f"target_psr must lie in ]0, 1[, got {target_psr}")
    if lb_partial.alpha <= target_psr:
        raise InfeasibleCalibrationError(
            f"alpha={lb_partial.alpha} caps the success rate below "
            f"target_psr={target_psr}"
        )
    if lb_partial.beta == 0:
        raise InfeasibleCalibrationError("beta=0 makes w independent of RSS")
    p_bfsk = -math.expm1(math.log(target_psr / lb_partial.alpha) / pkt.m_bits)
    p_bfsk /= lb_partial.beta
    if p_bfsk >= 0.5:
        # w(-inf) = α(1 - β/2)^M est déjà >= target_psr
        raise InfeasibleCalibrationError(
            f"target_psr={target_psr} is below the success floor of "
            f"{pkt.payload_bytes}-byte packets"
        )
    required_ebn0_db = 10.0 * math.log10(-2.0 * math.log(2.0 * p_bfsk))
    noise_ref = sensitivity_dbm - required_ebn0_db + lb_partial.processing_gain_db
    lb = replace(lb_partial, noise_ref_dbm=noise_ref, sensitivity_dbm=sensitivity_dbm)
    logger.info(
        "noise_ref_calibrated",
        extra={
            "sensitivity_dbm": sensitivity_dbm,
            "target_psr": target_psr,
            "m_bits": pkt.m_bits,
            "noise_ref_dbm": noise_ref,
        },
    )
    return lb


@dataclass(frozen=True)
class PacketSuccessBias:
    """Fonction de biais physique : chaîne BFSK non cohérente / FER."""

    lb: LinkBudget
    pkt: PacketSpec
    breakpoints_dbm: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        self.lb.require_noise_ref()

    def __call__(self, rss_dbm: ArrayLike) -> NDArray[np.float64]:
        return np.asarray(bias_w(rss_dbm, self.lb, self.pkt))


@dataclass(frozen=True)
class UnitBias:
    """w ≡ 1 : aucune censure (limite non biaisée, ajustement naïf)."""

    breakpoints_dbm: tuple[float, ...] = ()

    def __call__(self, rss_dbm: ArrayLike) -> NDArray[np.float64]:
        return np.ones_like(np.asarray(rss_dbm, dtype=float))
