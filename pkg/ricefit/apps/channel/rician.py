"""Densité et CDF de Rice dans la paramétrisation (K, r_s).

    f(r) = (2rK / r_s²) · exp(-K (r² + r_s²) / r_s²) · I0(2rK / r_s)

La densité est évaluée dans le domaine logarithmique (somme de logs, une
seule exponentiation finale) : pour K grand, exp(...) sous-déborde et I0
déborde bien avant que leur produit ne devienne non représentable.

Forme standard équivalente : ν = r_s, σ = r_s / sqrt(2K).
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from apps.core.exceptions import DomainError

from .quadrature import adaptive_integrate, integrate_sorted_grid

# ─── Constants ───────────────────────────────────────────────────────

# Au-delà, la série entière de I0 cède la place au développement asymptotique
BESSEL_ASYMPTOTIC_SWITCH: float = 30.0
BESSEL_MAX_SERIES_TERMS: int = 500
BESSEL_MAX_ASYMPTOTIC_TERMS: int = 60

# Masse au-delà de ν + 12σ < 1e-10 (queue sous-gaussienne)
TAIL_SIGMAS: float = 12.0
# Borne de troncature des intégrales de CDF (masse résiduelle nulle en double)
CDF_CAP_SIGMAS: float = 40.0


@dataclass(frozen=True)
class RicianParams:
    """Paramètres de la distribution de Rice non observable.

    ``k_linear`` : rapport de puissance composante dominante / multitrajets.
    ``r_s`` : amplitude de la composante dominante (unités linéaires).
    ``r_0`` : décalage de la distribution (unités linéaires, peut être < 0).
    """

    k_linear: float
    r_s: float
    r_0: float = 0.0

    def __post_init__(self) -> None:
        for name in ("k_linear", "r_s", "r_0"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite, got {getattr(self, name)}")
        if self.k_linear <= 0:
            raise DomainError(f"k_linear must be > 0, got {self.k_linear}")
        if self.r_s <= 0:
            raise DomainError(f"r_s must be > 0, got {self.r_s}")

    @classmethod
    def from_db(cls, k_db: float, r_s: float, r_0: float = 0.0) -> "RicianParams":
        """Construire à partir de K en dB (K = 10^(K_dB/10))."""
        return cls(k_linear=10.0 ** (k_db / 10.0), r_s=r_s, r_0=r_0)

    def k_db(self) -> float:
        """K-factor en dB."""
        return 10.0 * math.log10(self.k_linear)

    @property
    def nu(self) -> float:
        """Amplitude de la composante dominante (forme standard)."""
        return self.r_s

    @property
    def sigma(self) -> float:
        """Écart-type par composante des multitrajets : r_s / sqrt(2K)."""
        return self.r_s / math.sqrt(2.0 * self.k_linear)

    def rescaled(self, factor: float) -> "RicianParams":
        """Changement d'échelle d'amplitude : r_s et r_0 multipliés, K inchangé."""
        if factor <= 0:
            raise DomainError(f"scale factor must be > 0, got {factor}")
        return RicianParams(self.k_linear, self.r_s * factor, self.r_0 * factor)


def to_standard(p: RicianParams) -> tuple[float, float]:
    """(ν, σ) de la forme standard de Rice."""
    return p.nu, p.sigma


def _log_i0_series(x: NDArray[np.float64]) -> NDArray[np.float64]:
    # Σ (x/2)^{2m} / (m!)²
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, BESSEL_MAX_SERIES_TERMS):
        term = term * q / (m * m)
        total = total + term
        if np.all(term <= np.finfo(float).eps * total):
            break
    return np.log(total)


def _log_i0_asymptotic(x: NDArray[np.float64]) -> NDArray[np.float64]:
    # I0(x) ~ e^x / sqrt(2πx) · Σ ((2k-1)!!)² / (k! (8x)^k)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, BESSEL_MAX_ASYMPTOTIC_TERMS):
        term = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        total = total + term
        if np.all(term <= np.finfo(float).eps * total):
            break
    return x - 0.5 * np.log(2.0 * np.pi * x) + np.log(total)


def log_bessel_i0(x: ArrayLike) -> NDArray[np.float64] | float:
    """ln I0(x) sans débordement, pour x >= 0 (scalaire ou tableau)."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("log_bessel_i0 requires x >= 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = flat <= BESSEL_ASYMPTOTIC_SWITCH
    if np.any(small):
        out[small] = _log_i0_series(flat[small])
    if np.any(~small):
        out[~small] = _log_i0_asymptotic(flat[~small])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def log_rician_pdf(r: ArrayLike, p: RicianParams) -> NDArray[np.float64] | float:
    """ln f(r) ; -inf pour r <= 0 (le facteur r annule la densité en 0)."""
    arr = np.asarray(r, dtype=float)
    k, rs = p.k_linear, p.r_s
    positive = arr > 0
    safe = np.where(positive, arr, 1.0)
    log_pdf = (
        np.log(2.0 * k / (rs * rs))
        + np.log(safe)
        - k * (safe * safe + rs * rs) / (rs * rs)
        + log_bessel_i0(2.0 * k * safe / rs)
    )
    log_pdf = np.where(positive, log_pdf, -np.inf)
    if arr.ndim == 0:
        return float(log_pdf)
    return log_pdf


def rician_pdf(r: ArrayLike, p: RicianParams) -> NDArray[np.float64] | float:
    """Densité de Rice en r (aucun décalage r_0 appliqué ici)."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise DomainError("rician_pdf requires r >= 0")
    return np.exp(log_rician_pdf(arr, p))


def shifted_rician_pdf(r: ArrayLike, p: RicianParams) -> NDArray[np.float64]:
    """f(r - r_0), nulle pour r < r_0 ; accepte tout r réel."""
    return np.exp(log_rician_pdf(np.asarray(r, dtype=float) - p.r_0, p))


def mass_interval(p: RicianParams) -> tuple[float, float]:
    """Intervalle [ν - 12σ, ν + 12σ] ∩ [0, ∞) portant la masse de f."""
    nu, sigma = to_standard(p)
    return max(0.0, nu - TAIL_SIGMAS * sigma), nu + TAIL_SIGMAS * sigma


def rician_cdf(r: ArrayLike, p: RicianParams) -> NDArray[np.float64] | float:
    """∫_0^r f(t) dt par quadrature adaptative (scalaire ou tableau).

    Pour un tableau, la grille est triée et les morceaux entre points
    consécutifs sont cumulés : le résultat est croissant par construction.
    """
    arr = np.asarray(r, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("rician_cdf requires r >= 0")
    nu, sigma = to_standard(p)
    cap = nu + CDF_CAP_SIGMAS * sigma
    flat = np.minimum(arr.ravel(), cap)
    order = np.argsort(flat, kind="stable")

    def integrand(t: float) -> float:
        return float(np.exp(log_rician_pdf(t, p)))

    values = np.empty_like(flat)
    values[order] = integrate_sorted_grid(integrand, flat[order], 0.0, points=(nu,))
    values = np.clip(values, 0.0, 1.0)
    if arr.ndim == 0:
        return float(values[0])
    return values.reshape(arr.shape)


def rician_mean(p: RicianParams) -> float:
    """Premier moment de f par quadrature."""
    lower, upper = mass_interval(p)
    return adaptive_integrate(
        lambda t: t * float(np.exp(log_rician_pdf(t, p))),
        lower,
        upper,
        points=(p.nu,),
    )
