"""Pilotes d'ajustement : Rice naïve et distribution censurée.

Les résidus sont les écarts entre la hauteur de la CDF empirique i/n et la
CDF du modèle en chaque échantillon trié.

Coordonnées d'optimisation, avec r̄ l'amplitude moyenne de l'échantillon :

    θ = (ln K, ln(r_rms / r̄), r_0 / r̄),    r_rms = r_s·sqrt(1 + 1/K)

r_rms est l'amplitude quadratique moyenne de la Rice (r_rms² = ν² + 2σ²). À K petit,
l'effet de K au premier ordre est un simple changement d'échelle : à r_rms
fixé il disparaît, et la direction ln K se découple des deux autres. K > 0
et r_s > 0 pour tout itéré ; θ est inchangé quand toutes les amplitudes
sont multipliées par une même constante.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from apps.channel.bias import LinkBudget, PacketSpec, PacketSuccessBias, UnitBias
from apps.channel.censored import CensoredModel, sample_cdf
from apps.channel.protocols import BiasFunction
from apps.channel.rician import RicianParams
from apps.core.exceptions import (
    DomainError,
    EmptyDatasetError,
    FitInitializationError,
    RicefitError,
)
from apps.measurements.models import Dataset
from apps.measurements.services import to_amplitudes

from .enums import FitMode, StopReason
from .lm import LmOptions, levenberg_marquardt

logger = logging.getLogger(__name__)

# ─── Constants ───────────────────────────────────────────────────────

MIN_FIT_SAMPLES: int = 10
AUTO_INIT_K: float = 0.1
AUTO_INIT_R0: float = 0.0


@dataclass(frozen=True)
class FitResult:
    """Résultat d'un ajustement (une ligne du tableau de rapport)."""

    params: RicianParams
    rmse: float
    iterations: int
    converged: bool
    mode: FitMode
    residual_count: int
    cost: float = 0.0
    ks_statistic: float = 0.0
    amp_ref_dbm: float = 0.0
    source_tag: str = ""
    stop_reason: StopReason = StopReason.MAX_ITERATIONS


def _check_sorted_samples(samples: NDArray[np.float64]) -> None:
    if samples.size == 0:
        raise EmptyDatasetError("no sample to compare against the model CDF")
    if np.any(np.diff(samples) < 0):
        raise DomainError("samples must be sorted ascending")


def cdf_residuals(
    samples: ArrayLike, model_cdf: Callable[[NDArray[np.float64]], ArrayLike]
) -> NDArray[np.float64]:
    """Résidus i/n - F(x_(i)) aux échantillons triés (i de 1 à n)."""
    arr = np.asarray(samples, dtype=float)
    _check_sorted_samples(arr)
    heights = np.arange(1, arr.size + 1) / arr.size
    return heights - np.asarray(model_cdf(arr), dtype=float)


def cdf_rmse(
    samples: ArrayLike, model_cdf: Callable[[NDArray[np.float64]], ArrayLike]
) -> float:
    """Racine de l'erreur quadratique moyenne entre CDF empirique et modèle."""
    res = cdf_residuals(samples, model_cdf)
    return float(np.sqrt(np.mean(res * res)))


def ks_statistic(
    samples: ArrayLike, model_cdf: Callable[[NDArray[np.float64]], ArrayLike]
) -> float:
    """Statistique de Kolmogorov-Smirnov sup|F_n - F| (deux côtés des marches)."""
    arr = np.asarray(samples, dtype=float)
    _check_sorted_samples(arr)
    return float(stats.kstest(arr, model_cdf, method="asymp").statistic)


def _params_from_theta(theta: NDArray[np.float64], scale: float) -> RicianParams:
    try:
        k_linear = math.exp(theta[0])
        r_rms = scale * math.exp(theta[1])
    except OverflowError:
        raise DomainError(f"parameter vector out of range: {theta.tolist()}") from None
    r_s = r_rms * math.sqrt(k_linear / (1.0 + k_linear))
    return RicianParams(k_linear=k_linear, r_s=r_s, r_0=scale * float(theta[2]))


def _theta_from_params(p: RicianParams, scale: float) -> NDArray[np.float64]:
    k = p.k_linear
    r_rms = p.r_s * math.sqrt((1.0 + k) / k)
    return np.array([math.log(k), math.log(r_rms / scale), p.r_0 / scale])


def auto_init(amplitudes: NDArray[np.float64]) -> RicianParams:
    """Point de départ : r_s = amplitude moyenne, K = 0.1, r_0 = 0."""
    return RicianParams(
        k_linear=AUTO_INIT_K, r_s=float(np.mean(amplitudes)), r_0=AUTO_INIT_R0
    )


def fit_amplitudes(
    amplitudes: ArrayLike,
    amp_ref_dbm: float,
    bias: BiasFunction,
    init: RicianParams | None = None,
    opts: LmOptions | None = None,
    mode: FitMode = FitMode.BIASED,
    source_tag: str = "",
) -> FitResult:
    """Ajuste la CDF du modèle censuré (biais ``bias``) aux amplitudes triées."""
    amps = np.asarray(amplitudes, dtype=float)
    _check_sorted_samples(amps)
    if amps.size < MIN_FIT_SAMPLES:
        raise EmptyDatasetError(
            f"fitting needs at least {MIN_FIT_SAMPLES} samples, got {amps.size}"
        )
    init = init or auto_init(amps)
    heights = np.arange(1, amps.size + 1) / amps.size
    scale = float(np.mean(amps))

    def model_for(theta: NDArray[np.float64]) -> CensoredModel:
        return CensoredModel(_params_from_theta(theta, scale), bias, amp_ref_dbm)

    def residuals(theta: NDArray[np.float64]) -> NDArray[np.float64]:
        return heights - np.asarray(sample_cdf(amps, model_for(theta)))

    theta0 = _theta_from_params(init, scale)
    try:
        residuals(theta0)
    except RicefitError as exc:
        raise FitInitializationError(
            f"cannot start {mode} fit from {init}: {exc}"
        ) from exc

    lm = levenberg_marquardt(residuals, theta0, opts)
    params = _params_from_theta(lm.x, scale)
    final = model_for(lm.x)
    rmse = math.sqrt(2.0 * lm.cost / amps.size)
    result = FitResult(
        params=params,
        rmse=rmse,
        iterations=lm.iterations,
        converged=lm.converged,
        mode=mode,
        residual_count=int(amps.size),
        cost=lm.cost,
        ks_statistic=ks_statistic(amps, lambda x: sample_cdf(x, final)),
        amp_ref_dbm=amp_ref_dbm,
        source_tag=source_tag,
        stop_reason=lm.stop_reason,
    )
    logger.info(
        "fit_completed",
        extra={
            "mode": str(mode),
            "k_db": params.k_db(),
            "r_s": params.r_s,
            "r_0": params.r_0,
            "rmse": rmse,
            "iterations": lm.iterations,
            "converged": lm.converged,
            "stop_reason": str(lm.stop_reason),
            "n_samples": int(amps.size),
        },
    )
    return result


def fit_biased(
    ds: Dataset,
    lb: LinkBudget,
    pkt: PacketSpec,
    init: RicianParams | None = None,
    opts: LmOptions | None = None,
) -> FitResult:
    """Ajustement tenant compte de la censure par la réception des paquets.

    ``lb`` doit être calibré dans le même système de référence que les
    rss_db du jeu (dBm absolus ou dB relatifs à S).
    """
    amps, amp_ref_dbm = to_amplitudes(ds)
    return fit_amplitudes(
        amps,
        amp_ref_dbm,
        PacketSuccessBias(lb, pkt),
        init=init,
        opts=opts,
        mode=FitMode.BIASED,
        source_tag=str(ds.source_tag),
    )


def fit_naive(
    ds: Dataset,
    init: RicianParams | None = None,
    opts: LmOptions | None = None,
) -> FitResult:
    """Ajustement de la Rice décalée seule (w ≡ 1), sans tenir compte de la censure."""
    amps, amp_ref_dbm = to_amplitudes(ds)
    return fit_amplitudes(
        amps,
        amp_ref_dbm,
        UnitBias(),
        init=init,
        opts=opts,
        mode=FitMode.NAIVE,
        source_tag=str(ds.source_tag),
    )


def rmse_reduction(naive: FitResult, biased: FitResult) -> float:
    """Réduction relative de la RMSE : 1 - rmse_biased / rmse_naive."""
    if naive.rmse <= 0:
        raise DomainError("naive RMSE is zero, reduction is undefined")
    return 1.0 - biased.rmse / naive.rmse
