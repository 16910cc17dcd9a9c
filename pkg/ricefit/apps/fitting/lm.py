"""Moteur Levenberg-Marquardt autonome (numpy).

Itération classique : (JᵀJ + λ·diag(JᵀJ))·δ = -Jᵀr, jacobien par
différences finies avant. Un pas n'est accepté que s'il diminue le coût
0.5·‖r‖², d'où une suite de coûts acceptés strictement décroissante.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from apps.core.exceptions import DomainError, NumericalError, RicefitError

from .enums import StopReason

logger = logging.getLogger(__name__)

ResidualFunction = Callable[[NDArray[np.float64]], NDArray[np.float64]]

# ─── Constants ───────────────────────────────────────────────────────

MAX_ITERATIONS_DEFAULT: int = 200
INITIAL_DAMPING_DEFAULT: float = 1e-3
DAMPING_UP_DEFAULT: float = 10.0
DAMPING_DOWN_DEFAULT: float = 10.0
COST_REL_TOL_DEFAULT: float = 1e-10
GRADIENT_INF_TOL_DEFAULT: float = 1e-12
FD_REL_STEP_DEFAULT: float = 1e-6
MAX_DAMPING: float = 1e16


@dataclass(frozen=True)
class LmOptions:
    """Hyperparamètres du moteur LM."""

    max_iterations: int = MAX_ITERATIONS_DEFAULT
    initial_damping: float = INITIAL_DAMPING_DEFAULT
    damping_up: float = DAMPING_UP_DEFAULT
    damping_down: float = DAMPING_DOWN_DEFAULT
    cost_rel_tol: float = COST_REL_TOL_DEFAULT
    gradient_inf_tol: float = GRADIENT_INF_TOL_DEFAULT
    fd_rel_step: float = FD_REL_STEP_DEFAULT

    def __post_init__(self) -> None:
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise DomainError(
                "max_iterations must be an integer >= 1, "
                f"got {self.max_iterations}"
            )
        for name in (
            "initial_damping",
            "damping_up",
            "damping_down",
            "cost_rel_tol",
            "gradient_inf_tol",
            "fd_rel_step",
        ):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be finite and > 0, got {value}")


@dataclass(frozen=True)
class LmResult:
    """Résultat d'une minimisation LM."""

    x: NDArray[np.float64]
    cost: float
    iterations: int
    converged: bool
    stop_reason: StopReason
    cost_history: tuple[float, ...] = field(default=(), repr=False)


def _evaluate(
    residuals: ResidualFunction, x: NDArray[np.float64]
) -> NDArray[np.float64]:
    res = np.asarray(residuals(x), dtype=float).ravel()
    if not np.all(np.isfinite(res)):
        raise NumericalError(f"non-finite residuals at x={x.tolist()}")
    return res


def forward_jacobian(
    residuals: ResidualFunction,
    x: NDArray[np.float64],
    res: NDArray[np.float64],
    rel_step: float,
) -> NDArray[np.float64]:
    """Jacobien par différences finies avant, pas rel_step·max(|x_j|, 1).

    Si le point avant sort du domaine du modèle, la colonne est estimée par
    différence arrière.
    """
    jac = np.empty((res.size, x.size))
    for j in range(x.size):
        h = rel_step * max(abs(x[j]), 1.0)
        shifted = x.copy()
        shifted[j] += h
        try:
            jac[:, j] = (_evaluate(residuals, shifted) - res) / h
        except RicefitError:
            shifted[j] = x[j] - h
            jac[:, j] = (res - _evaluate(residuals, shifted)) / h
    return jac


def levenberg_marquardt(
    residuals: ResidualFunction,
    x0: ArrayLike,
    opts: LmOptions | None = None,
) -> LmResult:
    """Minimise 0.5·‖residuals(x)‖² à partir de x0.

    Arrêts : variation relative du coût |Δ| / coût initial < cost_rel_tol,
    ‖Jᵀr‖∞ < gradient_inf_tol, ou max_iterations. ``iterations`` compte
    les systèmes résolus ; les critères sont testés juste après chaque pas
    accepté. Les systèmes singuliers et les points d'essai hors domaine
    augmentent l'amortissement au lieu d'échouer.

    Raises:
        NumericalError: résidus non finis en x0.
    """
    opts = opts or LmOptions()
    x = np.array(x0, dtype=float).ravel()
    res = _evaluate(residuals, x)
    cost = 0.5 * float(res @ res)
    reference_cost = max(cost, np.finfo(float).tiny)
    history = [cost]
    damping = opts.initial_damping
    stop_reason = StopReason.MAX_ITERATIONS
    iterations = 0
    jac = forward_jacobian(residuals, x, res, opts.fd_rel_step)

    while True:
        grad = jac.T @ res
        if float(np.max(np.abs(grad))) < opts.gradient_inf_tol:
            stop_reason = StopReason.GRADIENT_TOLERANCE
            break
        if iterations >= opts.max_iterations:
            break
        iterations += 1
        normal = jac.T @ jac
        scaling = np.diag(np.diag(normal))

        accepted = False
        small_change = False
        while not (accepted or small_change):
            if damping > MAX_DAMPING:
                stop_reason = StopReason.DAMPING_LIMIT
                break
            try:
                step = np.linalg.solve(normal + damping * scaling, -grad)
            except np.linalg.LinAlgError:
                damping *= opts.damping_up
                continue
            if not np.all(np.isfinite(step)):
                damping *= opts.damping_up
                continue

            trial = x + step
            try:
                trial_res = _evaluate(residuals, trial)
            except RicefitError:
                damping *= opts.damping_up
                continue
            trial_cost = 0.5 * float(trial_res @ trial_res)
            small_change = abs(cost - trial_cost) / reference_cost < opts.cost_rel_tol

            if trial_cost < cost:
                x, res, cost = trial, trial_res, trial_cost
                history.append(cost)
                damping /= opts.damping_down
                accepted = True
            else:
                damping *= opts.damping_up

        logger.debug(
            "lm_iteration",
            extra={
                "iteration": iterations,
                "cost": cost,
                "damping": damping,
                "accepted": accepted,
            },
        )
        if stop_reason == StopReason.DAMPING_LIMIT:
            break
        if small_change or cost == 0.0:
            stop_reason = StopReason.COST_TOLERANCE
            break
        jac = forward_jacobian(residuals, x, res, opts.fd_rel_step)

    return LmResult(
        x=x,
        cost=cost,
        iterations=iterations,
        converged=stop_reason in StopReason.converging(),
        stop_reason=stop_reason,
        cost_history=tuple(history),
    )
