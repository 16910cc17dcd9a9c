"""Quadrature numérique partagée par les modules rician et censored.

Deux outils :
  - ``adaptive_integrate`` : Gauss–Kronrod adaptatif (QUADPACK via scipy),
    pour les intégrales scalaires (normalisation, moments, CDF ponctuelle).
  - ``PanelQuadrature`` : Gauss–Legendre composite sur panneaux fixes, dont
    les masses cumulées sont calculées une seule fois ; chaque évaluation de
    la CDF n'ajoute qu'une intégrale partielle sur un panneau. C'est le cache
    utilisé pendant l'ajustement, où la CDF est évaluée en des milliers de
    points à chaque itération.
"""

from collections.abc import Callable, Iterable
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

# ─── Constants ───────────────────────────────────────────────────────

QUAD_ABS_TOL: float = 1e-9
QUAD_REL_TOL: float = 1e-10
QUAD_LIMIT: int = 200  # subdivisions max (profondeur de bissection ~50)

PANEL_COUNT: int = 128
PANEL_ORDER: int = 16
# Nombre de points évalués par bloc (borne la mémoire : bloc x ordre)
EVAL_CHUNK: int = 65536

Density = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@lru_cache(maxsize=8)
def gauss_legendre(order: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Nœuds et poids de Gauss-Legendre sur [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def adaptive_integrate(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    points: Iterable[float] = (),
    abs_tol: float = QUAD_ABS_TOL,
) -> float:
    """Intégrer ``func`` sur [lower, upper] par Gauss–Kronrod adaptatif.

    ``points`` signale les abscisses délicates (pic, discontinuité) ;
    seules celles strictement intérieures à l'intervalle sont transmises.
    """
    if upper <= lower:
        return 0.0
    inner = sorted({p for p in points if lower < p < upper})
    value, _ = integrate.quad(
        func,
        lower,
        upper,
        epsabs=abs_tol,
        epsrel=QUAD_REL_TOL,
        limit=QUAD_LIMIT,
        points=inner or None,
    )
    return float(value)


def integrate_sorted_grid(
    func: Callable[[float], float],
    grid: NDArray[np.float64],
    start: float,
    points: Iterable[float] = (),
) -> NDArray[np.float64]:
    """Intégrales cumulées de ``start`` à chaque point d'une grille triée.

    Somme de morceaux d'intégrande positive : le résultat est croissant
    par construction.
    """
    breaks = list(points)
    edges = np.concatenate(([start], np.maximum(grid, start)))
    pieces = np.array(
        [
            adaptive_integrate(func, lo, hi, points=breaks)
            for lo, hi in zip(edges[:-1], edges[1:], strict=True)
        ]
    )
    return np.cumsum(np.maximum(pieces, 0.0))


class PanelQuadrature:
    """Intégrale cumulée d'une densité vectorisée sur [lower, upper].

    L'intervalle est découpé en ``n_panels`` panneaux égaux, complétés par
    les ``breakpoints`` (discontinuités connues), chacun intégré par
    Gauss–Legendre d'ordre ``order``. Les masses cumulées sont gardées en
    cache ; ``cumulative(x)`` est vectorisée.
    """

    def __init__(
        self,
        density: Density,
        lower: float,
        upper: float,
        breakpoints: Iterable[float] = (),
        n_panels: int = PANEL_COUNT,
        order: int = PANEL_ORDER,
    ) -> None:
        self.density = density
        self.lower = float(lower)
        self.upper = float(upper)
        self.order = order
        regular = np.linspace(self.lower, self.upper, n_panels + 1)
        extra = [b for b in breakpoints if self.lower < b < self.upper]
        self.edges = np.unique(np.concatenate((regular, extra)))
        panel_mass = self._integrate(self.edges[:-1], self.edges[1:])
        self.cumulative_mass = np.concatenate(([0.0], np.cumsum(panel_mass)))

    @property
    def total(self) -> float:
        """Masse totale sur [lower, upper]."""
        return float(self.cumulative_mass[-1])

    def cumulative(self, x: ArrayLike) -> NDArray[np.float64]:
        """∫_lower^x density, vectorisé ; 0 avant lower, total après upper."""
        x = np.clip(np.asarray(x, dtype=float), self.lower, self.upper)
        flat = x.ravel()
        out = np.empty_like(flat)
        for start in range(0, flat.size, EVAL_CHUNK):
            chunk = flat[start : start + EVAL_CHUNK]
            idx = np.searchsorted(self.edges, chunk, side="right") - 1
            idx = np.clip(idx, 0, self.edges.size - 2)
            left = self.edges[idx]
            out[start : start + EVAL_CHUNK] = self.cumulative_mass[
                idx
            ] + self._integrate(left, chunk)
        return out.reshape(x.shape)

    def _integrate(
        self, lo: NDArray[np.float64], hi: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        nodes, weights = gauss_legendre(self.order)
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        abscissae = mid[:, None] + half[:, None] * nodes[None, :]
        values = self.density(abscissae)
        return half * (values @ weights)
