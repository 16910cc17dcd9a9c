"""Enums for the fitting app."""

from django.db import models


class FitMode(models.TextChoices):
    """Modèle ajusté : Rice décalée seule, ou distribution censurée."""

    NAIVE = "naive", "Naive Rician fit"
    BIASED = "biased", "Bias-aware censored fit"


class StopReason(models.TextChoices):
    """Critère ayant arrêté l'itération LM."""

    COST_TOLERANCE = "cost_tolerance", "Relative cost change below tolerance"
    GRADIENT_TOLERANCE = "gradient_tolerance", "Gradient inf-norm below tolerance"
    MAX_ITERATIONS = "max_iterations", "Iteration budget exhausted"
    DAMPING_LIMIT = "damping_limit", "Damping grew past its limit"

    @classmethod
    def converging(cls) -> frozenset[str]:
        """Critères d'arrêt considérés comme une convergence."""
        return frozenset({cls.COST_TOLERANCE, cls.GRADIENT_TOLERANCE})
