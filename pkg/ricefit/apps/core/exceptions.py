"""Hiérarchie d'exceptions de ricefit.

Chaque exception porte le code de sortie que la CLI renvoie quand elle
remonte jusqu'à une commande de gestion :
  - 2 : erreur d'usage, de configuration ou de données
  - 3 : échec numérique
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class RicefitError(Exception):
    """Base de toutes les erreurs métier de ricefit."""

    exit_code: int = EXIT_NUMERICAL


class DomainError(RicefitError, ValueError):
    """Argument hors du domaine de définition d'une opération."""

    exit_code = EXIT_USAGE


class ConfigError(RicefitError):
    """Configuration JSON invalide ou incomplète."""

    exit_code = EXIT_USAGE


class DatasetParseError(RicefitError):
    """Erreur de lecture d'un CSV de mesures, localisée à une ligne."""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDatasetError(RicefitError):
    """Le jeu de mesures ne contient aucun enregistrement exploitable."""

    exit_code = EXIT_USAGE


class InfeasibleCalibrationError(DomainError):
    """Le taux de succès visé n'est pas atteignable (alpha < target_psr)."""


class FullyCensoredError(RicefitError):
    """Toute la masse du modèle est censurée (constante de normalisation ~ 0)."""


class FitInitializationError(RicefitError):
    """Le point de départ de l'ajustement est inexploitable."""


class NumericalError(RicefitError):
    """Résidus non finis ou autre échec numérique."""
