"""Handler d'exceptions des commandes de gestion.

Intercepte toute exception remontant d'une commande pour :
  - Logger le détail de l'erreur en JSON structuré
  - Traduire l'exception en ``CommandError`` avec le bon code de sortie
"""

import logging
import traceback

from django.core.management.base import CommandError

from .exceptions import EXIT_NUMERICAL, EXIT_USAGE, RicefitError

logger = logging.getLogger("apps.core.exceptions")


def command_exception_handler(exc: Exception, context: dict) -> CommandError:
    """Logger l'exception et la convertir en CommandError (code 2 ou 3)."""
    log_extra = {
        "run_id": context.get("run_id"),
        "command": context.get("command", "unknown"),
        "exception_type": type(exc).__name__,
        "error_detail": str(exc),
    }

    if isinstance(exc, CommandError):
        # Erreurs d'usage levées par argparse ou par la commande elle-même
        returncode = exc.returncode if exc.returncode != 1 else EXIT_USAGE
        logger.warning(
            "command_usage_error", extra={**log_extra, "exit_code": returncode}
        )
        return CommandError(str(exc), returncode=returncode)

    if isinstance(exc, RicefitError):
        if exc.exit_code == EXIT_USAGE:
            logger.warning(
                "command_error_usage", extra={**log_extra, "exit_code": exc.exit_code}
            )
        else:
            logger.error(
                "command_error_numerical",
                extra={**log_extra, "exit_code": exc.exit_code},
            )
        return CommandError(str(exc), returncode=exc.exit_code)

    if isinstance(exc, OSError):
        # Chemin de sortie illisible ou non inscriptible
        logger.warning(
            "command_io_error", extra={**log_extra, "exit_code": EXIT_USAGE}
        )
        return CommandError(str(exc), returncode=EXIT_USAGE)

    # Exception non gérée → échec numérique
    logger.error(
        "command_unhandled_exception",
        extra={
            **log_extra,
            "exit_code": EXIT_NUMERICAL,
            "traceback": traceback.format_exc(),
        },
    )
    return CommandError(f"{type(exc).__name__}: {exc}", returncode=EXIT_NUMERICAL)
