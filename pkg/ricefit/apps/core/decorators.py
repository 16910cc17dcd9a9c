"""Décorateurs pour les commandes de gestion."""

import functools
import logging
from pathlib import Path

from .exception_handler import command_exception_handler
from .run_logging import structured_run

logger = logging.getLogger("apps.core.commands")


def handle_command_errors(command: str):
    """Décorateur pour ``BaseCommand.handle``.

    Journalise l'exécution, convertit les exceptions en ``CommandError``
    avec le code de sortie approprié et supprime les fichiers partiellement
    écrits (``self.partial_outputs``) en cas d'échec.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(self, *args, **kwargs):
            self.partial_outputs = []
            with structured_run(command) as ctx:
                self.run_context = ctx
                try:
                    return func(self, *args, **kwargs)
                except Exception as exc:
                    error = command_exception_handler(exc, ctx.as_dict())
                    ctx.exit_code = error.returncode
                    _remove_partial_outputs(self.partial_outputs)
                    raise error from exc

        return wrapper

    return decorator


def _remove_partial_outputs(paths: list[Path]) -> None:
    for path in paths:
        try:
            Path(path).unlink(missing_ok=True)
        except OSError as exc:
            logger.warning(
                "partial_output_not_removed",
                extra={"path": str(path), "error": str(exc)},
            )
