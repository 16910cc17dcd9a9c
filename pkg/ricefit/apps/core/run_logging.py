"""Logging structuré des exécutions de commandes.

Chaque exécution est journalisée avec run_id, command, status, exit_code
et duration_ms au format JSON, à la manière d'un log de requête HTTP.
"""

import logging
import time
import uuid
from collections.abc import Iterator
from contextlib import contextmanager

from .exceptions import EXIT_OK

logger = logging.getLogger("apps.core.runs")


class RunContext:
    """Contexte mutable d'une exécution, enrichi par la commande."""

    def __init__(self, command: str) -> None:
        self.run_id = str(uuid.uuid4())
        self.command = command
        self.exit_code = EXIT_OK
        self.extra: dict = {}

    def as_dict(self) -> dict:
        """Contexte sous forme de dict simple pour le handler d'exceptions."""
        return {"run_id": self.run_id, "command": self.command}


@contextmanager
def structured_run(command: str) -> Iterator[RunContext]:
    """Journaliser une exécution de commande (une ligne ``command_run``)."""
    ctx = RunContext(command)
    start = time.monotonic()
    try:
        yield ctx
    finally:
        duration_ms = round((time.monotonic() - start) * 1000, 1)
        extra = {
            "run_id": ctx.run_id,
            "command": command,
            "status": "success" if ctx.exit_code == EXIT_OK else "failed",
            "exit_code": ctx.exit_code,
            "duration_ms": duration_ms,
            **ctx.extra,
        }
        if ctx.exit_code >= 3:
            logger.error("command_run", extra=extra)
        elif ctx.exit_code:
            logger.warning("command_run", extra=extra)
        else:
            logger.info("command_run", extra=extra)
