"""Tabule la fonction de biais w(rss) de la configuration calibrée.

Usage: python manage.py bias_curve [--config run.json] --rss-min -10 --rss-max 20
       --step 0.5 --output w.csv
"""

from pathlib import Path

import numpy as np
from django.core.management.base import BaseCommand

from apps.channel.bias import bias_w, ebn0_db
from apps.core.decorators import handle_command_errors
from apps.core.exceptions import ConfigError
from apps.reports.services import FLOAT_FORMAT, load_run_config

# Tolérance d'inclusion de la borne haute de la grille
GRID_EPS = 1e-9


def rss_grid(rss_min: float, rss_max: float, step: float) -> np.ndarray:
    """Grille rss_min + i·step incluant rss_max quand il tombe sur la grille."""
    if not step > 0:
        raise ConfigError(f"step must be > 0, got {step}")
    if rss_max < rss_min:
        raise ConfigError(f"rss-max ({rss_max}) is below rss-min ({rss_min})")
    count = int(np.floor((rss_max - rss_min) / step + GRID_EPS)) + 1
    return rss_min + step * np.arange(count)


class Command(BaseCommand):
    """Commande de tabulation de la courbe de biais."""

    help = "Write the calibrated bias curve rss_db,w,ebn0_db as CSV"

    def add_arguments(self, parser):
        """Options de grille (bornes et pas en dB)."""
        parser.add_argument("--config", type=Path, default=None, help="JSON run config")
        parser.add_argument(
            "--rss-min", type=float, default=None, help="default S - 10 dB"
        )
        parser.add_argument(
            "--rss-max", type=float, default=None, help="default S + 20 dB"
        )
        parser.add_argument("--step", type=float, default=0.5)
        parser.add_argument("--output", required=True, type=Path, help="CSV path")

    @handle_command_errors("bias_curve")
    def handle(self, *args, **options):
        """Écrit la courbe w(rss) sur la grille demandée."""
        cfg = load_run_config(options["config"])
        s_dbm = cfg.calibration.sensitivity_dbm
        rss_min = options["rss_min"] if options["rss_min"] is not None else s_dbm - 10.0
        rss_max = options["rss_max"] if options["rss_max"] is not None else s_dbm + 20.0
        grid = rss_grid(rss_min, rss_max, options["step"])

        w = np.atleast_1d(bias_w(grid, cfg.link_budget, cfg.packet))
        snr = np.atleast_1d(ebn0_db(grid, cfg.link_budget))

        output: Path = options["output"]
        self.partial_outputs.append(output)
        with output.open("w", encoding="utf-8", newline="\n") as stream:
            stream.write(
                f"# calibration: rss_db={FLOAT_FORMAT.format(s_dbm)} "
                f"w={FLOAT_FORMAT.format(cfg.calibration.target_psr)} "
                f"payload_bytes={cfg.calibration.calib_payload_bytes}\n"
            )
            stream.write("rss_db,w,ebn0_db\n")
            for row in zip(grid, w, snr, strict=True):
                cells = (FLOAT_FORMAT.format(float(v)) for v in row)
                stream.write(",".join(cells) + "\n")

        self.stdout.write(self.style.SUCCESS(f"{grid.size} rows written to {output}"))
