"""Génère un jeu de mesures synthétique à partir du bloc ``truth`` de la config.

Usage: python manage.py simulate --config run.json --n 1000 --seed 7 --output data.csv
"""

from pathlib import Path

from django.core.management.base import BaseCommand

from apps.channel.rician import RicianParams
from apps.core.decorators import handle_command_errors
from apps.core.exceptions import ConfigError
from apps.measurements.csv_io import write_csv
from apps.reports.services import load_run_config
from apps.synth.services import SynthConfig, generate

N_DEFAULT = 1000


class Command(BaseCommand):
    """Commande de simulation : Rice décalée + acceptation de Bernoulli."""

    help = "Generate a synthetic censored RSS dataset with known ground truth"

    def add_arguments(self, parser):
        """Options : configuration, taille, graine et fichier de sortie."""
        parser.add_argument(
            "--config", required=True, type=Path, help="JSON run config"
        )
        parser.add_argument("--n", type=int, default=N_DEFAULT, help="accepted samples")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--output", required=True, type=Path, help="CSV path")

    @handle_command_errors("simulate")
    def handle(self, *args, **options):
        """Génère le jeu à partir du bloc truth et l'écrit en CSV."""
        cfg = load_run_config(options["config"])
        if cfg.truth is None:
            raise ConfigError("config has no 'truth' block")
        truth = cfg.truth
        synth_cfg = SynthConfig(
            true_params=RicianParams.from_db(truth["k_db"], truth["r_s"], truth["r_0"]),
            lb=cfg.link_budget,
            pkt=cfg.packet,
            amp_ref_dbm=truth["amp_ref_dbm"],
            n_accepted=options["n"],
            seed=options["seed"],
            unbiased=truth["unbiased"],
            distance_m=truth["distance_m"],
            reference=cfg.reference,
        )
        result = generate(synth_cfg)
        self.run_context.extra.update(
            {"n_accepted": result.n_accepted, "acceptance_rate": result.acceptance_rate}
        )

        output: Path = options["output"]
        self.partial_outputs.append(output)
        with output.open("w", encoding="utf-8", newline="\n") as stream:
            write_csv(result.dataset, stream)

        self.stdout.write(f"acceptance_rate={result.acceptance_rate:.6f}")
        self.stdout.write(
            self.style.SUCCESS(f"{result.n_accepted} samples written to {output}")
        )
