"""Ajuste les modèles naïf et/ou censuré à un jeu de mesures RSS.

Usage: python manage.py fit --input data.csv [--config run.json]
       [--mode naive|biased|both] --output report.json [--curves curves.csv]
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from django.core.management.base import BaseCommand

from apps.core.decorators import handle_command_errors
from apps.core.exceptions import ConfigError
from apps.fitting.enums import FitMode
from apps.fitting.services import FitResult, fit_amplitudes, rmse_reduction
from apps.measurements.csv_io import load_csv
from apps.measurements.services import filter_distance, to_amplitudes
from apps.reports.enums import FitSelection
from apps.reports.services import (
    align_reference,
    apply_scenario,
    build_report,
    fit_bias,
    format_results_table,
    load_run_config,
    write_curves,
    write_report,
)

MODES_FOR_SELECTION = {
    FitSelection.NAIVE: (FitMode.NAIVE,),
    FitSelection.BIASED: (FitMode.BIASED,),
    FitSelection.BOTH: (FitMode.NAIVE, FitMode.BIASED),
}


def curves_path_for(base: Path, mode: FitMode, n_modes: int) -> Path:
    """Chemin des courbes d'un mode ; avec deux modes, le naïf est suffixé."""
    if n_modes == 1 or mode == FitMode.BIASED:
        return base
    return base.with_name(f"{base.stem}_{mode}{base.suffix}")


class Command(BaseCommand):
    """Commande d'ajustement : filtre, normalise, ajuste et écrit le rapport."""

    help = "Fit naive and/or bias-aware Rician models to an RSS dataset"

    def add_arguments(self, parser):
        """Options : entrée CSV, configuration, mode et sorties."""
        parser.add_argument("--input", required=True, type=Path, help="CSV dataset")
        parser.add_argument("--config", type=Path, default=None, help="JSON run config")
        parser.add_argument(
            "--mode", choices=FitSelection.values, default=FitSelection.BOTH
        )
        parser.add_argument(
            "--output", required=True, type=Path, help="JSON report path"
        )
        parser.add_argument("--curves", type=Path, default=None, help="curves CSV path")
        parser.add_argument(
            "--parallel",
            action="store_true",
            help="run the naive and biased fits concurrently",
        )

    @handle_command_errors("fit")
    def handle(self, *args, **options):
        """Exécute le pipeline d'ajustement et écrit les sorties."""
        input_path: Path = options["input"]
        if not input_path.is_file():
            raise ConfigError(f"input file not found: {input_path}")
        cfg = load_run_config(options["config"])

        with input_path.open(encoding="utf-8") as stream:
            ds = load_csv(stream)
        ds = apply_scenario(align_reference(ds, cfg), cfg)
        ds = filter_distance(ds, *cfg.distance_window)
        amplitudes, amp_ref_dbm = to_amplitudes(ds)
        self.run_context.extra.update(ds.summary())

        modes = MODES_FOR_SELECTION[FitSelection(options["mode"])]

        def run(mode: FitMode) -> FitResult:
            return fit_amplitudes(
                amplitudes,
                amp_ref_dbm,
                fit_bias(mode, cfg),
                opts=cfg.lm_options,
                mode=mode,
                source_tag=str(ds.source_tag),
            )

        if options["parallel"] and len(modes) > 1:
            with ThreadPoolExecutor(max_workers=len(modes)) as pool:
                results = list(pool.map(run, modes))
        else:
            results = [run(mode) for mode in modes]

        reduction = None
        if len(results) == 2:
            reduction = rmse_reduction(results[0], results[1])
        report = build_report(results, cfg, ds, amp_ref_dbm, reduction)

        output: Path = options["output"]
        self.partial_outputs.append(output)
        with output.open("w", encoding="utf-8") as stream:
            write_report(report, stream)

        if options["curves"] is not None:
            for result in results:
                path = curves_path_for(options["curves"], result.mode, len(results))
                self.partial_outputs.append(path)
                with path.open("w", encoding="utf-8") as stream:
                    write_curves(
                        amplitudes,
                        result.params,
                        fit_bias(result.mode, cfg),
                        amp_ref_dbm,
                        stream,
                    )

        self.stdout.write(format_results_table(results, cfg))
        if reduction is not None:
            self.stdout.write(f"RMSE reduction: {100.0 * reduction:.1f} %")
        self.stdout.write(self.style.SUCCESS(f"Report written to {output}"))
