from __future__ import annotations

import logging
from pathlib import Path

from app.commands.figures.registry import get_figure, list_figures
from app.exceptions.handlers import ExitCode
from app.exceptions.usage_error import UsageError
from app.schemas.manifest import RunManifest
from app.schemas.sweep import SweepResult
from app.services.experiment_service import run_sweep
from app.utils.output import emit_outputs, finish_run

logger = logging.getLogger(__name__)


class FigureCommand:
    """Run every curve family of a figure preset into one CSV."""

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def execute(self) -> int:
        manifest = self.manifest
        if manifest.options.get("list"):
            return self.list_presets()

        number = manifest.options.get("figure")
        if number is None:
            raise UsageError("figure needs a figure number")

        preset = get_figure(int(number), manifest.config)
        grid = manifest.snr_db if manifest.options.get("snr_grid_explicit") else None
        logger.info(f"Figure {preset.figure_number}: {preset.title}")

        result: SweepResult | None = None
        for cfg, spec in preset.curves(grid, manifest.trials, manifest.seed):
            part = run_sweep(
                cfg, spec, chunk_size=manifest.chunk_size, workers=manifest.workers
            )
            result = part if result is None else result.merged(part)

        files = emit_outputs(
            result, Path(manifest.output_dir), f"figure_{preset.figure_number}"
        )
        finish_run(manifest, files)
        return ExitCode.OK

    def list_presets(self) -> int:
        for number, config in sorted(list_figures().items()):
            print(f"{number}  {config.metric:<10}  {config.title}")
        return ExitCode.OK
