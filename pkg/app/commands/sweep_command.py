from __future__ import annotations

import logging
from pathlib import Path

from pydantic import ValidationError

from app.commands.analytic_command import resolve_modes
from app.exceptions.handlers import ExitCode
from app.exceptions.usage_error import UsageError
from app.schemas.manifest import RunManifest
from app.schemas.sweep import SweepAxis, SweepSpec
from app.services.experiment_service import run_sweep
from app.utils.output import emit_outputs, finish_run

logger = logging.getLogger(__name__)


class SweepCommand:
    """A single-axis sweep (SNR, power split or target rate) of COP or throughput."""

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def execute(self) -> int:
        manifest = self.manifest
        options = manifest.options
        axis = options.get("axis", SweepAxis.SNR_DB)
        grid = manifest.snr_db if axis == SweepAxis.SNR_DB else options.get("grid")
        if not grid:
            raise UsageError(f"sweep over {axis} needs --grid")

        try:
            spec = SweepSpec(
                axis=axis,
                grid=tuple(grid),
                modes=resolve_modes(manifest),
                trials=manifest.trials,
                seed=manifest.seed,
                metric=options.get("metric", "cop"),
                snr_db=options.get("fixed_snr_db", 30.0),
            )
        except ValidationError as e:
            raise UsageError(f"invalid sweep: {e.errors()[0]['msg']}") from e

        result = run_sweep(
            manifest.config,
            spec,
            chunk_size=manifest.chunk_size,
            workers=manifest.workers,
        )
        stem = f"sweep_{spec.axis}_{spec.metric}"
        files = emit_outputs(result, Path(manifest.output_dir), stem)
        finish_run(manifest, files)
        return ExitCode.OK
