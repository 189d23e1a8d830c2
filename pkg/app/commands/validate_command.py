from __future__ import annotations

import logging
from pathlib import Path

from app.commands.analytic_command import resolve_modes
from app.exceptions.handlers import ExitCode
from app.schemas.manifest import RunManifest
from app.services.experiment_service import validate
from app.utils.output import emit_validation, finish_run

logger = logging.getLogger(__name__)


class ValidateCommand:
    """Analytic-versus-simulation check; exits non-zero when any counted point fails."""

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def execute(self) -> int:
        manifest = self.manifest
        report = validate(
            manifest.config,
            resolve_modes(manifest),
            manifest.snr_db,
            manifest.trials,
            manifest.seed,
            rel_tol=manifest.options.get("rel_tol"),
            chunk_size=manifest.chunk_size,
            workers=manifest.workers,
        )
        files = emit_validation(report, Path(manifest.output_dir), "validate")
        finish_run(manifest, files)

        for point in report.failures:
            logger.error(
                f"FAIL {point.mode} at {point.snr_db:g} dB: |{point.analytic:.6g} - "
                f"{point.mc_estimate:.6g}| > {point.tolerance:.3g}"
            )
        return ExitCode.OK if report.passed else ExitCode.VALIDATION_FAILED
