from __future__ import annotations

import logging
from pathlib import Path

from app.commands.analytic_command import resolve_modes
from app.constants.noma import MIN_FIT_PROBABILITY
from app.exceptions.handlers import ExitCode
from app.exceptions.usage_error import UsageError
from app.schemas.cop import DiversitySummary
from app.schemas.manifest import RunManifest
from app.services.experiment_service import diversity_report
from app.utils.output import emit_diversity, finish_run

logger = logging.getLogger(__name__)


class DiversityCommand:
    """Fitted high-SNR slopes of the exact curves next to the predicted orders."""

    stem = "diversity"

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def execute(self) -> int:
        manifest = self.manifest
        lo, hi = manifest.options["window_db"]
        min_probability = manifest.options.get("min_probability", MIN_FIT_PROBABILITY)

        reports = []
        for mode in resolve_modes(manifest):
            try:
                report = diversity_report(
                    manifest.config,
                    mode,
                    manifest.snr_db,
                    (lo, hi),
                    min_probability=min_probability,
                )
            except UsageError as e:
                logger.warning(f"{mode.label}: {e}; skipped")
                continue
            logger.info(
                f"{mode.label}: slope {report.slope:.3f}, "
                f"expected {report.expected_order}"
            )
            reports.append(report)

        if not reports:
            raise UsageError(f"no mode has enough points in [{lo:g}, {hi:g}] dB to fit")

        summary = DiversitySummary(
            config=manifest.config,
            window_db=(lo, hi),
            min_probability=min_probability,
            reports=reports,
        )
        files = emit_diversity(summary, Path(manifest.output_dir), self.stem)
        finish_run(manifest, files)
        return ExitCode.OK
