from __future__ import annotations

import logging
from pathlib import Path

from app.exceptions.handlers import ExitCode
from app.schemas.manifest import RunManifest
from app.schemas.sweep import SweepResult, SweepSpec
from app.schemas.system import EvalMode, all_modes
from app.services.experiment_service import run_sweep
from app.utils.output import emit_outputs, finish_run

logger = logging.getLogger(__name__)


def resolve_modes(manifest: RunManifest) -> tuple[EvalMode, ...]:
    """Modes named in the manifest, or every mode when none were requested."""
    if not manifest.modes:
        return tuple(all_modes())
    return tuple(dict.fromkeys(EvalMode.parse(label) for label in manifest.modes))


class AnalyticCommand:
    """Closed-form and asymptotic COP over the manifest's SNR grid."""

    stem = "analytic"

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def trials(self) -> int:
        return 0

    def execute(self) -> int:
        manifest = self.manifest
        spec = SweepSpec(
            grid=tuple(manifest.snr_db),
            modes=resolve_modes(manifest),
            trials=self.trials(),
            seed=manifest.seed,
        )
        result = self.run(spec)
        files = emit_outputs(result, Path(manifest.output_dir), self.stem)
        finish_run(manifest, files)
        return ExitCode.OK

    def run(self, spec: SweepSpec) -> SweepResult:
        return run_sweep(
            self.manifest.config,
            spec,
            chunk_size=self.manifest.chunk_size,
            workers=self.manifest.workers,
        )
