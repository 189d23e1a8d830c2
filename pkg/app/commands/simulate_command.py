from __future__ import annotations

from app.commands.analytic_command import AnalyticCommand
from app.exceptions.usage_error import UsageError


class SimulateCommand(AnalyticCommand):
    """Analytic values plus Monte Carlo estimates drawn from a shared stream per SNR."""

    stem = "simulate"

    def trials(self) -> int:
        if self.manifest.trials < 1:
            raise UsageError("simulate needs --trials of at least 1")
        return self.manifest.trials
