from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict

from app.schemas.system import SystemConfig


class ValidationPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    snr_db: float
    mode: str
    analytic: float
    mc_estimate: float
    mc_stderr: float
    tolerance: float
    """max(3 * stderr, rel_tol * analytic)."""

    passed: bool
    counted: bool
    """Whether the point takes part in the aggregate verdict (analytic >= min_probability)."""

    mc_same_draw_union: Optional[float] = None
    """Pair modes: outage of either user on the same draw, reported but never compared."""


class ValidationReport(BaseModel):
    """Analytic-versus-simulation comparison over an SNR grid."""

    passed: bool
    trials: int
    seed: int
    rel_tol: float
    min_probability: float
    config: SystemConfig
    simulated_config: SystemConfig
    points: list[ValidationPoint]

    @property
    def failures(self) -> list[ValidationPoint]:
        return [p for p in self.points if p.counted and not p.passed]
