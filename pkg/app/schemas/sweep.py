from __future__ import annotations

from datetime import datetime
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.system import EvalMode, SystemConfig


class SweepAxis:
    SNR_DB = "snr_db"
    THETA = "theta"  # (a_n, a_m) = (theta, 1 - theta)
    RATE = "rate"  # R_m = R_n = value

    ALL = (SNR_DB, THETA, RATE)


class SweepMetric:
    COP = "cop"
    THROUGHPUT = "throughput"

    ALL = (COP, THROUGHPUT)


class SweepSpec(BaseModel):
    """One curve family: a grid on a single axis and the modes evaluated at each point."""

    model_config = ConfigDict(frozen=True)

    axis: Literal["snr_db", "theta", "rate"] = SweepAxis.SNR_DB
    grid: tuple[float, ...]
    modes: tuple[EvalMode, ...]
    trials: int = Field(default=0, ge=0)
    """Monte Carlo trials per point; 0 evaluates the analytic expressions only."""

    seed: int = 0
    metric: Literal["cop", "throughput"] = SweepMetric.COP
    snr_db: float = 30.0
    """Transmit SNR used when the axis is not snr_db."""

    series: str = ""
    """Optional tag appended to each mode label, e.g. the RI level of a curve family."""

    @model_validator(mode="after")
    def check_grid(self) -> "SweepSpec":
        if not self.grid:
            raise ValueError("grid must not be empty")
        if not self.modes:
            raise ValueError("at least one mode is required")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.axis == SweepAxis.THETA and not all(0.0 <= t <= 1.0 for t in self.grid):
            raise ValueError("theta grid must lie within [0, 1]")
        if self.axis == SweepAxis.RATE and not all(r > 0 for r in self.grid):
            raise ValueError("rate grid must be positive")
        return self


class CopPoint(BaseModel):
    """One (axis value, mode) row of a sweep."""

    model_config = ConfigDict(frozen=True)

    axis: float
    mode: str
    exact: float
    """COP, or throughput in BPCU when the sweep metric is throughput."""

    asymptotic: Optional[float] = None
    mc_estimate: Optional[float] = None
    mc_stderr: Optional[float] = None
    trials: int = 0
    feasible: bool = True
    flags: tuple[str, ...] = ()


class SweepProvenance(BaseModel):
    seed: int
    trials: int
    chunk_size: int
    started_at: datetime
    finished_at: datetime


class SweepResult(BaseModel):
    """Rows of a sweep plus what is needed to reproduce them."""

    axis: str
    metric: str
    rows: list[CopPoint]
    config: SystemConfig
    provenance: SweepProvenance

    def merged(self, other: "SweepResult") -> "SweepResult":
        """Concatenate the rows of two sweeps over the same axis."""
        if other.axis != self.axis or other.metric != self.metric:
            raise ValueError("cannot merge sweeps over different axes or metrics")
        provenance = self.provenance.model_copy(
            update={
                "trials": max(self.provenance.trials, other.provenance.trials),
                "finished_at": max(
                    self.provenance.finished_at, other.provenance.finished_at
                ),
            }
        )
        return self.model_copy(
            update={"rows": [*self.rows, *other.rows], "provenance": provenance}
        )
