from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.system import EvalMode, SystemConfig


class CopValue(BaseModel):
    """Connection outage probability of one mode at one transmit SNR."""

    model_config = ConfigDict(frozen=True)

    exact: float = Field(ge=0.0, le=1.0)
    """Closed-form value (Gauss-Chebyshev and semi-infinite quadrature)."""

    asymptotic: Optional[float] = None
    """High-SNR approximation, clamped to [0, 1]."""

    feasible: bool = True
    """False when a threshold the mode depends on is infeasible; exact is then 1."""

    mode: EvalMode
    rho: float
    flags: tuple[str, ...] = ()


class DiversityReport(BaseModel):
    """Fitted high-SNR slope of an outage curve."""

    model_config = ConfigDict(frozen=True)

    slope: float
    """-d log10(P) / d log10(rho) from ordinary least squares."""

    intercept: float
    expected_order: Optional[int] = None
    """Slope the analysis predicts for the fitted mode, when known."""

    fit_window_db: tuple[float, float]
    points_used: int
    mode: Optional[str] = None
    error_floor: Optional[float] = None
    """Terminal value of the curve when it flattened over its last decade."""


class DiversitySummary(BaseModel):
    """Slope fits of several modes over one SNR window."""

    config: SystemConfig
    window_db: tuple[float, float]
    min_probability: float
    reports: list[DiversityReport]
