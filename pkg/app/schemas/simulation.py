from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.system import EvalMode


@dataclass(frozen=True)
class ChannelRealization:
    """A batch of channel draws; the leading axis indexes trials.

    A single draw is a batch of one.
    """

    d: np.ndarray
    """User distances, shape (trials, M)."""

    h: np.ndarray
    """Complex small-scale gains, shape (trials, M, K)."""

    z_sorted: np.ndarray
    """Effective gains sorted ascending along the user axis, shape (trials, M)."""

    y_i: np.ndarray
    """Residual-interference power ||h_I||^2, shape (trials,)."""

    @property
    def trials(self) -> int:
        return self.z_sorted.shape[0]

    def rank(self, r: int) -> np.ndarray:
        """Effective gain of the user with 1-based ascending rank ``r``."""
        return self.z_sorted[:, r - 1]


@dataclass(frozen=True)
class SinrRecord:
    """Per-trial SINRs of the selected pair."""

    n_decodes_m: np.ndarray
    """n-th user decoding the m-th user's message."""

    n_after_sic: np.ndarray
    """n-th user decoding its own message after SIC (residual interference included)."""

    n_direct: np.ndarray
    """n-th user decoding its own message with the m-th user's signal as noise."""

    m_direct: np.ndarray
    """m-th user decoding its own message."""


@dataclass(frozen=True)
class OutageEvents:
    """Per-trial outage indicators."""

    outage_m: np.ndarray
    outage_n: np.ndarray
    outage_pair: np.ndarray


class OutageEstimate(BaseModel):
    """Monte Carlo estimate of one outage probability."""

    model_config = ConfigDict(frozen=True)

    p_hat: float = Field(ge=0.0, le=1.0)
    trials: int = Field(ge=1)
    seed: int
    mode: EvalMode

    stderr: float = Field(default=None, ge=0.0)
    """Standard error of ``p_hat``; the binomial value unless the estimator supplies one."""

    same_draw_union: Optional[float] = None
    """Pair modes only: fraction of trials in which either user was in outage.

    A diagnostic. The two users' outages are correlated through the shared
    draw, so this is not the quantity the closed-form pair COP describes.
    """

    @model_validator(mode="before")
    @classmethod
    def _binomial_stderr(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("stderr") is None:
            p = data["p_hat"]
            data = {**data, "stderr": math.sqrt(p * (1.0 - p) / data["trials"])}
        return data
