from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional, Sequence

from app.constants.noma import Formulation, SicMode, Target
from app.schemas.sweep import SweepSpec
from app.schemas.system import EvalMode, SystemConfig
from app.services.config_service import with_updates

DEFAULT_SNR_GRID_DB: tuple[float, ...] = tuple(float(x) for x in range(0, 65, 5))

# ---------------------------
# Figure Preset Interface
# ---------------------------


class FigurePreset(ABC):
    """A named bundle of curve families. Subclasses must set figure_number and title."""

    figure_number: int = 0
    title: str = ""
    metric: str = "cop"
    overrides: dict = {}
    """Caption values applied over the resolved configuration."""

    def __init__(self, base: SystemConfig):
        self.base = with_updates(base, **self.overrides) if self.overrides else base

    @abstractmethod
    def curves(
        self, grid: Optional[Sequence[float]], trials: int, seed: int
    ) -> list[tuple[SystemConfig, SweepSpec]]:
        """Return the (configuration, sweep) pairs that make up the figure."""
        raise NotImplementedError

    def variant(self, **changes) -> SystemConfig:
        return with_updates(self.base, **changes)

    @staticmethod
    def snr_grid(grid: Optional[Sequence[float]]) -> tuple[float, ...]:
        return tuple(grid) if grid else DEFAULT_SNR_GRID_DB


def user_m() -> EvalMode:
    return EvalMode(target=Target.USER_M)


def user_n(sic: str, formulation: str = Formulation.EXISTING) -> EvalMode:
    return EvalMode(target=Target.USER_N, sic=sic, formulation=formulation)


def all_user_n_modes(sic: str) -> tuple[EvalMode, ...]:
    return tuple(user_n(sic, formulation) for formulation in Formulation.ALL)


def perfect_and_imperfect_n() -> tuple[EvalMode, ...]:
    return (user_n(SicMode.PERFECT), user_n(SicMode.IMPERFECT))
