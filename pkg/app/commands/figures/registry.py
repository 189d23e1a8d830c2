from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Type

from app.commands.figures.figure_preset import FigurePreset
from app.commands.figures.presets import (
    FrequencyFactorFigure,
    PowerSplitFigure,
    RadiusPathLossFigure,
    ResidualInterferenceFigure,
    SubcarrierCountFigure,
    TargetRateFigure,
    ThroughputFigure,
    UnequalRatesFigure,
)
from app.exceptions.usage_error import UsageError
from app.schemas.system import SystemConfig


@dataclass(frozen=True)
class FigureConfig:
    """Metadata for a registered figure preset (built from the preset class)."""

    number: int
    title: str
    metric: str


def _config_from_class(klass: Type[FigurePreset]) -> FigureConfig:
    return FigureConfig(
        number=klass.figure_number,
        title=klass.title,
        metric=klass.metric,
    )


# Register presets here (figure number -> preset class)
_FIGURES: Dict[int, Type[FigurePreset]] = {
    2: ResidualInterferenceFigure,
    3: UnequalRatesFigure,
    4: SubcarrierCountFigure,
    5: RadiusPathLossFigure,
    6: TargetRateFigure,
    7: FrequencyFactorFigure,
    8: PowerSplitFigure,
    9: ThroughputFigure,
}


def get_figure(number: int, base: SystemConfig) -> FigurePreset:
    """Return the preset for ``number`` built over the resolved configuration."""
    klass = _FIGURES.get(number)
    if not klass:
        raise UsageError(
            f"Unsupported figure: {number} (available: {sorted(_FIGURES)})"
        )
    return klass(base)


def list_figures() -> Dict[int, FigureConfig]:
    return {number: _config_from_class(klass) for number, klass in _FIGURES.items()}
