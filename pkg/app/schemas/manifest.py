from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field

from app.schemas.system import SystemConfig


class EmittedFile(BaseModel):
    path: str
    sha256: str


class RunManifest(BaseModel):
    """Everything needed to reproduce a run; written as JSON beside its outputs."""

    command: str
    """analytic, simulate, validate, sweep, figure or diversity."""

    config_path: Optional[str] = None
    config: SystemConfig
    output_dir: str
    seed: int = 0
    trials: int = 0
    chunk_size: int = 100_000
    workers: int = 1
    snr_db: list[float] = Field(default_factory=list)
    modes: list[str] = Field(default_factory=list)
    options: dict[str, Any] = Field(default_factory=dict)
    """Command-specific arguments (figure number, sweep axis, tolerance, ...)."""

    files: list[EmittedFile] = Field(default_factory=list)
