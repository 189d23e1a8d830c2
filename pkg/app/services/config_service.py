"""Configuration validation and the SNR-dependent outage thresholds."""

from __future__ import annotations

import logging
import math
from typing import Any, Mapping

from pydantic import ValidationError

from app.constants.noma import ConfigErrorCode
from app.exceptions.config_validation_error import ConfigValidationError
from app.schemas.system import DerivedThresholds, SystemConfig

logger = logging.getLogger(__name__)

_KNOWN_CODES = {
    ConfigErrorCode.POWER_SPLIT,
    ConfigErrorCode.ORDER,
    ConfigErrorCode.NEGATIVE,
    ConfigErrorCode.INVALID,
}


def validate_config(raw: Mapping[str, Any] | SystemConfig) -> SystemConfig:
    """Build a SystemConfig, raising ConfigValidationError with the violated invariant."""
    if isinstance(raw, SystemConfig):
        return raw
    try:
        return SystemConfig.model_validate(dict(raw))
    except ValidationError as e:
        error = e.errors()[0]
        code = error["type"] if error["type"] in _KNOWN_CODES else ConfigErrorCode.INVALID
        location = ".".join(str(part) for part in error.get("loc", ()))
        message = error["msg"] if not location else f"{location}: {error['msg']}"
        raise ConfigValidationError(code, message) from e


def with_updates(cfg: SystemConfig, **changes: Any) -> SystemConfig:
    """Return a re-validated copy of ``cfg`` with ``changes`` applied."""
    return validate_config({**cfg.model_dump(), **changes})


def derive_thresholds(cfg: SystemConfig, rho: float) -> DerivedThresholds:
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")

    eps_m = cfg.eps_m
    eps_n = cfg.eps_n

    m_margin = cfg.a_m - eps_m * cfg.a_n
    tau_feasible = m_margin > 0
    tau = eps_m / (rho * m_margin) if tau_feasible else math.inf

    n_margin = cfg.a_n - eps_n * cfg.a_m
    upsilon_feasible = n_margin > 0
    upsilon = eps_n / (rho * n_margin) if upsilon_feasible else math.inf

    thresholds = DerivedThresholds(
        rho=rho,
        eps_m=eps_m,
        eps_n=eps_n,
        tau=tau,
        tau_feasible=tau_feasible,
        beta=eps_n / (rho * cfg.a_n),
        vartheta=eps_n / cfg.a_n,
        upsilon=upsilon,
        upsilon_feasible=upsilon_feasible,
        zeta=min(tau, upsilon),
    )
    logger.debug(f"Thresholds at rho={rho:g}: {thresholds}")
    return thresholds
