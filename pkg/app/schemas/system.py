"""Network configuration, derived thresholds and evaluation modes."""

from __future__ import annotations

import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, model_validator
from pydantic_core import PydanticCustomError

from app.constants.noma import (
    MAX_USERS,
    ConfigErrorCode,
    Formulation,
    SicMode,
    Target,
    ThroughputPairing,
)

_SPLIT_TOLERANCE = 1e-9


class SystemConfig(BaseModel):
    """Immutable description of one NOMA cell and the user pair under study."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    num_users: int
    """Number of users M dropped in the disk."""

    num_subcarriers: int
    """Number of subcarriers K spanned by each user's codeword; K=1 is power-domain NOMA."""

    m: int
    """Rank of the far (weaker) paired user, 1-based in ascending gain order."""

    n: int
    """Rank of the near (stronger) paired user, m < n <= M."""

    a_m: float
    """Power share of the m-th user."""

    a_n: float
    """Power share of the n-th user; a_m + a_n = 1 and a_m > a_n."""

    rate_m: float
    """Target rate of the m-th user in bits per channel use."""

    rate_n: float
    """Target rate of the n-th user in bits per channel use."""

    alpha: float
    """Path-loss exponent (>= 2)."""

    eta: float = 1.0
    """Frequency dependent factor of the bounded path-loss model."""

    radius: float
    """User-zone disk radius in meters."""

    omega_i_total: float = 0.0
    """Total residual-interference power E{||h_I||^2} across all K subcarriers (linear)."""

    chebyshev_nodes: int = 15
    """Gauss-Chebyshev node count for the disk integral."""

    semi_infinite_nodes: int = 64
    """Node count of the exponential-weight rule for the residual-interference integrals."""

    throughput_pairing: Literal["as_printed", "conventional"] = (
        ThroughputPairing.AS_PRINTED
    )
    """Rate/probability pairing used by the delay-limited throughput."""

    @model_validator(mode="before")
    @classmethod
    def convert_db_fields(cls, values: Any) -> Any:
        """Convert any ``<field>_db`` input into the linear ``<field>`` once."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        for key in [k for k in values if isinstance(k, str) and k.endswith("_db")]:
            base = key[: -len("_db")]
            if base not in cls.model_fields:
                continue
            db_value = values.pop(key)
            if base in values:
                raise PydanticCustomError(
                    ConfigErrorCode.INVALID,
                    "both {base} and {key} were given",
                    {"base": base, "key": key},
                )
            values[base] = 10 ** (float(db_value) / 10)
        return values

    @model_validator(mode="after")
    def check_invariants(self) -> "SystemConfig":
        positive = {
            "num_users": self.num_users,
            "num_subcarriers": self.num_subcarriers,
            "a_m": self.a_m,
            "a_n": self.a_n,
            "rate_m": self.rate_m,
            "rate_n": self.rate_n,
            "eta": self.eta,
            "radius": self.radius,
            "chebyshev_nodes": self.chebyshev_nodes,
            "semi_infinite_nodes": self.semi_infinite_nodes,
        }
        for name, value in positive.items():
            if not value > 0:
                raise PydanticCustomError(
                    ConfigErrorCode.NEGATIVE,
                    "{name} must be positive, got {value}",
                    {"name": name, "value": value},
                )
        if self.alpha < 2:
            raise PydanticCustomError(
                ConfigErrorCode.NEGATIVE,
                "alpha must be at least 2, got {value}",
                {"value": self.alpha},
            )
        if self.omega_i_total < 0:
            raise PydanticCustomError(
                ConfigErrorCode.NEGATIVE,
                "omega_i_total must be non-negative, got {value}",
                {"value": self.omega_i_total},
            )

        if not 1 <= self.m < self.n <= self.num_users:
            raise PydanticCustomError(
                ConfigErrorCode.ORDER,
                "ranks must satisfy 1 <= m < n <= M, got m={m}, n={n}, M={M}",
                {"m": self.m, "n": self.n, "M": self.num_users},
            )
        if self.num_users > MAX_USERS:
            raise PydanticCustomError(
                ConfigErrorCode.ORDER,
                "at most {limit} users are supported, got {M}",
                {"limit": MAX_USERS, "M": self.num_users},
            )

        if not math.isclose(self.a_m + self.a_n, 1.0, abs_tol=_SPLIT_TOLERANCE):
            raise PydanticCustomError(
                ConfigErrorCode.POWER_SPLIT,
                "a_m + a_n must equal 1, got {total}",
                {"total": self.a_m + self.a_n},
            )
        if not self.a_m > self.a_n:
            raise PydanticCustomError(
                ConfigErrorCode.POWER_SPLIT,
                "a_m must exceed a_n, got a_m={a_m}, a_n={a_n}",
                {"a_m": self.a_m, "a_n": self.a_n},
            )
        return self

    @property
    def is_power_domain(self) -> bool:
        return self.num_subcarriers == 1

    @property
    def omega_i(self) -> float:
        """Per-subcarrier residual-interference variance."""
        return self.omega_i_total / self.num_subcarriers

    @property
    def eps_m(self) -> float:
        return 2.0**self.rate_m - 1.0

    @property
    def eps_n(self) -> float:
        return 2.0**self.rate_n - 1.0


class DerivedThresholds(BaseModel):
    """Outage thresholds on the ranked effective gain at one transmit SNR.

    Infeasible thresholds are stored as ``math.inf`` together with a ``False``
    feasibility flag; a CDF evaluated at infinity is one.
    """

    model_config = ConfigDict(frozen=True)

    rho: float
    eps_m: float
    eps_n: float
    tau: float
    tau_feasible: bool
    beta: float
    vartheta: float
    upsilon: float
    upsilon_feasible: bool
    zeta: float


class EvalMode(BaseModel):
    """Which outage probability to evaluate and under which receiver assumptions."""

    model_config = ConfigDict(frozen=True)

    sic: Literal["psic", "ipsic"] = SicMode.PERFECT
    formulation: Literal["exf", "alf"] = Formulation.EXISTING
    target: Literal["m", "n", "pair"] = Target.USER_N

    @model_validator(mode="before")
    @classmethod
    def normalize_far_user(cls, values: Any) -> Any:
        # The m-th user decodes directly: neither SIC nor formulation applies.
        if isinstance(values, dict) and values.get("target") == Target.USER_M:
            values = {
                **values,
                "sic": SicMode.PERFECT,
                "formulation": Formulation.EXISTING,
            }
        return values

    @property
    def label(self) -> str:
        if self.target == Target.USER_M:
            return Target.USER_M
        return f"{self.target}-{self.sic}-{self.formulation}"

    @classmethod
    def parse(cls, text: str) -> "EvalMode":
        """Parse ``m``, ``n-ipsic-alf``, ``pair:psic:exf`` (parts in any order)."""
        parts = [p for p in text.strip().lower().replace(":", "-").split("-") if p]
        values: dict[str, str] = {}
        for part in parts:
            if part in Target.ALL:
                key = "target"
            elif part in SicMode.ALL:
                key = "sic"
            elif part in Formulation.ALL:
                key = "formulation"
            else:
                raise ValueError(f"unknown mode component {part!r} in {text!r}")
            if key in values:
                raise ValueError(f"duplicate {key} in mode {text!r}")
            values[key] = part
        if "target" not in values:
            raise ValueError(f"mode {text!r} names no target (m, n or pair)")
        return cls(**values)


def all_modes() -> list[EvalMode]:
    """The m-th user plus every (sic, formulation) combination for n and pair."""
    modes = [EvalMode(target=Target.USER_M)]
    for target in (Target.USER_N, Target.PAIR):
        for sic in SicMode.ALL:
            for formulation in Formulation.ALL:
                modes.append(EvalMode(target=target, sic=sic, formulation=formulation))
    return modes
