"""Closed-form and high-SNR connection outage probabilities of a NOMA pair.

Every evaluator reduces to the CDF of a ranked effective gain, approximated with
Gauss-Chebyshev quadrature over the disk. Residual interference after imperfect
SIC enters through an expectation over its Erlang-distributed power, evaluated
with a fixed Laguerre rule. Infeasible thresholds are +inf, where every CDF is one.
"""

from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np
from scipy.special import comb, gammainc

from app.constants.noma import Flag, Formulation, SicMode, Target, ThroughputPairing
from app.numerics.distributions import order_stat_transform, unsorted_gain_cdf
from app.numerics.quadrature import (
    build_chebyshev_table,
    build_semi_inf_rule,
    integrate_semi_infinite,
)
from app.schemas.cop import CopValue
from app.schemas.system import DerivedThresholds, EvalMode, SystemConfig
from app.services.config_service import derive_thresholds

logger = logging.getLogger(__name__)

ArrayLike = float | np.ndarray


def _table(cfg: SystemConfig):
    return build_chebyshev_table(cfg.chebyshev_nodes, cfg.radius, cfg.alpha)


def sorted_gain_cdf(cfg: SystemConfig, z: ArrayLike, rank: int) -> ArrayLike:
    """CDF of the effective gain of the user with ascending rank ``rank``."""
    unsorted = unsorted_gain_cdf(z, cfg.num_subcarriers, _table(cfg), cfg.eta)
    return order_stat_transform(unsorted, rank, cfg.num_users)


def cdf_sorted_gain(cfg: SystemConfig, x: float, rank: int, rho: float) -> float:
    """CDF at ``x`` of the direct-decoding SINR rho Z a_m / (rho Z a_n + 1) of a ranked user.

    Returns one when ``x`` is at or above the SINR ceiling a_m / a_n.
    """
    if x <= 0:
        return 0.0
    margin = cfg.a_m - x * cfg.a_n
    if margin <= 0:
        return 1.0
    return float(sorted_gain_cdf(cfg, x / (rho * margin), rank))


def _ri_rule(cfg: SystemConfig):
    return build_semi_inf_rule(cfg.semi_infinite_nodes, cfg.num_subcarriers)


def _expect_over_ri(
    cfg: SystemConfig, g: Callable[[np.ndarray], np.ndarray], lower: float = 0.0
) -> float:
    """E[g(Y) 1{Y > lower}] for Y ~ Gamma(K, omega_i)."""
    shape = cfg.num_subcarriers
    omega = cfg.omega_i
    integral = integrate_semi_infinite(g, shape, omega, _ri_rule(cfg), lower=lower)
    return integral / (math.gamma(shape) * omega**shape)


def _expected_cdf_above(
    cfg: SystemConfig,
    rank: int,
    floor: float,
    offset: float,
    slope: float,
    sic: str,
) -> float:
    """E[F_rank(max(floor, offset + slope Y))] with Y the residual-interference power.

    Perfect SIC (or no residual power) sets Y = 0. The max() kink at
    y* = (floor - offset) / slope splits the expectation: below y* the CDF is
    constant and its Gamma mass is closed form.
    """
    if math.isinf(floor) or math.isinf(offset):
        return 1.0
    if sic == SicMode.PERFECT or cfg.omega_i_total == 0:
        return float(sorted_gain_cdf(cfg, max(floor, offset), rank))

    def integrand(y: np.ndarray) -> np.ndarray:
        return sorted_gain_cdf(cfg, offset + slope * y, rank)

    if floor <= offset:
        return _expect_over_ri(cfg, integrand)

    kink = (floor - offset) / slope
    below = float(sorted_gain_cdf(cfg, floor, rank)) * gammainc(
        cfg.num_subcarriers, kink / cfg.omega_i
    )
    return float(below) + _expect_over_ri(cfg, integrand, lower=kink)


def sinr_cdf_user_n(cfg: SystemConfig, x: float, rho: float, sic: str) -> float:
    """CDF at ``x`` of the n-th user's SINR after SIC, rho Z a_n / (w rho Y + 1)."""
    if x <= 0:
        return 0.0
    return _expected_cdf_above(
        cfg, cfg.n, floor=0.0, offset=x / (rho * cfg.a_n), slope=x / cfg.a_n, sic=sic
    )


def _threshold_flags(th: DerivedThresholds) -> tuple[str, ...]:
    flags = []
    if not th.tau_feasible:
        flags.append(Flag.TAU_INFEASIBLE)
    if not th.upsilon_feasible:
        flags.append(Flag.UPSILON_INFEASIBLE)
    return tuple(flags)


def _exact_m(cfg: SystemConfig, th: DerivedThresholds) -> float:
    return float(sorted_gain_cdf(cfg, th.tau, cfg.m))


def _exact_n(cfg: SystemConfig, th: DerivedThresholds, mode: EvalMode) -> float:
    exf = _expected_cdf_above(
        cfg, cfg.n, floor=th.tau, offset=th.beta, slope=th.vartheta, sic=mode.sic
    )
    if mode.formulation == Formulation.EXISTING or th.zeta == th.tau:
        return exf
    f_zeta = float(sorted_gain_cdf(cfg, th.zeta, cfg.n))
    f_tau = float(sorted_gain_cdf(cfg, th.tau, cfg.n))
    return min(1.0, max(0.0, f_zeta + exf - f_tau))


def combine_pair(p_m: float, p_n: float) -> float:
    """1 - (1 - P_m)(1 - P_n)."""
    if p_m >= 1.0 or p_n >= 1.0:
        return 1.0
    return p_m + p_n - p_m * p_n


def _n_feasible(th: DerivedThresholds, mode: EvalMode) -> bool:
    if mode.formulation == Formulation.ALTERNATIVE:
        return th.tau_feasible or th.upsilon_feasible
    return th.tau_feasible


def cop_user_m(cfg: SystemConfig, rho: float) -> CopValue:
    th = derive_thresholds(cfg, rho)
    mode = EvalMode(target=Target.USER_M)
    asymptotic, clamped = _asymptotic_m(cfg, th)
    flags = _threshold_flags(th) + ((Flag.ASYMPTOTIC_CLAMPED,) if clamped else ())
    return CopValue(
        exact=_exact_m(cfg, th),
        asymptotic=asymptotic,
        feasible=th.tau_feasible,
        mode=mode,
        rho=rho,
        flags=flags,
    )


def cop_user_n(cfg: SystemConfig, rho: float, mode: EvalMode) -> CopValue:
    th = derive_thresholds(cfg, rho)
    mode = mode.model_copy(update={"target": Target.USER_N})
    asymptotic, clamped = _asymptotic_n(cfg, th, mode)
    if clamped:
        logger.debug(f"Asymptotic {mode.label} at rho={rho:g} clamped to {asymptotic:g}")
    flags = _threshold_flags(th) + ((Flag.ASYMPTOTIC_CLAMPED,) if clamped else ())
    return CopValue(
        exact=_exact_n(cfg, th, mode),
        asymptotic=asymptotic,
        feasible=_n_feasible(th, mode),
        mode=mode,
        rho=rho,
        flags=flags,
    )


def cop_pair(cfg: SystemConfig, rho: float, mode: EvalMode) -> CopValue:
    user_m = cop_user_m(cfg, rho)
    user_n = cop_user_n(cfg, rho, mode)
    asymptotic = None
    if user_m.asymptotic is not None and user_n.asymptotic is not None:
        asymptotic = combine_pair(user_m.asymptotic, user_n.asymptotic)
    return CopValue(
        exact=combine_pair(user_m.exact, user_n.exact),
        asymptotic=asymptotic,
        feasible=user_m.feasible and user_n.feasible,
        mode=mode.model_copy(update={"target": Target.PAIR}),
        rho=rho,
        flags=tuple(dict.fromkeys(user_m.flags + user_n.flags)),
    )


def evaluate_cop(cfg: SystemConfig, rho: float, mode: EvalMode) -> CopValue:
    """Dispatch on the mode's target."""
    if mode.target == Target.USER_M:
        return cop_user_m(cfg, rho)
    if mode.target == Target.USER_N:
        return cop_user_n(cfg, rho, mode)
    return cop_pair(cfg, rho, mode)


# ----------------------------------------------------------------------
# High-SNR approximations
# ----------------------------------------------------------------------


def _small_argument_cdf(cfg: SystemConfig, x: float) -> float:
    """Leading term of the unsorted gain CDF: sum_u b_u (x c_u / eta)^K / K!."""
    if math.isinf(x):
        return math.inf
    table = _table(cfg)
    k = cfg.num_subcarriers
    return float(np.dot(table.b, (x * table.c / cfg.eta) ** k) / math.factorial(k))


def _power_law(cfg: SystemConfig, x: float, rank: int) -> float:
    """C(M, rank) G(x)^rank, the small-argument form of the ranked gain CDF."""
    if math.isinf(x):
        return 1.0
    return float(comb(cfg.num_users, rank, exact=True)) * _small_argument_cdf(
        cfg, x
    ) ** rank


def _clamp(value: float) -> tuple[float, bool]:
    clamped = min(1.0, max(0.0, value))
    return clamped, clamped != value


def _ri_floor(cfg: SystemConfig, th: DerivedThresholds) -> float:
    """rho-independent limit of the n-th user's outage under imperfect SIC."""
    if cfg.omega_i_total == 0:
        return 0.0
    return _expected_cdf_above(
        cfg, cfg.n, floor=0.0, offset=0.0, slope=th.vartheta, sic=SicMode.IMPERFECT
    )


def _asymptotic_m(cfg: SystemConfig, th: DerivedThresholds) -> tuple[float, bool]:
    return _clamp(_power_law(cfg, th.tau, cfg.m))


def _asymptotic_n(
    cfg: SystemConfig, th: DerivedThresholds, mode: EvalMode
) -> tuple[float, bool]:
    n = cfg.n
    if math.isinf(th.tau):
        exf = 1.0
    elif mode.sic == SicMode.PERFECT:
        exf = _power_law(cfg, max(th.tau, th.beta), n)
    else:
        exf = _ri_floor(cfg, th)
    if mode.formulation == Formulation.EXISTING:
        return _clamp(exf)
    if math.isinf(th.tau):
        return _clamp(_power_law(cfg, th.zeta, n))
    return _clamp(_power_law(cfg, th.zeta, n) - _power_law(cfg, th.tau, n) + exf)


def asymptotic_cop_detail(
    cfg: SystemConfig, rho: float, mode: EvalMode
) -> tuple[float, bool]:
    """High-SNR approximation and whether it had to be clamped into [0, 1]."""
    th = derive_thresholds(cfg, rho)
    if mode.target == Target.USER_M:
        return _asymptotic_m(cfg, th)
    if mode.target == Target.USER_N:
        return _asymptotic_n(cfg, th, mode)
    p_m, clamped_m = _asymptotic_m(cfg, th)
    p_n, clamped_n = _asymptotic_n(cfg, th, mode)
    return combine_pair(p_m, p_n), clamped_m or clamped_n


def asymptotic_cop(cfg: SystemConfig, rho: float, mode: EvalMode) -> float:
    return asymptotic_cop_detail(cfg, rho, mode)[0]


def expected_diversity_order(cfg: SystemConfig, mode: EvalMode) -> int:
    """High-SNR slope the analysis predicts; zero wherever residual interference floors the curve."""
    k = cfg.num_subcarriers
    if mode.target == Target.USER_M:
        return cfg.m * k
    if mode.sic == SicMode.IMPERFECT and cfg.omega_i_total > 0:
        return 0
    if mode.target == Target.USER_N:
        return cfg.n * k
    return cfg.m * k


def throughput_delay_limited(cfg: SystemConfig, rho: float, mode: EvalMode) -> float:
    """Delay-limited sum throughput in BPCU at fixed target rates."""
    p_m = cop_user_m(cfg, rho).exact
    p_n = cop_user_n(cfg, rho, mode).exact
    return throughput_from_cops(cfg, p_m, p_n)


def throughput_weights(cfg: SystemConfig) -> tuple[float, float]:
    """Rates multiplying the m-th and n-th users' success probabilities."""
    if cfg.throughput_pairing == ThroughputPairing.CONVENTIONAL:
        return cfg.rate_m, cfg.rate_n
    return cfg.rate_n, cfg.rate_m


def throughput_from_cops(cfg: SystemConfig, p_m: float, p_n: float) -> float:
    w_m, w_n = throughput_weights(cfg)
    return (1.0 - p_m) * w_m + (1.0 - p_n) * w_n
