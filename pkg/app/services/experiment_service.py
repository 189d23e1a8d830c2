"""Sweeps, slope fits, error-floor detection and analytic-versus-simulation checks."""

from __future__ import annotations

import logging
import math
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from app.config import get_settings
from app.constants.noma import (
    FLOOR_REL_CHANGE,
    MIN_FIT_PROBABILITY,
    Flag,
    Target,
)
from app.exceptions.config_validation_error import ConfigValidationError
from app.exceptions.usage_error import UsageError
from app.numerics.units import db_to_linear, linear_to_db
from app.schemas.cop import DiversityReport
from app.schemas.simulation import OutageEstimate
from app.schemas.sweep import (
    CopPoint,
    SweepAxis,
    SweepMetric,
    SweepProvenance,
    SweepResult,
    SweepSpec,
)
from app.schemas.system import EvalMode, SystemConfig
from app.schemas.validation import ValidationPoint, ValidationReport
from app.services.analytic_cop_service import (
    asymptotic_cop,
    evaluate_cop,
    expected_diversity_order,
    throughput_from_cops,
    throughput_weights,
)
from app.services.config_service import with_updates
from app.services.monte_carlo_service import estimate_cops

logger = logging.getLogger(__name__)

Curve = Sequence[tuple[float, float]]

_WINDOW_TOLERANCE_DB = 1e-9


def _point_config(
    cfg: SystemConfig, spec: SweepSpec, value: float
) -> tuple[SystemConfig, float]:
    if spec.axis == SweepAxis.THETA:
        return with_updates(cfg, a_n=value, a_m=1.0 - value), db_to_linear(spec.snr_db)
    if spec.axis == SweepAxis.RATE:
        return with_updates(cfg, rate_m=value, rate_n=value), db_to_linear(spec.snr_db)
    return cfg, db_to_linear(value)


def _label(mode: EvalMode, spec: SweepSpec) -> str:
    return f"{mode.label}@{spec.series}" if spec.series else mode.label


def _throughput_modes(mode: EvalMode) -> list[EvalMode]:
    return [
        EvalMode(target=Target.USER_M),
        mode.model_copy(update={"target": Target.USER_N}),
    ]


def _cop_rows(
    cfg: SystemConfig,
    rho: float,
    value: float,
    spec: SweepSpec,
    estimates: dict[str, OutageEstimate],
) -> list[CopPoint]:
    rows = []
    for mode in spec.modes:
        cop = evaluate_cop(cfg, rho, mode)
        estimate = estimates.get(mode.label)
        rows.append(
            CopPoint(
                axis=value,
                mode=_label(mode, spec),
                exact=cop.exact,
                asymptotic=cop.asymptotic,
                mc_estimate=estimate.p_hat if estimate else None,
                mc_stderr=estimate.stderr if estimate else None,
                trials=estimate.trials if estimate else 0,
                feasible=cop.feasible,
                flags=cop.flags,
            )
        )
    return rows


def _throughput_rows(
    cfg: SystemConfig,
    rho: float,
    value: float,
    spec: SweepSpec,
    estimates: dict[str, OutageEstimate],
) -> list[CopPoint]:
    rows = []
    for mode in spec.modes:
        user_m, user_n = _throughput_modes(mode)
        cop_m = evaluate_cop(cfg, rho, user_m)
        cop_n = evaluate_cop(cfg, rho, user_n)
        asymptotic = None
        if cop_m.asymptotic is not None and cop_n.asymptotic is not None:
            asymptotic = throughput_from_cops(cfg, cop_m.asymptotic, cop_n.asymptotic)

        mc_estimate = mc_stderr = None
        trials = 0
        est_m = estimates.get(user_m.label)
        est_n = estimates.get(user_n.label)
        if est_m and est_n:
            mc_estimate = throughput_from_cops(cfg, est_m.p_hat, est_n.p_hat)
            # Treats the two estimates as independent.
            w_m, w_n = throughput_weights(cfg)
            mc_stderr = math.hypot(w_m * est_m.stderr, w_n * est_n.stderr)
            trials = est_m.trials

        rows.append(
            CopPoint(
                axis=value,
                mode=_label(mode, spec),
                exact=throughput_from_cops(cfg, cop_m.exact, cop_n.exact),
                asymptotic=asymptotic,
                mc_estimate=mc_estimate,
                mc_stderr=mc_stderr,
                trials=trials,
                feasible=cop_m.feasible and cop_n.feasible,
                flags=tuple(dict.fromkeys(cop_m.flags + cop_n.flags)),
            )
        )
    return rows


def _failed_rows(value: float, spec: SweepSpec, error: ConfigValidationError):
    failed = 1.0 if spec.metric == SweepMetric.COP else 0.0
    return [
        CopPoint(
            axis=value,
            mode=_label(mode, spec),
            exact=failed,
            feasible=False,
            flags=(Flag.CONFIG_ERROR, error.code),
        )
        for mode in spec.modes
    ]


def run_sweep(
    cfg: SystemConfig,
    spec: SweepSpec,
    chunk_size: int | None = None,
    workers: int | None = None,
) -> SweepResult:
    settings = get_settings()
    chunk_size = chunk_size or settings.chunk_size
    started_at = datetime.now(timezone.utc)
    logger.info(
        f"Sweeping {spec.metric} over {spec.axis} ({len(spec.grid)} points, "
        f"{len(spec.modes)} modes, {spec.trials} trials)"
    )

    rows: list[CopPoint] = []
    for value in spec.grid:
        try:
            point_cfg, rho = _point_config(cfg, spec, value)
        except ConfigValidationError as e:
            logger.warning(f"{spec.axis}={value:g}: {e}; point marked infeasible")
            rows.extend(_failed_rows(value, spec, e))
            continue

        simulated = list(spec.modes)
        if spec.metric == SweepMetric.THROUGHPUT:
            simulated = [m for mode in spec.modes for m in _throughput_modes(mode)]
        estimates: dict[str, OutageEstimate] = {}
        if spec.trials > 0:
            estimates = estimate_cops(
                point_cfg,
                rho,
                simulated,
                spec.trials,
                spec.seed,
                chunk_size=chunk_size,
                workers=workers,
            )

        if spec.metric == SweepMetric.THROUGHPUT:
            rows.extend(_throughput_rows(point_cfg, rho, value, spec, estimates))
        else:
            rows.extend(_cop_rows(point_cfg, rho, value, spec, estimates))
        logger.debug(f"{spec.axis}={value:g} done")

    return SweepResult(
        axis=spec.axis,
        metric=spec.metric,
        rows=rows,
        config=cfg,
        provenance=SweepProvenance(
            seed=spec.seed,
            trials=spec.trials,
            chunk_size=chunk_size,
            started_at=started_at,
            finished_at=datetime.now(timezone.utc),
        ),
    )


def fit_diversity_order(
    curve: Curve,
    window_db: tuple[float, float],
    min_probability: float = MIN_FIT_PROBABILITY,
    expected_order: Optional[int] = None,
) -> DiversityReport:
    """Least-squares slope of -log10(P) against log10(rho) inside an SNR window."""
    lo, hi = window_db
    if hi <= lo:
        raise UsageError(f"degenerate diversity window {window_db}")

    points = [
        (rho, p)
        for rho, p in curve
        if lo - _WINDOW_TOLERANCE_DB <= linear_to_db(rho) <= hi + _WINDOW_TOLERANCE_DB
        and p > min_probability
    ]
    if len(points) < 3:
        raise UsageError(
            f"need at least 3 points with P > {min_probability:g} in {window_db} dB, "
            f"got {len(points)}"
        )
    x = np.log10([rho for rho, _ in points])
    if np.ptp(x) == 0:
        raise UsageError("all points in the diversity window share one SNR")
    y = np.log10([p for _, p in points])

    fit = stats.linregress(x, y)
    return DiversityReport(
        slope=-float(fit.slope),
        intercept=float(fit.intercept),
        expected_order=expected_order,
        fit_window_db=(float(lo), float(hi)),
        points_used=len(points),
    )


def diversity_report(
    cfg: SystemConfig,
    mode: EvalMode,
    grid_db: Sequence[float],
    window_db: tuple[float, float],
    min_probability: float = MIN_FIT_PROBABILITY,
) -> DiversityReport:
    """Fit the exact curve of ``mode`` and attach the order the analysis predicts."""
    curve = exact_curve(cfg, mode, grid_db)
    report = fit_diversity_order(
        curve,
        window_db,
        min_probability=min_probability,
        expected_order=expected_diversity_order(cfg, mode),
    )
    return report.model_copy(
        update={"mode": mode.label, "error_floor": detect_error_floor(curve)}
    )


def detect_error_floor(
    curve: Curve, rel_change: float = FLOOR_REL_CHANGE
) -> Optional[float]:
    """Terminal value of the curve if it changed by less than ``rel_change`` over its last decade."""
    if len(curve) < 2:
        return None
    rho_last, p_last = curve[-1]
    earlier = [p for rho, p in curve[:-1] if rho <= rho_last / 10.0 * (1 + 1e-12)]
    if not earlier:
        return None
    p_ref = earlier[-1]
    if p_last == 0:
        return 0.0 if p_ref == 0 else None
    if abs(p_last - p_ref) / p_last < rel_change:
        return p_last
    return None


def validate(
    cfg: SystemConfig,
    modes: Sequence[EvalMode],
    grid_db: Sequence[float],
    trials: int,
    seed: int,
    rel_tol: float | None = None,
    simulated_cfg: SystemConfig | None = None,
    min_probability: float | None = None,
    chunk_size: int | None = None,
    workers: int | None = None,
) -> ValidationReport:
    """Compare analytic values with simulation at every (SNR, mode).

    ``simulated_cfg`` replaces ``cfg`` on the simulation side only, which turns
    the check into a negative control.
    """
    settings = get_settings()
    if trials < settings.min_validation_trials:
        raise UsageError(
            f"validation needs at least {settings.min_validation_trials} trials, "
            f"got {trials}"
        )
    rel_tol = settings.validation_rel_tol if rel_tol is None else rel_tol
    min_probability = (
        settings.validation_min_probability
        if min_probability is None
        else min_probability
    )
    simulated_cfg = simulated_cfg or cfg

    points: list[ValidationPoint] = []
    for snr_db in grid_db:
        rho = db_to_linear(snr_db)
        estimates = estimate_cops(
            simulated_cfg, rho, modes, trials, seed, chunk_size=chunk_size, workers=workers
        )
        for mode in modes:
            analytic = evaluate_cop(cfg, rho, mode).exact
            estimate = estimates[mode.label]
            tolerance = max(3.0 * estimate.stderr, rel_tol * analytic)
            passed = abs(analytic - estimate.p_hat) <= tolerance
            counted = analytic >= min_probability
            if counted and not passed:
                logger.warning(
                    f"{mode.label} at {snr_db:g} dB: analytic {analytic:.6g} vs "
                    f"simulated {estimate.p_hat:.6g} +- {estimate.stderr:.2g}"
                )
            points.append(
                ValidationPoint(
                    snr_db=snr_db,
                    mode=mode.label,
                    analytic=analytic,
                    mc_estimate=estimate.p_hat,
                    mc_stderr=estimate.stderr,
                    tolerance=tolerance,
                    passed=passed,
                    counted=counted,
                    mc_same_draw_union=estimate.same_draw_union,
                )
            )

    passed = all(p.passed for p in points if p.counted)
    logger.info(
        f"Validation {'passed' if passed else 'failed'}: "
        f"{sum(p.counted for p in points)} counted points, "
        f"{sum(p.counted and not p.passed for p in points)} failures"
    )
    return ValidationReport(
        passed=passed,
        trials=trials,
        seed=seed,
        rel_tol=rel_tol,
        min_probability=min_probability,
        config=cfg,
        simulated_config=simulated_cfg,
        points=points,
    )


def asymptotic_curve(
    cfg: SystemConfig, mode: EvalMode, grid_db: Sequence[float]
) -> list[tuple[float, float]]:
    rhos = [db_to_linear(x) for x in grid_db]
    return [(rho, asymptotic_cop(cfg, rho, mode)) for rho in rhos]


def exact_curve(
    cfg: SystemConfig, mode: EvalMode, grid_db: Sequence[float]
) -> list[tuple[float, float]]:
    rhos = [db_to_linear(x) for x in grid_db]
    return [(rho, evaluate_cop(cfg, rho, mode).exact) for rho in rhos]
