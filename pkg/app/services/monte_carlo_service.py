"""Stochastic simulator of the NOMA pair, used as an independent check of the analysis.

Trials are split into fixed-size chunks. Chunk ``i`` draws from its own Philox
stream keyed by ``(seed, i)``, so a result depends only on
(cfg, rho, modes, trials, seed, chunk_size) and never on the worker count.
"""

from __future__ import annotations

import concurrent.futures
import logging
import math
from typing import Iterable, Sequence

import numpy as np

from app.config import get_settings
from app.constants.noma import Formulation, SicMode, Target
from app.schemas.simulation import (
    ChannelRealization,
    OutageEstimate,
    OutageEvents,
    SinrRecord,
)
from app.schemas.system import DerivedThresholds, EvalMode, SystemConfig
from app.services.config_service import derive_thresholds

logger = logging.getLogger(__name__)

_HALF = math.sqrt(0.5)


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """Counter-based generator for one chunk of trials."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([seed, chunk_index]))
    )


def _complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Unit-variance circularly symmetric complex Gaussian samples."""
    return _HALF * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_batch(
    cfg: SystemConfig, rng: np.random.Generator, size: int
) -> ChannelRealization:
    """Draw ``size`` independent cells: positions, fading, then residual interference.

    The draw order is fixed and the residual-interference draw is made even when
    its power is zero, so configurations differing only in RI level share every
    other random number.
    """
    users = cfg.num_users
    k = cfg.num_subcarriers

    # Uniform over the disk area: radial density 2r / R^2.
    d = cfg.radius * np.sqrt(rng.random((size, users)))
    h = _complex_normal(rng, (size, users, k))
    h_i = math.sqrt(cfg.omega_i) * _complex_normal(rng, (size, k))

    gains = cfg.eta / (1.0 + d**cfg.alpha) * np.sum(np.abs(h) ** 2, axis=2)
    return ChannelRealization(
        d=d,
        h=h,
        z_sorted=np.sort(gains, axis=1),
        y_i=np.sum(np.abs(h_i) ** 2, axis=1),
    )


def sample_realization(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    return sample_batch(cfg, rng, 1)


def compute_sinrs(
    real: ChannelRealization,
    cfg: SystemConfig,
    rho: float,
    sic: str = SicMode.IMPERFECT,
) -> SinrRecord:
    """SINRs of the ranked pair; perfect SIC drops the residual-interference term."""
    residual = 1.0 if sic == SicMode.IMPERFECT else 0.0
    # rho * Z is formed once so that the direct and SIC-stage SINRs are
    # ordered identically in floating point.
    rz_n = rho * real.rank(cfg.n)
    rz_m = rho * real.rank(cfg.m)
    return SinrRecord(
        n_decodes_m=rz_n * cfg.a_m / (rz_n * cfg.a_n + 1.0),
        n_after_sic=rz_n * cfg.a_n / (residual * rho * real.y_i + 1.0),
        n_direct=rz_n * cfg.a_n / (rz_n * cfg.a_m + 1.0),
        m_direct=rz_m * cfg.a_m / (rz_m * cfg.a_n + 1.0),
    )


def outage_events(
    sinrs: SinrRecord, thresholds: DerivedThresholds, mode: EvalMode
) -> OutageEvents:
    eps_m = thresholds.eps_m
    eps_n = thresholds.eps_n

    outage_m = sinrs.m_direct < eps_m
    fails_m = sinrs.n_decodes_m <= eps_m
    fails_own = ~fails_m & (sinrs.n_after_sic <= eps_n)
    if mode.formulation == Formulation.ALTERNATIVE:
        outage_n = (fails_m & (sinrs.n_direct <= eps_n)) | fails_own
    else:
        outage_n = fails_m | fails_own

    return OutageEvents(
        outage_m=outage_m,
        outage_n=outage_n,
        outage_pair=outage_m | outage_n,
    )


def _indicator(events: OutageEvents, mode: EvalMode) -> np.ndarray:
    if mode.target == Target.USER_M:
        return events.outage_m
    if mode.target == Target.USER_N:
        return events.outage_n
    return events.outage_pair


# Columns of the per-mode count matrix.
_HIT, _M, _N, _BOTH = range(4)


def _count_chunk(
    cfg: SystemConfig,
    rho: float,
    modes: Sequence[EvalMode],
    seed: int,
    chunk_index: int,
    size: int,
) -> np.ndarray:
    """Per-mode counts over one chunk: the mode's own indicator, m, n and m-and-n."""
    rng = chunk_generator(seed, chunk_index)
    real = sample_batch(cfg, rng, size)
    thresholds = derive_thresholds(cfg, rho)

    sinrs_by_sic: dict[str, SinrRecord] = {}
    counts = np.zeros((len(modes), 4), dtype=np.int64)
    for i, mode in enumerate(modes):
        if mode.sic not in sinrs_by_sic:
            sinrs_by_sic[mode.sic] = compute_sinrs(real, cfg, rho, mode.sic)
        events = outage_events(sinrs_by_sic[mode.sic], thresholds, mode)
        counts[i, _HIT] = np.count_nonzero(_indicator(events, mode))
        counts[i, _M] = np.count_nonzero(events.outage_m)
        counts[i, _N] = np.count_nonzero(events.outage_n)
        counts[i, _BOTH] = np.count_nonzero(events.outage_m & events.outage_n)
    return counts


def _pair_estimate(
    counts: np.ndarray, trials: int, seed: int, mode: EvalMode
) -> OutageEstimate:
    """1 - (1 - P_m)(1 - P_n) from the marginal counts, with a delta-method stderr.

    The marginals share their draws, so the covariance term uses the joint count.
    """
    p_m = counts[_M] / trials
    p_n = counts[_N] / trials
    p_both = counts[_BOTH] / trials
    p_hat = 1.0 - (1.0 - p_m) * (1.0 - p_n)

    grad_m = 1.0 - p_n
    grad_n = 1.0 - p_m
    variance = (
        grad_m**2 * p_m * (1.0 - p_m)
        + grad_n**2 * p_n * (1.0 - p_n)
        + 2.0 * grad_m * grad_n * (p_both - p_m * p_n)
    ) / trials
    return OutageEstimate(
        p_hat=float(min(1.0, max(0.0, p_hat))),
        trials=trials,
        seed=seed,
        mode=mode,
        stderr=math.sqrt(max(0.0, float(variance))),
        same_draw_union=float(counts[_HIT]) / trials,
    )


def _estimate(
    counts: np.ndarray, trials: int, seed: int, mode: EvalMode
) -> OutageEstimate:
    if mode.target == Target.PAIR:
        return _pair_estimate(counts, trials, seed, mode)
    return OutageEstimate(
        p_hat=float(counts[_HIT]) / trials, trials=trials, seed=seed, mode=mode
    )


def _chunks(trials: int, chunk_size: int) -> Iterable[tuple[int, int]]:
    for index, start in enumerate(range(0, trials, chunk_size)):
        yield index, min(chunk_size, trials - start)


def estimate_cops(
    cfg: SystemConfig,
    rho: float,
    modes: Sequence[EvalMode],
    trials: int,
    seed: int,
    chunk_size: int | None = None,
    workers: int | None = None,
) -> dict[str, OutageEstimate]:
    """Estimate every mode from the same draws, keyed by mode label.

    Pair modes combine the two users' marginal estimates the way the closed
    form does; the same-draw union is kept on the estimate as a diagnostic.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    settings = get_settings()
    chunk_size = chunk_size or settings.chunk_size
    workers = workers or settings.workers
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be at least 1, got {chunk_size}")

    modes = list(dict.fromkeys(modes))
    chunks = list(_chunks(trials, chunk_size))
    totals = np.zeros((len(modes), 4), dtype=np.int64)

    if workers > 1 and len(chunks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_count_chunk, cfg, rho, modes, seed, index, size)
                for index, size in chunks
            ]
            for future in concurrent.futures.as_completed(futures):
                totals += future.result()
    else:
        for index, size in chunks:
            totals += _count_chunk(cfg, rho, modes, seed, index, size)

    logger.debug(
        f"Simulated {trials} trials at rho={rho:g} in {len(chunks)} chunks "
        f"({workers} worker(s))"
    )
    return {
        mode.label: _estimate(counts, trials, seed, mode)
        for mode, counts in zip(modes, totals)
    }


def estimate_cop(
    cfg: SystemConfig,
    rho: float,
    mode: EvalMode,
    trials: int,
    seed: int,
    chunk_size: int | None = None,
    workers: int | None = None,
) -> OutageEstimate:
    return estimate_cops(
        cfg, rho, [mode], trials, seed, chunk_size=chunk_size, workers=workers
    )[mode.label]
