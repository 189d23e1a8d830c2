"""Erlang statistics and the order-statistics transform."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy import stats
from scipy.special import betainc, gammainc

from app.constants.noma import MAX_USERS
from app.numerics.quadrature import QuadratureTable

ArrayLike = float | np.ndarray


def erlang_cdf(y: ArrayLike, shape: int) -> ArrayLike:
    """Unit-scale Erlang CDF, 1 - e^-y sum_{i<K} y^i/i!, via the regularised gamma."""
    if shape < 1:
        raise ValueError(f"shape must be at least 1, got {shape}")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise ValueError("erlang_cdf is defined for y >= 0 only")
    result = gammainc(shape, y_arr)
    return float(result) if np.ndim(result) == 0 else result


def erlang_pdf(y: ArrayLike, shape: int, omega: float) -> ArrayLike:
    """Erlang density y^(K-1) e^(-y/omega) / ((K-1)! omega^K)."""
    if shape < 1:
        raise ValueError(f"shape must be at least 1, got {shape}")
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise ValueError("erlang_pdf is defined for y >= 0 only")
    result = stats.gamma.pdf(y_arr, a=shape, scale=omega)
    return float(result) if np.ndim(result) == 0 else result


def order_stat_transform(u: ArrayLike, rank: int, population: int) -> ArrayLike:
    """CDF of the rank-th smallest of ``population`` iid draws, given the parent CDF value u.

    Equal to phi_m sum_p C(M-m, p) (-1)^p u^(m+p) / (m+p) with
    phi_m = M! / ((M-m)! (m-1)!), evaluated as the regularised incomplete beta
    I_u(m, M-m+1) so that no alternating sum is formed.
    """
    if not 1 <= rank <= population:
        raise ValueError(f"rank must satisfy 1 <= rank <= {population}, got {rank}")
    if population > MAX_USERS:
        raise ValueError(f"population above {MAX_USERS} is not supported")
    u_arr = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    result = betainc(rank, population - rank + 1, u_arr)
    return float(result) if np.ndim(result) == 0 else result


def order_stat_cdf(
    f_unsorted: Callable[[ArrayLike], ArrayLike],
    z: ArrayLike,
    rank: int,
    population: int,
) -> ArrayLike:
    return order_stat_transform(f_unsorted(z), rank, population)


def unsorted_gain_cdf(
    z: ArrayLike, shape: int, table: QuadratureTable, eta: float
) -> ArrayLike:
    """CDF of one user's effective gain eta/(1+d^alpha) ||h||^2 over the disk.

    Infinite arguments map to exactly one.
    """
    z_arr = np.asarray(z, dtype=float)
    finite = np.isfinite(z_arr)
    safe = np.where(finite, z_arr, 0.0)
    values = gammainc(shape, np.multiply.outer(safe, table.c) / eta) @ table.b
    result = np.where(finite, values, 1.0)
    return float(result) if np.ndim(result) == 0 else result
