"""Fixed-node quadrature rules used by the analytic evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.chebyshev import chebgauss
from scipy.special import roots_genlaguerre

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureTable:
    """Gauss-Chebyshev discretisation of the uniform-in-disk distance law.

    ``sum(b * g(c))`` approximates ``E[g(1 + d^alpha)]`` for a user placed
    uniformly in a disk of radius ``radius``.
    """

    theta: np.ndarray
    b: np.ndarray
    c: np.ndarray
    radius: float
    alpha: float

    @property
    def size(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class SemiInfRule:
    """Nodes and weights for int_0^inf t^(shape-1) e^(-t) g(t) dt."""

    nodes: np.ndarray
    weights: np.ndarray
    shape: int

    @property
    def size(self) -> int:
        return self.nodes.size


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@lru_cache(maxsize=64)
def build_chebyshev_table(size: int, radius: float, alpha: float) -> QuadratureTable:
    if size < 1:
        raise ValueError(f"Gauss-Chebyshev node count must be at least 1, got {size}")

    # chebgauss returns cos((2u-1)pi/(2U)) for u = 1..U, i.e. descending nodes.
    theta, w = chebgauss(size)
    b = 0.5 * w * np.sqrt(1.0 - theta**2) * (theta + 1.0)
    c = 1.0 + (radius * (theta + 1.0) / 2.0) ** alpha
    return QuadratureTable(
        theta=_frozen(theta),
        b=_frozen(b),
        c=_frozen(c),
        radius=float(radius),
        alpha=float(alpha),
    )


@lru_cache(maxsize=64)
def build_semi_inf_rule(size: int, shape: int) -> SemiInfRule:
    """Generalised Gauss-Laguerre rule with weight t^(shape-1) e^(-t)."""
    if size < 1:
        raise ValueError(f"semi-infinite node count must be at least 1, got {size}")
    if shape < 1:
        raise ValueError(f"shape must be at least 1, got {shape}")

    nodes, weights = roots_genlaguerre(size, shape - 1)
    return SemiInfRule(
        nodes=_frozen(np.asarray(nodes, dtype=float)),
        weights=_frozen(np.asarray(weights, dtype=float)),
        shape=shape,
    )


def integrate_semi_infinite(
    f: Integrand,
    shape: int,
    omega: float,
    rule: SemiInfRule,
    lower: float = 0.0,
) -> float:
    """Approximate int_lower^inf y^(shape-1) e^(-y/omega) f(y) dy.

    ``f`` is called once with the array of nodes. With ``lower == 0`` the
    rule's own weight absorbs y^(shape-1); otherwise the integral is shifted to
    start at ``lower`` and evaluated with a plain Laguerre rule of the same size.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if lower < 0:
        raise ValueError(f"lower limit must be non-negative, got {lower}")

    if lower == 0.0:
        if rule.shape != shape:
            raise ValueError(
                f"rule was built for shape {rule.shape}, integrand has shape {shape}"
            )
        values = np.asarray(f(omega * rule.nodes), dtype=float)
        return float(omega**shape * np.dot(rule.weights, values))

    if math.isinf(lower):
        return 0.0
    scale = math.exp(-lower / omega)
    if scale == 0.0:
        return 0.0

    plain = build_semi_inf_rule(rule.size, 1)
    y = lower + omega * plain.nodes
    values = y ** (shape - 1) * np.asarray(f(y), dtype=float)
    return float(scale * omega * np.dot(plain.weights, values))
