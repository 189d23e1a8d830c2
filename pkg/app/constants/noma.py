"""NOMA-related constants."""


class SicMode:
    """Successive interference cancellation constants."""

    PERFECT = "psic"
    IMPERFECT = "ipsic"  # residual interference of power omega_i per subcarrier

    ALL = (PERFECT, IMPERFECT)


class Formulation:
    """Outage formulations for the n-th (near) user."""

    EXISTING = "exf"  # outage whenever the m-th user's message cannot be decoded
    ALTERNATIVE = "alf"  # falls back to direct decoding, m-th user as noise

    ALL = (EXISTING, ALTERNATIVE)


class Target:
    """Which outage probability is evaluated."""

    USER_M = "m"
    USER_N = "n"
    PAIR = "pair"

    ALL = (USER_M, USER_N, PAIR)


class ThroughputPairing:
    """How user success probabilities are paired with target rates."""

    AS_PRINTED = "as_printed"  # (1 - P_m) R_n + (1 - P_n) R_m
    CONVENTIONAL = "conventional"  # (1 - P_m) R_m + (1 - P_n) R_n

    ALL = (AS_PRINTED, CONVENTIONAL)


class ConfigErrorCode:
    """Codes carried by ConfigValidationError."""

    POWER_SPLIT = "POWER_SPLIT"
    ORDER = "ORDER"
    NEGATIVE = "NEGATIVE"
    INVALID = "INVALID"  # missing field, wrong type, unknown key


class Flag:
    """Diagnostic flags attached to evaluated points."""

    TAU_INFEASIBLE = "infeasible-tau"
    UPSILON_INFEASIBLE = "infeasible-upsilon"
    ASYMPTOTIC_CLAMPED = "asymptotic-clamped"
    CONFIG_ERROR = "config-error"


# Reference parameter set used for every numerical result unless overridden.
REFERENCE_CONFIG: dict = {
    "num_users": 3,
    "num_subcarriers": 2,
    "m": 1,
    "n": 2,
    "a_m": 0.8,
    "a_n": 0.2,
    "rate_m": 0.01,
    "rate_n": 0.01,
    "alpha": 2.0,
    "eta": 1.0,
    "radius": 2.0,
    "omega_i_total": 10 ** (-30 / 10),
    "chebyshev_nodes": 15,
    "semi_infinite_nodes": 64,
    "throughput_pairing": ThroughputPairing.AS_PRINTED,
}

# Residual-interference levels (dB) compared in the error-floor experiments.
RI_LEVELS_DB = (-30.0, -25.0, -20.0)

# Largest population for which binomial sums are evaluated directly.
MAX_USERS = 20

# Slope fits ignore probabilities at or below this value.
MIN_FIT_PROBABILITY = 1e-12

# Relative change over the final SNR decade below which a curve has floored.
FLOOR_REL_CHANGE = 0.02
