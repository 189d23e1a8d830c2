"""Unit tests for the closed-form and high-SNR outage evaluators."""

from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from scipy.special import betainc, roots_laguerre

from app.constants.noma import (
    RI_LEVELS_DB,
    Flag,
    Formulation,
    SicMode,
    Target,
    ThroughputPairing,
)
from app.numerics.units import db_to_linear
from app.schemas.system import EvalMode, all_modes
from app.services.analytic_cop_service import (
    asymptotic_cop,
    asymptotic_cop_detail,
    cdf_sorted_gain,
    combine_pair,
    cop_pair,
    cop_user_m,
    cop_user_n,
    evaluate_cop,
    expected_diversity_order,
    sinr_cdf_user_n,
    sorted_gain_cdf,
    throughput_delay_limited,
    throughput_from_cops,
    throughput_weights,
)
from app.services.config_service import derive_thresholds
from app.services.experiment_service import (
    asymptotic_curve,
    detect_error_floor,
    exact_curve,
    fit_diversity_order,
)
from tests.fixtures.config_fixtures import make_config

USER_M = EvalMode(target=Target.USER_M)
N_PSIC_EXF = EvalMode(target=Target.USER_N, sic=SicMode.PERFECT)
N_PSIC_ALF = EvalMode(
    target=Target.USER_N, sic=SicMode.PERFECT, formulation=Formulation.ALTERNATIVE
)
N_IPSIC_EXF = EvalMode(target=Target.USER_N, sic=SicMode.IMPERFECT)
N_IPSIC_ALF = EvalMode(
    target=Target.USER_N, sic=SicMode.IMPERFECT, formulation=Formulation.ALTERNATIVE
)
PAIR_PSIC_EXF = EvalMode(target=Target.PAIR, sic=SicMode.PERFECT)

PROPERTY_GRID_DB = np.arange(-10.0, 61.0, 5.0)


@pytest.fixture(scope="module")
def cop_table(random_config):
    """Exact COP of every mode of ``random_config`` over PROPERTY_GRID_DB, keyed by label."""
    return {
        mode.label: [
            evaluate_cop(random_config, db_to_linear(snr_db), mode).exact
            for snr_db in PROPERTY_GRID_DB
        ]
        for mode in all_modes()
    }


def _pd_reference_cdf(z: float, rank: int, population: int, radius: float) -> float:
    """Ranked-gain CDF for K=1, alpha=2, eta=1 from the exact single-user law."""
    r2 = radius**2
    parent = 1.0 - math.exp(-z) * (1.0 - math.exp(-z * r2)) / (z * r2)
    return float(betainc(rank, population - rank + 1, parent))


def _pd_bracket(cfg, x):
    """K=1 unsorted gain CDF sum_u b_u (1 - exp(-x c_u / eta)), nodes written out."""
    size = cfg.chebyshev_nodes
    theta = np.cos((2 * np.arange(1, size + 1) - 1) * np.pi / (2 * size))
    b = np.pi / (2 * size) * np.sqrt(1 - theta**2) * (theta + 1)
    c = 1 + (cfg.radius / 2 * (theta + 1)) ** cfg.alpha
    bracket = np.sum(b * (1 - np.exp(-np.multiply.outer(x, c) / cfg.eta)), axis=-1)
    # the node weights sum to slightly more than one
    return np.minimum(bracket, 1.0)


def _pd_ranked(cfg, bracket, rank):
    """phi sum_p C(M - rank, p) (-1)^p u^(rank + p) / (rank + p) at u = ``bracket``."""
    population = cfg.num_users
    phi = math.factorial(population) / (
        math.factorial(population - rank) * math.factorial(rank - 1)
    )
    return phi * sum(
        math.comb(population - rank, p) * (-1) ** p * bracket ** (rank + p) / (rank + p)
        for p in range(population - rank + 1)
    )


def _pd_cdf(cfg, x, rank):
    return _pd_ranked(cfg, _pd_bracket(cfg, x), rank)


def _pd_exf_imperfect(cfg, th):
    """E[F_n(beta + vartheta Y)] for exponential Y by plain Gauss-Laguerre."""
    x, w = roots_laguerre(cfg.semi_infinite_nodes)
    values = _pd_cdf(cfg, th.beta + th.vartheta * cfg.omega_i * x, cfg.n)
    return float(np.dot(w, values))


def _power_domain_config(fake):
    """Random K=1 configuration with a feasible tau and beta above tau."""
    num_users = fake.random_int(min=2, max=6)
    m = fake.random_int(min=1, max=num_users - 1)
    a_n = fake.pyfloat(min_value=0.05, max_value=0.45)
    a_m = 1.0 - a_n
    rate_m = fake.pyfloat(min_value=0.01, max_value=1.0)
    eps_m = 2.0**rate_m - 1.0
    lowest_eps_n = eps_m * a_n / (a_m - eps_m * a_n)
    eps_n = lowest_eps_n * fake.pyfloat(min_value=1.05, max_value=4.0)
    return make_config(
        num_users=num_users,
        num_subcarriers=1,
        m=m,
        n=fake.random_int(min=m + 1, max=num_users),
        a_m=a_m,
        a_n=a_n,
        rate_m=rate_m,
        rate_n=math.log2(1.0 + eps_n),
        alpha=fake.pyfloat(min_value=2.0, max_value=4.0),
        eta=fake.pyfloat(min_value=0.5, max_value=2.0),
        radius=fake.pyfloat(min_value=1.0, max_value=10.0),
        omega_i_total=db_to_linear(fake.pyfloat(min_value=-40.0, max_value=-10.0)),
        chebyshev_nodes=fake.random_int(min=5, max=60),
        semi_infinite_nodes=fake.random_int(min=16, max=64),
    )


class TestSortedGain:
    @pytest.mark.parametrize("rank", [1, 2, 3])
    @pytest.mark.parametrize("z", [0.05, 0.5, 2.0])
    def test_power_domain_matches_exact_law(self, rank, z):
        cfg = make_config(num_subcarriers=1, chebyshev_nodes=400)

        assert sorted_gain_cdf(cfg, z, rank) == pytest.approx(
            _pd_reference_cdf(z, rank, 3, 2.0), abs=1e-4
        )

    def test_node_count_converges(self):
        coarse = make_config(num_subcarriers=1, chebyshev_nodes=15)
        fine = make_config(num_subcarriers=1, chebyshev_nodes=400)

        assert sorted_gain_cdf(coarse, 0.5, 2) == pytest.approx(
            sorted_gain_cdf(fine, 0.5, 2), abs=5e-3
        )

    def test_infinite_argument_is_one(self, reference_config):
        assert sorted_gain_cdf(reference_config, math.inf, 1) == 1.0

    def test_cdf_sorted_gain_maps_sinr_to_gain(self, pd_config):
        rho = 10.0
        x = 1.0
        expected = sorted_gain_cdf(pd_config, x / (rho * (0.8 - x * 0.2)), 1)

        assert cdf_sorted_gain(pd_config, x, 1, rho) == pytest.approx(expected)

    def test_cdf_sorted_gain_above_ceiling_is_one(self, pd_config):
        assert cdf_sorted_gain(pd_config, 4.0, 1, 10.0) == 1.0
        assert cdf_sorted_gain(pd_config, 0.0, 1, 10.0) == 0.0


class TestCopUserM:
    def test_equals_ranked_cdf_at_tau(self, pd_config):
        rho = 10.0
        th = derive_thresholds(pd_config, rho)
        cop = cop_user_m(pd_config, rho)

        assert cop.exact == pytest.approx(sorted_gain_cdf(pd_config, th.tau, 1))
        assert cop.feasible
        assert cop.mode.label == "m"

    def test_power_domain_reference_value(self, pd_config):
        rho = 10.0
        tau = 1.0 / (rho * 0.6)

        assert cop_user_m(pd_config, rho).exact == pytest.approx(
            _pd_reference_cdf(tau, 1, 3, 2.0), abs=1e-4
        )

    def test_infeasible_target_rate_is_certain_outage(self):
        cfg = make_config(rate_m=3.0)
        cop = cop_user_m(cfg, 1e4)

        assert cop.exact == 1.0
        assert not cop.feasible
        assert Flag.TAU_INFEASIBLE in cop.flags


class TestCopUserN:
    def test_perfect_sic_existing_formulation(self, pd_config):
        rho = 10.0
        th = derive_thresholds(pd_config, rho)

        assert cop_user_n(pd_config, rho, N_PSIC_EXF).exact == pytest.approx(
            sorted_gain_cdf(pd_config, max(th.tau, th.beta), 2)
        )

    def test_power_domain_reference_value(self, pd_config):
        rho = 10.0
        # beta = 1 / (rho a_n) exceeds tau = 1 / (rho (a_m - a_n)).
        assert cop_user_n(pd_config, rho, N_PSIC_EXF).exact == pytest.approx(
            _pd_reference_cdf(0.5, 2, 3, 2.0), abs=1e-4
        )

    def test_alternative_equals_existing_when_zeta_is_tau(self, reference_config):
        for rho in (1.0, 100.0, 1e4):
            for sic in SicMode.ALL:
                exf = EvalMode(target=Target.USER_N, sic=sic)
                alf = exf.model_copy(update={"formulation": Formulation.ALTERNATIVE})
                assert (
                    cop_user_n(reference_config, rho, alf).exact
                    == cop_user_n(reference_config, rho, exf).exact
                )

    def test_alternative_rescues_infeasible_tau(self):
        cfg = make_config(rate_m=3.0, rate_n=0.1, chebyshev_nodes=100)
        rho = 100.0
        th = derive_thresholds(cfg, rho)

        exf = cop_user_n(cfg, rho, N_PSIC_EXF)
        alf = cop_user_n(cfg, rho, N_PSIC_ALF)

        assert exf.exact == 1.0 and not exf.feasible
        assert alf.feasible
        assert alf.exact == pytest.approx(sorted_gain_cdf(cfg, th.upsilon, 2))

    def test_imperfect_sic_is_worse(self, cd_config):
        for snr_db in (10.0, 20.0, 40.0):
            rho = db_to_linear(snr_db)
            assert (
                cop_user_n(cd_config, rho, N_IPSIC_EXF).exact
                >= cop_user_n(cd_config, rho, N_PSIC_EXF).exact
            )

    def test_zero_residual_power_matches_perfect_sic(self):
        cfg = make_config(omega_i_total=0.0)
        rho = 100.0

        assert cop_user_n(cfg, rho, N_IPSIC_EXF).exact == cop_user_n(
            cfg, rho, N_PSIC_EXF
        ).exact

    def test_sinr_cdf_after_perfect_sic(self, pd_config):
        rho, x = 10.0, 0.5

        assert sinr_cdf_user_n(pd_config, x, rho, SicMode.PERFECT) == pytest.approx(
            sorted_gain_cdf(pd_config, x / (rho * 0.2), 2)
        )

    def test_sinr_cdf_with_residual_interference(self, cd_config):
        rho = 100.0
        low = sinr_cdf_user_n(cd_config, 0.5, rho, SicMode.IMPERFECT)
        high = sinr_cdf_user_n(cd_config, 2.0, rho, SicMode.IMPERFECT)

        assert 0.0 < low < high < 1.0
        assert low >= sinr_cdf_user_n(cd_config, 0.5, rho, SicMode.PERFECT)


class TestPowerDomainReduction:
    """With one subcarrier every evaluator reduces to the alternating-sum closed forms."""

    CASES = 100

    def test_every_evaluator_matches_closed_form(self, faker):
        for _ in range(self.CASES):
            cfg = _power_domain_config(faker)
            rho = db_to_linear(faker.pyfloat(min_value=0.0, max_value=40.0))
            th = derive_thresholds(cfg, rho)
            assert th.tau_feasible and th.beta >= th.tau

            f_tau = _pd_cdf(cfg, th.tau, cfg.n)
            f_zeta = _pd_cdf(cfg, th.zeta, cfg.n)
            f_beta = _pd_cdf(cfg, th.beta, cfg.n)
            exf_imperfect = _pd_exf_imperfect(cfg, th)
            expected = {
                USER_M: _pd_cdf(cfg, th.tau, cfg.m),
                N_PSIC_EXF: f_beta,
                N_IPSIC_EXF: exf_imperfect,
                N_PSIC_ALF: f_zeta + f_beta - f_tau,
                N_IPSIC_ALF: f_zeta - f_tau + exf_imperfect,
            }

            for mode, value in expected.items():
                assert evaluate_cop(cfg, rho, mode).exact == pytest.approx(
                    value, abs=1e-12
                ), mode.label


class TestCopPair:
    def test_pair_combines_users(self, pd_config):
        rho = 10.0
        mode = EvalMode(target=Target.PAIR, sic=SicMode.PERFECT)
        p_m = cop_user_m(pd_config, rho).exact
        p_n = cop_user_n(pd_config, rho, mode).exact

        assert cop_pair(pd_config, rho, mode).exact == pytest.approx(
            1 - (1 - p_m) * (1 - p_n)
        )

    def test_combine_pair_saturates(self):
        assert combine_pair(1.0, 0.3) == 1.0
        assert combine_pair(0.0, 0.0) == 0.0
        assert combine_pair(0.5, 0.5) == pytest.approx(0.75)


class TestOrderingProperties:
    """Orderings every valid configuration satisfies at every SNR."""

    def test_every_mode_is_a_probability(self, cop_table):
        for values in cop_table.values():
            assert all(0.0 <= value <= 1.0 for value in values)

    def test_alternative_never_exceeds_existing(self, cop_table):
        for target in (Target.USER_N, Target.PAIR):
            for sic in SicMode.ALL:
                exf = cop_table[f"{target}-{sic}-{Formulation.EXISTING}"]
                alf = cop_table[f"{target}-{sic}-{Formulation.ALTERNATIVE}"]
                assert all(a <= e + 1e-12 for a, e in zip(alf, exf))

    def test_perfect_sic_never_exceeds_imperfect(self, cop_table):
        for target in (Target.USER_N, Target.PAIR):
            for formulation in Formulation.ALL:
                perfect = cop_table[f"{target}-{SicMode.PERFECT}-{formulation}"]
                imperfect = cop_table[f"{target}-{SicMode.IMPERFECT}-{formulation}"]
                assert all(p <= i + 1e-12 for p, i in zip(perfect, imperfect))

    def test_pair_dominates_each_user(self, cop_table):
        p_m = cop_table[Target.USER_M]
        for sic in SicMode.ALL:
            for formulation in Formulation.ALL:
                p_n = cop_table[f"{Target.USER_N}-{sic}-{formulation}"]
                pair = cop_table[f"{Target.PAIR}-{sic}-{formulation}"]
                for a, b, joint in zip(p_m, p_n, pair):
                    assert joint >= max(a, b) - 1e-12

    def test_perfect_sic_curves_never_increase(self, cop_table):
        for label, values in cop_table.items():
            if label != Target.USER_M and SicMode.IMPERFECT in label:
                continue
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:])), label


class TestAsymptotic:
    def test_far_user_matches_exact_at_high_snr(self, pd_config):
        rho = db_to_linear(50.0)
        mode = EvalMode(target=Target.USER_M)

        assert asymptotic_cop(pd_config, rho, mode) == pytest.approx(
            cop_user_m(pd_config, rho).exact, rel=1e-2
        )

    def test_near_user_perfect_sic_matches_exact_at_high_snr(self, pd_config):
        rho = db_to_linear(50.0)

        assert asymptotic_cop(pd_config, rho, N_PSIC_EXF) == pytest.approx(
            cop_user_n(pd_config, rho, N_PSIC_EXF).exact, rel=1e-2
        )

    def test_imperfect_sic_floor(self, cd_config):
        rho = db_to_linear(60.0)
        floor_low = asymptotic_cop(cd_config, db_to_linear(40.0), N_IPSIC_EXF)
        floor_high = asymptotic_cop(cd_config, rho, N_IPSIC_EXF)

        assert floor_low == pytest.approx(floor_high)
        assert floor_high == pytest.approx(
            cop_user_n(cd_config, rho, N_IPSIC_EXF).exact, rel=1e-2
        )

    def test_asymptotic_is_clamped(self, random_config):
        for snr_db in (0.0, 30.0):
            for mode in all_modes():
                value, _ = asymptotic_cop_detail(random_config, db_to_linear(snr_db), mode)
                assert 0.0 <= value <= 1.0

    def test_clamping_is_logged_at_debug_only(self, caplog):
        cfg = make_config(num_subcarriers=1, rate_m=0.5, rate_n=0.1)
        mode = EvalMode(
            target=Target.PAIR, sic=SicMode.IMPERFECT, formulation=Formulation.ALTERNATIVE
        )
        caplog.set_level(logging.DEBUG, logger="app.services.analytic_cop_service")

        cop = evaluate_cop(cfg, 1.0, mode)

        assert Flag.ASYMPTOTIC_CLAMPED in cop.flags
        assert not [r for r in caplog.records if r.levelno >= logging.WARNING]
        clamped = [r for r in caplog.records if "clamped" in r.getMessage()]
        assert len(clamped) == 1
        assert clamped[0].levelno == logging.DEBUG

    @pytest.mark.parametrize("ri_db", RI_LEVELS_DB)
    @pytest.mark.parametrize("mode", [N_IPSIC_EXF, N_IPSIC_ALF], ids=lambda m: m.label)
    def test_error_floor_matches_exact_at_high_snr(self, ri_db, mode):
        cfg = make_config(omega_i_total=db_to_linear(ri_db))
        rho = db_to_linear(60.0)

        assert asymptotic_cop(cfg, rho, mode) == pytest.approx(
            cop_user_n(cfg, rho, mode).exact, rel=1e-2
        )

    def test_cop_value_carries_asymptotic(self, pd_config):
        cop = cop_pair(pd_config, 100.0, EvalMode(target=Target.PAIR))

        assert cop.asymptotic is not None
        assert 0.0 <= cop.asymptotic <= 1.0


class TestDiversityOrder:
    def test_expected_orders(self, cd_config):
        no_ri = make_config(num_subcarriers=2, omega_i_total=0.0)

        assert expected_diversity_order(cd_config, EvalMode(target=Target.USER_M)) == 2
        assert expected_diversity_order(no_ri, N_PSIC_EXF) == 4
        assert expected_diversity_order(no_ri, N_IPSIC_EXF) == 4
        assert expected_diversity_order(cd_config, N_IPSIC_EXF) == 0
        assert expected_diversity_order(cd_config, EvalMode(target=Target.PAIR)) == 2

    def test_asymptotic_slope_is_exact(self):
        cfg = make_config(num_subcarriers=2, rate_m=1.9, rate_n=1.9, omega_i_total=0.0)
        grid = np.arange(30.0, 51.0, 2.5)

        report = fit_diversity_order(
            asymptotic_curve(cfg, N_PSIC_EXF, grid), (30.0, 50.0), min_probability=0.0
        )

        assert report.slope == pytest.approx(4.0, abs=1e-6)
        assert report.points_used == len(grid)

    def test_exact_slope_approaches_order(self):
        cfg = make_config(
            num_subcarriers=2, rate_m=1.9, rate_n=1.9, omega_i_total=0.0,
            chebyshev_nodes=100,
        )
        grid = np.arange(30.0, 51.0, 2.5)

        near = fit_diversity_order(
            exact_curve(cfg, N_PSIC_EXF, grid), (30.0, 50.0), min_probability=0.0
        )
        far = fit_diversity_order(
            exact_curve(cfg, EvalMode(target=Target.USER_M), grid),
            (30.0, 50.0),
            min_probability=0.0,
        )

        assert near.slope == pytest.approx(4.0, abs=0.15)
        assert far.slope == pytest.approx(2.0, abs=0.1)

    def test_power_domain_slopes(self):
        cfg = make_config(num_subcarriers=1)
        grid = np.arange(30.0, 45.1, 2.5)

        for mode, order in [(USER_M, 1), (N_PSIC_EXF, 2), (PAIR_PSIC_EXF, 1)]:
            report = fit_diversity_order(
                exact_curve(cfg, mode, grid), (30.0, 45.0), min_probability=0.0
            )
            assert expected_diversity_order(cfg, mode) == order
            assert report.slope == pytest.approx(order, abs=0.1 * order), mode.label

    def test_imperfect_sic_slope_vanishes(self, reference_config):
        grid = np.arange(40.0, 60.1, 2.5)

        report = fit_diversity_order(
            exact_curve(reference_config, N_IPSIC_EXF, grid),
            (40.0, 60.0),
            min_probability=0.0,
        )

        assert report.slope == pytest.approx(0.0, abs=0.1)

    def test_more_subcarriers_steepen_the_curve(self):
        grid = np.arange(30.0, 45.1, 2.5)
        for mode in (USER_M, N_PSIC_EXF):
            single, triple = (
                fit_diversity_order(
                    exact_curve(make_config(num_subcarriers=k), mode, grid),
                    (30.0, 45.0),
                    min_probability=0.0,
                ).slope
                for k in (1, 3)
            )
            assert triple > single, mode.label

    def test_residual_interference_floors_the_curve(self, cd_config):
        curve = exact_curve(cd_config, N_IPSIC_EXF, [30.0, 40.0, 50.0, 60.0])

        floor = detect_error_floor(curve)

        assert floor is not None
        assert floor == pytest.approx(curve[-1][1])

    def test_perfect_sic_curve_has_no_floor(self, pd_config):
        curve = exact_curve(pd_config, N_PSIC_EXF, [30.0, 40.0, 50.0, 60.0])

        assert detect_error_floor(curve) is None


class TestThroughput:
    def test_pairing_weights(self):
        cfg = make_config(rate_m=0.5, rate_n=0.1)
        conventional = make_config(
            rate_m=0.5, rate_n=0.1, throughput_pairing=ThroughputPairing.CONVENTIONAL
        )

        assert throughput_weights(cfg) == (0.1, 0.5)
        assert throughput_weights(conventional) == (0.5, 0.1)

    def test_from_cops(self):
        cfg = make_config(
            rate_m=0.5, rate_n=0.1, throughput_pairing=ThroughputPairing.CONVENTIONAL
        )

        assert throughput_from_cops(cfg, 0.0, 0.0) == pytest.approx(0.6)
        assert throughput_from_cops(cfg, 0.2, 0.5) == pytest.approx(0.8 * 0.5 + 0.5 * 0.1)
        assert throughput_from_cops(cfg, 1.0, 1.0) == 0.0

    def test_residual_interference_lowers_throughput(self):
        quiet = make_config(omega_i_total=db_to_linear(-30.0))
        loud = make_config(omega_i_total=db_to_linear(-20.0))
        for snr_db in np.arange(30.0, 61.0, 5.0):
            rho = db_to_linear(snr_db)
            assert throughput_delay_limited(
                loud, rho, N_IPSIC_EXF
            ) <= throughput_delay_limited(quiet, rho, N_IPSIC_EXF)

    def test_perfect_sic_reaches_sum_rate(self, reference_config):
        value = throughput_delay_limited(reference_config, db_to_linear(40.0), N_PSIC_EXF)

        assert value == pytest.approx(
            reference_config.rate_m + reference_config.rate_n, rel=1e-2
        )

    def test_saturates_at_sum_rate(self, pd_config):
        value = throughput_delay_limited(pd_config, db_to_linear(60.0), N_PSIC_EXF)

        assert value == pytest.approx(2.0, abs=1e-3)
        assert throughput_delay_limited(pd_config, db_to_linear(0.0), N_PSIC_EXF) < value


class TestFigureBehaviour:
    def test_unequal_rates_split_the_formulations(self):
        cfg = make_config(num_subcarriers=1, rate_n=0.1, rate_m=0.5)
        for snr_db in (10.0, 20.0, 30.0):
            rho = db_to_linear(snr_db)
            assert (
                cop_user_n(cfg, rho, N_PSIC_ALF).exact
                < cop_user_n(cfg, rho, N_PSIC_EXF).exact
            )

    def test_floor_grows_with_residual_interference(self):
        rho = db_to_linear(60.0)
        floors = [
            cop_user_n(make_config(omega_i_total=db_to_linear(ri_db)), rho, N_IPSIC_EXF).exact
            for ri_db in (-30.0, -25.0, -20.0)
        ]

        assert floors == sorted(floors)
        assert len(set(floors)) == 3

    def test_code_domain_throughput_beats_power_domain(self):
        cd = make_config(num_subcarriers=2)
        pd = make_config(num_subcarriers=1)
        for snr_db in (0.0, 10.0, 20.0, 30.0):
            rho = db_to_linear(snr_db)
            assert throughput_delay_limited(cd, rho, N_PSIC_EXF) >= throughput_delay_limited(
                pd, rho, N_PSIC_EXF
            )
