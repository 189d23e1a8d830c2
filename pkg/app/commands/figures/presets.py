"""Curve families of the published outage and throughput figures.

Values a caption leaves open (RI level of the radius and rate figures, the
exact radius/path-loss/rate variants, the SNRs of the power-split scan) are
fixed here.
"""

from __future__ import annotations

from app.commands.figures.figure_preset import (
    FigurePreset,
    all_user_n_modes,
    perfect_and_imperfect_n,
    user_m,
    user_n,
)
from app.constants.noma import RI_LEVELS_DB, SicMode, Target
from app.numerics.units import db_to_linear
from app.schemas.sweep import SweepAxis, SweepMetric, SweepSpec
from app.schemas.system import EvalMode


def _ri_tag(ri_db: float) -> str:
    return f"ri={ri_db:g}dB"


class ResidualInterferenceFigure(FigurePreset):
    figure_number = 2
    title = "COP versus SNR for three residual-interference levels, K=2"
    overrides = {"num_subcarriers": 2}

    def curves(self, grid, trials, seed):
        snr = self.snr_grid(grid)
        families = [
            (
                self.base,
                SweepSpec(
                    grid=snr,
                    modes=(user_m(), *all_user_n_modes(SicMode.PERFECT)),
                    trials=trials,
                    seed=seed,
                ),
            )
        ]
        for ri_db in RI_LEVELS_DB:
            families.append(
                (
                    self.variant(omega_i_total=db_to_linear(ri_db)),
                    SweepSpec(
                        grid=snr,
                        modes=all_user_n_modes(SicMode.IMPERFECT),
                        trials=trials,
                        seed=seed,
                        series=_ri_tag(ri_db),
                    ),
                )
            )
        return families


class UnequalRatesFigure(FigurePreset):
    figure_number = 3
    title = "COP versus SNR with R_n < R_m, K=1"
    overrides = {
        "num_subcarriers": 1,
        "rate_n": 0.1,
        "rate_m": 0.5,
        "omega_i_total": db_to_linear(-30.0),
    }

    def curves(self, grid, trials, seed):
        modes = (
            user_m(),
            *all_user_n_modes(SicMode.PERFECT),
            *all_user_n_modes(SicMode.IMPERFECT),
        )
        spec = SweepSpec(
            grid=self.snr_grid(grid), modes=modes, trials=trials, seed=seed
        )
        return [(self.base, spec)]


class SubcarrierCountFigure(FigurePreset):
    figure_number = 4
    title = "COP versus SNR for K=3 and K=1"
    overrides = {"omega_i_total": db_to_linear(-30.0)}
    subcarrier_counts = (3, 1)

    def curves(self, grid, trials, seed):
        modes = (
            user_m(),
            *all_user_n_modes(SicMode.PERFECT),
            *all_user_n_modes(SicMode.IMPERFECT),
        )
        return [
            (
                self.variant(num_subcarriers=k),
                SweepSpec(
                    grid=self.snr_grid(grid),
                    modes=modes,
                    trials=trials,
                    seed=seed,
                    series=f"K={k}",
                ),
            )
            for k in self.subcarrier_counts
        ]


class RadiusPathLossFigure(FigurePreset):
    figure_number = 5
    title = "COP versus SNR for different disk radii and path-loss exponents, K=2"
    overrides = {"num_subcarriers": 2, "omega_i_total": db_to_linear(-30.0)}
    variants = ((2.0, 2.0), (4.0, 2.0), (2.0, 3.0))  # (radius, alpha)

    def curves(self, grid, trials, seed):
        modes = (user_m(), *perfect_and_imperfect_n())
        return [
            (
                self.variant(radius=radius, alpha=alpha),
                SweepSpec(
                    grid=self.snr_grid(grid),
                    modes=modes,
                    trials=trials,
                    seed=seed,
                    series=f"R={radius:g},alpha={alpha:g}",
                ),
            )
            for radius, alpha in self.variants
        ]


class TargetRateFigure(FigurePreset):
    figure_number = 6
    title = "COP versus SNR for different target rates, K=2"
    overrides = {"num_subcarriers": 2, "omega_i_total": db_to_linear(-30.0)}
    rates = (0.01, 0.1, 0.5)

    def curves(self, grid, trials, seed):
        modes = (user_m(), *perfect_and_imperfect_n())
        return [
            (
                self.variant(rate_m=rate, rate_n=rate),
                SweepSpec(
                    grid=self.snr_grid(grid),
                    modes=modes,
                    trials=trials,
                    seed=seed,
                    series=f"R={rate:g}",
                ),
            )
            for rate in self.rates
        ]


class FrequencyFactorFigure(FigurePreset):
    figure_number = 7
    title = "COP versus SNR with eta=1 and R_n=R_m=1 BPCU, K=1"
    overrides = {
        "num_subcarriers": 1,
        "rate_m": 1.0,
        "rate_n": 1.0,
        "eta": 1.0,
        "omega_i_total": db_to_linear(-30.0),
    }

    def curves(self, grid, trials, seed):
        modes = (
            user_m(),
            *all_user_n_modes(SicMode.PERFECT),
            *all_user_n_modes(SicMode.IMPERFECT),
        )
        spec = SweepSpec(
            grid=self.snr_grid(grid), modes=modes, trials=trials, seed=seed
        )
        return [(self.base, spec)]


class PowerSplitFigure(FigurePreset):
    figure_number = 8
    title = "Pair COP versus the power-split factor theta at several SNRs, pSIC"
    overrides = {"rate_m": 0.01, "rate_n": 0.01}
    theta_grid = tuple(round(0.05 * i, 2) for i in range(1, 20))
    snr_levels_db = (0.0, 10.0, 20.0, 30.0)

    def curves(self, grid, trials, seed):
        mode = EvalMode(target=Target.PAIR, sic=SicMode.PERFECT)
        return [
            (
                self.base,
                SweepSpec(
                    axis=SweepAxis.THETA,
                    grid=self.theta_grid,
                    modes=(mode,),
                    trials=trials,
                    seed=seed,
                    snr_db=snr_db,
                    series=f"snr={snr_db:g}dB",
                ),
            )
            for snr_db in (grid or self.snr_levels_db)
        ]


class ThroughputFigure(FigurePreset):
    figure_number = 9
    title = "Delay-limited throughput versus SNR, CD (K=2) and PD (K=1)"
    metric = SweepMetric.THROUGHPUT
    subcarrier_counts = (2, 1)
    ri_levels_db = (-30.0, -20.0)

    def curves(self, grid, trials, seed):
        snr = self.snr_grid(grid)
        families = []
        for k in self.subcarrier_counts:
            families.append(
                (
                    self.variant(num_subcarriers=k),
                    SweepSpec(
                        grid=snr,
                        modes=(user_n(SicMode.PERFECT),),
                        trials=trials,
                        seed=seed,
                        metric=SweepMetric.THROUGHPUT,
                        series=f"K={k}",
                    ),
                )
            )
            for ri_db in self.ri_levels_db:
                families.append(
                    (
                        self.variant(
                            num_subcarriers=k, omega_i_total=db_to_linear(ri_db)
                        ),
                        SweepSpec(
                            grid=snr,
                            modes=(user_n(SicMode.IMPERFECT),),
                            trials=trials,
                            seed=seed,
                            metric=SweepMetric.THROUGHPUT,
                            series=f"K={k},{_ri_tag(ri_db)}",
                        ),
                    )
                )
        return families
