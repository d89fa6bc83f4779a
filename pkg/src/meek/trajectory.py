"""SOTA-vs-meek training loss trajectories and the peak-advantage time."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .laws import (DEFAULT_LAW, DEFAULT_RATES, GrowthRates, InvestmentSchedule,
                   ScalingLaw, log_effective_compute)
from .search import grid_bracketed_max


@dataclass(frozen=True)
class ScenarioConfig:
    """One meek actor with a flat dollar budget against one SOTA actor.

    When ``sota_schedule`` is None the SOTA budget grows at ``rates.g_i``
    per year forever.
    """

    law: ScalingLaw = DEFAULT_LAW
    rates: GrowthRates = DEFAULT_RATES
    meek_budget: float = 1000.0
    sota_budget_t0: float = 1000.0
    sota_schedule: InvestmentSchedule | None = None
    horizon: float = 20.0
    step: float = 1.0

    def __post_init__(self):
        if not self.meek_budget > 0:
            raise ValueError(f"meek_budget must be > 0, got {self.meek_budget}")
        if not self.sota_budget_t0 > 0:
            raise ValueError(f"sota_budget_t0 must be > 0, got {self.sota_budget_t0}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if not 0 < self.step <= self.horizon:
            raise ValueError(f"step must lie in (0, horizon], got {self.step}")

    @property
    def schedule(self) -> InvestmentSchedule:
        if self.sota_schedule is None:
            return InvestmentSchedule.constant(self.rates.g_i)
        return self.sota_schedule

    def log_meek_compute(self, t: float) -> float:
        return log_effective_compute(self.meek_budget, self.rates, InvestmentSchedule.unit(), t)

    def log_sota_compute(self, t: float) -> float:
        return log_effective_compute(self.sota_budget_t0, self.rates, self.schedule, t)

    def meek_loss(self, t: float) -> float:
        return self.law.loss_from_log(self.log_meek_compute(t))

    def sota_loss(self, t: float) -> float:
        return self.law.loss_from_log(self.log_sota_compute(t))

    def grid(self) -> np.ndarray:
        n = int(math.floor(self.horizon / self.step + 1e-9))
        return np.arange(n + 1) * self.step


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    loss_meek: float
    loss_sota: float
    delta: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", self.loss_meek - self.loss_sota)

    def as_record(self) -> dict:
        return {"t": self.t, "loss_meek": self.loss_meek,
                "loss_sota": self.loss_sota, "delta": self.delta}


def loss_difference(config: ScenarioConfig, t: float) -> float:
    """Meek loss minus SOTA loss at ``t``; the irreducible term cancels.

    Negative when the SOTA side has less effective compute (no clamp).
    """
    law = config.law
    log_m = config.log_meek_compute(t)
    gap = config.log_sota_compute(t) - log_m
    # R_m - R_s == R_m * (1 - exp(-alpha*gap)), free of cancellation
    return law.reducible_from_log(log_m) * -math.expm1(-law.alpha * gap)


def log_loss_difference(config: ScenarioConfig, t: float) -> float:
    """``ln`` of :func:`loss_difference`, without cancellation; ``-inf`` when <= 0."""
    log_m = config.log_meek_compute(t)
    gap = config.log_sota_compute(t) - log_m
    if gap <= 0:
        return -math.inf
    law = config.law
    return math.log(law.a_coeff) - law.alpha * log_m + math.log(-math.expm1(-law.alpha * gap))


def _log_gap(config: ScenarioConfig, t: float) -> float:
    # ln(SOTA compute / meek compute) without the ~ln(1e20) offset
    return (math.log(config.sota_budget_t0 / config.meek_budget)
            + config.schedule.log_multiplier(t))


def _peak_objective(config: ScenarioConfig, t: float) -> float:
    # log_loss_difference minus its t-independent part
    gap = _log_gap(config, t)
    if gap <= 0:
        return -math.inf
    alpha = config.law.alpha
    return -alpha * t * math.log(config.rates.shared) + math.log(-math.expm1(-alpha * gap))


def _peak_slope(config: ScenarioConfig, t: float) -> float:
    gap = _log_gap(config, t)
    if gap <= 0:
        return math.inf
    alpha = config.law.alpha
    return alpha * (config.schedule.log_rate(t) / math.expm1(alpha * gap)
                    - math.log(config.rates.shared))


def inflection_time(rates: GrowthRates, alpha: float) -> float:
    """Closed-form time of the peak loss difference under constant ``g_i``.

    Independent of the starting budget and of the law's coefficient.
    """
    shared = rates.g_h * rates.g_alg
    if not shared > 1:
        raise ValueError(f"g_h*g_alg must be > 1, got {shared}")
    if not rates.g_i > 1:
        raise ValueError(f"g_i={rates.g_i} <= 1: the loss difference never peaks")
    ln_shared = math.log(shared)
    ln_gi = math.log(rates.g_i)
    return math.log((ln_shared + ln_gi) / ln_shared) / (alpha * ln_gi)


def numeric_peak_time(config: ScenarioConfig, hi: float = 100.0) -> float:
    """Argmax of :func:`loss_difference` by grid bracketing + golden section.

    The golden-section answer is polished by bisecting the sign of the
    analytic slope, since a value-based search cannot resolve a flat peak
    much below sqrt(machine eps).
    """
    t = grid_bracketed_max(lambda t: _peak_objective(config, t), 0.0, hi,
                           grid_step=0.25, tol=1e-8)
    a, b = max(t - 0.25, 0.0), t + 0.25
    if not (_peak_slope(config, a) > 0 > _peak_slope(config, b)):
        return t
    while b - a > 1e-12 * max(1.0, b):
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        if _peak_slope(config, mid) > 0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def trajectory_series(config: ScenarioConfig) -> list[TrajectoryPoint]:
    return [TrajectoryPoint(float(t), config.meek_loss(t), config.sota_loss(t))
            for t in config.grid()]


def growth_sweep(config: ScenarioConfig,
                 g_i_values: Iterable[float]) -> dict[float, list[TrajectoryPoint]]:
    """One trajectory per constant SOTA investment growth factor."""
    out = {}
    for g in g_i_values:
        g = float(g)
        if not g > 0:
            raise ValueError(f"g_i must be > 0, got {g}")
        cfg = replace(config, rates=replace(config.rates, g_i=g),
                      sota_schedule=InvestmentSchedule.constant(g))
        out[g] = trajectory_series(cfg)
    return out


def capital_sweep(config: ScenarioConfig,
                  sota_budgets_t0: Iterable[float]) -> dict[float, list[TrajectoryPoint]]:
    """One trajectory per initial SOTA budget; the meek budget is held."""
    return {float(b): trajectory_series(replace(config, sota_budget_t0=float(b)))
            for b in sota_budgets_t0}


def schedule_sweep(config: ScenarioConfig,
                   schedules: dict[str, InvestmentSchedule]) -> dict[str, list[TrajectoryPoint]]:
    """Trajectories under alternative SOTA investment schedules (e.g. stagnation)."""
    return {name: trajectory_series(replace(config, sota_schedule=s))
            for name, s in schedules.items()}
