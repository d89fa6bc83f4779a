"""Zero-shot inference inequality at a fixed $/token budget.

The meek user serves the largest model the budget affords. Its quality is
taken to equal a compute-optimal model of the same effective size, so its
compute-equivalent is ``kappa * P_eff(t)**2 * g_alg**t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .laws import GrowthRates, ScalingLaw
from .search import first_nonpositive
from .trajectory import ScenarioConfig

# 6 FLOP per parameter per training token, 20 tokens per parameter.
CHINCHILLA_KAPPA = 120.0
# Forward pass costs ~2 FLOP per parameter per token.
PARAMS_PER_FLOP = 0.5


@dataclass(frozen=True)
class InferenceConfig:
    sota: ScenarioConfig = field(default_factory=ScenarioConfig)
    params_per_flop_t0: float = PARAMS_PER_FLOP
    chinchilla_kappa: float = CHINCHILLA_KAPPA
    include_alg: bool = True

    def __post_init__(self):
        if not self.params_per_flop_t0 > 0:
            raise ValueError(f"params_per_flop_t0 must be > 0, got {self.params_per_flop_t0}")
        if not self.chinchilla_kappa > 0:
            raise ValueError(f"chinchilla_kappa must be > 0, got {self.chinchilla_kappa}")

    @property
    def law(self) -> ScalingLaw:
        return self.sota.law

    @property
    def rates(self) -> GrowthRates:
        return self.sota.rates


@dataclass(frozen=True)
class InferencePoint:
    t: float
    meek_inference_loss: float
    sota_loss: float
    delta: float
    clamped: bool

    def as_record(self) -> dict:
        return {"t": self.t, "meek_inference_loss": self.meek_inference_loss,
                "sota_loss": self.sota_loss, "delta": self.delta, "clamped": self.clamped}


def _check_t(t: float):
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")


def log_effective_params(cfg: InferenceConfig, t: float) -> float:
    _check_t(t)
    r = cfg.rates
    return (math.log(r.usd_per_token_budget) + math.log(r.flop_per_dollar_t0)
            + math.log(cfg.params_per_flop_t0) + t * math.log(r.g_h * r.g_inf))


def effective_params(cfg: InferenceConfig, t: float) -> float:
    """Effective parameter count servable at the budget; grows ``g_h*g_inf`` per year."""
    return math.exp(log_effective_params(cfg, t))


def log_compute_equivalent(cfg: InferenceConfig, t: float) -> float:
    log_c = math.log(cfg.chinchilla_kappa) + 2 * log_effective_params(cfg, t)
    if cfg.include_alg:
        log_c += t * math.log(cfg.rates.g_alg)
    return log_c


def unclamped_meek_inference_loss(cfg: InferenceConfig, t: float) -> float:
    return cfg.law.loss_from_log(log_compute_equivalent(cfg, t))


def _sota_loss(cfg: InferenceConfig, t: float) -> float:
    sota = cfg.sota
    if not cfg.include_alg:
        # Factor algorithmic progress out of the SOTA curve as well.
        sota = replace(sota, rates=replace(sota.rates, g_alg=1.0))
    return sota.sota_loss(t)


def meek_inference_loss(cfg: InferenceConfig, t: float) -> float:
    """Loss of the servable model, never below the SOTA loss at the same time."""
    return max(unclamped_meek_inference_loss(cfg, t), _sota_loss(cfg, t))


def inference_loss_difference(cfg: InferenceConfig, t: float) -> float:
    """``max(meek inference loss - SOTA loss, 0)``."""
    return max(unclamped_meek_inference_loss(cfg, t) - _sota_loss(cfg, t), 0.0)


def inference_point(cfg: InferenceConfig, t: float) -> InferencePoint:
    raw = unclamped_meek_inference_loss(cfg, t)
    sota = _sota_loss(cfg, t)
    return InferencePoint(float(t), max(raw, sota), sota, max(raw - sota, 0.0), raw <= sota)


def inference_series(cfg: InferenceConfig) -> list[InferencePoint]:
    return [inference_point(cfg, float(t)) for t in cfg.sota.grid()]


def crossover_time(cfg: InferenceConfig, horizon: float | None = None) -> float | None:
    """First time the meek user can serve a SOTA-quality model.

    Bisection to 1e-9 years on ``unclamped - SOTA``. Returns 0.0 when the
    clamp is already active at t=0 and None when there is no crossover
    within ``horizon`` (defaults to the scenario horizon).
    """
    if horizon is None:
        horizon = cfg.sota.horizon
    return first_nonpositive(
        lambda t: unclamped_meek_inference_loss(cfg, t) - _sota_loss(cfg, t),
        0.0, horizon, grid_step=min(0.25, horizon), tol=1e-9)
