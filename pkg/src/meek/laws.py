"""Scaling-law parameter types and loss-vs-compute evaluation.

Time is measured in years from the epoch at which the meek budget was
state of the art. Compute is effective FLOP: physical FLOP multiplied by
the accumulated algorithmic-progress factor.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence


class GrowthFactorWarning(UserWarning):
    """A yearly growth factor below 1 (a decline scenario) was configured."""


@dataclass(frozen=True)
class ScalingLaw:
    """Compute-optimal loss curve ``L(C) = a_coeff * C**-alpha + l_irreducible``."""

    a_coeff: float = 1070.0
    alpha: float = 0.155
    l_irreducible: float = 1.7

    def __post_init__(self):
        if not self.a_coeff > 0:
            raise ValueError(f"a_coeff must be > 0, got {self.a_coeff}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.l_irreducible >= 0:
            raise ValueError(f"l_irreducible must be >= 0, got {self.l_irreducible}")

    def with_alpha(self, alpha: float) -> "ScalingLaw":
        # Exponent-only substitution; a_coeff and l_irreducible are kept.
        return ScalingLaw(self.a_coeff, alpha, self.l_irreducible)

    def reducible_from_log(self, log_compute: float) -> float:
        """Reducible loss ``a_coeff * C**-alpha`` given ``ln C``."""
        return self.a_coeff * math.exp(-self.alpha * log_compute)

    def loss_from_log(self, log_compute: float) -> float:
        return self.l_irreducible + self.reducible_from_log(log_compute)


# Chinchilla fit with the pre-Chinchilla exponent swapped in.
KAPLAN_ALPHA = 0.057


@dataclass(frozen=True)
class ShiftedPowerLaw:
    """``b_floor + a_coeff / (C + c_shift)**alpha`` (vision-transformer form)."""

    a_coeff: float = 0.26
    c_shift: float = 0.01
    alpha: float = 0.35
    b_floor: float = 0.09

    def __post_init__(self):
        if not self.a_coeff > 0:
            raise ValueError(f"a_coeff must be > 0, got {self.a_coeff}")
        if not self.c_shift >= 0:
            raise ValueError(f"c_shift must be >= 0, got {self.c_shift}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.b_floor >= 0:
            raise ValueError(f"b_floor must be >= 0, got {self.b_floor}")


@dataclass(frozen=True)
class GrowthRates:
    """Yearly multiplicative growth factors and the dollar anchors at t=0.

    ``g_h`` hardware FLOP/$, ``g_alg`` training-algorithm efficiency,
    ``g_i`` SOTA investment, ``g_inf`` inference software efficiency.
    """

    g_h: float = 1.4
    g_alg: float = 2.8
    g_i: float = 5 / 1.4
    g_inf: float = 9 / 1.4
    flop_per_dollar_t0: float = 1e17
    usd_per_token_budget: float = 1e-8

    def __post_init__(self):
        for name in ("g_h", "g_alg", "g_i", "g_inf"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
            if value < 1:
                warnings.warn(f"{name}={value} < 1 models a decline", GrowthFactorWarning, stacklevel=3)
        if not self.flop_per_dollar_t0 > 0:
            raise ValueError(f"flop_per_dollar_t0 must be > 0, got {self.flop_per_dollar_t0}")
        if not self.usd_per_token_budget > 0:
            raise ValueError(f"usd_per_token_budget must be > 0, got {self.usd_per_token_budget}")

    @property
    def shared(self) -> float:
        """Growth of effective compute per dollar, ``g_alg * g_h``."""
        return self.g_alg * self.g_h


@dataclass(frozen=True)
class InvestmentSchedule:
    """Piecewise-constant yearly growth of the compute budget.

    ``segments`` is an ordered sequence of ``(duration_years, factor)``.
    Use ``math.inf`` as the last duration for open-ended growth. Past the
    end of a finite schedule the budget stays flat.
    """

    segments: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        segs = tuple((float(d), float(g)) for d, g in self.segments)
        for i, (d, g) in enumerate(segs):
            if not d > 0:
                raise ValueError(f"segments[{i}]: duration must be > 0, got {d}")
            if math.isinf(d) and i != len(segs) - 1:
                raise ValueError(f"segments[{i}]: only the last segment may be unbounded")
            if not g > 0:
                raise ValueError(f"segments[{i}]: growth factor must be > 0, got {g}")
            if g < 1:
                warnings.warn(f"segments[{i}] factor {g} < 1 models a decline", GrowthFactorWarning, stacklevel=3)
        object.__setattr__(self, "segments", segs)

    @classmethod
    def constant(cls, factor: float) -> "InvestmentSchedule":
        return cls(((math.inf, factor),))

    @classmethod
    def unit(cls) -> "InvestmentSchedule":
        return cls()

    @classmethod
    def stagnating(cls, factor: float, years: float, after: float = 1.0) -> "InvestmentSchedule":
        """Grow at ``factor`` for ``years``, then at ``after`` forever."""
        return cls(((years, factor), (math.inf, after)))

    def log_multiplier(self, t: float) -> float:
        if t < 0:
            raise ValueError(f"t must be >= 0, got {t}")
        total, start = 0.0, 0.0
        for d, g in self.segments:
            if t <= start:
                break
            total += min(t - start, d) * math.log(g)
            start += d
        return total

    def multiplier(self, t: float) -> float:
        return _safe_exp(self.log_multiplier(t))

    def log_rate(self, t: float) -> float:
        """Right derivative of :meth:`log_multiplier` at ``t``."""
        start = 0.0
        for d, g in self.segments:
            if t < start + d:
                return math.log(g)
            start += d
        return 0.0


def _safe_exp(x: float) -> float:
    if x > 709:
        return math.inf
    return math.exp(x)


def loss_at_compute(law: ScalingLaw, compute: float) -> float:
    """Loss in nats/token of a compute-optimal model trained with ``compute`` FLOP."""
    if not compute > 0:
        raise ValueError(f"compute must be > 0, got {compute}")
    if math.isinf(compute):
        return law.l_irreducible
    return law.loss_from_log(math.log(compute))


def shifted_loss_at_compute(law: ShiftedPowerLaw, compute: float) -> float:
    if not compute >= 0:
        raise ValueError(f"compute must be >= 0, got {compute}")
    if math.isinf(compute):
        return law.b_floor
    return law.b_floor + law.a_coeff / (compute + law.c_shift) ** law.alpha


def log_effective_compute(base_dollars: float, rates: GrowthRates,
                          schedule: InvestmentSchedule, t: float) -> float:
    """Natural log of :func:`effective_compute`; never overflows."""
    if not base_dollars > 0:
        raise ValueError(f"base_dollars must be > 0, got {base_dollars}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return (math.log(base_dollars) + math.log(rates.flop_per_dollar_t0)
            + t * math.log(rates.shared) + schedule.log_multiplier(t))


def effective_compute(base_dollars: float, rates: GrowthRates,
                      schedule: InvestmentSchedule, t: float) -> float:
    """Effective training FLOP bought by ``base_dollars`` at time ``t``.

    ``base * flop_per_dollar_t0 * (g_alg*g_h)**t * schedule.multiplier(t)``.
    A unit schedule gives the meek model; ``InvestmentSchedule.constant(g_i)``
    gives the SOTA model.
    """
    return _safe_exp(log_effective_compute(base_dollars, rates, schedule, t))


DEFAULT_LAW = ScalingLaw()
VIT_LAW = ShiftedPowerLaw()
DEFAULT_RATES = GrowthRates()


def schedule_from_pairs(pairs: Sequence[Sequence[float]]) -> InvestmentSchedule:
    return InvestmentSchedule(tuple((float(d), float(g)) for d, g in pairs))
