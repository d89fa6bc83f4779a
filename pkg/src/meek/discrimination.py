"""How many tokens an observer needs to tell two language models apart.

Tokens are drawn i.i.d. from a base distribution ``p0``. Each token adds
``log(pA(x) / pB(x)) / slowdown`` to the running evidence, and the test
stops at Wald's thresholds. The analytic counts come from Wald's identity
and ignore threshold overshoot. They are exact only when the evidence
walk lands on the thresholds.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .trajectory import ScenarioConfig, loss_difference

# Boundary comparisons absorb float noise from summing lattice steps.
_EDGE = 1e-9


class NoDecisionError(RuntimeError):
    """The evidence walk hit the token cap without crossing a threshold."""

    def __init__(self, tokens_used: int):
        super().__init__(f"no decision after {tokens_used} tokens")
        self.tokens_used = tokens_used


@dataclass(frozen=True)
class SprtConfig:
    alpha_err: float = 0.05
    beta_err: float = 0.05
    slowdown: float = 1.0

    def __post_init__(self):
        for name in ("alpha_err", "beta_err"):
            v = getattr(self, name)
            if not 0 < v < 0.5:
                raise ValueError(f"{name} must lie in (0, 0.5), got {v}")
        if not self.slowdown >= 1:
            raise ValueError(f"slowdown must be >= 1, got {self.slowdown}")

    @property
    def threshold_a(self) -> float:
        return (1 - self.beta_err) / self.alpha_err

    @property
    def threshold_b(self) -> float:
        return self.beta_err / (1 - self.alpha_err)


class TokenDistribution:
    """Categorical distribution over a finite token alphabet."""

    def __init__(self, probabilities):
        p = np.asarray(probabilities, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probabilities must be a non-empty 1-D sequence")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite and >= 0")
        if abs(p.sum() - 1) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {p.sum()!r}")
        p.setflags(write=False)
        self.probabilities = p

    def __len__(self):
        return self.probabilities.size

    def __repr__(self):
        return f"TokenDistribution(size={len(self)})"

    @classmethod
    def normalized(cls, weights) -> "TokenDistribution":
        w = np.asarray(weights, dtype=float)
        return cls(w / w.sum())


def _as_dist(p) -> TokenDistribution:
    return p if isinstance(p, TokenDistribution) else TokenDistribution(p)


# --- analytic -------------------------------------------------------------------

def symmetric_numerator(alpha_err: float) -> float:
    """``(1-a) ln((1-a)/a) + a ln(a/(1-a))``, the expected final evidence."""
    r = math.log((1 - alpha_err) / alpha_err)
    return (1 - 2 * alpha_err) * r


def expected_tokens_symmetric(delta_l: float, cfg: SprtConfig) -> float:
    """Expected tokens to pick the better model when both error rates are equal."""
    if not delta_l > 0:
        raise ValueError(f"delta_l must be > 0, got {delta_l}")
    if cfg.alpha_err != cfg.beta_err:
        raise ValueError("symmetric form needs alpha_err == beta_err; use expected_tokens_general")
    # slowdown applied last so scaling it is exact in floating point
    return symmetric_numerator(cfg.alpha_err) / delta_l * cfg.slowdown


def expected_tokens_general(delta_l: float, cfg: SprtConfig, hypothesis: str = "A") -> float:
    """Expected tokens under ``hypothesis`` ``"A"`` (A better) or ``"B"``.

    Under B the expected final evidence is negative, as is the drift, so
    the ratio of magnitudes is returned.
    """
    if delta_l == 0:
        raise ValueError("delta_l must be non-zero")
    log_a = math.log(cfg.threshold_a)
    log_b = math.log(cfg.threshold_b)
    if hypothesis == "A":
        num = (1 - cfg.beta_err) * log_a + cfg.beta_err * log_b
    elif hypothesis == "B":
        num = (1 - cfg.alpha_err) * log_b + cfg.alpha_err * log_a
    else:
        raise ValueError(f"hypothesis must be 'A' or 'B', got {hypothesis!r}")
    return abs(num) / abs(delta_l) * cfg.slowdown


def kl_difference(p0, pA, pB) -> float:
    """``E_p0[log pA/pB] = KL(p0||pB) - KL(p0||pA)``; positive when A is better."""
    p0, pA, pB = (_as_dist(p).probabilities for p in (p0, pA, pB))
    m = p0 > 0
    return float(np.sum(p0[m] * (np.log(pA[m]) - np.log(pB[m]))))


# --- simulation -------------------------------------------------------------------

@dataclass(frozen=True)
class SprtOutcome:
    decision: str
    tokens_used: int
    infinite_evidence: bool = False
    final_evidence: float = 0.0


class _Walk:
    """Precomputed sampler and per-token evidence for one (p0, pA, pB, cfg)."""

    def __init__(self, p0, pA, pB, cfg: SprtConfig):
        p0, pA, pB = (_as_dist(p).probabilities for p in (p0, pA, pB))
        if not len(p0) == len(pA) == len(pB):
            raise ValueError("distributions must share one alphabet")
        support = p0 > 0
        if np.any(support & (pA == 0) & (pB == 0)):
            raise ValueError("pA and pB both assign zero probability to a token p0 can emit")
        with np.errstate(divide="ignore"):
            llr = np.log(pA) - np.log(pB)
        llr[~support] = 0.0
        self.step = llr / cfg.slowdown
        self.cdf = np.cumsum(p0)
        self.cdf[-1] = 1.0
        self.log_a = math.log(cfg.threshold_a)
        self.log_b = math.log(cfg.threshold_b)
        self.dead = bool(np.all(self.step[support] == 0))
        # first block sized to cover most runs in one draw
        finite = np.isfinite(self.step) & support
        drift = abs(float(np.sum(p0[finite] * self.step[finite])))
        guess = (self.log_a - self.log_b) / drift if drift > 0 else 16.0
        self.block = int(min(2 * guess + 16, 1 << 20))

    def run(self, rng: np.random.Generator, max_tokens: int) -> SprtOutcome:
        if self.dead:
            raise NoDecisionError(max_tokens)
        total, used, block = 0.0, 0, self.block
        while used < max_tokens:
            n = min(block, max_tokens - used)
            x = np.searchsorted(self.cdf, rng.random(n), side="right")
            path = total + np.cumsum(self.step[x])
            hit = np.flatnonzero((path >= self.log_a - _EDGE) | (path <= self.log_b + _EDGE))
            if hit.size:
                i = int(hit[0])
                z = float(path[i])
                return SprtOutcome("A" if z > 0 else "B", used + i + 1, math.isinf(z), z)
            total = float(path[-1])
            used += n
            block *= 2
        raise NoDecisionError(used)


def run_rng(seed, run_index: int | None = None) -> np.random.Generator:
    """Per-run generator keyed by ``(seed, run_index)``."""
    key = [int(seed)] if run_index is None else [int(seed), int(run_index)]
    return np.random.default_rng(np.random.SeedSequence(key))


def sprt_simulate(p0, pA, pB, cfg: SprtConfig, seed: int, run_index: int | None = None,
                  max_tokens: int = 10**7) -> SprtOutcome:
    """Run one sequential test on tokens sampled from ``p0``.

    Deterministic given ``(seed, run_index)``. Raises
    :class:`NoDecisionError` when ``max_tokens`` is reached.
    """
    return _Walk(p0, pA, pB, cfg).run(run_rng(seed, run_index), max_tokens)


@dataclass(frozen=True)
class MonteCarloReport:
    mean_tokens: float
    ci95: float
    n_runs: int
    false_rate: float
    capped_runs: int
    infinite_evidence_runs: int = 0

    def as_dict(self) -> dict:
        return {"mean_tokens": self.mean_tokens, "ci95": self.ci95, "n_runs": self.n_runs,
                "false_rate": self.false_rate, "capped_runs": self.capped_runs}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def monte_carlo_expected_tokens(p0, pA, pB, cfg: SprtConfig, runs: int, seed: int,
                                max_tokens: int = 10**7) -> MonteCarloReport:
    """Mean stopping time over independent runs seeded ``(seed, i)``.

    A run is a false decision when it picks the model with the higher
    cross-entropy against ``p0``. Capped runs are excluded from the mean
    and the false rate.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    walk = _Walk(p0, pA, pB, cfg)
    truth = "A" if kl_difference(p0, pA, pB) > 0 else "B"
    tokens, wrong, capped, inf_runs = [], 0, 0, 0
    for i in range(runs):
        try:
            out = walk.run(run_rng(seed, i), max_tokens)
        except NoDecisionError:
            capped += 1
            continue
        tokens.append(out.tokens_used)
        wrong += out.decision != truth
        inf_runs += out.infinite_evidence
    n = len(tokens)
    if n == 0:
        return MonteCarloReport(math.nan, math.nan, runs, math.nan, capped, 0)
    mean = math.fsum(tokens) / n
    if n > 1:
        var = math.fsum((t - mean) ** 2 for t in tokens) / (n - 1)
        half = 1.959963984540054 * math.sqrt(var / n)
    else:
        half = math.inf
    return MonteCarloReport(mean, half, runs, wrong / n, capped, inf_runs)


def lattice_pair(steps: int, cfg: SprtConfig, alphabet: int = 2,
                 rng: np.random.Generator | None = None):
    """Model pair whose evidence walk moves in +-h with ``steps*h = ln A``.

    With symmetric error rates the walk lands exactly on both thresholds,
    so Wald's identity holds with no overshoot. Returns ``(pA, pB)``; use
    ``pA`` as ``p0``. Tokens are split at random over ``alphabet`` symbols
    without changing the walk.
    """
    if cfg.alpha_err != cfg.beta_err or cfg.slowdown != 1:
        raise ValueError("lattice pairs need symmetric errors and slowdown 1")
    h = math.log(cfg.threshold_a) / steps
    r = math.exp(h) / (math.exp(h) + 1)
    if alphabet < 2:
        raise ValueError("alphabet must be >= 2")
    rng = rng or np.random.default_rng(0)
    up = rng.integers(1, alphabet)
    w_up = rng.dirichlet(np.ones(up))
    w_dn = rng.dirichlet(np.ones(alphabet - up))
    pA = np.concatenate([r * w_up, (1 - r) * w_dn])
    pB = np.concatenate([r * math.exp(-h) * w_up, (1 - r) * math.exp(h) * w_dn])
    return TokenDistribution.normalized(pA), TokenDistribution.normalized(pB)


def random_pair(delta_l: float, alphabet: int = 256, rng: np.random.Generator | None = None,
                concentration: float = 1.0):
    """Generic model pair with ``KL(pA || pB) = delta_l``.

    ``pA`` is Dirichlet; ``pB`` is ``pA`` exponentially tilted along a
    Gaussian direction, with the tilt solved for the target divergence.
    Returns ``(pA, pB)``; use ``pA`` as ``p0``.
    """
    if not delta_l > 0:
        raise ValueError(f"delta_l must be > 0, got {delta_l}")
    rng = rng or np.random.default_rng(0)
    pA = rng.dirichlet(np.full(alphabet, concentration))
    pA = np.maximum(pA, 1e-300)
    pA /= pA.sum()
    z = rng.standard_normal(alphabet)

    def tilt(tau):
        w = np.log(pA) + tau * z
        w -= w.max()
        q = np.exp(w)
        return q / q.sum()

    def gap(tau):
        return float(np.sum(pA * (np.log(pA) - np.log(tilt(tau))))) - delta_l

    hi = 1.0
    while gap(hi) < 0:
        hi *= 2
        if hi > 1e4:
            raise ValueError(f"cannot reach KL {delta_l} with this draw")
    tau = brentq(gap, 0.0, hi, xtol=1e-14, rtol=1e-14)
    return TokenDistribution.normalized(pA), TokenDistribution.normalized(tilt(tau))


def discrimination_series(cfg_scenario: ScenarioConfig,
                          cfg_sprt: SprtConfig) -> list[tuple[float, float]]:
    """Expected tokens to tell SOTA from meek over time (``inf`` where equal)."""
    out = []
    for t in cfg_scenario.grid():
        d = loss_difference(cfg_scenario, float(t))
        n = expected_tokens_general(d, cfg_sprt, "A") if d > 0 else math.inf
        out.append((float(t), n))
    return out


def tokens_vs_loss_difference(delta_ls: Sequence[float], cfg: SprtConfig) -> list[tuple[float, float]]:
    return [(float(d), expected_tokens_general(d, cfg, "A")) for d in delta_ls]
