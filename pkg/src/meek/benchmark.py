"""Loss to benchmark-score mapping.

Scores are fractions in [0, 1]. Fitted sigmoids are constrained to be
non-increasing in loss: the slope is stored as ``k < 0`` and the amplitude
is positive, so ``b`` is the high-loss floor and ``b + amplitude`` the
low-loss ceiling.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares
from scipy.special import expit

from .trajectory import ScenarioConfig


class InsufficientDataError(ValueError):
    pass


class SigmoidFitError(RuntimeError):
    """The optimizer failed from every start; ``best`` holds the best-so-far fit."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class SigmoidFit:
    amplitude: float
    k: float
    x0: float
    b: float

    @property
    def ceiling(self) -> float:
        return max(self.b, self.b + self.amplitude)

    def as_dict(self) -> dict:
        return {"amplitude": self.amplitude, "k": self.k, "x0": self.x0, "b": self.b}


@dataclass(frozen=True)
class LossScorePoint:
    loss: float
    score: float
    weight: float = 1.0

    def __post_init__(self):
        if not 0 <= self.score <= 1:
            raise ValueError(f"score must lie in [0, 1], got {self.score}")
        if not self.weight > 0:
            raise ValueError(f"weight must be > 0, got {self.weight}")


@dataclass(frozen=True)
class SigmoidFitResult:
    fit: SigmoidFit
    rmse: float
    n_points: int
    starts_converged: int

    def as_dict(self) -> dict:
        return {**self.fit.as_dict(), "rmse": self.rmse, "n_points": self.n_points}


def sigmoid_score(fit: SigmoidFit, loss):
    """``amplitude / (1 + exp(-k (loss - x0))) + b``; works on scalars and arrays."""
    z = -fit.k * (np.asarray(loss, dtype=float) - fit.x0)
    out = fit.amplitude * expit(-z) + fit.b
    return float(out) if np.ndim(out) == 0 else out


def p_task_score(fit: SigmoidFit, loss, p: int):
    """Success probability of a task needing ``p`` independent correct steps."""
    if int(p) != p or p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    return sigmoid_score(fit, loss) ** int(p)


# --- fitting -----------------------------------------------------------------

def _unpack(theta) -> SigmoidFit:
    log_amp, log_slope, x0, b = theta
    return SigmoidFit(math.exp(log_amp), -math.exp(log_slope), float(x0), float(b))


def _starts(loss: np.ndarray, score: np.ndarray) -> list[np.ndarray]:
    span = max(np.ptp(loss), 1e-12)
    amp = max(np.ptp(score), 1e-3)
    floor = float(score.min())
    x0s = [np.median(loss), np.quantile(loss, 0.25), np.quantile(loss, 0.75), loss.mean()]
    slopes = [4.0 / span, 16.0 / span]
    return [np.array([math.log(amp), math.log(s), x, floor]) for s in slopes for x in x0s]


def fit_sigmoid(points: Sequence[LossScorePoint], max_nfev: int = 2000) -> SigmoidFitResult:
    """Weighted least-squares sigmoid fit, non-increasing in loss.

    Levenberg-Marquardt from 8 deterministic starts; the lowest-cost
    converged solution wins.
    """
    points = list(points)
    if len(points) < 4:
        raise InsufficientDataError(f"need at least 4 points, got {len(points)}")
    loss = np.array([p.loss for p in points], dtype=float)
    score = np.array([p.score for p in points], dtype=float)
    sw = np.sqrt(np.array([p.weight for p in points], dtype=float))
    if len(np.unique(loss)) < 3:
        raise InsufficientDataError("need at least 3 distinct loss values")

    def residuals(theta):
        fit = _unpack(theta)
        return sw * (sigmoid_score(fit, loss) - score)

    best = None
    n_ok = 0
    for theta0 in _starts(loss, score):
        try:
            res = least_squares(residuals, theta0, method="lm", xtol=1e-15,
                                ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
        except (ValueError, OverflowError, FloatingPointError):
            continue
        if not np.all(np.isfinite(res.x)):
            continue
        ok = res.status > 0
        n_ok += ok
        # prefer converged solutions, then lower cost
        key = (not ok, res.cost)
        if best is None or key < best[0]:
            best = (key, res)
    if best is None or best[0][0]:
        fit = None if best is None else _unpack(best[1].x)
        raise SigmoidFitError("sigmoid fit did not converge from any start", best=fit)
    res = best[1]
    fit = _unpack(res.x)
    r = sigmoid_score(fit, loss) - score
    w = sw ** 2
    rmse = math.sqrt(float(np.sum(w * r * r) / np.sum(w)))
    return SigmoidFitResult(fit, rmse, len(points), n_ok)


# --- parametric loss ------------------------------------------------------------

@dataclass(frozen=True)
class ParametricLoss:
    """``e + a_n / N**alpha_n + b_d / D**beta_d`` (parameters N, training tokens D)."""

    e_irreducible: float = 1.69
    a_n: float = 406.4
    alpha_n: float = 0.34
    b_d: float = 410.7
    beta_d: float = 0.28

    def __post_init__(self):
        for name in ("a_n", "alpha_n", "b_d", "beta_d"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


CHINCHILLA_PARAMETRIC = ParametricLoss()


def loss_from_params_tokens(pl: ParametricLoss, n_params: float, d_tokens: float) -> float:
    if not n_params > 0:
        raise ValueError(f"n_params must be > 0, got {n_params}")
    if not d_tokens > 0:
        raise ValueError(f"d_tokens must be > 0, got {d_tokens}")
    return pl.e_irreducible + pl.a_n * n_params ** -pl.alpha_n + pl.b_d * d_tokens ** -pl.beta_d


# --- data ingestion ---------------------------------------------------------------

def read_loss_score_csv(text: str, score_scale: float = 1.0,
                        parametric: ParametricLoss = CHINCHILLA_PARAMETRIC) -> list[LossScorePoint]:
    """Parse ``model,loss,score[,weight]`` or ``model,params,tokens,score[,weight]``.

    Scores are divided by ``score_scale`` (use 100 for percentages).
    Errors carry the 1-based line number.
    """
    reader = csv.DictReader(io.StringIO(text))
    cols = set(reader.fieldnames or ())
    if "score" not in cols or not ({"loss"} <= cols or {"params", "tokens"} <= cols):
        raise ValueError("header must contain score and either loss or params,tokens; "
                         f"got {sorted(cols)}")
    points = []
    for row in reader:
        line = reader.line_num
        try:
            if row.get("loss") not in (None, ""):
                loss = float(row["loss"])
            else:
                loss = loss_from_params_tokens(parametric, float(row["params"]), float(row["tokens"]))
            weight = float(row["weight"]) if row.get("weight") not in (None, "") else 1.0
            points.append(LossScorePoint(loss, float(row["score"]) / score_scale, weight))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"line {line}: {exc}") from None
    return points


# --- gap series -------------------------------------------------------------------

def benchmark_gap_series(cfg: ScenarioConfig, fit: SigmoidFit,
                         p_values: Iterable[int]) -> dict[int, list[tuple[float, float]]]:
    """SOTA-minus-meek p-step score gap on the scenario's time grid."""
    ts = cfg.grid()
    meek = np.array([cfg.meek_loss(t) for t in ts])
    sota = np.array([cfg.sota_loss(t) for t in ts])
    out = {}
    for p in p_values:
        gap = p_task_score(fit, sota, p) - p_task_score(fit, meek, p)
        out[int(p)] = [(float(t), float(g)) for t, g in zip(ts, np.atleast_1d(gap))]
    return out


def peak(series: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """(time, value) of the largest value in a ``(t, value)`` series."""
    i = max(range(len(series)), key=lambda j: series[j][1])
    return series[i]
