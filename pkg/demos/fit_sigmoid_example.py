"""
Fitting score against loss
==========================

Generate noisy benchmark scores from a known curve, fit them back, and
check a held-out model.
"""
from pathlib import Path

import numpy as np

from meek import LossScorePoint, SigmoidFit, fit_sigmoid, sigmoid_score
from meek.svg import write_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

true = SigmoidFit(0.55, -6.0, 2.1, 0.25)
rng = np.random.default_rng(7)
loss = np.sort(rng.uniform(1.7, 2.9, 25))
score = np.clip(sigmoid_score(true, loss) + 0.02 * rng.standard_normal(loss.size), 0, 1)
pts = [LossScorePoint(float(x), float(y)) for x, y in zip(loss, score)]

held = pts.pop(12)
res = fit_sigmoid(pts)
print("fitted ", {k: round(v, 3) for k, v in res.fit.as_dict().items()})
print("true   ", true.as_dict())
print(f"rmse {res.rmse:.4f}, held-out error {sigmoid_score(res.fit, held.loss) - held.score:+.4f}")

xs = np.linspace(1.7, 2.9, 100)
write_chart(out / "sigmoid_fit.svg",
            {"fit": list(zip(xs, sigmoid_score(res.fit, xs))),
             "data": [(p.loss, p.score) for p in pts]},
            title="Score vs loss", xlabel="loss", ylabel="score")
