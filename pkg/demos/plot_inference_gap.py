"""
Serving on a fixed per-token budget
===================================

At a fixed price per token the largest servable model grows about 9x per
year. Its loss is floored by the frontier's, and that floor is reached
well before the training gap fades.
"""
from pathlib import Path

from meek import InferenceConfig, crossover_time, effective_params
from meek.inference import inference_series
from meek.svg import write_chart
from meek.trajectory import trajectory_series

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

cfg = InferenceConfig()
print(f"servable params at t=0: {effective_params(cfg, 0):.3g}")
print(f"crossover after {crossover_time(cfg):.4f} years")

inf = inference_series(cfg)
train = trajectory_series(cfg.sota)
for p, q in list(zip(inf, train))[:6]:
    print(f"t={p.t:4g}  inference {p.delta:.4f}  training {q.delta:.4f}  clamped={p.clamped}")

write_chart(out / "inference_gap.svg",
            {"inference": [(p.t, p.delta) for p in inf],
             "training": [(p.t, p.delta) for p in train]},
            title="Loss gap: serving vs training", xlabel="years", ylabel="nats/token")
