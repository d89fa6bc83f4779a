"""
Head starts and stalled spending
================================

Two variations on the training scenario: a larger starting budget for the
frontier, and frontier budgets that stop growing after a few years.
"""
from dataclasses import replace
from pathlib import Path

from meek import InvestmentSchedule, ScenarioConfig, capital_sweep
from meek.svg import write_chart
from meek.trajectory import schedule_sweep

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
cfg = ScenarioConfig(horizon=30.0, step=0.25)

# A 1000x head start buys a bigger gap, not a longer-lasting one.
heads = capital_sweep(cfg, [1e4, 1e5, 1e6])
for b, pts in heads.items():
    print(f"SOTA budget {b:8.0e}: delta(0)={pts[0].delta:.4f}  delta(30)={pts[-1].delta:.5f}")
write_chart(out / "capital.svg", {f"{b:.0e} $": [(p.t, p.delta) for p in pts]
                                  for b, pts in heads.items()},
            title="Initial capital", xlabel="years", ylabel="nats/token")

# Once investment stalls the gap decays on the shared progress curve alone.
g = cfg.rates.g_i
stalls = schedule_sweep(cfg, {f"stop@{y}y": InvestmentSchedule.stagnating(g, y)
                              for y in (2.0, 5.0, 10.0)})
stalls["never"] = schedule_sweep(cfg, {"never": InvestmentSchedule.constant(g)})["never"]
for name, pts in stalls.items():
    print(f"{name:>9}: max {max(p.delta for p in pts):.4f}")
write_chart(out / "stagnation.svg",
            {k: [(p.t, p.delta) for p in v] for k, v in stalls.items()},
            title="Investment stagnation", xlabel="years", ylabel="nats/token")
