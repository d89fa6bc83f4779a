"""
How long does the frontier stay ahead?
======================================

A meek actor keeps a flat budget while the frontier's budget grows every
year. Both ride the same hardware and algorithm curves, so the meek loss
falls too, and the gap between them peaks and then closes.
"""
from pathlib import Path

from meek import GrowthRates, ScenarioConfig, growth_sweep, inflection_time
from meek.svg import write_chart
from meek.trajectory import numeric_peak_time

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# Defaults: hardware 1.4x/yr, algorithms 2.8x/yr, investment 5/1.4 per yr.
cfg = ScenarioConfig(horizon=30.0, step=0.25)
t_star = inflection_time(cfg.rates, cfg.law.alpha)
print(f"peak gap at {t_star:.3f} years (numeric: {numeric_peak_time(cfg):.6f})")

# Faster investment growth widens the gap but the peak time moves little.
runs = growth_sweep(cfg, [2.0, 3.6, 5.0, 10.0])
for g, pts in runs.items():
    top = max(pts, key=lambda p: p.delta)
    print(f"g_i={g:<5g} peak {top.delta:.4f} nats at t~{top.t:g}, t=30: {pts[-1].delta:.5f}")

write_chart(out / "training_gap.svg",
            {f"g_i={g:g}": [(p.t, p.delta) for p in pts] for g, pts in runs.items()},
            title="Meek minus frontier loss", xlabel="years", ylabel="nats/token")

# The older, shallower exponent stretches the window considerably.
print(f"with alpha=0.057: {inflection_time(GrowthRates(), 0.057):.2f} years")
