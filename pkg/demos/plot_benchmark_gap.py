"""
Multi-step tasks
================

Map loss to a benchmark score with a sigmoid, then ask for ``p``
independent correct steps. Longer tasks keep the frontier ahead for
longer, and the 0.8 ceiling of this fit caps every curve at 0.8**p.
"""
from pathlib import Path

from meek import ScenarioConfig, SigmoidFit, benchmark_gap_series
from meek.benchmark import peak
from meek.svg import write_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

fit = SigmoidFit(amplitude=0.55, k=-6.0, x0=2.1, b=0.25)
print(f"ceiling {fit.ceiling:.2f}")

gaps = benchmark_gap_series(ScenarioConfig(horizon=20.0, step=0.1), fit, [1, 2, 5, 10])
for p, s in gaps.items():
    t, h = peak(s)
    print(f"p={p:<3} peak gap {h:.3f} at t={t:.1f}")

write_chart(out / "benchmark_gap.svg", {f"p={p}": s for p, s in gaps.items()},
            title="Score gap by task length", xlabel="years", ylabel="score")
