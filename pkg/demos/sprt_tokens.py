"""
Telling two models apart
========================

A sequential likelihood-ratio test reads tokens until one model is clearly
better. The expected count falls as one over the loss gap, so as the gap
closes the tokens needed to spot the difference explode.
"""
from pathlib import Path

import numpy as np

from meek import ScenarioConfig, SprtConfig, expected_tokens_symmetric, monte_carlo_expected_tokens
from meek.discrimination import discrimination_series, kl_difference, lattice_pair, random_pair
from meek.svg import write_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
cfg = SprtConfig(alpha_err=0.05, beta_err=0.05)

for dl in (0.8, 0.1, 0.01):
    print(f"dL={dl:<5} -> {expected_tokens_symmetric(dl, cfg):9.2f} tokens")

# Simulated tests agree with the formula when the evidence lands exactly
# on the thresholds...
pA, pB = lattice_pair(6, cfg, alphabet=32)
rep = monte_carlo_expected_tokens(pA, pA, pB, cfg, runs=20000, seed=1)
want = expected_tokens_symmetric(kl_difference(pA, pA, pB), cfg)
print(f"lattice pair:  simulated {rep.mean_tokens:.3f} +- {rep.ci95:.3f}, formula {want:.3f}")

# ...and take longer on generic pairs, where each token can jump past them.
pA, pB = random_pair(0.5, rng=np.random.default_rng(0))
rep = monte_carlo_expected_tokens(pA, pA, pB, cfg, runs=20000, seed=1)
print(f"generic pair:  simulated {rep.mean_tokens:.3f}, formula "
      f"{expected_tokens_symmetric(0.5, cfg):.3f}, wrong {rep.false_rate:.3%}")

scn = ScenarioConfig(horizon=30.0, step=0.5)
curves = {f"slowdown {s:g}": discrimination_series(scn, SprtConfig(slowdown=s)) for s in (1, 10)}
write_chart(out / "tokens_needed.svg", curves, title="Tokens to spot the frontier model",
            xlabel="years", ylabel="expected tokens", logy=True)
