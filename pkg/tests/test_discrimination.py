import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meek.discrimination import (MonteCarloReport, NoDecisionError, SprtConfig,
                                 TokenDistribution, discrimination_series,
                                 expected_tokens_general, expected_tokens_symmetric,
                                 kl_difference, lattice_pair, monte_carlo_expected_tokens,
                                 random_pair, sprt_simulate, symmetric_numerator,
                                 tokens_vs_loss_difference)
from meek.trajectory import ScenarioConfig

# (1-2a) ln((1-a)/a) at a=0.05, and the general form under A at
# a=0.01, b=0.10, dL=0.5; both 40-digit mpmath
NUM_05 = 2.649995081249796414
GENERAL_A = 7.641150455166368272

SYM = SprtConfig()


def test_numerator():
    assert symmetric_numerator(0.05) == pytest.approx(NUM_05, rel=1e-14)


def test_symmetric_at_08():
    assert expected_tokens_symmetric(0.8, SYM) == pytest.approx(3.312493851562245518, rel=1e-14)


def test_general_under_a():
    cfg = SprtConfig(0.01, 0.10)
    assert expected_tokens_general(0.5, cfg, "A") == pytest.approx(GENERAL_A, rel=1e-13)


@given(st.floats(0.01, 0.49), st.floats(1e-3, 10))
def test_general_reduces_to_symmetric(a, dl):
    cfg = SprtConfig(a, a)
    assert expected_tokens_general(dl, cfg) == pytest.approx(expected_tokens_symmetric(dl, cfg), rel=1e-12)
    assert expected_tokens_general(dl, cfg, "B") == pytest.approx(expected_tokens_symmetric(dl, cfg), rel=1e-12)


def test_inverse_in_delta():
    assert expected_tokens_symmetric(0.1, SYM) == pytest.approx(2 * expected_tokens_symmetric(0.2, SYM), rel=1e-14)


def test_slowdown_exact_multiple():
    slow = SprtConfig(slowdown=10.0)
    assert expected_tokens_symmetric(0.3, slow) == 10 * expected_tokens_symmetric(0.3, SYM)


@pytest.mark.parametrize("kw", [dict(alpha_err=0), dict(beta_err=0.5), dict(slowdown=0.5)])
def test_config_invariants(kw):
    with pytest.raises(ValueError):
        SprtConfig(**kw)


def test_analytic_domain():
    with pytest.raises(ValueError):
        expected_tokens_symmetric(0.0, SYM)
    with pytest.raises(ValueError):
        expected_tokens_symmetric(0.1, SprtConfig(0.05, 0.1))
    with pytest.raises(ValueError):
        expected_tokens_general(0.1, SYM, "C")


def test_distribution_validation():
    with pytest.raises(ValueError):
        TokenDistribution([0.5, 0.6])
    with pytest.raises(ValueError):
        TokenDistribution([1.5, -0.5])
    assert len(TokenDistribution.normalized([1, 1, 2])) == 3


def test_kl_sign():
    pA, pB = random_pair(0.3, rng=np.random.default_rng(1))
    assert kl_difference(pA, pA, pB) == pytest.approx(0.3, rel=1e-10)
    assert kl_difference(pA, pB, pA) == pytest.approx(-0.3, rel=1e-10)


def test_identical_models_never_decide():
    p = [0.25, 0.75]
    with pytest.raises(NoDecisionError):
        sprt_simulate(p, p, p, SYM, seed=0, max_tokens=1000)


def test_zero_probability_token_is_decisive():
    out = sprt_simulate([0.5, 0.5], [0.5, 0.5], [1.0, 0.0], SYM, seed=0)
    # the token pB forbids appears quickly and ends the test for A
    assert out.decision == "A" and out.infinite_evidence


def test_simulate_deterministic():
    pA, pB = random_pair(0.2, rng=np.random.default_rng(2))
    a = sprt_simulate(pA, pA, pB, SYM, seed=7, run_index=3)
    b = sprt_simulate(pA, pA, pB, SYM, seed=7, run_index=3)
    assert a == b


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 12), st.integers(2, 40), st.integers(0, 2**31))
def test_lattice_matches_wald(steps, alphabet, seed):
    # no overshoot, so the Wald identity count is exact up to Monte-Carlo error
    pA, pB = lattice_pair(steps, SYM, alphabet, np.random.default_rng(seed))
    rep = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=20000, seed=seed)
    want = expected_tokens_symmetric(kl_difference(pA, pA, pB), SYM)
    assert abs(rep.mean_tokens - want) < 4 * rep.ci95 / 1.96 + 1e-9
    assert rep.false_rate <= 0.05 + 3 * math.sqrt(0.05 * 0.95 / rep.n_runs)


def test_hypothesis_b_symmetry():
    pA, pB = lattice_pair(5, SYM, 6, np.random.default_rng(4))
    a = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=5000, seed=1)
    b = monte_carlo_expected_tokens(pB, pA, pB, SYM, runs=5000, seed=1)
    assert a.false_rate < 0.1 and b.false_rate < 0.1
    assert b.mean_tokens == pytest.approx(a.mean_tokens, rel=0.05)


def test_generic_pair_overshoots():
    # on a generic alphabet the walk jumps past the thresholds: the
    # analytic count is a lower bound
    pA, pB = random_pair(0.5, rng=np.random.default_rng(0))
    rep = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=5000, seed=0)
    assert rep.mean_tokens > expected_tokens_symmetric(0.5, SYM)


def test_random_pair_kl():
    for seed in range(5):
        pA, pB = random_pair(0.05 + 0.2 * seed, rng=np.random.default_rng(seed))
        assert kl_difference(pA, pA, pB) == pytest.approx(0.05 + 0.2 * seed, rel=1e-9)


def test_monte_carlo_report():
    pA, pB = lattice_pair(3, SYM)
    rep = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=100, seed=0)
    assert isinstance(rep, MonteCarloReport)
    assert rep.n_runs == 100 and rep.capped_runs == 0
    assert rep.to_json() == monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=100, seed=0).to_json()
    with pytest.raises(ValueError):
        monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=0, seed=0)


def test_capped_runs_counted():
    pA, pB = random_pair(1e-4, rng=np.random.default_rng(0))
    rep = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=5, seed=0, max_tokens=10)
    assert rep.capped_runs == 5 and math.isnan(rep.mean_tokens)


def test_series_helpers():
    series = discrimination_series(ScenarioConfig(horizon=5.0), SYM)
    assert series[0] == (0.0, math.inf)
    assert all(math.isfinite(n) and n > 0 for _, n in series[1:])
    pairs = tokens_vs_loss_difference([0.1, 0.2], SYM)
    assert pairs[0][1] == pytest.approx(2 * pairs[1][1])


@given(st.floats(0.01, 0.49), st.floats(0.01, 0.49), st.floats(1e-3, 5))
def test_swap_errors_and_hypothesis(a, b, dl):
    assert expected_tokens_general(dl, SprtConfig(a, b), "A") == pytest.approx(
        expected_tokens_general(dl, SprtConfig(b, a), "B"), rel=1e-13)


def test_disjoint_seeds_agree():
    pA, pB = random_pair(0.3, rng=np.random.default_rng(5))
    r1 = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=20000, seed=100)
    r2 = monte_carlo_expected_tokens(pA, pA, pB, SYM, runs=20000, seed=200)
    assert r1.mean_tokens != r2.mean_tokens
    assert abs(r1.mean_tokens - r2.mean_tokens) < math.hypot(r1.ci95, r2.ci95) * 1.5


def test_unequal_error_rates():
    # under A a wrong call means picking B, bounded by beta
    cfg = SprtConfig(0.01, 0.10)
    pA, pB = random_pair(0.2, rng=np.random.default_rng(9))
    rep = monte_carlo_expected_tokens(pA, pA, pB, cfg, runs=20000, seed=3)
    assert rep.false_rate <= 0.10 + 3 * math.sqrt(0.1 * 0.9 / rep.n_runs)
    assert rep.mean_tokens >= expected_tokens_general(0.2, cfg, "A") * 0.95
