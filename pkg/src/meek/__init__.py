"""Forecasting capability gaps between exponentially funded and fixed-budget models."""
from .benchmark import (LossScorePoint, ParametricLoss, SigmoidFit, benchmark_gap_series,
                        fit_sigmoid, loss_from_params_tokens, p_task_score, sigmoid_score)
from .discrimination import (SprtConfig, TokenDistribution, expected_tokens_general,
                             expected_tokens_symmetric, monte_carlo_expected_tokens, sprt_simulate)
from .empirical import ModelRecord, gap_series, param_band_gap_series, parse_records
from .inference import (InferenceConfig, crossover_time, effective_params,
                        inference_loss_difference, meek_inference_loss)
from .laws import (GrowthRates, InvestmentSchedule, ScalingLaw, ShiftedPowerLaw, effective_compute,
                   loss_at_compute, shifted_loss_at_compute)
from .trajectory import (ScenarioConfig, capital_sweep, growth_sweep, inflection_time,
                         loss_difference, trajectory_series)

__version__ = "0.1.0"
