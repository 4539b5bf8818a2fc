"""Robust sparse adaptive channel estimation under impulsive noise.

Implements the sign-LMS family of adaptive filters with zero-attracting,
reweighted zero-attracting, reweighted-l1 and lp sparsity penalties, an
exact alpha-stable noise sampler, sparse FIR channel generation, and a
seeded Monte-Carlo harness that produces averaged learning curves.
"""

__version__ = "0.1.0"

from .channel import (SparseChannel, TrainingSignal, generate_channel,
                      generate_input, regressor)
from .errors import DivergenceError, ParameterError
from .filters import (AlgorithmSpec, FilterState, attractor, error,
                      penalty_value, predict, sign, step)
from .simulation import (LearningCurve, Realization, SimConfig, TrialResult,
                         apply_snr, derive_trial_seed, make_realization,
                         mse_db, run_experiment, run_trial)
from .stable import AlphaStableParams, characteristic_function, sample

__all__ = [
    "__version__",
    "AlgorithmSpec",
    "AlphaStableParams",
    "DivergenceError",
    "FilterState",
    "LearningCurve",
    "ParameterError",
    "Realization",
    "SimConfig",
    "SparseChannel",
    "TrainingSignal",
    "TrialResult",
    "apply_snr",
    "attractor",
    "characteristic_function",
    "derive_trial_seed",
    "error",
    "generate_channel",
    "generate_input",
    "make_realization",
    "mse_db",
    "penalty_value",
    "predict",
    "regressor",
    "run_experiment",
    "run_trial",
    "sample",
    "sign",
    "step",
]
