"""Seeded Monte-Carlo experiments producing averaged learning curves.

One trial = one random (channel, input, noise) realization plus a full
adaptive-filter run per algorithm.  The per-trial seed is derived from the
master seed and the trial index only, so every algorithm sees the identical
realization of a given trial (paired comparisons), results do not depend on
execution order or the number of workers, and reruns are bit-identical.

The figure of merit is the trial-averaged normalized squared tap error in
decibels,

    MSE(n) = 10*log10( (1/M) * sum_m ||w_m(n) - w||^2 / ||w||^2 ),

floored at -100 dB.  Trials whose filter blows up (non-finite coefficients)
are excluded from the average and reported in ``trials_diverged``; the plain
gradient LMS is expected to do exactly that under heavy-tailed noise.

SNR convention: the nominal noise parameters keep their configured
dispersion while the training-signal power is matched to it (power = 2*gamma
for alpha = 2, i.e. the Gaussian noise variance, and gamma otherwise); the
configured SNR then scales the noise dispersion down by 10**(-snr_db/10).
This realizes signal power / noise power = 10**(snr_db/10) exactly (in the
dispersion-ratio sense for alpha < 2, where the variance is infinite) while
keeping the filters in their stable operating range.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import (SparseChannel, TrainingSignal, generate_channel,
                      generate_input, regressor)
from .errors import DivergenceError, ParameterError
from .filters import AlgorithmSpec, FilterState, step
from .stable import AlphaStableParams, sample

MSE_FLOOR_DB = -100.0
_FLOOR_RATIO = 10.0 ** (MSE_FLOOR_DB / 10.0)


@dataclass
class SimConfig:
    """Full description of one Monte-Carlo experiment.

    ``noise = None`` is the no-noise test hook: trials run with z = 0 and
    unit signal power.
    """

    n_taps: int
    sparsity: int
    n_iterations: int
    n_trials: int
    snr_db: float
    noise: AlphaStableParams | None
    algorithms: tuple
    master_seed: int
    input_kind: str = "gaussian"

    def __post_init__(self):
        if self.n_trials < 1:
            raise ParameterError(f"n_trials must be >= 1, got {self.n_trials}")
        if self.n_iterations < 1:
            raise ParameterError(f"n_iterations must be >= 1, got {self.n_iterations}")
        if not (1 <= self.sparsity <= self.n_taps):
            raise ParameterError(
                f"sparsity must be in [1, {self.n_taps}], got {self.sparsity}")
        if not math.isfinite(self.snr_db):
            raise ParameterError(f"snr_db must be finite, got {self.snr_db}")
        if self.master_seed < 0:
            raise ParameterError(f"master_seed must be >= 0, got {self.master_seed}")
        if self.input_kind not in ("gaussian", "binary"):
            raise ParameterError(f"unknown input kind {self.input_kind!r}")
        self.algorithms = tuple(self.algorithms)
        if not self.algorithms:
            raise ParameterError("algorithms must not be empty")
        if not all(isinstance(a, AlgorithmSpec) for a in self.algorithms):
            raise ParameterError("algorithms must be AlgorithmSpec instances")
        names = [a.name for a in self.algorithms]
        if len(set(names)) != len(names):
            raise ParameterError(f"duplicate algorithm names in {names}")
        if self.noise is not None and not isinstance(self.noise, AlphaStableParams):
            raise ParameterError("noise must be AlphaStableParams or None")


@dataclass
class LearningCurve:
    """Per-iteration averaged MSE (dB) for one algorithm.

    ``mse_db`` is all-NaN in the degenerate case where every trial
    diverged; otherwise every entry is finite (floored at -100 dB).
    """

    algorithm: str
    mse_db: np.ndarray
    trials_completed: int
    trials_diverged: int


@dataclass
class TrialResult:
    """Squared-error trace of a single (algorithm, trial) run."""

    nmse: np.ndarray
    diverged: bool
    diverged_at: int | None = None


@dataclass
class Realization:
    """The shared random draw all algorithms of one trial see."""

    channel: SparseChannel
    signal: TrainingSignal
    noise: np.ndarray


def derive_trial_seed(master_seed, trial_index):
    """Deterministic per-trial seed; independent of algorithm and of the
    order in which trials execute."""
    state = np.random.SeedSequence((master_seed, trial_index)).generate_state(2, np.uint64)
    return (int(state[0]) << 64) | int(state[1])


def apply_snr(config):
    """Resolve the configured SNR into concrete generation parameters.

    Returns ``(signal_power, effective_noise)``: the training-signal power
    matched to the nominal noise scale, and the noise parameters with their
    dispersion divided by 10**(snr_db/10).  With ``noise = None`` the hook
    returns unit power and no noise.
    """
    if config.noise is None:
        return 1.0, None
    noise = config.noise
    power = 2.0 * noise.gamma if noise.alpha == 2.0 else noise.gamma
    return power, noise.scaled(10.0 ** (-config.snr_db / 10.0))


def make_realization(config, trial_seed):
    """Draw the (channel, input, noise) triple for one trial.

    Channel, input and noise come from three independent substreams of
    ``trial_seed``, so e.g. changing the sparsity leaves the input and
    noise realizations untouched.
    """
    ch_rng, in_rng, nz_rng = (np.random.default_rng(s)
                              for s in np.random.SeedSequence(trial_seed).spawn(3))
    power, noise_params = apply_snr(config)
    chan = generate_channel(config.n_taps, config.sparsity, ch_rng)
    signal = generate_input(config.n_iterations, power, in_rng, kind=config.input_kind)
    if noise_params is None:
        noise = np.zeros(config.n_iterations)
    else:
        noise = sample(noise_params, nz_rng, size=config.n_iterations)
    return Realization(channel=chan, signal=signal, noise=noise)


def run_trial(config, spec, trial_seed):
    """Run one algorithm over one seeded realization.

    Returns the per-iteration normalized squared error; on divergence the
    remaining entries are NaN and the result is flagged.
    """
    realization = make_realization(config, trial_seed)
    return _filter_trial(realization, spec, config.n_iterations)


def _filter_trial(realization, spec, n_iterations):
    truth = realization.channel.taps
    denom = float(truth @ truth)
    noise = realization.noise
    state = FilterState.zeros(realization.channel.n_taps)
    nmse = np.full(n_iterations, np.nan)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(n_iterations):
            x = regressor(realization.signal, n, realization.channel.n_taps)
            d = float(truth @ x) + noise[n]
            try:
                state = step(spec, state, x, d)
            except DivergenceError as exc:
                return TrialResult(nmse=nmse, diverged=True, diverged_at=exc.iteration)
            diff = state.w - truth
            nmse[n] = float(diff @ diff) / denom
    return TrialResult(nmse=nmse, diverged=False)


def _trial_worker(args):
    config, trial_index = args
    realization = make_realization(config, derive_trial_seed(config.master_seed, trial_index))
    return trial_index, [_filter_trial(realization, spec, config.n_iterations)
                         for spec in config.algorithms]


def run_experiment(config, workers=1):
    """Run all algorithms over all trials and average the learning curves.

    Trials may run in parallel (``workers`` > 1); aggregation is in fixed
    trial order, so the result is identical for any worker count.
    """
    names = [spec.name for spec in config.algorithms]
    m_trials = config.n_trials
    store = {name: np.zeros((m_trials, config.n_iterations)) for name in names}
    completed = {name: np.zeros(m_trials, dtype=bool) for name in names}

    jobs = [(config, m) for m in range(m_trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_worker, jobs))
    else:
        results = [_trial_worker(job) for job in jobs]

    for trial_index, trial_results in results:
        for name, res in zip(names, trial_results):
            if not res.diverged:
                store[name][trial_index] = res.nmse
                completed[name][trial_index] = True

    curves = []
    for name in names:
        mask = completed[name]
        n_ok = int(mask.sum())
        if n_ok == 0:
            curve = np.full(config.n_iterations, np.nan)
        else:
            mean_nmse = store[name][mask].mean(axis=0)
            curve = 10.0 * np.log10(np.maximum(mean_nmse, _FLOOR_RATIO))
        curves.append(LearningCurve(algorithm=name, mse_db=curve,
                                    trials_completed=n_ok,
                                    trials_diverged=m_trials - n_ok))
    return curves


def mse_db(estimates, truth):
    """Trial-averaged normalized squared error in dB, floored at -100.

    ``estimates`` is the collection of estimated tap vectors (one per
    trial) at a common iteration; ``truth`` the actual channel.
    """
    truth = np.asarray(truth, dtype=float)
    denom = float(truth @ truth)
    if denom <= 0.0:
        raise ParameterError("truth vector must have positive norm")
    ratios = []
    for est in estimates:
        diff = np.asarray(est, dtype=float) - truth
        ratios.append(float(diff @ diff) / denom)
    if not ratios:
        raise ParameterError("estimates must not be empty")
    return 10.0 * math.log10(max(sum(ratios) / len(ratios), _FLOOR_RATIO))
