"""Command-line front end: config parsing, experiment runs, result emission.

Subcommands
-----------
run
    Execute the Monte-Carlo experiment described by a config file and write
    a CSV of learning curves plus a manifest of the resolved settings.
validate-noise
    Compare the empirical characteristic function of the noise sampler
    against the analytic one on a small grid and print a verdict.
template
    Emit the default config file (the reference parameterization).

Exit codes: 0 success, 2 configuration error, 3 runtime failure (including
a failed noise validation and the case where every trial of some algorithm
diverged), 4 output I/O error.
"""

import argparse
import configparser
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import ParameterError
from .filters import AlgorithmSpec
from .simulation import SimConfig, run_experiment
from .stable import AlphaStableParams, characteristic_function, sample

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4

CSV_HEADER = "algorithm,iteration,mse_db,trials_diverged"

# agreement grid and tolerance for validate-noise
CF_GRID = (0.1, 0.5, 1.0, 2.0)
CF_TOLERANCE = 0.02

TEMPLATE = """\
# sparselms experiment configuration (reference parameterization)

[channel]
n_taps = 128
sparsity = 8

[noise]
alpha = 1.2
beta = 0.0
gamma = 1.0
delta = 0.0

[run]
iterations = 3000
trials = 100
snr_db = 10.0
seed = 1
input = gaussian

[algorithm.lms]
mu = 0.005

[algorithm.slms]
mu = 0.005

[algorithm.lms-za]
mu = 0.005
lambda = 2e-4

[algorithm.slms-za]
mu = 0.005
lambda = 2e-4

[algorithm.lms-rza]
mu = 0.005
lambda = 2e-3
eps = 20.0

[algorithm.slms-rza]
mu = 0.005
lambda = 2e-3
eps = 20.0

[algorithm.lms-rl1]
mu = 0.005
lambda = 5e-5
delta = 0.05

[algorithm.slms-rl1]
mu = 0.005
lambda = 5e-5
delta = 0.05

[algorithm.lms-lp]
mu = 0.005
lambda = 5e-6
eps = 0.05
p = 0.5

[algorithm.slms-lp]
mu = 0.005
lambda = 5e-6
eps = 0.05
p = 0.5
"""


class ConfigError(Exception):
    """Bad configuration file or overrides."""


@dataclass
class RunManifest:
    """What was run: resolved config, paths, version, wall-clock bounds."""

    config_path: str
    config: SimConfig
    output_path: str
    tool_version: str
    started_utc: str
    finished_utc: str
    workers: int

    def write(self, path):
        lines = [
            f"tool_version = {self.tool_version}",
            f"config_path = {self.config_path}",
            f"output_path = {self.output_path}",
            f"started_utc = {self.started_utc}",
            f"finished_utc = {self.finished_utc}",
            f"workers = {self.workers}",
        ]
        lines.extend(_flatten_config(self.config))
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


# config key -> AlgorithmSpec field, per penalty
_COMMON_KEYS = {"mu": "mu"}
_PENALTY_KEYS = {
    "none": {},
    "za": {"lambda": "rho_za"},
    "rza": {"lambda": "rho_rza", "eps": "eps_rza"},
    "rl1": {"lambda": "rho_rl1", "delta": "delta_rl1"},
    "lp": {"lambda": "rho_lp", "eps": "eps_lp", "p": "p"},
}

_CHANNEL_KEYS = {"n_taps", "sparsity"}
_NOISE_KEYS = {"alpha", "beta", "gamma", "delta"}
_RUN_KEYS = {"iterations", "trials", "snr_db", "seed", "input"}


def _get(section, key, convert, default):
    if key not in section:
        return default
    raw = section[key]
    try:
        return convert(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc


def _check_keys(name, section, allowed):
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in section [{name}]")


def parse_config(path):
    """Read and validate a config file into a SimConfig."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    n_taps, sparsity = 128, 8
    if parser.has_section("channel"):
        sec = parser["channel"]
        _check_keys("channel", sec, _CHANNEL_KEYS)
        n_taps = _get(sec, "n_taps", int, n_taps)
        sparsity = _get(sec, "sparsity", int, sparsity)

    noise = None
    if parser.has_section("noise"):
        sec = parser["noise"]
        _check_keys("noise", sec, _NOISE_KEYS)
        noise = AlphaStableParams(
            alpha=_get(sec, "alpha", float, 1.2),
            beta=_get(sec, "beta", float, 0.0),
            gamma=_get(sec, "gamma", float, 1.0),
            delta=_get(sec, "delta", float, 0.0),
        )

    iterations, trials, snr_db, seed, input_kind = 3000, 100, 10.0, 0, "gaussian"
    if parser.has_section("run"):
        sec = parser["run"]
        _check_keys("run", sec, _RUN_KEYS)
        iterations = _get(sec, "iterations", int, iterations)
        trials = _get(sec, "trials", int, trials)
        snr_db = _get(sec, "snr_db", float, snr_db)
        seed = _get(sec, "seed", int, seed)
        input_kind = _get(sec, "input", str, input_kind)

    algorithms = []
    for section_name in parser.sections():
        if section_name in ("channel", "noise", "run"):
            continue
        prefix, _, alg_name = section_name.partition(".")
        if prefix != "algorithm" or not alg_name:
            raise ConfigError(f"unknown section [{section_name}]")
        try:
            spec = AlgorithmSpec.from_name(alg_name)
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
        keymap = dict(_COMMON_KEYS)
        keymap.update(_PENALTY_KEYS[spec.penalty])
        sec = parser[section_name]
        _check_keys(section_name, sec, keymap)
        overrides = {keymap[k]: _get(sec, k, float, None) for k in sec}
        algorithms.append(spec.with_overrides(**overrides))

    if not algorithms:
        raise ConfigError("no [algorithm.*] sections configured")

    try:
        return SimConfig(n_taps=n_taps, sparsity=sparsity, n_iterations=iterations,
                         n_trials=trials, snr_db=snr_db, noise=noise,
                         algorithms=tuple(algorithms), master_seed=seed,
                         input_kind=input_kind)
    except ParameterError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def _select_algorithms(config, names_csv):
    configured = {spec.name: spec for spec in config.algorithms}
    selected = []
    for name in names_csv.split(","):
        name = name.strip()
        if not name:
            continue
        if name in configured:
            selected.append(configured[name])
        else:
            selected.append(AlgorithmSpec.from_name(name))
    if not selected:
        raise ParameterError("empty algorithm selection")
    return tuple(selected)


def _flatten_config(config):
    lines = [
        f"n_taps = {config.n_taps}",
        f"sparsity = {config.sparsity}",
        f"iterations = {config.n_iterations}",
        f"trials = {config.n_trials}",
        f"snr_db = {config.snr_db!r}",
        f"seed = {config.master_seed}",
        f"input = {config.input_kind}",
    ]
    if config.noise is None:
        lines.append("noise = none")
    else:
        for key in ("alpha", "beta", "gamma", "delta"):
            lines.append(f"noise.{key} = {getattr(config.noise, key)!r}")
    for spec in config.algorithms:
        prefix = f"algorithm.{spec.name}"
        lines.append(f"{prefix}.mu = {spec.mu!r}")
        for field_name in _PENALTY_KEYS[spec.penalty].values():
            lines.append(f"{prefix}.{field_name} = {getattr(spec, field_name)!r}")
    return lines


def _write_curves_csv(path, curves):
    rows = []
    for curve in sorted(curves, key=lambda c: c.algorithm):
        for i, value in enumerate(curve.mse_db, start=1):
            rows.append(f"{curve.algorithm},{i},{float(value)!r},{curve.trials_diverged}")
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.write("\n".join(rows) + "\n")


def _utc_now():
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def cmd_run(args):
    try:
        config = parse_config(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.trials is not None:
            overrides["n_trials"] = args.trials
        if args.iterations is not None:
            overrides["n_iterations"] = args.iterations
        if args.algorithms:
            overrides["algorithms"] = _select_algorithms(config, args.algorithms)
        if overrides:
            config = replace(config, **overrides)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    started = _utc_now()
    try:
        curves = run_experiment(config, workers=args.workers)
    except Exception as exc:  # noqa: BLE001 - surface anything as a runtime failure
        print(f"error: experiment failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    finished = _utc_now()

    try:
        _write_curves_csv(args.out, curves)
        manifest = RunManifest(config_path=args.config, config=config,
                               output_path=args.out, tool_version=__version__,
                               started_utc=started, finished_utc=finished,
                               workers=args.workers)
        manifest.write(args.out + ".manifest")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    dead = [c.algorithm for c in curves if c.trials_completed == 0]
    if dead:
        print(f"error: all trials diverged for: {', '.join(dead)}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_validate_noise(args):
    try:
        params = AlphaStableParams(alpha=args.alpha, beta=args.beta,
                                   gamma=args.gamma, delta=args.delta)
        if args.samples < 1:
            raise ParameterError(f"samples must be >= 1, got {args.samples}")
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    rng = np.random.default_rng(args.seed)
    draws = sample(params, rng, size=args.samples)
    print(f"alpha={params.alpha} beta={params.beta} gamma={params.gamma} "
          f"delta={params.delta} samples={args.samples} seed={args.seed}")
    print(f"{'t':>6}  {'|empirical|':>12}  {'|analytic|':>12}  {'|error|':>10}")
    ok = True
    for t in CF_GRID:
        empirical = complex(np.mean(np.exp(1j * t * draws)))
        analytic = characteristic_function(params, t)
        err = abs(empirical - analytic)
        ok &= err <= CF_TOLERANCE
        print(f"{t:6.2f}  {abs(empirical):12.6f}  {abs(analytic):12.6f}  {err:10.6f}")
    verdict = "PASS" if ok else "FAIL"
    print(f"verdict: {verdict} (tolerance {CF_TOLERANCE})")
    return EXIT_OK if ok else EXIT_RUNTIME


def cmd_template(args):
    if args.out is None:
        sys.stdout.write(TEMPLATE)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(TEMPLATE)
    except OSError as exc:
        print(f"error: cannot write template: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sparselms",
        description="Sparse sign-LMS channel estimation under impulsive noise")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte-Carlo experiment")
    run.add_argument("--config", required=True, help="experiment config file")
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--seed", type=int, default=None, help="override master seed")
    run.add_argument("--trials", type=int, default=None, help="override trial count")
    run.add_argument("--iterations", type=int, default=None, help="override iteration count")
    run.add_argument("--algorithms", default=None,
                     help="comma-separated algorithm names to run")
    run.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    run.set_defaults(func=cmd_run)

    validate = sub.add_parser("validate-noise",
                              help="check the noise sampler against its characteristic function")
    validate.add_argument("--alpha", type=float, default=2.0)
    validate.add_argument("--beta", type=float, default=0.0)
    validate.add_argument("--gamma", type=float, default=1.0)
    validate.add_argument("--delta", type=float, default=0.0)
    validate.add_argument("--samples", type=int, default=100000)
    validate.add_argument("--seed", type=int, default=0)
    validate.set_defaults(func=cmd_validate_noise)

    template = sub.add_parser("template", help="print the default config file")
    template.add_argument("--out", default=None, help="write to a file instead of stdout")
    template.set_defaults(func=cmd_template)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
