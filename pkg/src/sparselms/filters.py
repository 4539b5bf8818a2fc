"""The LMS/sign-LMS family with sparsity-promoting zero attractors.

Each algorithm is one per-sample update of the coefficient vector w:

    w(n+1) = w(n) + g(n) - attractor(w(n), w(n-1))

where the data term g(n) is

    gradient family (LMS):   mu * e(n) * x(n)
    sign family (SLMS):      mu * sgn(e(n)) * x(n)

with e(n) = d(n) - w(n)^T x(n).  The sign family bounds every coefficient
move by mu*|x_i(n)| regardless of how large the error is, which is what
keeps it alive under impulsive noise.  The attractor term pulls
coefficients toward zero and comes in four flavours:

    za    rho * sgn(w)
    rza   rho * sgn(w) / (1 + eps*|w|)                   (elementwise)
    rl1   rho * sgn(w) / (delta + |w_prev|)              (elementwise)
    lp    rho * ||w||_p^(1-p) * sgn(w) / (eps + |w|^(1-p))

``rza`` attenuates the pull on large taps, ``rl1`` reweights by the
previous iterate (w(-1) = 0, so the first step uses a uniform 1/delta
weight), and ``lp`` is the gradient of the nonconvex p-quasinorm smoothed
by eps.  With sgn(0) = 0, exact zeros are fixed points of every attractor.

``family`` x ``penalty`` gives the ten wire names used throughout the
package: lms, slms, lms-za, slms-za, lms-rza, slms-rza, lms-rl1, slms-rl1,
lms-lp, slms-lp.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DivergenceError, ParameterError

FAMILIES = ("gradient", "sign")
PENALTIES = ("none", "za", "rza", "rl1", "lp")

# family prefix on the wire
_FAMILY_NAMES = {"gradient": "lms", "sign": "slms"}
_NAME_FAMILIES = {v: k for k, v in _FAMILY_NAMES.items()}

# default hyperparameters; the attractor coefficients equal the
# regularization weights of the reference configuration
DEFAULT_MU = 0.005
DEFAULT_RHO_ZA = 2e-4
DEFAULT_RHO_RZA = 2e-3
DEFAULT_EPS_RZA = 20.0
DEFAULT_RHO_RL1 = 5e-5
DEFAULT_DELTA_RL1 = 0.05
DEFAULT_RHO_LP = 5e-6
DEFAULT_EPS_LP = 0.05
DEFAULT_P = 0.5


@dataclass(frozen=True)
class AlgorithmSpec:
    """Which update rule to run, plus its hyperparameters.

    Only the parameters of the selected penalty matter; the others are
    ignored by :func:`step` but still validated.
    """

    family: str = "sign"
    penalty: str = "none"
    mu: float = DEFAULT_MU
    rho_za: float = DEFAULT_RHO_ZA
    rho_rza: float = DEFAULT_RHO_RZA
    eps_rza: float = DEFAULT_EPS_RZA
    rho_rl1: float = DEFAULT_RHO_RL1
    delta_rl1: float = DEFAULT_DELTA_RL1
    rho_lp: float = DEFAULT_RHO_LP
    eps_lp: float = DEFAULT_EPS_LP
    p: float = DEFAULT_P

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.penalty not in PENALTIES:
            raise ParameterError(f"penalty must be one of {PENALTIES}, got {self.penalty!r}")
        if not (self.mu > 0):
            raise ParameterError(f"mu must be positive, got {self.mu}")
        for attr in ("rho_za", "rho_rza", "rho_rl1", "rho_lp"):
            if getattr(self, attr) < 0:
                raise ParameterError(f"{attr} must be >= 0, got {getattr(self, attr)}")
        for attr in ("eps_rza", "delta_rl1", "eps_lp"):
            if not (getattr(self, attr) > 0):
                raise ParameterError(f"{attr} must be positive, got {getattr(self, attr)}")
        if not (0.0 < self.p < 1.0):
            raise ParameterError(f"p must be in (0, 1), got {self.p}")

    @property
    def name(self):
        """Wire name, e.g. "slms-rza"."""
        base = _FAMILY_NAMES[self.family]
        return base if self.penalty == "none" else f"{base}-{self.penalty}"

    @classmethod
    def from_name(cls, name, **overrides):
        """Build a spec from a wire name such as "lms" or "slms-rl1"."""
        base, sep, penalty = name.partition("-")
        if base not in _NAME_FAMILIES or (sep and penalty not in PENALTIES[1:]):
            raise ParameterError(f"unknown algorithm name {name!r}")
        return cls(family=_NAME_FAMILIES[base], penalty=penalty or "none", **overrides)

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


@dataclass
class FilterState:
    """Coefficient estimate w(n), the previous iterate, and the step count."""

    w: np.ndarray
    w_prev: np.ndarray
    n: int = 0

    @classmethod
    def zeros(cls, n_taps):
        return cls(w=np.zeros(n_taps), w_prev=np.zeros(n_taps), n=0)


def sign(v):
    """Elementwise sign with sgn(0) = 0."""
    return np.sign(v)


def predict(state, x):
    """Filter output w(n)^T x(n)."""
    x = np.asarray(x, dtype=float)
    if x.shape != state.w.shape:
        raise ParameterError(f"regressor shape {x.shape} does not match taps {state.w.shape}")
    return float(state.w @ x)


def error(desired, state, x):
    """Instantaneous estimation error d(n) - w(n)^T x(n)."""
    return float(desired) - predict(state, x)


def attractor(spec, w, w_prev=None):
    """The zero-attraction term subtracted by :func:`step`.

    ``w_prev`` is only consulted by the rl1 penalty and defaults to zeros
    (the startup convention).
    """
    if spec.penalty == "none":
        return np.zeros_like(w)
    s = np.sign(w)
    if spec.penalty == "za":
        return spec.rho_za * s
    if spec.penalty == "rza":
        return spec.rho_rza * s / (1.0 + spec.eps_rza * np.abs(w))
    if spec.penalty == "rl1":
        if w_prev is None:
            w_prev = np.zeros_like(w)
        return spec.rho_rl1 * s / (spec.delta_rl1 + np.abs(w_prev))
    # lp; the norm factor is 0 for w = 0, so zero stays a fixed point
    q = 1.0 - spec.p
    norm_p = np.sum(np.abs(w) ** spec.p) ** (1.0 / spec.p)
    return spec.rho_lp * norm_p**q * s / (spec.eps_lp + np.abs(w) ** q)


def step(spec, state, x, d):
    """Advance the filter by one sample; returns a new state.

    Does not mutate its arguments.  Raises :class:`DivergenceError` if any
    updated coefficient is non-finite.
    """
    x = np.asarray(x, dtype=float)
    # overflow here is the anticipated divergence mode, reported via the
    # guard below rather than as numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        e = error(d, state, x)
        if spec.family == "sign":
            g = spec.mu * np.sign(e) * x
        else:
            g = spec.mu * e * x
        w_new = state.w + g - attractor(spec, state.w, state.w_prev)
    if not np.isfinite(w_new).all():
        raise DivergenceError(state.n)
    return FilterState(w=w_new, w_prev=state.w, n=state.n + 1)


def penalty_value(spec, w, w_prev=None):
    """Value of the sparsity penalty alone (no regularization weight).

    za: l1 norm; rza: sum log(1 + eps*|w_i|); rl1: weighted l1 norm with
    the reweighting vector frozen at ``w_prev``; lp: p-quasinorm.  The
    attractor terms are (scaled) gradients of these; see the gradient
    consistency tests.
    """
    w = np.asarray(w, dtype=float)
    if spec.penalty == "none":
        return 0.0
    if spec.penalty == "za":
        return float(np.sum(np.abs(w)))
    if spec.penalty == "rza":
        return float(np.sum(np.log1p(spec.eps_rza * np.abs(w))))
    if spec.penalty == "rl1":
        if w_prev is None:
            w_prev = np.zeros_like(w)
        f = 1.0 / (spec.delta_rl1 + np.abs(np.asarray(w_prev, dtype=float)))
        return float(np.sum(np.abs(f * w)))
    return float(np.sum(np.abs(w) ** spec.p) ** (1.0 / spec.p))
