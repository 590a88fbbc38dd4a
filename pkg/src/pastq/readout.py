"""Phenomenological Gaussian model of the dispersive QND readout.

The integrated probe signal xi is Gaussian with mean +1 for |0> and -1 for
|1>. The Bayes map xi -> E and the forward Bayes update of a diagonal rho use
the same multiplicative likelihood factors, evaluated in the log domain so
that extreme signals saturate smoothly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContractViolationError,
    DegenerateRetrodictionError,
    IllConditionedError,
    NumericDomainError,
)
from .states import EffectMatrix, QubitState

__all__ = [
    "ReadoutChannel",
    "FidelityModel",
    "sample_xi",
    "effect_from_xi",
    "e00_from_xi",
    "xi_from_e00",
    "forward_qnd_update",
    "fidelity",
    "apply_readout_error",
    "correct_fidelity",
]

DEFAULT_SIGMA = 0.4
DEFAULT_BASE_FIDELITY = 0.99
DEFAULT_T_M = 400e-9
# T1 chosen so that 1 - exp(-t_m/T1) = 0.045, reproducing the fidelity
# endpoints 0.99 (theta=0) and 0.945 (theta=pi).
DEFAULT_T1 = DEFAULT_T_M / (-np.log(1.0 - 0.045))


@dataclass(frozen=True)
class ReadoutChannel:
    """Gaussian signal channel with fixed means +1 (z=0) and -1 (z=1)."""

    sigma: float = DEFAULT_SIGMA
    mean_plus: float = field(default=1.0)
    mean_minus: float = field(default=-1.0)

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma <= 0.0:
            raise ContractViolationError("sigma must be > 0")
        if self.mean_plus != 1.0 or self.mean_minus != -1.0:
            raise ContractViolationError("signal means are fixed at +/-1 by normalization")


@dataclass(frozen=True)
class FidelityModel:
    """Projective-readout fidelity F_theta = base - sin^2(theta/2)(1 - e^(-t_m/T1))."""

    base_fidelity: float = DEFAULT_BASE_FIDELITY
    t_m: float = DEFAULT_T_M
    t1: float = DEFAULT_T1

    def __post_init__(self):
        if not (0.5 < self.base_fidelity <= 1.0):
            raise ContractViolationError("base_fidelity must lie in (0.5, 1]")
        if self.t_m <= 0.0 or self.t1 <= 0.0:
            raise ContractViolationError("t_m and t1 must be > 0")

    @property
    def decay_depth(self) -> float:
        return 1.0 - np.exp(-self.t_m / self.t1)


def sample_xi(channel: ReadoutChannel, true_z: int, rng: np.random.Generator) -> float:
    """Draw one integrated signal for the qubit pinned in basis state true_z."""
    if true_z not in (0, 1):
        raise ContractViolationError("true_z must be 0 or 1")
    mean = channel.mean_plus if true_z == 0 else channel.mean_minus
    return float(rng.normal(mean, channel.sigma))


def e00_from_xi(channel: ReadoutChannel, xi) -> np.ndarray | float:
    """Likelihood-ratio map xi -> E00 = P(xi|0)/(P(xi|0)+P(xi|1)).

    For the +/-1-mean Gaussian channel this is the logistic function
    1/(1 + exp(-2 xi / sigma^2)), evaluated stably. Works elementwise.
    """
    x = 2.0 * np.asarray(xi, dtype=float) / channel.sigma**2
    if not np.all(np.isfinite(x)):
        raise NumericDomainError("xi must be finite")
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def xi_from_e00(channel: ReadoutChannel, e00: float) -> float:
    """Inverse of :func:`e00_from_xi` (logit), defined on (0, 1)."""
    if not (0.0 < e00 < 1.0):
        raise ContractViolationError("e00 must lie strictly in (0, 1)")
    return float(channel.sigma**2 / 2.0 * np.log(e00 / (1.0 - e00)))


def effect_from_xi(channel: ReadoutChannel, xi: float) -> EffectMatrix:
    """Diagonal effect matrix from one integrated signal, Tr(E) = 1."""
    e00 = e00_from_xi(channel, xi)
    return EffectMatrix(np.diag([e00, 1.0 - e00]).astype(complex))


def forward_qnd_update(state: QubitState, channel: ReadoutChannel, xi: float) -> QubitState:
    """Bayes update of a diagonal state by one probe signal.

    Multiplies the populations by the same likelihood factors that build E
    from xi (the QND back-action equals its adjoint).
    """
    if not state.is_diagonal:
        raise ContractViolationError("forward_qnd_update requires a diagonal state")
    r0, r1 = state.diag
    e00 = e00_from_xi(channel, xi)
    num0, num1 = r0 * e00, r1 * (1.0 - e00)
    norm = num0 + num1
    if norm <= 0.0:
        raise DegenerateRetrodictionError("posterior normalization vanished")
    return QubitState(np.diag([num0 / norm, num1 / norm]).astype(complex))


def fidelity(model: FidelityModel, theta: float) -> float:
    """F_theta, monotone non-increasing on [0, pi]."""
    if not (0.0 <= theta <= np.pi):
        raise ContractViolationError("theta must lie in [0, pi]")
    return model.base_fidelity - np.sin(theta / 2.0) ** 2 * model.decay_depth


def apply_readout_error(
    ideal_outcome: int, theta: float, model: FidelityModel, rng: np.random.Generator
) -> int:
    """Flip the ideal +/-1 outcome with probability 1 - F_theta.

    The flip probability combines excited-state decay during the measurement
    pulse (the sin^2(theta/2) term of F_theta) with the symmetric residual
    distribution-overlap error 1 - base_fidelity.
    """
    if ideal_outcome not in (+1, -1):
        raise ContractViolationError("ideal_outcome must be +1 or -1")
    flip_p = 1.0 - fidelity(model, theta)
    if rng.random() < flip_p:
        return -ideal_outcome
    return ideal_outcome


def correct_fidelity(raw_frequency: float, theta: float, model: FidelityModel) -> float:
    """Invert the symmetric confusion matrix of :func:`apply_readout_error`.

    raw = F p + (1-F)(1-p)  =>  p = (raw - (1-F)) / (2F - 1).
    """
    if not (0.0 <= raw_frequency <= 1.0):
        raise ContractViolationError("raw_frequency must lie in [0, 1]")
    f = fidelity(model, theta)
    denom = 2.0 * f - 1.0
    if abs(denom) < 1e-9:
        raise IllConditionedError("confusion matrix is singular at F = 0.5")
    return (raw_frequency - (1.0 - f)) / denom
