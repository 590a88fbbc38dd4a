"""Liouvillian dynamics: master-equation propagation, two-time statistics and
backward propagation of the effect matrix.

The backward effect equation is reconstructed from draft material and is
implemented exactly as written there, with the sigma_z/2 operator
normalization for the record variable V (units where V = +/-1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    NumericDomainError,
    StepSizeError,
)
from .linalg import dag, hermitize, left_mult, mat_exp, psd_check, right_mult, sandwich, unvec, vec
from .states import IDENTITY, SIGMA_X, SIGMA_Z, EffectMatrix, PovmElement, QubitState

__all__ = [
    "LindbladSpec",
    "TimeGrid",
    "build_liouvillian",
    "propagate_rho",
    "joint_probability",
    "symmetrized_correlation",
    "backward_effect_step",
    "retrodictive_z",
]

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|, excited -> ground


@dataclass(frozen=True)
class LindbladSpec:
    """Rates for the qubit master equation: Rabi drive, measurement dephasing,
    detection efficiency and optional T1 decay."""

    rabi_frequency: float = 0.0
    k: float = 0.0
    eta: float = 0.0
    gamma1: float = 0.0

    def __post_init__(self):
        if self.k < 0.0 or self.gamma1 < 0.0:
            raise ContractViolationError("rates must be >= 0")
        if not (0.0 <= self.eta <= 1.0):
            raise ContractViolationError("eta must lie in [0, 1]")

    @property
    def hamiltonian(self) -> np.ndarray:
        return self.rabi_frequency / 2.0 * SIGMA_X


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    t1: float
    dt: float

    def __post_init__(self):
        if self.dt <= 0.0 or self.t1 <= self.t0:
            raise ContractViolationError("need t1 > t0 and dt > 0")
        steps = (self.t1 - self.t0) / self.dt
        if abs(steps - round(steps)) > 1e-6 * max(steps, 1.0):
            raise ContractViolationError("dt must divide t1 - t0")

    @property
    def n_steps(self) -> int:
        return int(round((self.t1 - self.t0) / self.dt))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_steps + 1)


def build_liouvillian(spec: LindbladSpec) -> np.ndarray:
    """4x4 generator of d rho/dt: Hamiltonian part, sigma_z dephasing at rate k
    and an optional T1 dissipator. Trace preserving by construction."""
    h = spec.hamiltonian
    gen = -1j * (left_mult(h) - right_mult(h))
    eye4 = np.eye(4, dtype=complex)
    gen = gen + spec.k * (sandwich(SIGMA_Z, SIGMA_Z) - eye4)
    if spec.gamma1 > 0.0:
        ldl = dag(_LOWER) @ _LOWER
        gen = gen + spec.gamma1 * (
            sandwich(_LOWER, dag(_LOWER)) - 0.5 * (left_mult(ldl) + right_mult(ldl))
        )
    return gen


def propagate_rho(state: QubitState, spec: LindbladSpec, dt: float) -> QubitState:
    """Evolve rho by exp(L dt)."""
    if dt < 0.0:
        raise NumericDomainError("dt must be >= 0")
    prop = mat_exp(build_liouvillian(spec), dt)
    out = hermitize(unvec(prop @ vec(state.mat)))
    tr = np.trace(out).real
    if abs(tr - 1.0) > 1e-9:
        raise NumericDomainError(f"propagation broke normalization: trace={tr}")
    try:
        return QubitState(out / tr)
    except ContractViolationError as exc:
        raise NumericDomainError(f"propagation broke state invariants: {exc}") from exc


def joint_probability(
    state: QubitState,
    spec: LindbladSpec,
    povm1: list[PovmElement],
    povm2: list[PovmElement],
    dt: float,
) -> dict[tuple[str, str], float]:
    """P(V1, V2) = Tr(Omega_V2 exp(L dt)[Omega_V1 rho Omega_V1^dag] Omega_V2^dag).

    The first marginal equals the Born probabilities of povm1 on rho.
    """
    for fam in (povm1, povm2):
        total = sum(dag(e.mat) @ e.mat for e in fam)
        if np.max(np.abs(total - IDENTITY)) > 1e-9:
            raise ContractViolationError("POVM family is incomplete")
    if dt < 0.0:
        raise NumericDomainError("dt must be >= 0")
    prop = mat_exp(build_liouvillian(spec), dt)
    out: dict[tuple[str, str], float] = {}
    for i, e1 in enumerate(povm1):
        conditional = unvec(prop @ vec(e1.mat @ state.mat @ dag(e1.mat)))
        for j, e2 in enumerate(povm2):
            p = float(np.trace(e2.mat @ conditional @ dag(e2.mat)).real)
            out[(e1.label or str(i), e2.label or str(j))] = p
    return out


def symmetrized_correlation(state: QubitState, spec: LindbladSpec, dt: float) -> float:
    """(1/2) <sigma_z(t) sigma_z(t+dt) + sigma_z(t+dt) sigma_z(t)> via the
    quantum regression recipe, in units where the record V is +/-1."""
    if dt < 0.0:
        raise NumericDomainError("dt must be >= 0")
    prop = mat_exp(build_liouvillian(spec), dt)
    seeded = (SIGMA_Z @ state.mat + state.mat @ SIGMA_Z) / 2.0
    evolved = unvec(prop @ vec(seeded))
    return float(np.trace(SIGMA_Z @ evolved).real)


def backward_effect_step(
    effect: EffectMatrix, spec: LindbladSpec, record_value: float, dt: float
) -> EffectMatrix:
    """One explicit step of the backward effect-matrix equation.

    dE = { i[H, E] + k(sigma_z E sigma_z - E)
           + 2 eta k (sigma_z E + E sigma_z - Tr(sigma_z E) E) V } dt,
    followed by hermitization and trace renormalization.
    """
    if dt <= 0.0:
        raise NumericDomainError("dt must be > 0")
    if not np.isfinite(record_value):
        raise NumericDomainError("record_value must be finite")
    e = effect.mat
    h = spec.hamiltonian
    de = 1j * (h @ e - e @ h)
    de = de + spec.k * (SIGMA_Z @ e @ SIGMA_Z - e)
    innov = SIGMA_Z @ e + e @ SIGMA_Z - np.trace(SIGMA_Z @ e) * e
    de = de + 2.0 * spec.eta * spec.k * record_value * innov
    increment = de * dt
    new = hermitize(e + increment)
    tr = np.trace(new).real
    # a first-order step may undershoot zero by O(step^2); clip within that
    # tolerance, reject anything worse as a too-large step
    tol = 1e-9 + float(np.linalg.norm(increment)) ** 2
    if tr <= 0.0 or not psd_check(new, tol):
        raise StepSizeError("backward step produced a non-PSD effect; reduce dt")
    evals, evecs = np.linalg.eigh(new)
    evals = np.clip(evals, 0.0, None)
    new = (evecs * evals) @ dag(evecs)
    return EffectMatrix(new / np.trace(new).real)


def retrodictive_z(effect: EffectMatrix) -> float:
    """Diagnostic retrodictive Bloch component Tr(E sigma_z)/Tr(E)."""
    return float((np.trace(effect.mat @ SIGMA_Z) / np.trace(effect.mat)).real)
