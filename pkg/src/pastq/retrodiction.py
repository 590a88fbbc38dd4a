"""Prediction and retrodiction formulas for the monitored qubit.

Two routes are provided for each probability: generic trace expressions over
POVM elements, and closed-form qubit expressions in the diagonal basis. The
test suite cross-asserts the two against each other.

Outcome convention: "+" is eigenvalue +1, i.e. the |0> outcome at theta = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DegenerateRetrodictionError
from .linalg import dag
from .states import EffectMatrix, PovmElement, QubitState

__all__ = [
    "OutcomeDistribution",
    "born_probability",
    "classical_mixture_probability",
    "pqs_probability",
    "diagonal_smoothing",
    "p_rho_theta",
    "p_past_theta",
    "p_cm_theta",
]

_TOL = 1e-9


@dataclass(frozen=True)
class OutcomeDistribution:
    """Normalized probabilities keyed by outcome label."""

    probs: dict[str, float]

    def __post_init__(self):
        total = 0.0
        for label, p in self.probs.items():
            if not (-_TOL <= p <= 1.0 + _TOL):
                raise ContractViolationError(f"probability for {label!r} out of [0,1]: {p}")
            total += p
        if abs(total - 1.0) > _TOL:
            raise ContractViolationError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, label: str) -> float:
        return self.probs[label]


def _labels(povm: list[PovmElement]) -> list[str]:
    return [e.label or str(i) for i, e in enumerate(povm)]


def _check_complete(povm: list[PovmElement]) -> None:
    total = sum(dag(e.mat) @ e.mat for e in povm)
    if np.max(np.abs(total - np.eye(2))) > _TOL:
        raise ContractViolationError("POVM is incomplete: sum of Omega^dag Omega != I")


def born_probability(state: QubitState, povm: list[PovmElement]) -> OutcomeDistribution:
    """P(m) = Tr(Omega_m rho Omega_m^dagger)."""
    _check_complete(povm)
    probs = {
        label: float(np.trace(e.mat @ state.mat @ dag(e.mat)).real)
        for label, e in zip(_labels(povm), povm)
    }
    return OutcomeDistribution(probs)


def classical_mixture_probability(
    weights: list[tuple[float, int]], povm: list[PovmElement]
) -> OutcomeDistribution:
    """Outcome probabilities for a classical mixture of basis states.

    weights is a list of (probability, basis index) pairs summing to 1.
    """
    total = sum(w for w, _ in weights)
    if abs(total - 1.0) > _TOL:
        raise ContractViolationError(f"weights sum to {total}, not 1")
    _check_complete(povm)
    probs = {}
    for label, e in zip(_labels(povm), povm):
        p = 0.0
        for w, n in weights:
            if n not in (0, 1):
                raise ContractViolationError("basis index must be 0 or 1")
            ket = np.zeros((2, 1), dtype=complex)
            ket[n, 0] = 1.0
            rho_n = ket @ dag(ket)
            p += w * float(np.trace(e.mat @ rho_n @ dag(e.mat)).real)
        probs[label] = p
    return OutcomeDistribution(probs)


def pqs_probability(
    state: QubitState, effect: EffectMatrix, povm: list[PovmElement]
) -> OutcomeDistribution:
    """Past-quantum-state retrodiction over a complete POVM.

    P_P(m) = Tr(Omega_m rho Omega_m^dag E) normalized over m. Invariant under
    rescaling of E.
    """
    _check_complete(povm)
    raw = {
        label: float(np.trace(e.mat @ state.mat @ dag(e.mat) @ effect.mat).real)
        for label, e in zip(_labels(povm), povm)
    }
    norm = sum(raw.values())
    if norm <= 0.0:
        raise DegenerateRetrodictionError(
            "rho and E have orthogonal supports; retrodiction undefined"
        )
    return OutcomeDistribution({k: v / norm for k, v in raw.items()})


def _check_pair(pair: tuple[float, float], name: str) -> tuple[float, float]:
    a, b = float(pair[0]), float(pair[1])
    if abs(a + b - 1.0) > _TOL or a < -_TOL or b < -_TOL:
        raise ContractViolationError(f"{name} must be a normalized probability pair")
    return a, b


def diagonal_smoothing(
    rho_diag: tuple[float, float], e_diag: tuple[float, float]
) -> tuple[float, float]:
    """Forward-backward smoothing in the shared eigenbasis.

    P_P(n) = rho_nn E_nn / sum_n' rho_n'n' E_n'n'.
    """
    r0, r1 = _check_pair(rho_diag, "rho_diag")
    e0, e1 = _check_pair(e_diag, "e_diag")
    num0, num1 = r0 * e0, r1 * e1
    norm = num0 + num1
    if norm <= 0.0:
        raise DegenerateRetrodictionError("rho and E have orthogonal supports")
    return num0 / norm, num1 / norm


def p_rho_theta(rho_diag: tuple[float, float], theta: float) -> float:
    """Predictive probability of the +1 outcome along the theta-tilted axis."""
    r0, r1 = _check_pair(rho_diag, "rho_diag")
    c2, s2 = np.cos(theta / 2.0) ** 2, np.sin(theta / 2.0) ** 2
    return r0 * c2 + r1 * s2


def p_past_theta(
    rho_diag: tuple[float, float], e_diag: tuple[float, float], theta: float
) -> float:
    """Smoothed probability of the +1 outcome along the theta-tilted axis.

    Combines the predictive and retrodictive tilted-axis probabilities:
    P_rho P_E / (P_rho P_E + (1-P_rho)(1-P_E)).
    """
    p_rho = p_rho_theta(rho_diag, theta)
    p_e = p_rho_theta(_check_pair(e_diag, "e_diag"), theta)
    num = p_rho * p_e
    den = num + (1.0 - p_rho) * (1.0 - p_e)
    if den <= 0.0:
        raise DegenerateRetrodictionError("rho and E have orthogonal tilted supports")
    return num / den


def p_cm_theta(
    rho_diag: tuple[float, float], e_diag: tuple[float, float], theta: float
) -> float:
    """Classical-mixture rival: smoothed populations reused as mixture weights."""
    pp0, pp1 = diagonal_smoothing(rho_diag, e_diag)
    c2, s2 = np.cos(theta / 2.0) ** 2, np.sin(theta / 2.0) ** 2
    return pp0 * c2 + pp1 * s2
