"""Qubit states, effect matrices, rotations and tilted projectors.

Basis convention: |0> = |+z> is the ground state, sigma_z|0> = +|0>, and the
state index 1 labels the excited level. Rotations use exp(-i angle sigma_y/2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, NumericDomainError
from .linalg import dag, hermitize, psd_check

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "IDENTITY",
    "QubitState",
    "EffectMatrix",
    "PovmElement",
    "BlochAngle",
    "rotation_y",
    "projector_theta",
    "make_diagonal_state",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

_TOL = 1e-9


def _as_matrix(mat) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.shape != (2, 2):
        raise ContractViolationError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise NumericDomainError("matrix contains non-finite entries")
    return m


@dataclass(frozen=True)
class QubitState:
    """Density matrix rho: Hermitian, PSD, trace 1 (all within 1e-9)."""

    mat: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.mat)
        if np.max(np.abs(m - dag(m))) > _TOL:
            raise ContractViolationError("density matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > _TOL or abs(np.trace(m).imag) > _TOL:
            raise ContractViolationError("density matrix must have trace 1")
        if not psd_check(hermitize(m), _TOL):
            raise ContractViolationError("density matrix must be PSD")
        m = hermitize(m)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def is_diagonal(self) -> bool:
        return abs(self.mat[0, 1]) < _TOL and abs(self.mat[1, 0]) < _TOL

    @property
    def diag(self) -> tuple[float, float]:
        return float(self.mat[0, 0].real), float(self.mat[1, 1].real)


@dataclass(frozen=True)
class EffectMatrix:
    """Effect matrix E, stored with the trace-1 normalization convention."""

    mat: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.mat)
        if np.max(np.abs(m - dag(m))) > _TOL:
            raise ContractViolationError("effect matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > _TOL or abs(np.trace(m).imag) > _TOL:
            raise ContractViolationError("effect matrix must have trace 1")
        if not psd_check(hermitize(m), _TOL):
            raise ContractViolationError("effect matrix must be PSD")
        m = hermitize(m)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def diag(self) -> tuple[float, float]:
        return float(self.mat[0, 0].real), float(self.mat[1, 1].real)


@dataclass(frozen=True)
class PovmElement:
    """Measurement operator Omega_m; projectors are the main case here."""

    mat: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = _as_matrix(self.mat)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def is_projector(self) -> bool:
        m = self.mat
        return (
            np.max(np.abs(m - dag(m))) < _TOL
            and np.max(np.abs(m @ m - m)) < _TOL
        )


@dataclass(frozen=True)
class BlochAngle:
    """Polar measurement axis; phi is carried but fixed to 0 in this artifact."""

    theta: float
    phi: float = field(default=0.0)

    def __post_init__(self):
        if not np.isfinite(self.theta) or not (0.0 <= self.theta <= np.pi):
            raise ContractViolationError("theta must lie in [0, pi]")
        if self.phi != 0.0:
            raise ContractViolationError("phi != 0 is out of scope")


def rotation_y(angle: float) -> np.ndarray:
    """Unitary exp(-i angle sigma_y / 2)."""
    if not np.isfinite(angle):
        raise NumericDomainError("rotation angle must be finite")
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def projector_theta(sign: int, angle: BlochAngle | float) -> PovmElement:
    """Projector onto the +/- eigenstate of the axis tilted by theta from z.

    Built as R_y(-theta) Pi_{+/-,z} R_y(theta); sign is +1 or -1.
    """
    if sign not in (+1, -1):
        raise ContractViolationError("sign must be +1 or -1")
    theta = angle.theta if isinstance(angle, BlochAngle) else float(BlochAngle(angle).theta)
    pi_z = np.diag([1.0, 0.0]).astype(complex) if sign > 0 else np.diag([0.0, 1.0]).astype(complex)
    # orientation: the + eigenstate is cos(theta/2)|0> + sin(theta/2)|1>
    mat = rotation_y(theta) @ pi_z @ rotation_y(-theta)
    return PovmElement(hermitize(mat), label=("+" if sign > 0 else "-"))


def make_diagonal_state(p0: float) -> QubitState:
    """Diagonal mixed state diag(p0, 1-p0)."""
    if not np.isfinite(p0) or not (0.0 <= p0 <= 1.0):
        raise ContractViolationError("p0 must lie in [0, 1]")
    return QubitState(np.diag([p0, 1.0 - p0]).astype(complex))
