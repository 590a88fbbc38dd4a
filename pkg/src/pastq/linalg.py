"""Dense complex linear algebra for 2x2 operators and 4x4 superoperators.

Vectorization convention: column stacking, vec(A X B) = (B^T kron A) vec(X).
Every routine in the package relies on this one convention.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolationError, NumericDomainError

__all__ = [
    "vec",
    "unvec",
    "dag",
    "hermitize",
    "psd_check",
    "mat_exp",
    "left_mult",
    "right_mult",
    "sandwich",
]

_EXP_TOL = 1e-12


def _require_finite(a: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise NumericDomainError(f"{what} contains non-finite entries")
    return a


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stack a 2x2 matrix into a length-4 vector."""
    return np.asarray(m, dtype=complex).reshape(4, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((2, 2), order="F")


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m, dtype=complex).T)


def left_mult(a: np.ndarray) -> np.ndarray:
    """Superoperator for X -> A X under column stacking."""
    return np.kron(np.eye(2), np.asarray(a, dtype=complex))


def right_mult(b: np.ndarray) -> np.ndarray:
    """Superoperator for X -> X B under column stacking."""
    return np.kron(np.asarray(b, dtype=complex).T, np.eye(2))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator for X -> A X B under column stacking."""
    return np.kron(np.asarray(b, dtype=complex).T, np.asarray(a, dtype=complex))


def hermitize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (m + m^dagger)/2. Idempotent."""
    m = _require_finite(m, "matrix")
    return (m + dag(m)) / 2


def psd_check(m: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the Hermitian 2x2 matrix m has both eigenvalues >= -tol.

    Uses the closed form via trace and determinant. Raises if m is not
    Hermitian within tol.
    """
    m = _require_finite(m, "matrix")
    if np.max(np.abs(m - dag(m))) > tol:
        raise ContractViolationError("psd_check requires a Hermitian matrix")
    tr = m[0, 0].real + m[1, 1].real
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    disc = max(tr * tr - 4.0 * det, 0.0)
    half = np.sqrt(disc)
    lam_min = (tr - half) / 2.0
    return bool(lam_min >= -tol)


def mat_exp(generator: np.ndarray, dt: float = 1.0) -> np.ndarray:
    """exp(generator * dt) by scaling-and-squaring with a Taylor core.

    Deterministic for identical inputs; series is truncated once the next
    term falls below 1e-12 relative to the running sum.
    """
    a = _require_finite(generator, "generator") * float(dt)
    if dt < 0:
        raise NumericDomainError("mat_exp requires dt >= 0")
    n = a.shape[0]
    norm = np.linalg.norm(a, 1)
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
        a = a / (2.0**squarings)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.linalg.norm(term, 1) <= _EXP_TOL * max(np.linalg.norm(result, 1), 1.0):
            break
    for _ in range(squarings):
        result = result @ result
    return result
