"""Monte Carlo virtual lab: prepare a diagonal mixed state, measure along a
tilted axis, probe the post-measurement state, and post-select on the inferred
effect matrix.

Two physics oracles are available. The quantum oracle collapses the qubit onto
the tilted-axis eigenstate before the probe; the classical-mixture oracle
keeps the hidden basis state untouched. Comparing their post-selected
statistics against the smoothed and classical-mixture formulas is the whole
point of the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, EmptyBinError
from .readout import (
    FidelityModel,
    ReadoutChannel,
    apply_readout_error,
    correct_fidelity,
    e00_from_xi,
    fidelity,
    sample_xi,
)
from .retrodiction import p_cm_theta, p_past_theta, p_rho_theta

__all__ = [
    "ExperimentPlan",
    "ShotRecord",
    "SweepRow",
    "SweepResult",
    "run_shot_quantum",
    "run_shot_classical",
    "run_sweep",
    "run_bin_scan",
    "representative_e00",
]

_CHUNK = 1_000_000
_EDGE_EPS = 1e-12


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything needed to reproduce one sweep, including the seed."""

    rho00_prep: float
    theta_grid: tuple[float, ...]
    shots: int
    sigma_e: float = 0.4
    fidelity_model: FidelityModel = field(default_factory=FidelityModel)
    e_window: str | tuple[float, float] = "all"
    oracle: str = "quantum"
    master_seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.rho00_prep <= 1.0):
            raise ContractViolationError("rho00_prep must lie in [0, 1]")
        if self.shots < 1:
            raise ContractViolationError("shots must be >= 1")
        thetas = tuple(float(t) for t in self.theta_grid)
        if not thetas or any(not (0.0 <= t <= np.pi) for t in thetas):
            raise ContractViolationError("theta values must lie in [0, pi]")
        object.__setattr__(self, "theta_grid", thetas)
        if self.oracle not in ("quantum", "classical-mixture"):
            raise ContractViolationError("oracle must be 'quantum' or 'classical-mixture'")
        if self.e_window != "all":
            center, half = self.e_window
            if not (0.0 <= center <= 1.0) or half <= 0.0:
                raise ContractViolationError("e_window must be (center in [0,1], half-width > 0)")
            object.__setattr__(self, "e_window", (float(center), float(half)))
        if self.sigma_e <= 0.0:
            raise ContractViolationError("sigma_e must be > 0")

    @property
    def channel(self) -> ReadoutChannel:
        return ReadoutChannel(sigma=self.sigma_e)


@dataclass(frozen=True)
class ShotRecord:
    """One virtual-experiment trial."""

    prep_z: int
    theta: float
    ideal_outcome: int
    reported_outcome: int
    xi: float
    e00: float


@dataclass(frozen=True)
class SweepRow:
    theta: float
    e00_rep: float
    n_plus: int
    n_minus: int
    p_tilde: float
    stderr: float
    p_tilde_corrected: float
    stderr_corrected: float
    p_rho_pred: float
    p_past_pred: float
    p_past_band_lo: float
    p_past_band_hi: float
    p_cm_pred: float

    @property
    def counts(self) -> int:
        return self.n_plus + self.n_minus


@dataclass(frozen=True)
class SweepResult:
    plan: ExperimentPlan
    rows: tuple[SweepRow, ...]


def _plus_probability(prep_z: int, theta: float) -> float:
    # Born probability of the +1 tilted outcome from basis state |prep_z>
    c2 = np.cos(theta / 2.0) ** 2
    return c2 if prep_z == 0 else 1.0 - c2


def run_shot_quantum(
    plan: ExperimentPlan, theta: float, rng: np.random.Generator
) -> ShotRecord:
    """One trial with genuine projective back-action before the E-probe."""
    channel = plan.channel
    prep_z = 0 if rng.random() < plan.rho00_prep else 1
    ideal = +1 if rng.random() < _plus_probability(prep_z, theta) else -1
    reported = apply_readout_error(ideal, theta, plan.fidelity_model, rng)
    # z-populations of the collapsed tilted eigenstate
    p_z0 = np.cos(theta / 2.0) ** 2 if ideal > 0 else np.sin(theta / 2.0) ** 2
    post_z = 0 if rng.random() < p_z0 else 1
    xi = sample_xi(channel, post_z, rng)
    return ShotRecord(prep_z, theta, ideal, reported, xi, float(e00_from_xi(channel, xi)))


def run_shot_classical(
    plan: ExperimentPlan, theta: float, rng: np.random.Generator
) -> ShotRecord:
    """One trial where the hidden basis state survives the measurement."""
    channel = plan.channel
    prep_z = 0 if rng.random() < plan.rho00_prep else 1
    ideal = +1 if rng.random() < _plus_probability(prep_z, theta) else -1
    reported = apply_readout_error(ideal, theta, plan.fidelity_model, rng)
    xi = sample_xi(channel, prep_z, rng)
    return ShotRecord(prep_z, theta, ideal, reported, xi, float(e00_from_xi(channel, xi)))


def _simulate_batch(
    plan: ExperimentPlan, theta: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized trials; returns (reported_plus bool array, e00 array).

    Same physics as the scalar run_shot_* functions, drawn in batch order.
    """
    channel = plan.channel
    c2 = np.cos(theta / 2.0) ** 2
    prep_z = (rng.random(n) >= plan.rho00_prep).astype(np.int8)
    p_plus = np.where(prep_z == 0, c2, 1.0 - c2)
    ideal_plus = rng.random(n) < p_plus
    flip = rng.random(n) < (1.0 - fidelity(plan.fidelity_model, theta))
    reported_plus = ideal_plus ^ flip
    if plan.oracle == "quantum":
        p_z0 = np.where(ideal_plus, c2, 1.0 - c2)
        probe_z = (rng.random(n) >= p_z0).astype(np.int8)
    else:
        probe_z = prep_z
    mu = np.where(probe_z == 0, 1.0, -1.0)
    xi = mu + channel.sigma * rng.standard_normal(n)
    return reported_plus, np.asarray(e00_from_xi(channel, xi))


def representative_e00(
    window: tuple[float, float], records
) -> tuple[float, float, float]:
    """Within-window mean of e00 plus the window edges (for prediction bands)."""
    center, half = window
    lo, hi = center - half, center + half
    vals = np.array(
        [r.e00 if isinstance(r, ShotRecord) else float(r) for r in records], dtype=float
    )
    vals = vals[(vals >= lo) & (vals <= hi)]
    if vals.size == 0:
        raise EmptyBinError(f"no shots in e00 window [{lo}, {hi}]")
    return float(vals.mean()), lo, hi


def _predictions(
    rho_diag: tuple[float, float], e00_rep: float, window_edges, theta: float
) -> tuple[float, float, float, float]:
    e00_rep = min(max(e00_rep, _EDGE_EPS), 1.0 - _EDGE_EPS)
    e_rep = (e00_rep, 1.0 - e00_rep)
    p_past = p_past_theta(rho_diag, e_rep, theta)
    if window_edges is None:
        band_lo = band_hi = p_past
    else:
        lo, hi = window_edges
        vals = []
        for edge in (lo, hi):
            edge = min(max(edge, _EDGE_EPS), 1.0 - _EDGE_EPS)
            vals.append(p_past_theta(rho_diag, (edge, 1.0 - edge), theta))
        band_lo, band_hi = min(vals), max(vals)
    return p_past, band_lo, band_hi, p_cm_theta(rho_diag, e_rep, theta)


def _make_row(
    plan: ExperimentPlan,
    theta: float,
    n_plus: int,
    n_total: int,
    e00_rep: float,
    window_edges,
) -> SweepRow:
    rho_diag = (plan.rho00_prep, 1.0 - plan.rho00_prep)
    p_rho = p_rho_theta(rho_diag, theta)
    p_past, band_lo, band_hi, p_cm = _predictions(rho_diag, e00_rep, window_edges, theta)
    if n_total == 0:
        return SweepRow(
            theta, e00_rep, 0, 0, float("nan"), float("nan"), float("nan"),
            float("nan"), p_rho, p_past, band_lo, band_hi, p_cm,
        )
    p = n_plus / n_total
    stderr = float(np.sqrt(max(p * (1.0 - p), 0.0) / n_total))
    p_corr = correct_fidelity(p, theta, plan.fidelity_model)
    f = fidelity(plan.fidelity_model, theta)
    stderr_corr = stderr / abs(2.0 * f - 1.0)
    return SweepRow(
        theta, e00_rep, int(n_plus), int(n_total - n_plus), p, stderr,
        p_corr, stderr_corr, p_rho, p_past, band_lo, band_hi, p_cm,
    )


def _theta_rngs(plan: ExperimentPlan) -> list[np.random.Generator]:
    seq = np.random.SeedSequence(plan.master_seed)
    return [np.random.default_rng(child) for child in seq.spawn(len(plan.theta_grid))]


def run_sweep(plan: ExperimentPlan) -> SweepResult:
    """Run all shots per theta and aggregate into one row per theta.

    With e_window="all" every shot counts; with a (center, half-width) window
    only shots whose e00 falls inside the window are kept, and predictions are
    evaluated at the within-window mean with a band at the window edges.
    """
    rows = []
    for theta, rng in zip(plan.theta_grid, _theta_rngs(plan)):
        n_plus = 0
        n_total = 0
        e00_sum = 0.0
        remaining = plan.shots
        while remaining > 0:
            n = min(remaining, _CHUNK)
            remaining -= n
            reported_plus, e00 = _simulate_batch(plan, theta, n, rng)
            if plan.e_window == "all":
                keep = np.ones(n, dtype=bool)
            else:
                center, half = plan.e_window
                keep = (e00 >= center - half) & (e00 <= center + half)
            n_total += int(keep.sum())
            n_plus += int(reported_plus[keep].sum())
            e00_sum += float(e00[keep].sum())
        if plan.e_window == "all":
            e00_rep, edges = 0.5, None
        else:
            center, half = plan.e_window
            edges = (center - half, center + half)
            e00_rep = e00_sum / n_total if n_total else center
        rows.append(_make_row(plan, theta, n_plus, n_total, e00_rep, edges))
    return SweepResult(plan, tuple(rows))


def run_bin_scan(plan: ExperimentPlan, bin_width: float = 0.1) -> SweepResult:
    """2-D scan: for each theta, bin all shots by e00 into uniform bins of the
    given width across [0, 1]; one row per (theta, nonempty-or-not bin)."""
    if not (0.0 < bin_width <= 1.0):
        raise ContractViolationError("bin_width must lie in (0, 1]")
    n_bins = int(round(1.0 / bin_width))
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    rows = []
    for theta, rng in zip(plan.theta_grid, _theta_rngs(plan)):
        plus = np.zeros(n_bins, dtype=np.int64)
        total = np.zeros(n_bins, dtype=np.int64)
        e00_sum = np.zeros(n_bins, dtype=float)
        remaining = plan.shots
        while remaining > 0:
            n = min(remaining, _CHUNK)
            remaining -= n
            reported_plus, e00 = _simulate_batch(plan, theta, n, rng)
            idx = np.clip((e00 / bin_width).astype(np.int64), 0, n_bins - 1)
            total += np.bincount(idx, minlength=n_bins)
            plus += np.bincount(idx, weights=reported_plus, minlength=n_bins).astype(np.int64)
            e00_sum += np.bincount(idx, weights=e00, minlength=n_bins)
        for b in range(n_bins):
            center = (edges[b] + edges[b + 1]) / 2.0
            rep = e00_sum[b] / total[b] if total[b] else center
            rows.append(
                _make_row(plan, theta, int(plus[b]), int(total[b]), rep,
                          (edges[b], edges[b + 1]))
            )
    return SweepResult(plan, tuple(rows))
