"""Command-line front end: one subcommand per reproducible output table.

Exit codes: 0 success, 1 validation error, 2 runtime/numeric error,
3 selftest failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .dynamics import (
    LindbladSpec,
    TimeGrid,
    backward_effect_step,
    propagate_rho,
    retrodictive_z,
    symmetrized_correlation,
)
from .errors import ConfigError, ContractViolationError, PastqError
from .lab import ExperimentPlan, run_bin_scan, run_sweep
from .linalg import mat_exp
from .readout import (
    FidelityModel,
    ReadoutChannel,
    e00_from_xi,
    fidelity,
    forward_qnd_update,
    xi_from_e00,
)
from .retrodiction import (
    born_probability,
    p_cm_theta,
    p_past_theta,
    pqs_probability,
)
from .states import EffectMatrix, make_diagonal_state, projector_theta

__all__ = ["main"]


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_csv(path: str, command: str, cfg: RunConfig, header: list[str], rows) -> None:
    lines = [f"# pastq {command} v{__version__}", f"# master_seed = {cfg.master_seed}"]
    lines += [f"# config: {line}" for line in cfg.fingerprint()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise PastqError(f"cannot write output file {path}: {exc}") from exc


def _seed_for(master_seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(master_seed, spawn_key=tuple(key)).generate_state(1)[0])


def _plan(cfg: RunConfig, rho00: float, e_window, oracle: str, seed: int) -> ExperimentPlan:
    return ExperimentPlan(
        rho00_prep=rho00,
        theta_grid=cfg.theta_grid,
        shots=cfg.shots,
        sigma_e=cfg.sigma,
        fidelity_model=FidelityModel(cfg.base_fidelity, cfg.t_m, cfg.t1),
        e_window=e_window,
        oracle=oracle,
        master_seed=seed,
    )


def cmd_fig1c(cfg: RunConfig, out: str) -> int:
    """Predictive check: unconditioned tilted-axis statistics vs the
    diagonal-rho formula, for each prepared mixed state."""
    rows = []
    for i, rho00 in enumerate(cfg.rho00):
        plan = _plan(cfg, rho00, "all", "quantum", _seed_for(cfg.master_seed, 1, i))
        for r in run_sweep(plan).rows:
            rows.append(
                (rho00, r.theta, r.p_tilde, r.p_tilde_corrected, r.stderr,
                 r.stderr_corrected, r.p_rho_pred)
            )
    _write_csv(out, "fig1c", cfg,
               ["rho00", "theta", "p_tilde_raw", "p_tilde_corrected", "stderr",
                "stderr_corrected", "p_rho_pred"], rows)
    return 0


def cmd_fig4(cfg: RunConfig, out: str) -> int:
    """Post-selected smoothing check for the configured (rho00, E00) pairs."""
    rows = []
    for i, (rho00, center) in enumerate(zip(cfg.rho00, cfg.e00_centers)):
        plan = _plan(cfg, rho00, (center, cfg.e00_halfwidth), cfg.oracle,
                     _seed_for(cfg.master_seed, 4, i))
        for r in run_sweep(plan).rows:
            rows.append(
                (rho00, center, r.theta, r.p_tilde_corrected, r.stderr_corrected,
                 r.p_past_pred, r.p_past_band_lo, r.p_past_band_hi, r.p_cm_pred,
                 r.p_tilde, r.counts)
            )
    _write_csv(out, "fig4", cfg,
               ["rho00", "e00_center", "theta", "p_tilde", "stderr", "p_past_pred",
                "p_past_band_lo", "p_past_band_hi", "p_cm_pred", "p_tilde_raw",
                "counts"], rows)
    return 0


def cmd_fig3(cfg: RunConfig, out: str) -> int:
    """Full 2-D scan over theta and uniform E00 bins for each prepared state."""
    channel = ReadoutChannel(sigma=cfg.sigma)
    rows = []
    n_bins = int(round(1.0 / cfg.e00_bin_width))
    centers = (np.arange(n_bins) + 0.5) * cfg.e00_bin_width
    for i, rho00 in enumerate(cfg.rho00):
        plan = _plan(cfg, rho00, "all", cfg.oracle, _seed_for(cfg.master_seed, 3, i))
        result = run_bin_scan(plan, cfg.e00_bin_width)
        for j, r in enumerate(result.rows):
            bin_center = float(centers[j % n_bins])
            xi_equiv = xi_from_e00(channel, bin_center)
            p_tilde = r.p_tilde_corrected if r.counts else float("nan")
            rows.append((rho00, r.theta, bin_center, xi_equiv, p_tilde, r.counts))
    _write_csv(out, "fig3", cfg,
               ["rho00", "theta", "e00_bin_center", "xi_equiv", "p_tilde", "counts"],
               rows)
    return 0


def cmd_dynamics(cfg: RunConfig, out: str) -> int:
    """Master-equation curves, two-time correlation and a backward effect
    trajectory on one time grid."""
    spec = LindbladSpec(cfg.rabi_frequency, cfg.k, cfg.eta, cfg.gamma1)
    grid = TimeGrid(cfg.t0, cfg.t_final, cfg.dt)
    times = grid.times
    state = make_diagonal_state(cfg.rho00_init)
    # forward rho curve and its sigma_z expectation
    states = [state]
    for _ in range(grid.n_steps):
        states.append(propagate_rho(states[-1], spec, cfg.dt))
    sz = [float((s.mat[0, 0] - s.mat[1, 1]).real) for s in states]
    # measurement record: supplied file or synthesized diffusive record
    if cfg.record_file:
        try:
            record = np.loadtxt(cfg.record_file, dtype=float).reshape(-1)
        except OSError as exc:
            raise ConfigError(f"dynamics.record_file: cannot read: {exc}") from exc
        if record.size < grid.n_steps:
            raise ConfigError(
                f"dynamics.record_file: need {grid.n_steps} samples, got {record.size}"
            )
        record = record[: grid.n_steps]
    else:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.master_seed, spawn_key=(9,)))
        noise_scale = (
            1.0 / np.sqrt(4.0 * spec.eta * spec.k * cfg.dt) if spec.eta * spec.k > 0 else 0.0
        )
        record = np.array(sz[:-1]) + noise_scale * rng.standard_normal(grid.n_steps)
    # backward effect trajectory from E(T) = I/2
    effects = [EffectMatrix(np.eye(2, dtype=complex) / 2.0)] * (grid.n_steps + 1)
    effects = list(effects)
    for step in range(grid.n_steps - 1, -1, -1):
        effects[step] = backward_effect_step(
            effects[step + 1], spec, float(record[step]), cfg.dt
        )
    rows = []
    for idx, t in enumerate(times):
        s = states[idx]
        e = effects[idx]
        corr = symmetrized_correlation(state, spec, float(t - cfg.t0))
        rows.append(
            (float(t), float(s.mat[0, 0].real), float(s.mat[1, 1].real),
             float(s.mat[0, 1].real), float(s.mat[0, 1].imag), corr,
             float(e.mat[0, 0].real), float(e.mat[1, 1].real), retrodictive_z(e))
        )
    _write_csv(out, "dynamics", cfg,
               ["t", "rho00", "rho11", "re_rho01", "im_rho01", "correlation",
                "e00", "e11", "retro_z"], rows)
    return 0


def _selftest_checks(cfg: RunConfig):
    model = FidelityModel(cfg.base_fidelity, cfg.t_m, cfg.t1)
    channel = ReadoutChannel(sigma=cfg.sigma)
    rng = np.random.default_rng(cfg.master_seed)

    def check_fidelity_endpoints():
        assert abs(fidelity(FidelityModel(), 0.0) - 0.99) < 1e-12
        assert abs(fidelity(FidelityModel(), np.pi) - 0.945) < 1e-12

    def check_effect_qnd_consistency():
        for _ in range(200):
            xi = float(rng.normal(0.0, 2.0))
            e00 = float(e00_from_xi(channel, xi))
            post = forward_qnd_update(make_diagonal_state(0.5), channel, xi)
            assert abs(post.diag[0] - e00) < 1e-12

    def check_retrodiction_reduction():
        flat = EffectMatrix(np.eye(2, dtype=complex) / 2.0)
        for _ in range(50):
            p0 = float(rng.random())
            theta = float(rng.random() * np.pi)
            povm = [projector_theta(+1, theta), projector_theta(-1, theta)]
            state = make_diagonal_state(p0)
            a = pqs_probability(state, flat, povm)
            b = born_probability(state, povm)
            assert abs(a["+"] - b["+"]) < 1e-12

    def check_coincidence_points():
        rho, e = (0.91, 0.09), (0.916, 0.084)
        for theta in (0.0, np.pi / 2.0, np.pi):
            assert abs(p_past_theta(rho, e, theta) - p_cm_theta(rho, e, theta)) < 1e-12

    def check_unbiased_midpoint():
        shots = max(cfg.shots // 5, 1000)
        plan = ExperimentPlan(
            rho00_prep=0.91, theta_grid=(np.pi / 2.0,), shots=shots,
            sigma_e=cfg.sigma, fidelity_model=model, e_window="all",
            oracle="quantum", master_seed=_seed_for(cfg.master_seed, 5),
        )
        row = run_sweep(plan).rows[0]
        assert abs(row.p_tilde_corrected - 0.5) < 4.0 * row.stderr_corrected + 1e-3

    def check_sweep_matches_prediction():
        shots = max(cfg.shots // 5, 1000)
        plan = ExperimentPlan(
            rho00_prep=0.91, theta_grid=tuple(np.linspace(0, np.pi, 5)), shots=shots,
            sigma_e=cfg.sigma, fidelity_model=model, e_window="all",
            oracle="quantum", master_seed=_seed_for(cfg.master_seed, 6),
        )
        for row in run_sweep(plan).rows:
            assert abs(row.p_tilde_corrected - row.p_rho_pred) < 4.0 * max(
                row.stderr_corrected, 1e-4
            )

    def check_dynamics_limits():
        spec = LindbladSpec(cfg.rabi_frequency, cfg.k, cfg.eta, cfg.gamma1)
        for _ in range(20):
            p0 = float(rng.random())
            assert abs(symmetrized_correlation(make_diagonal_state(p0), spec, 0.0) - 1.0) < 1e-9

    def check_matexp_semigroup():
        spec = LindbladSpec(cfg.rabi_frequency, cfg.k, cfg.eta, cfg.gamma1)
        from .dynamics import build_liouvillian

        gen = build_liouvillian(spec)
        t1, t2 = 3e-7, 5e-7
        lhs = mat_exp(gen, t1 + t2)
        rhs = mat_exp(gen, t1) @ mat_exp(gen, t2)
        assert np.max(np.abs(lhs - rhs)) < 1e-9

    return [
        ("fidelity-endpoints", check_fidelity_endpoints),
        ("effect-qnd-consistency", check_effect_qnd_consistency),
        ("retrodiction-reduction", check_retrodiction_reduction),
        ("coincidence-points", check_coincidence_points),
        ("unbiased-midpoint", check_unbiased_midpoint),
        ("sweep-matches-prediction", check_sweep_matches_prediction),
        ("correlation-zero-lag", check_dynamics_limits),
        ("matexp-semigroup", check_matexp_semigroup),
    ]


def cmd_selftest(cfg: RunConfig, out: str) -> int:
    failures = 0
    lines = []
    for name, check in _selftest_checks(cfg):
        try:
            check()
        except AssertionError as exc:
            failures += 1
            lines.append(f"FAIL {name}: {exc}")
        except PastqError as exc:
            failures += 1
            lines.append(f"FAIL {name}: {exc}")
        else:
            lines.append(f"PASS {name}")
    report = "\n".join(lines) + "\n"
    if out == "-":
        sys.stdout.write(report)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(report)
        sys.stdout.write(report)
    return 3 if failures else 0


_COMMANDS = {
    "fig1c": cmd_fig1c,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "dynamics": cmd_dynamics,
    "selftest": cmd_selftest,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pastq",
        description="Forward-backward qubit smoothing: simulation and table generation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="TOML config file (defaults used if omitted)")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        p.add_argument("--seed", type=int, default=None, help="override master seed")
        p.add_argument("--shots", type=int, default=None, help="override shots per theta")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.master_seed = args.seed
        if args.shots is not None:
            if args.shots < 1:
                raise ConfigError("experiment.shots: must be >= 1")
            cfg.shots = args.shots
    except (ConfigError, ContractViolationError) as exc:
        print(f"pastq: configuration error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"pastq: configuration error: {exc}", file=sys.stderr)
        return 1
    except PastqError as exc:
        print(f"pastq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
