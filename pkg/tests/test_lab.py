import numpy as np
import pytest

from pastq.errors import ContractViolationError, EmptyBinError
from pastq.lab import (
    ExperimentPlan,
    ShotRecord,
    representative_e00,
    run_bin_scan,
    run_shot_classical,
    run_shot_quantum,
    run_sweep,
)
from pastq.readout import FidelityModel, ReadoutChannel, e00_from_xi

PERFECT = FidelityModel(base_fidelity=1.0, t1=1e9)


def plan_with(**kwargs):
    defaults = dict(
        rho00_prep=0.91,
        theta_grid=(np.pi / 4,),
        shots=1000,
        sigma_e=0.4,
        e_window="all",
        oracle="quantum",
        master_seed=7,
    )
    defaults.update(kwargs)
    return ExperimentPlan(**defaults)


class TestPlanValidation:
    def test_bad_rho00(self):
        with pytest.raises(ContractViolationError):
            plan_with(rho00_prep=1.2)

    def test_bad_theta(self):
        with pytest.raises(ContractViolationError):
            plan_with(theta_grid=(4.0,))

    def test_bad_oracle(self):
        with pytest.raises(ContractViolationError):
            plan_with(oracle="pilot-wave")

    def test_bad_window(self):
        with pytest.raises(ContractViolationError):
            plan_with(e_window=(1.4, 0.05))


class TestSingleShots:
    def test_quantum_qnd_chain(self):
        # theta=0, tiny sigma, perfect fidelity, pure prep: deterministic chain
        plan = plan_with(
            rho00_prep=1.0, theta_grid=(0.0,), sigma_e=1e-6, fidelity_model=PERFECT
        )
        rng = np.random.default_rng(0)
        for _ in range(20):
            rec = run_shot_quantum(plan, 0.0, rng)
            assert rec.reported_outcome == +1
            assert rec.xi == pytest.approx(1.0, abs=1e-4)
            assert rec.e00 == pytest.approx(1.0, abs=1e-9)

    def test_e00_reproducible_from_xi(self):
        plan = plan_with()
        rng = np.random.default_rng(5)
        channel = ReadoutChannel(sigma=plan.sigma_e)
        for runner in (run_shot_quantum, run_shot_classical):
            for _ in range(50):
                rec = runner(plan, np.pi / 3, rng)
                assert rec.e00 == pytest.approx(float(e00_from_xi(channel, rec.xi)), abs=0)

    def test_unbiased_at_half_pi(self):
        plan = plan_with(rho00_prep=0.5, fidelity_model=PERFECT)
        rng = np.random.default_rng(8)
        n = 20_000
        plus = sum(
            run_shot_quantum(plan, np.pi / 2, rng).reported_outcome == 1 for _ in range(n)
        )
        assert plus / n == pytest.approx(0.5, abs=4 * 0.5 / np.sqrt(n))

    def test_classical_keeps_hidden_state(self):
        # with a tiny sigma the classical xi reveals prep_z exactly
        plan = plan_with(sigma_e=1e-6, fidelity_model=PERFECT)
        rng = np.random.default_rng(9)
        for _ in range(100):
            rec = run_shot_classical(plan, np.pi / 2, rng)
            expected_xi = 1.0 if rec.prep_z == 0 else -1.0
            assert rec.xi == pytest.approx(expected_xi, abs=1e-4)


class TestRunSweep:
    def test_deterministic(self):
        plan = plan_with(theta_grid=tuple(np.linspace(0, np.pi, 5)), shots=20_000)
        assert run_sweep(plan) == run_sweep(plan)

    def test_different_seed_differs(self):
        plan = plan_with(shots=20_000)
        other = plan_with(shots=20_000, master_seed=8)
        assert run_sweep(plan).rows != run_sweep(other).rows

    def test_marginal_recovers_forward_prediction(self):
        plan = plan_with(theta_grid=tuple(np.linspace(0, np.pi, 7)), shots=50_000)
        for row in run_sweep(plan).rows:
            assert abs(row.p_tilde_corrected - row.p_rho_pred) < 3.5 * row.stderr_corrected

    def test_pole_angles_oracles_agree(self):
        for theta in (0.0, np.pi):
            rows = {}
            for oracle in ("quantum", "classical-mixture"):
                plan = plan_with(
                    theta_grid=(theta,), shots=100_000, oracle=oracle,
                    e_window=(0.916, 0.05),
                )
                rows[oracle] = run_sweep(plan).rows[0]
            q, c = rows["quantum"], rows["classical-mixture"]
            combined = np.hypot(q.stderr, c.stderr)
            assert abs(q.p_tilde - c.p_tilde) < 3.5 * combined

    def test_conditional_matches_smoothing_formula(self):
        plan = plan_with(shots=2_000_000, e_window=(0.916, 0.05))
        row = run_sweep(plan).rows[0]
        assert row.counts > 5000
        assert abs(row.p_tilde_corrected - row.p_past_pred) < 3.5 * row.stderr_corrected

    def test_classical_matches_mixture_formula(self):
        plan = plan_with(shots=2_000_000, e_window=(0.916, 0.05), oracle="classical-mixture")
        row = run_sweep(plan).rows[0]
        assert abs(row.p_tilde_corrected - row.p_cm_pred) < 3.5 * row.stderr_corrected

    def test_empty_window_flagged_not_raised(self):
        # an unreachable window must yield a zero-count row
        plan = plan_with(shots=2_000, sigma_e=0.1, e_window=(0.5, 1e-6))
        row = run_sweep(plan).rows[0]
        assert row.counts == 0
        assert np.isnan(row.p_tilde)

    def test_predictions_all_window(self):
        # without post-selection the smoothed and mixture predictions both
        # collapse onto the forward prediction
        plan = plan_with(shots=100)
        row = run_sweep(plan).rows[0]
        assert row.p_past_pred == pytest.approx(row.p_rho_pred, abs=1e-12)
        assert row.p_cm_pred == pytest.approx(row.p_rho_pred, abs=1e-12)


class TestBinScan:
    def test_loggerheads_bin_pulls_toward_half(self):
        # conflicting later record (E00 ~ 0.25 against rho00 = 0.91) makes
        # the outcome less certain than the forward prediction
        plan = plan_with(theta_grid=(np.pi / 8,), shots=2_000_000)
        rows = run_bin_scan(plan, bin_width=0.1).rows
        bin_025 = rows[2]  # e00 in [0.2, 0.3)
        assert bin_025.counts > 500
        assert bin_025.p_tilde_corrected < bin_025.p_rho_pred - 3 * bin_025.stderr_corrected
        assert abs(bin_025.p_tilde_corrected - bin_025.p_past_pred) < max(
            3.5 * bin_025.stderr_corrected,
            (bin_025.p_past_band_hi - bin_025.p_past_band_lo),
        )

    def test_confirming_bin_enhances_likely_outcome(self):
        plan = plan_with(theta_grid=(np.pi / 8,), shots=500_000)
        rows = run_bin_scan(plan, bin_width=0.1).rows
        bin_095 = rows[9]  # e00 in [0.9, 1.0]
        assert bin_095.counts > 1000
        assert bin_095.p_tilde_corrected > bin_095.p_rho_pred + 3 * bin_095.stderr_corrected

    def test_counts_partition_shots(self):
        plan = plan_with(shots=30_000)
        rows = run_bin_scan(plan, bin_width=0.25).rows
        assert sum(r.counts for r in rows) == 30_000


class TestRepresentativeE00:
    def test_zero_width_synthetic(self):
        records = [0.5, 0.5, 0.5]
        mean, lo, hi = representative_e00((0.5, 1e-9), records)
        assert mean == pytest.approx(0.5, abs=1e-12)

    def test_symmetric_density_gives_center(self):
        records = np.linspace(0.866, 0.966, 101)
        mean, lo, hi = representative_e00((0.916, 0.05), records)
        assert mean == pytest.approx(0.916, abs=1e-9)
        assert (lo, hi) == pytest.approx((0.866, 0.966), abs=1e-12)

    def test_accepts_shot_records(self):
        recs = [ShotRecord(0, 0.0, 1, 1, 1.0, 0.9), ShotRecord(0, 0.0, 1, 1, 1.2, 0.94)]
        mean, _, _ = representative_e00((0.916, 0.05), recs)
        assert mean == pytest.approx(0.92, abs=1e-12)

    def test_empty_bin_raises(self):
        with pytest.raises(EmptyBinError):
            representative_e00((0.916, 0.05), [0.1, 0.2])
