"""Tests for zero-forcing decoding and Monte-Carlo feasibility."""

import pytest

from delayed_ia.channel import generate_ensemble
from delayed_ia.decoding import (
    assemble_signal_space,
    decode_user,
    monte_carlo,
    run_trial,
)
from delayed_ia.model import ChannelMode
from delayed_ia.optimizer import solve_p1, solve_p2, solve_p3
from delayed_ia.schemes import build_plan


class TestDecodeUser:
    """Tests for single-receiver decoding."""

    @pytest.fixture
    def setting(self):
        """RIA (4,7,3) plan over one time-varying ensemble."""
        params = solve_p1(4, 7, 3, 3)
        ens = generate_ensemble(params.dims, params.layout, ChannelMode.TIME_VARYING, 11)
        return params, build_plan(params, ens), ens

    def test_full_rank(self, setting):
        """Test that every receiver recovers b dimensions."""
        params, plan, ens = setting
        for j in range(3):
            report = decode_user(plan, ens, j)
            assert report.feasible
            assert report.heq_rank == params.b
            assert report.zf_filter_rank >= params.b
            assert report.dof == params.dof

    def test_first_phase_alone(self, setting):
        """Test that the first phase alone is not decodable."""
        params, plan, ens = setting
        report = decode_user(plan, ens, 0, phases=1)
        assert report.heq_rank < params.b
        assert not report.feasible

    def test_signal_space_blocks(self, setting):
        """Test the row blocks and column blocks of the signal space."""
        params, plan, ens = setting
        omega = assemble_signal_space(plan, ens, 2)
        assert [(blk.phase, blk.stop - blk.start) for blk in omega.row_blocks] == [
            (0, params.phis[0]), (0, params.phis[0]), (1, params.dims.N * params.S2)]
        assert omega.desired.shape == (omega.rows, params.b)
        assert omega.interference.shape == (omega.rows, 2 * params.b)


class TestMonteCarlo:
    """Monte-Carlo feasibility over time-varying channels."""

    @pytest.mark.parametrize("params", [
        solve_p1(4, 7, 3, 3),
        solve_p1(2, 3, 3, 3),
        solve_p2(2, 1, 3, 2),
        solve_p2(7, 5, 3, 2),
        solve_p3(1, 1),
        solve_p3(2, 3),
    ], ids=["ria-4-7", "ria-2-3", "tg-2-1", "tg-7-5", "psr-1-1", "psr-2-3"])
    def test_feasible(self, params):
        """Test that every draw is decodable at the predicted DoF."""
        summary = monte_carlo(params, trials=100, seed_base=1)
        assert summary.feasible_fraction == 1.0
        assert summary.min_rank == summary.max_rank == params.b
        assert summary.measured_dof == summary.predicted_dof == params.dof
        assert all(t.aligned for t in summary.trials)

    def test_trial_seeds(self):
        """Test that trial t uses seed seed_base + t."""
        summary = monte_carlo(solve_p2(2, 1, 3, 2), trials=3, seed_base=40)
        assert [(t.trial, t.seed) for t in summary.trials] == [(0, 40), (1, 41), (2, 42)]

    def test_acs_summary(self):
        """Test that ACS runs report lifted parameters."""
        summary = monte_carlo(solve_p1(1, 1, 3, 3), trials=5, seed_base=1,
                              mode=ChannelMode.CONSTANT, acs=True)
        assert summary.acs
        assert summary.params.lifted
        assert summary.feasible_fraction == 1.0
        assert summary.min_rank == 6

    def test_no_trials(self):
        """Test that zero trials are rejected."""
        with pytest.raises(ValueError):
            monte_carlo(solve_p1(1, 1, 3, 3), trials=0, seed_base=1)

    def test_run_trial_plan(self):
        """Test that run_trial returns the plan and ensemble it decoded."""
        plan, ens, result = run_trial(solve_p3(2, 3), 7, ChannelMode.TIME_VARYING)
        assert ens.seed == 7
        assert plan.params.b == 4
        assert len(result.reports) == 3
        assert result.feasible
