"""Tests for channel ensembles and the real-domain lift."""

import numpy as np
import pytest

from delayed_ia.channel import (
    AlreadyLiftedError,
    acs_lift,
    generate_ensemble,
    lift_params,
    realstack,
    round_channel,
)
from delayed_ia.model import (
    ChannelMode,
    Dims,
    LayoutError,
    ria_layout,
    tg_layout,
)
from delayed_ia.optimizer import solve_p1
from delayed_ia.subspace import rank_tol


class TestGenerateEnsemble:
    """Tests for ensemble generation."""

    @pytest.fixture
    def dims(self):
        """Three users, 2 transmit and 3 receive antennas."""
        return Dims(K=3, M=2, N=3)

    @pytest.fixture
    def layout(self):
        """RIA layout with 5 + 3 slots."""
        return ria_layout(3, 5, 3)

    def test_block_shapes(self, dims, layout):
        """Test that every round holds (S_p, users, users, N, M) matrices."""
        ens = generate_ensemble(dims, layout, ChannelMode.TIME_VARYING, seed=1)
        assert ens.blocks[(0, 0)].shape == (5, 3, 3, 3, 2)
        assert ens.blocks[(1, 0)].shape == (3, 3, 3, 3, 2)
        assert ens.rx_dim == 3 and ens.tx_dim == 2
        assert not ens.is_real

    def test_time_varying_changes(self, dims, layout):
        """Test that time-varying slots differ."""
        ens = generate_ensemble(dims, layout, ChannelMode.TIME_VARYING, seed=1)
        assert not np.allclose(ens.slot_matrix(0, 0, 0, 1, 2), ens.slot_matrix(0, 0, 1, 1, 2))

    def test_constant_repeats(self, dims, layout):
        """Test that constant ensembles repeat one matrix per link."""
        ens = generate_ensemble(dims, layout, ChannelMode.CONSTANT, seed=1)
        first = ens.slot_matrix(0, 0, 0, 1, 2)
        assert np.array_equal(first, ens.slot_matrix(0, 0, 4, 1, 2))
        assert np.array_equal(first, ens.slot_matrix(1, 0, 2, 1, 2))
        assert not np.allclose(first, ens.slot_matrix(0, 0, 0, 2, 1))

    def test_seed_reproducible(self, dims, layout):
        """Test that equal seeds give equal ensembles."""
        a = generate_ensemble(dims, layout, ChannelMode.TIME_VARYING, seed=5)
        b = generate_ensemble(dims, layout, ChannelMode.TIME_VARYING, seed=5)
        c = generate_ensemble(dims, layout, ChannelMode.TIME_VARYING, seed=6)
        assert np.array_equal(a.blocks[(0, 0)], b.blocks[(0, 0)])
        assert not np.allclose(a.blocks[(0, 0)], c.blocks[(0, 0)])

    def test_unit_variance(self):
        """Test that entries have unit average power."""
        layout = ria_layout(3, 50, 50)
        ens = generate_ensemble(Dims(K=3, M=4, N=4), layout, ChannelMode.TIME_VARYING, seed=3)
        power = np.mean(np.abs(ens.blocks[(0, 0)]) ** 2)
        assert power == pytest.approx(1.0, abs=0.05)

    def test_tg_rounds(self):
        """Test that TG ensembles cover every round of both phases."""
        layout = tg_layout(3, 2, 2, 1)
        ens = generate_ensemble(Dims(K=3, M=2, N=1), layout, ChannelMode.TIME_VARYING, seed=1)
        assert sorted(ens.blocks) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]


class TestRoundChannel:
    """Tests for block-diagonal round channels."""

    def test_shape_and_blocks(self):
        """Test that the round channel is block-diagonal over slots."""
        ens = generate_ensemble(Dims(K=3, M=2, N=3), ria_layout(3, 5, 3),
                                ChannelMode.TIME_VARYING, seed=2)
        h = round_channel(ens, 0, 0, 1, 0)
        assert h.shape == (15, 10)
        assert np.array_equal(h[3:6, 2:4], ens.slot_matrix(0, 0, 1, 1, 0))
        assert np.all(h[0:3, 2:10] == 0)

    def test_out_of_range(self):
        """Test that invalid indices raise LayoutError."""
        ens = generate_ensemble(Dims(K=3, M=1, N=1), ria_layout(3, 5, 3),
                                ChannelMode.TIME_VARYING, seed=2)
        with pytest.raises(LayoutError):
            round_channel(ens, 2, 0, 0, 0)
        with pytest.raises(LayoutError):
            round_channel(ens, 0, 1, 0, 0)
        with pytest.raises(LayoutError):
            round_channel(ens, 0, 0, 3, 0)


class TestLift:
    """Tests for asymmetric complex signaling."""

    @pytest.fixture
    def ens(self):
        """Constant SISO ensemble of a 3-user RIA frame."""
        return generate_ensemble(Dims(K=3, M=1, N=1), ria_layout(3, 5, 3),
                                 ChannelMode.CONSTANT, seed=4)

    def test_lift_structure(self, ens):
        """Test that each entry becomes a scaled rotation."""
        lifted = acs_lift(ens)
        h = ens.slot_matrix(0, 0, 0, 0, 1)[0, 0]
        block = lifted.slot_matrix(0, 0, 0, 0, 1)
        assert lifted.is_real
        assert lifted.mode is ChannelMode.ACS_REAL
        assert lifted.source_mode is ChannelMode.CONSTANT
        assert np.allclose(block, [[h.real, -h.imag], [h.imag, h.real]])

    def test_lift_matches_realstack(self, ens):
        """Test that lifting acts on realstacked vectors like complex multiplication."""
        h = ens.slot_matrix(0, 0, 0, 2, 1)
        lifted = acs_lift(ens).slot_matrix(0, 0, 0, 2, 1)
        x = np.array([0.3 - 1.2j])
        assert np.allclose(lifted @ realstack(x), realstack(h @ x))

    def test_lift_twice(self, ens):
        """Test that lifting a real ensemble is rejected."""
        with pytest.raises(AlreadyLiftedError):
            acs_lift(acs_lift(ens))

    def test_generate_acs(self):
        """Test that ACS_REAL generation lifts a constant ensemble."""
        ens = generate_ensemble(Dims(K=3, M=1, N=1), ria_layout(3, 5, 3),
                                ChannelMode.ACS_REAL, seed=4)
        assert ens.is_real
        assert ens.rx_dim == 2 and ens.tx_dim == 2
        assert np.array_equal(ens.slot_matrix(0, 0, 0, 0, 1), ens.slot_matrix(1, 0, 2, 0, 1))

    def test_lifted_rank_doubles(self, ens):
        """Test that a lifted round channel has twice the complex rank."""
        h = round_channel(ens, 0, 0, 0, 1)
        lifted = round_channel(acs_lift(ens), 0, 0, 0, 1)
        assert rank_tol(lifted) == 2 * rank_tol(h)

    def test_lift_params(self):
        """Test that lifted parameters double antennas and symbols."""
        params = solve_p1(1, 1, 3, 3)
        lifted = lift_params(params)
        assert (lifted.dims.M, lifted.dims.N, lifted.b) == (2, 2, 6)
        assert lifted.tau == params.tau
        assert lifted.dof == params.dof
        with pytest.raises(AlreadyLiftedError):
            lift_params(lifted)
