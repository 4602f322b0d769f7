"""Tests for the DoF versus frame-length trade-off."""

from fractions import Fraction

import pytest

from delayed_ia.bounds import DomainError
from delayed_ia.model import Scheme
from delayed_ia.optimizer import InfeasibleError, best_at, solve_p1, solve_p2
from delayed_ia.tradeoff import (
    TradeoffPoint,
    bounded_dof,
    group_sizes,
    pareto_front,
    sweep_curve,
)


class TestBoundedDof:
    """Tests for single-budget operating points."""

    def test_ria_point(self):
        """Test the RIA (4,7,3) point at B = 12."""
        point = bounded_dof(Scheme.RIA, 4, 7, 3, 12)
        assert (point.b, point.tau) == (12, 5)
        assert point.dof == Fraction(12, 35)

    def test_tg_point_over_groups(self):
        """Test that TG picks G = 2 for (4,1,6) at B = 7."""
        point = bounded_dof(Scheme.TG, 4, 1, 6, 7)
        assert point.group == 2
        assert (point.b, point.tau) == (7, 27)
        assert point.dof == Fraction(7, 27)

    def test_infeasible(self):
        """Test that a budget below every feasible b raises."""
        with pytest.raises(InfeasibleError):
            bounded_dof(Scheme.TG, 2, 1, 3, 1)
        with pytest.raises(DomainError):
            bounded_dof(Scheme.RIA, 1, 1, 3, 0)

    @pytest.mark.parametrize("scheme, M, N, K, B, tau, dof", [
        (Scheme.RIA, 1, 1, 3, 3, 8, Fraction(3, 8)),
        (Scheme.PSR3, 1, 1, 3, 12, 31, Fraction(12, 31)),
        (Scheme.TG, 4, 1, 6, 20, 75, Fraction(4, 15)),
        (Scheme.RIA, 4, 7, 3, 28, 11, Fraction(4, 11)),
    ])
    def test_closed_form_budgets(self, scheme, M, N, K, B, tau, dof):
        """Test that the closed-form budget reproduces the unbounded optimum."""
        point = bounded_dof(scheme, M, N, K, B)
        assert (point.tau, point.dof) == (tau, dof)

    def test_group_sizes(self):
        """Test the admissible group sizes."""
        assert list(group_sizes(Scheme.RIA, 5)) == [3, 4, 5]
        assert list(group_sizes(Scheme.TG, 3)) == [2, 3]
        assert list(group_sizes(Scheme.PSR3, 3)) == [3]


class TestSweep:
    """Tests for budget sweeps."""

    @pytest.fixture
    def curve(self):
        """RIA (4,7,3) sweep up to the closed-form b."""
        return sweep_curve(Scheme.RIA, 4, 7, 3, 28)

    def test_every_budget(self, curve):
        """Test that each budget gets a point."""
        assert [p.B for p in curve.points] == list(range(1, 29))

    def test_non_decreasing(self, curve):
        """Test that DoF never drops as the budget grows."""
        dofs = [p.dof for p in curve.points]
        assert all(a <= b for a, b in zip(dofs, dofs[1:]))

    def test_reaches_closed_form(self, curve):
        """Test that the last budget reaches the unbounded optimum."""
        assert curve.points[-1].dof == solve_p1(4, 7, 3, 3).dof == Fraction(4, 11)
        assert curve.points[11].dof == Fraction(12, 35)

    def test_pareto(self, curve):
        """Test that the Pareto front is increasing in tau and DoF."""
        front = curve.pareto
        assert front
        taus = [p.tau for p in front]
        dofs = [p.dof for p in front]
        assert taus == sorted(set(taus))
        assert dofs == sorted(set(dofs))
        assert dofs[-1] == max(p.dof for p in curve.points)
        assert curve.is_pareto(front[0])

    def test_psr_sweep(self):
        """Test a PSR sweep skips budgets without parameters."""
        curve = sweep_curve(Scheme.PSR3, 2, 3, 3, 4)
        assert curve.points[-1].dof == Fraction(2, 9)
        assert all(p.B >= p.b for p in curve.points)


class TestParetoFront:
    """Tests for pareto_front on hand-made points."""

    def test_dominated_points_dropped(self):
        """Test that longer frames without more DoF are dropped."""
        a = TradeoffPoint(B=4, params=solve_p1(4, 7, 3, 3, B=4))
        b = TradeoffPoint(B=7, params=solve_p1(4, 7, 3, 3, B=7))
        c = TradeoffPoint(B=12, params=solve_p1(4, 7, 3, 3, B=12))
        slow = TradeoffPoint(B=8, params=best_at(Scheme.RIA, 4, 7, 3, 3, 8))
        assert (slow.tau, slow.dof) == (4, Fraction(2, 7))
        front = pareto_front([c, slow, b, a])
        assert front == [a, b, c]

    def test_total_slots_axis(self):
        """Test that points of different group sizes compare on total slots."""
        short = TradeoffPoint(B=2, params=best_at(Scheme.RIA, 3, 4, 6, 5, 2))
        wide = TradeoffPoint(B=4, params=best_at(Scheme.RIA, 3, 4, 6, 3, 4))
        assert (short.frame, short.tau, short.dof) == (3, 18, Fraction(5, 36))
        assert (wide.frame, wide.tau, wide.dof) == (3, 60, Fraction(1, 6))
        assert pareto_front([wide, short]) == [short, wide]


class TestGroupTransitions:
    """Tests for sweeps whose best group size changes with the budget."""

    @pytest.fixture
    def ria_curve(self):
        """RIA (3,4,6) sweep up to the closed-form b."""
        return sweep_curve(Scheme.RIA, 3, 4, 6, 12)

    @pytest.fixture
    def tg_curve(self):
        """TG (7,5,3) sweep up to the closed-form b."""
        return sweep_curve(Scheme.TG, 7, 5, 3, 35)

    def test_ria_small_budgets_use_five_users(self, ria_curve):
        """Test that the smallest budgets serve groups of five users."""
        head = [(p.group, p.tau, p.dof) for p in ria_curve.points[:3]]
        assert head == [(5, 12, Fraction(5, 48)), (5, 18, Fraction(5, 36)),
                        (5, 24, Fraction(5, 32))]

    def test_ria_large_budgets_use_three_users(self, ria_curve):
        """Test that large budgets settle on groups of three users."""
        by_budget = {p.B: p for p in ria_curve.points}
        assert (by_budget[7].group, by_budget[7].tau, by_budget[7].dof) == (3, 100, Fraction(7, 40))
        last = ria_curve.points[-1]
        assert (last.group, last.frame, last.tau, last.dof) == (3, 8, 160, Fraction(3, 16))

    def test_ria_equal_dof_prefers_fewer_slots(self, ria_curve):
        """Test that B = 4 takes the single six-user group over longer time-sharing."""
        point = ria_curve.points[3]
        assert point.B == 4
        assert (point.group, point.tau, point.dof) == (6, 6, Fraction(1, 6))

    def test_ria_pareto_on_total_slots(self, ria_curve):
        """Test the Pareto front of the (3,4,6) sweep."""
        assert [p.B for p in ria_curve.pareto] == [4, 7, 12]
        assert [p.tau for p in ria_curve.pareto] == [6, 100, 160]

    def test_tg_small_budgets_use_pairs(self, tg_curve):
        """Test that the shortest TG frames pair the users."""
        by_budget = {p.B: p for p in tg_curve.points}
        assert min(by_budget) == 6
        assert (by_budget[6].group, by_budget[6].tau, by_budget[6].dof) == (2, 6, Fraction(1, 5))
        assert (by_budget[10].group, by_budget[10].dof) == (2, Fraction(7, 30))

    def test_tg_large_budgets_use_all_users(self, tg_curve):
        """Test that G = 3 takes over from B = 11 and reaches 7/17."""
        by_budget = {p.B: p for p in tg_curve.points}
        assert (by_budget[11].group, by_budget[11].tau, by_budget[11].dof) == (3, 7, Fraction(11, 35))
        last = tg_curve.points[-1]
        assert (last.group, last.b, last.tau, last.dof) == (3, 35, 17, Fraction(7, 17))
        assert last.dof > solve_p2(7, 5, 3, 2).dof == Fraction(7, 18)
