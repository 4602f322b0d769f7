"""Tests for the system-parameter solvers."""

import json
import logging
from fractions import Fraction
from pathlib import Path

import pytest

from delayed_ia.bounds import DomainError, psr_dof, ria_dof, tg_dof
from delayed_ia.model import Regime, Scheme
from delayed_ia.optimizer import (
    CONTROL_NOTE,
    InfeasibleError,
    best_at,
    brute_force_params,
    check_p1,
    check_p2,
    check_p3,
    solve_p1,
    solve_p2,
    solve_p3,
)


FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def tables():
    """Load the reference parameter tables."""
    with open(FIXTURES_DIR / "parameter_tables.json") as f:
        return json.load(f)


def assert_row(params, row):
    """Compare solver output with one table row."""
    assert params.b == row["b"]
    assert params.S1 == row["S1"]
    assert params.S2 == row["S2"]
    assert params.S3 == row.get("S3", 0)
    assert params.tau == row["tau"]
    assert params.regime is Regime(row["regime"])
    assert params.dof == Fraction(row["dof"])


class TestClosedForms:
    """Tests for the unbounded closed-form solutions."""

    def test_ria_table(self, tables):
        """Test RIA parameters against the reference table."""
        for row in tables["ria"]:
            params = solve_p1(row["M"], row["N"], row["K"], row["group"])
            assert params.scheme is Scheme.RIA
            assert_row(params, row)
            assert not check_p1(row["M"], row["N"], row["group"],
                                params.b, params.S1, params.S2)

    def test_tg_table(self, tables):
        """Test TG parameters against the reference table."""
        for row in tables["tg"]:
            params = solve_p2(row["M"], row["N"], row["K"], row["group"])
            assert params.scheme is Scheme.TG
            assert_row(params, row)
            assert not check_p2(row["M"], row["N"], row["K"], row["group"],
                                params.b, params.S1, params.S2)

    def test_psr_table(self, tables):
        """Test PSR parameters against the reference table."""
        for row in tables["psr"]:
            params = solve_p3(row["M"], row["N"])
            assert params.scheme is Scheme.PSR3
            assert_row(params, row)
            assert (CONTROL_NOTE in params.notes) == row["control_note"]

    def test_closed_forms_reach_dof_formulas(self):
        """Test that solver DoF equals the analytic scheme DoF."""
        for M, N in [(1, 1), (2, 3), (4, 7), (1, 2), (3, 5)]:
            assert solve_p1(M, N, 3, 3).dof == ria_dof(3, 3, Fraction(M, N))
        for M, N, G in [(2, 1, 2), (4, 1, 2), (7, 5, 2), (3, 2, 3)]:
            assert solve_p2(M, N, 3, G).dof == tg_dof(G, 3, Fraction(M, N))
        for M, N in [(1, 1), (2, 3), (11, 14), (4, 5)]:
            assert solve_p3(M, N).dof == psr_dof(Fraction(M, N))

    def test_control_note_logged(self, caplog):
        """Test that an unmet control constraint is logged as a warning."""
        with caplog.at_level(logging.WARNING, logger="delayed_ia.optimizer"):
            params = solve_p3(2, 3)
        assert params.notes == (CONTROL_NOTE,)
        assert "third phase is not needed" in caplog.text


class TestBounded:
    """Tests for solvers under a symbol budget."""

    def test_ria_budget(self):
        """Test the best RIA point with at most 12 symbols."""
        params = solve_p1(4, 7, 3, 3, B=12)
        assert (params.b, params.S1, params.S2) == (12, 3, 2)
        assert params.tau == 5
        assert params.dof == Fraction(12, 35)

    def test_tg_budget(self):
        """Test the best TG point with at most 7 symbols."""
        params = solve_p2(4, 1, 6, 2, B=7)
        assert (params.b, params.S1, params.S2) == (7, 2, 1)
        assert params.tau == 27
        assert params.dof == Fraction(7, 27)

    def test_budget_at_closed_form(self):
        """Test that a budget reaching the closed-form b reproduces it."""
        assert solve_p1(1, 1, 3, 3, B=3) == solve_p1(1, 1, 3, 3)
        assert solve_p2(2, 1, 3, 2, B=4) == solve_p2(2, 1, 3, 2)
        assert solve_p3(2, 3, B=4) == solve_p3(2, 3)

    def test_budget_never_beats_unbounded(self):
        """Test that bounded solutions stay below the closed form."""
        cap = solve_p1(4, 7, 3, 3).dof
        for B in range(1, 29):
            assert solve_p1(4, 7, 3, 3, B=B).dof <= cap

    def test_infeasible_budget(self):
        """Test that a budget with no feasible b is reported."""
        with pytest.raises(InfeasibleError) as exc:
            solve_p2(2, 1, 3, 2, B=1)
        assert "b <= 1" in exc.value.reason

    def test_best_at(self):
        """Test the per-b search used by the trade-off sweep."""
        assert best_at(Scheme.TG, 2, 1, 3, 2, 1) is None
        params = best_at(Scheme.RIA, 4, 7, 3, 3, 12)
        assert (params.S1, params.S2) == (3, 2)


class TestDomains:
    """Tests for domain checks."""

    def test_ria_domain(self):
        """Test that RIA rejects M > N and bad L."""
        with pytest.raises(DomainError):
            solve_p1(3, 2, 3, 3)
        with pytest.raises(DomainError):
            solve_p1(1, 1, 3, 4)
        with pytest.raises(DomainError):
            solve_p1(1, 1, 3, 3, B=0)

    def test_tg_domain(self):
        """Test that TG rejects M <= N and bad G."""
        with pytest.raises(DomainError):
            solve_p2(1, 2, 3, 2)
        with pytest.raises(DomainError):
            solve_p2(2, 1, 3, 1)

    def test_psr_domain(self):
        """Test that PSR needs three users and M/N > 1/2."""
        with pytest.raises(DomainError):
            solve_p3(1, 1, K=4)
        with pytest.raises(DomainError):
            solve_p3(1, 2)


class TestCheckers:
    """Tests for the constraint evaluators."""

    def test_ria_violation(self):
        """Test that too short a first phase breaks the desired rank."""
        violated = check_p1(1, 1, 3, 3, 4, 3)
        assert violated == ["rank of desired signals after zero-forcing"]

    def test_tg_violation(self):
        """Test that a first phase delivering everything is flagged."""
        assert "need of second phase" in check_p2(2, 1, 3, 2, 2, 2, 1)

    def test_psr_control(self):
        """Test the control constraint is only checked on request."""
        assert check_p3(2, 3, 4, 2, 1, 1) == []
        assert check_p3(2, 3, 4, 2, 1, 1, control=True) == ["need of third phase"]

    def test_positive_integers(self):
        """Test that zero slots are rejected."""
        assert "positive integers" in check_p1(1, 1, 3, 3, 0, 3)


class TestOracle:
    """Closed forms against exhaustive search."""

    @pytest.mark.parametrize("M,N,K,L", [(1, 1, 3, 3), (1, 2, 3, 3), (2, 3, 3, 3)])
    def test_ria(self, M, N, K, L):
        """Test RIA closed forms against brute force."""
        expected = solve_p1(M, N, K, L)
        found = brute_force_params(Scheme.RIA, M, N, K, L, b_max=9, s_max=8)
        assert (found.b, found.S1, found.S2) == (expected.b, expected.S1, expected.S2)

    @pytest.mark.parametrize("M,N,K,G", [
        (2, 1, 3, 2), (3, 1, 3, 2), (4, 1, 3, 2), (7, 1, 6, 2), (3, 2, 3, 3),
    ])
    def test_tg(self, M, N, K, G):
        """Test TG closed forms against brute force."""
        expected = solve_p2(M, N, K, G)
        found = brute_force_params(Scheme.TG, M, N, K, G, b_max=8, s_max=6)
        assert (found.b, found.S1, found.S2) == (expected.b, expected.S1, expected.S2)

    @pytest.mark.parametrize("M,N,b_max,s_max", [(1, 1, 14, 20), (2, 3, 8, 6)])
    def test_psr(self, M, N, b_max, s_max):
        """Test PSR closed forms against brute force."""
        expected = solve_p3(M, N)
        found = brute_force_params(Scheme.PSR3, M, N, 3, 3, b_max=b_max, s_max=s_max)
        assert found.slots == expected.slots
        assert found.b == expected.b

    def test_nothing_within_caps(self):
        """Test that empty search boxes raise InfeasibleError."""
        with pytest.raises(InfeasibleError):
            brute_force_params(Scheme.RIA, 1, 1, 3, 3, b_max=3, s_max=1)
