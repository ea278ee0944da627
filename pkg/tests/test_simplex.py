"""Standard-form simplex against a brute-force vertex-enumeration oracle."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import brute_force_lp
from qleak.simplex import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    resume_phase2,
    solve_standard_form,
)


def _check_against_oracle(cost, a, b, atol=1e-7):
    res = solve_standard_form(cost, a, b)
    status, value = brute_force_lp(cost, a, b)
    assert res.status == status
    if status == STATUS_OPTIMAL:
        assert res.objective == pytest.approx(value, abs=atol)
        assert float(np.min(res.x)) >= -1e-9
        assert float(np.max(np.abs(a @ res.x - b))) <= 1e-6 * max(
            1.0, float(np.max(np.abs(b)))
        )
        # weak duality through the returned multipliers
        assert float(b @ res.multipliers) <= res.objective + 1e-6
    return res


def test_one_dimensional_box():
    res = _check_against_oracle(
        np.array([-1.0, 0.0]), np.array([[1.0, 1.0]]), np.array([1.0])
    )
    assert res.objective == pytest.approx(-1.0)
    assert np.allclose(res.x, [1.0, 0.0], atol=1e-9)


def test_assignment_style_lp():
    # min x00 + 2 x01 + 3 x10 + x11 over doubly stochastic-ish rows
    a = np.array(
        [
            [1.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
        ]
    )
    b = np.array([1.0, 1.0, 1.0])
    cost = np.array([1.0, 2.0, 3.0, 1.0])
    _check_against_oracle(cost, a, b)


def test_infeasible_when_rows_cannot_mix():
    a = np.array([[1.0, 2.0], [1.0, 2.0]])
    b = np.array([1.0, 2.0])
    res = solve_standard_form(np.ones(2), a, b)
    assert res.status == STATUS_INFEASIBLE


def test_nonnegative_matrix_with_negative_rhs_is_flipped_not_infeasible():
    # b < 0 rows are sign-flipped internally; x = 1 solves this one.
    a = np.array([[-1.0, 0.0], [0.0, 1.0]])
    b = np.array([-1.0, 1.0])
    res = solve_standard_form(np.array([1.0, 1.0]), a, b)
    assert res.status == STATUS_OPTIMAL
    assert np.allclose(res.x, [1.0, 1.0], atol=1e-9)


def test_unbounded_detection():
    # min -x1 with x1 - x2 = 0 lets both grow without bound
    a = np.array([[1.0, -1.0]])
    b = np.array([0.0])
    res = solve_standard_form(np.array([-1.0, 0.0]), a, b)
    assert res.status == STATUS_UNBOUNDED


def test_duplicate_columns_and_degenerate_rhs():
    rng = np.random.default_rng(3)
    base = rng.normal(size=(3, 4))
    a = np.hstack([base, base[:, :2]])  # duplicated columns
    x0 = np.zeros(6)
    x0[[0, 1]] = [1.0, 0.0]  # degenerate: basic variable at zero
    b = a @ x0
    cost = np.abs(rng.normal(size=6))
    _check_against_oracle(cost, a, b)


def test_redundant_rows_are_dropped():
    a = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
    b = np.array([1.0, 2.0, 1.0])
    res = solve_standard_form(np.array([1.0, 2.0, 0.5]), a, b)
    assert res.status == STATUS_OPTIMAL
    assert res.objective == pytest.approx(1.5)


@settings(deadline=None, max_examples=80)
@given(
    m=st.integers(1, 4),
    n=st.integers(1, 7),
    seed=st.integers(0, 10**6),
    degenerate=st.booleans(),
)
def test_matches_brute_force_on_feasible_instances(m, n, seed, degenerate):
    rng = np.random.default_rng(seed)
    n = max(n, m)
    # quarter-integer data provokes ties and degenerate vertices
    a = rng.integers(-8, 9, size=(m, n)) / 4.0
    assume(np.linalg.matrix_rank(a) == m)  # the oracle assumes full row rank
    x0 = rng.integers(0, 5, size=n) / 2.0
    if degenerate:
        x0[rng.integers(0, n)] = 0.0
    b = a @ x0
    cost = rng.integers(0, 9, size=n) / 4.0  # nonnegative => bounded
    _check_against_oracle(cost, a, b)


@settings(deadline=None, max_examples=40)
@given(m=st.integers(1, 3), n=st.integers(2, 6), seed=st.integers(0, 10**6))
def test_flags_infeasible_positive_cone_instances(m, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.1, 2.0, size=(m, n))
    b = rng.uniform(0.5, 2.0, size=m)
    b[rng.integers(0, m)] *= -1.0
    res = solve_standard_form(np.ones(n), a, b)
    # a >= 0 and some b < 0 after the internal sign flip means the flipped
    # row needs nonpositive coefficients to reach a positive rhs
    status, _ = brute_force_lp(np.ones(n), a, b)
    assert res.status == status == STATUS_INFEASIBLE


def test_multipliers_certify_optimality():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(3, 6))
    b = a @ np.abs(rng.normal(size=6))
    cost = np.abs(rng.normal(size=6))
    res = solve_standard_form(cost, a, b)
    assert res.status == STATUS_OPTIMAL
    reduced = cost - a.T @ res.multipliers
    assert float(np.min(reduced)) >= -1e-7
    assert float(b @ res.multipliers) == pytest.approx(res.objective, abs=1e-7)


def test_warm_start_matches_cold_solve_after_column_append():
    rng = np.random.default_rng(21)
    a = rng.normal(size=(3, 5))
    b = a @ np.abs(rng.normal(size=5))
    cost = np.abs(rng.normal(size=5))
    first = solve_standard_form(cost, a, b)
    assert first.status == STATUS_OPTIMAL and first.basis is not None
    # append columns; the old basis stays primal feasible
    extra = rng.normal(size=(3, 2))
    a2 = np.hstack([a, extra])
    cost2 = np.concatenate([cost, np.abs(rng.normal(size=2))])
    warm = resume_phase2(cost2, a2, b, first.basis)
    cold = solve_standard_form(cost2, a2, b)
    assert warm.status == STATUS_OPTIMAL
    assert warm.objective == pytest.approx(cold.objective, abs=1e-8)


def test_warm_start_with_stale_basis_reports_infeasible_for_fallback():
    a = np.array([[1.0, 1.0]])
    b = np.array([1.0])
    res = resume_phase2(np.ones(2), a, b, [5])
    assert res.status == STATUS_INFEASIBLE
