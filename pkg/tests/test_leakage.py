"""Leakage measures: worked values, ordering, axioms, measurement oracles."""

import math

import numpy as np
import pytest

from helpers import fixed_point_payoff, povm_payoff, random_ensemble
from qleak.channels import apply_ensemble, random_channel
from qleak.divergences import ProbVector
from qleak.errors import DimensionMismatch, ValidationError
from qleak.leakage import (
    Ensemble,
    Povm,
    accessible_information_lower,
    barycentric_leakage,
    holevo_information,
    inequality_chain_report,
    max_leakage,
    pairwise_leakage,
    povm_leakage,
    sandwiched_inf_mutual_information,
    square_root_measurement,
)
from qleak.linalg import DensityOperator, HermitianOperator, random_unitary


def _diag_pair():
    return Ensemble.uniform(
        (
            DensityOperator.from_matrix(np.diag([0.75, 0.25])),
            DensityOperator.from_matrix(np.diag([0.25, 0.75])),
        )
    )


def _basis_ensemble(dim):
    return Ensemble.uniform(
        tuple(DensityOperator.pure(np.eye(dim)[:, k]) for k in range(dim))
    )


def test_ensemble_validation():
    rho = DensityOperator.maximally_mixed(2)
    with pytest.raises(ValidationError):
        Ensemble(ProbVector(np.array([0.5, 0.5])), (rho,))
    with pytest.raises(ValidationError):
        Ensemble(ProbVector(np.array([1.0, 0.0])), (rho, rho))
    with pytest.raises(ValidationError):
        Ensemble(ProbVector(np.array([1.0])), ())
    with pytest.raises(DimensionMismatch):
        Ensemble.uniform((rho, DensityOperator.maximally_mixed(3)))


def test_povm_validation():
    eye = HermitianOperator(np.eye(2))
    with pytest.raises(ValidationError):
        Povm((eye, eye))  # sums to 2I
    with pytest.raises(ValidationError):
        Povm((HermitianOperator(np.diag([1.5, 1.0])), HermitianOperator(np.diag([-0.5, 0.0]))))
    povm = Povm((HermitianOperator(np.diag([1.0, 0.0])), HermitianOperator(np.diag([0.0, 1.0]))))
    assert povm.count == 2 and povm.dim == 2


def test_pairwise_leakage_worked_example():
    cert = pairwise_leakage(_diag_pair())
    assert cert.value == pytest.approx(math.log2(3.0), abs=1e-12)
    assert cert.witness in ((0, 1), (1, 0))
    assert cert.gap == 0.0


def test_barycentric_leakage_worked_example():
    cert = barycentric_leakage(_diag_pair())
    assert cert.value == pytest.approx(math.log2(1.5), abs=1e-7)
    assert cert.gap <= 1e-6
    assert np.allclose(np.asarray(cert.witness), [0.5, 0.5], atol=1e-6)


def test_max_leakage_worked_example():
    cert = max_leakage(_diag_pair())
    assert cert.value == pytest.approx(math.log2(1.5), abs=1e-7)
    assert cert.gap <= 1e-6


def test_square_root_measurement_of_commuting_pair_is_the_states():
    e = _diag_pair()
    srm = square_root_measurement(e)
    assert srm.count == 2
    # S = I so the measurement operators coincide with the states
    for f, s in zip(srm.elements, e.states):
        assert np.allclose(f.mat, s.mat, atol=1e-12)
    assert povm_leakage(e, srm) == pytest.approx(math.log2(1.25), abs=1e-12)


def test_square_root_measurement_pads_singular_average():
    lone = Ensemble.uniform((DensityOperator.pure([1.0, 0.0]),))
    srm = square_root_measurement(lone)
    total = sum(f.mat for f in srm.elements)
    assert np.allclose(total, np.eye(2), atol=1e-9)
    assert srm.count == 2  # null outcome added for the unsupported subspace


def test_holevo_information_of_diag_pair():
    ent = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert holevo_information(_diag_pair()) == pytest.approx(1.0 - ent, abs=1e-12)


def test_accessible_information_meets_holevo_for_commuting_states():
    e = _diag_pair()
    value, povm = accessible_information_lower(e, restarts=4, seed=0)
    assert value == pytest.approx(holevo_information(e), abs=1e-9)
    assert povm.dim == 2
    again, _ = accessible_information_lower(e, restarts=4, seed=0)
    assert again == value


def test_basis_ensemble_chain_values():
    e = _basis_ensemble(4)
    report = inequality_chain_report(e, restarts=4)
    assert report.accessible_lower == pytest.approx(2.0, abs=1e-9)
    assert report.holevo == pytest.approx(2.0, abs=1e-12)
    assert report.srm_povm_leakage == pytest.approx(2.0, abs=1e-9)
    assert report.maximal.value == pytest.approx(2.0, abs=1e-7)
    assert report.barycentric.value == pytest.approx(2.0, abs=1e-7)
    assert report.pairwise.value == math.inf
    assert all(s >= 0.0 for s in report.checks.values())


def test_identical_states_leak_nothing():
    rho = DensityOperator.from_matrix(np.diag([0.6, 0.4]))
    e = Ensemble.uniform((rho, rho, rho))
    assert pairwise_leakage(e).value <= 1e-8
    assert barycentric_leakage(e).value <= 1e-8
    assert max_leakage(e).value <= 1e-8
    assert holevo_information(e) <= 1e-10


def test_leakage_values_are_nonnegative():
    for seed in range(5):
        e = random_ensemble(3, 3, seed=seed)
        assert pairwise_leakage(e).value >= 0.0
        assert barycentric_leakage(e).value >= 0.0
        assert max_leakage(e).value >= 0.0


def test_prior_independence_of_certified_measures():
    base = random_ensemble(3, 3, seed=11)
    skewed = Ensemble(ProbVector(np.array([0.7, 0.2, 0.1])), base.states)
    assert barycentric_leakage(skewed).value == pytest.approx(
        barycentric_leakage(base).value, abs=1e-9
    )
    assert pairwise_leakage(skewed).value == pytest.approx(
        pairwise_leakage(base).value, abs=1e-9
    )
    assert max_leakage(skewed).value == pytest.approx(
        max_leakage(base).value, abs=1e-9
    )


def test_unitary_invariance_of_certified_measures():
    e = random_ensemble(3, 4, seed=23)
    u = random_unitary(3, seed=9)
    spun = Ensemble(
        e.prior,
        tuple(DensityOperator.from_matrix(u @ s.mat @ u.conj().T) for s in e.states),
    )
    assert barycentric_leakage(spun).value == pytest.approx(
        barycentric_leakage(e).value, abs=1e-7
    )
    assert max_leakage(spun).value == pytest.approx(max_leakage(e).value, abs=1e-7)
    assert pairwise_leakage(spun).value == pytest.approx(
        pairwise_leakage(e).value, abs=1e-7
    )


def test_data_processing_cannot_increase_leakage():
    for seed in range(6):
        e = random_ensemble(3, 3, seed=40 + seed)
        noisy = apply_ensemble(random_channel(3, seed=seed), e)
        b0, b1 = barycentric_leakage(e), barycentric_leakage(noisy)
        assert b1.value <= b0.value + b0.gap + b1.gap + 1e-7
        r0, r1 = pairwise_leakage(e), pairwise_leakage(noisy)
        assert r1.value <= r0.value + 1e-7


def test_povm_leakage_never_beats_the_certified_maximum():
    for seed in range(5):
        e = random_ensemble(2, 3, seed=60 + seed)
        q = max_leakage(e)
        srm = square_root_measurement(e)
        assert povm_leakage(e, srm) <= q.value + 1e-9
        payoff_bits = math.log2(fixed_point_payoff(e, iters=150))
        assert payoff_bits <= q.value + 1e-9


def test_povm_leakage_dimension_check():
    e = _diag_pair()
    wrong = Povm((HermitianOperator(np.eye(3)),))
    with pytest.raises(DimensionMismatch):
        povm_leakage(e, wrong)


def test_chain_report_orders_every_measure():
    for seed in (3, 14):
        e = random_ensemble(3, 4, seed=seed)
        report = inequality_chain_report(e, restarts=4, seed=seed)
        assert report.accessible_lower <= report.holevo + 1e-6
        assert report.holevo <= report.barycentric.value + report.barycentric.gap + 1e-6
        assert report.barycentric.value <= report.pairwise.value + report.barycentric.gap + 1e-6
        assert report.srm_povm_leakage <= report.maximal.value + report.maximal.gap + 1e-6
        assert all(s >= 0.0 for s in report.checks.values())


def test_sandwiched_mutual_information_equals_max_leakage_value():
    e = random_ensemble(2, 3, seed=91)
    a = sandwiched_inf_mutual_information(e)
    b = max_leakage(e)
    assert a.value == pytest.approx(b.value, abs=1e-12)
    assert a.kind != b.kind


def test_grid_payoff_oracle_respects_certified_value():
    from helpers import bloch_grid_payoff

    for seed in range(5):
        e = random_ensemble(2, 2, seed=130 + seed)
        q = max_leakage(e)
        grid_bits = math.log2(bloch_grid_payoff(e, directions=4000))
        assert grid_bits <= q.value + 1e-9
        # two states: an optimal two-outcome projective measurement exists,
        # so the grid only loses discretisation resolution
        assert grid_bits >= q.value - 5e-3
