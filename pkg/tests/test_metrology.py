import numpy as np
import pytest

from spincoherence import ValidationError
from spincoherence.coherence import scs_pure
from spincoherence.metrology import (
    axis_averaged_crb,
    axis_averaged_qfi,
    covariance_matrix,
    multiparameter_bound,
    qfi_theta,
    sensing_report,
)
from spincoherence.quasiprob import grid_with_min_nodes
from spincoherence.spin import (
    SpinLabel,
    projector,
    random_density_matrix,
    random_pure_state,
    rotation_matrix,
    rotation_unitary,
)


def basis(two_j, k):
    v = np.zeros(two_j + 1, dtype=complex)
    v[k] = 1
    return v


def test_top_state_covariance():
    np.testing.assert_allclose(covariance_matrix(basis(6, 0), 6), np.diag([1.5, 1.5, 0]), atol=1e-14)


def test_qfi_examples():
    top = basis(6, 0)
    assert qfi_theta(top, 6, (0, 0, 1)) == pytest.approx(0.0, abs=1e-14)
    assert qfi_theta(top, 6, (1, 0, 0)) == pytest.approx(6.0, abs=1e-13)
    with pytest.raises(ValidationError):
        qfi_theta(top, 6, (1, 1, 0))


def test_trace_identity_random():
    rng = np.random.default_rng(0)
    for two_j in range(1, 9):
        psi = random_pure_state(two_j + 1, rng)
        cov = covariance_matrix(psi, two_j)
        np.testing.assert_allclose(cov, cov.T, atol=1e-14)
        assert np.linalg.eigvalsh(cov)[0] >= -1e-10
        assert np.trace(cov) == pytest.approx(two_j / 2 * scs_pure(psi, two_j), abs=1e-10)


def test_rotation_equivariance():
    lab = SpinLabel(5)
    psi = random_pure_state(6, 3)
    axis = np.array([1.0, -2.0, 0.5]) / np.linalg.norm([1.0, -2.0, 0.5])
    u = rotation_unitary(lab, 0.9, axis)
    r = rotation_matrix(0.9, axis)
    # <R psi| J |R psi> = r^T <psi| J |psi> since R^dagger J_i R = sum_j r_ji J_j
    np.testing.assert_allclose(covariance_matrix(u @ psi, lab), r.T @ covariance_matrix(psi, lab) @ r, atol=1e-10)


def test_mixed_state_rejected_pure_projector_accepted():
    with pytest.raises(ValidationError, match="mixed"):
        covariance_matrix(random_density_matrix(3, 1), 2)
    psi = random_pure_state(3, 2)
    np.testing.assert_allclose(covariance_matrix(projector(psi), 2), covariance_matrix(psi, 2), atol=1e-12)


@pytest.mark.parametrize("two_j", [1, 4, 9])
def test_axis_average(two_j):
    psi = random_pure_state(two_j + 1, two_j)
    val = axis_averaged_qfi(psi, two_j)
    assert val == pytest.approx(4 * (two_j / 2) / 3 * scs_pure(psi, two_j), abs=1e-8)


def test_crb_divergences():
    for psi in (basis(4, 0), basis(4, 2)):  # |JJ> and |J,0> are J_3 eigenstates
        res = axis_averaged_crb(psi, 4)
        assert res.value == np.inf
        np.testing.assert_allclose(np.abs(res.divergent_axis), [0, 0, 1], atol=1e-12)


def test_crb_jensen_bound():
    cat = (basis(4, 0) + basis(4, 4)) / np.sqrt(2)
    rng = np.random.default_rng(9)
    grid = grid_with_min_nodes(2000)
    for psi in [cat] + [random_pure_state(5, rng) for _ in range(5)]:
        res = axis_averaged_crb(psi, 4, grid)
        assert np.isfinite(res.value)
        assert res.value >= 3 / (4 * 2 * scs_pure(psi, 4)) - 1e-9


def test_multiparameter_bound():
    res = multiparameter_bound(basis(4, 2), 4)
    assert res.inverse_trace == pytest.approx(1 / 6, abs=1e-14)
    assert res.singular and res.trace_of_inverse == np.inf
    psi = random_pure_state(5, 4)
    res = multiparameter_bound(psi, 4)
    assert not res.singular
    assert res.trace_of_inverse / res.inverse_trace >= 9 - 1e-9


def test_sensing_report():
    psi = random_pure_state(4, 6)
    rep = sensing_report(psi, 3)
    assert rep.trace_cov == pytest.approx(1.5 * rep.scs, abs=1e-10)
    assert rep.qfi_theta_of_axis(np.array([0, 0, 1.0])) == pytest.approx(4 * rep.covariance[2, 2])
    d = rep.as_dict()
    assert d["divergent_axis"] is None and len(d["covariance"]) == 3
