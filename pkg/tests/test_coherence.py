import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spincoherence import DomainError, ValidationError
from spincoherence.coherence import (
    classical_distance,
    classical_sample,
    coherent_pair_inequality,
    commutator_norm,
    scs,
    scs_commutator,
    scs_offdiagonal,
    scs_pure,
    scs_simple,
    witness,
)
from spincoherence.spin import (
    SpinLabel,
    maximally_mixed,
    projector,
    random_density_matrix,
    random_pure_state,
    rotation_unitary,
    spin_coherent_state,
)

FORMS = [scs_offdiagonal, scs_commutator, scs_simple]


def dicke(two_j, index):
    v = np.zeros(two_j + 1, dtype=complex)
    v[index] = 1
    return v


@pytest.mark.parametrize("form", FORMS)
@pytest.mark.parametrize("two_j, index, expected", [
    (4, 2, 3.0),  # |2, 0>: J + 1
    (4, 1, 2.5),  # |2, 1>: (J(J+1) - m^2)/J
    (3, 1, (3.75 - 0.25) / 1.5),
    (6, 0, 1.0),  # top state is coherent
])
def test_dicke_states(form, two_j, index, expected):
    assert form(projector(dicke(two_j, index)), two_j) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("form", FORMS)
@pytest.mark.parametrize("r", [0.0, 0.3, 0.8, 1.0])
def test_qubit_closed_form(form, r):
    n = np.array([0.6, 0.0, 0.8])
    sig = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    rho = (np.eye(2) + r * sum(c * s for c, s in zip(n, sig))) / 2
    assert form(rho, 1) == pytest.approx(2 * r**2 / (1 + r**2), abs=1e-12)


def test_cat_state_is_maximal():
    psi = (dicke(4, 0) + dicke(4, 4)) / np.sqrt(2)
    assert scs(projector(psi), 4) == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("two_j", [1, 2, 5, 8])
def test_maximally_mixed_is_zero(two_j):
    for form in FORMS:
        assert form(maximally_mixed(two_j + 1), two_j) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_forms_agree_and_bounded(two_j, seed):
    rho = random_density_matrix(two_j + 1, seed)
    vals = [f(rho, two_j) for f in FORMS]
    assert max(vals) - min(vals) < 1e-10
    assert -1e-12 <= vals[0] <= two_j / 2 + 1 + 1e-12


@pytest.mark.parametrize("two_j", [2, 5])
def test_rotation_invariance(two_j):
    rng = np.random.default_rng(11)
    rho = random_density_matrix(two_j + 1, rng)
    u = rotation_unitary(two_j, 1.234, (0.0, 0.6, 0.8))
    assert scs(u @ rho @ u.conj().T, two_j) == pytest.approx(scs(rho, two_j), abs=1e-12)


def test_pure_matches_density_form():
    rng = np.random.default_rng(5)
    for two_j in (1, 4, 7):
        psi = random_pure_state(two_j + 1, rng)
        assert scs_pure(psi, two_j) == pytest.approx(scs(projector(psi), two_j), abs=1e-12)


def test_pure_requires_normalized():
    with pytest.raises(ValidationError):
        scs_pure(np.array([1.0, 1.0]), 1)


def test_spin_zero_is_domain_error():
    with pytest.raises(DomainError):
        scs(np.eye(1), 0)


def test_zero_matrix_is_validation_error():
    with pytest.raises(ValidationError):
        scs(np.zeros((2, 2)), 1)


def test_witness_report():
    rep = witness(projector(dicke(4, 2)), 4)
    assert rep.witness_quantum
    assert rep.distance_upper == pytest.approx(np.sqrt(3), abs=1e-12)
    assert rep.distance_lower == pytest.approx(np.sqrt(3) - 1, abs=1e-12)
    rep = witness(projector(spin_coherent_state(4, 0.5, 0.5)), 4)
    assert rep.scs == pytest.approx(1.0, abs=1e-12)
    rep = witness(maximally_mixed(5), 4)
    assert not rep.witness_quantum
    assert rep.distance_lower == 0.0
    assert set(rep.as_dict()) >= {"scs", "purity", "witness_quantum"}


def test_classical_samples_are_below_threshold():
    for two_j in (1, 3, 6):
        for seed in range(30):
            rho = classical_sample(two_j, 4, seed)
            assert scs(rho, two_j) <= 1 + 1e-9


def test_classical_sample_is_seeded():
    np.testing.assert_array_equal(classical_sample(3, 5, 42), classical_sample(3, 5, 42))
    with pytest.raises(ValueError):
        classical_sample(3, 0, 1)


def test_coherent_pair_inequality():
    rng = np.random.default_rng(2)
    for _ in range(20):
        o1 = (rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        o2 = (rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        lhs, rhs = coherent_pair_inequality(o1, o2, 5)
        assert lhs >= rhs - 1e-12


def test_norm_of_normalized_state_is_scs():
    rho = random_density_matrix(4, 8)
    p = np.vdot(rho, rho).real
    assert commutator_norm(rho / np.sqrt(p), 3) ** 2 == pytest.approx(scs(rho, 3), abs=1e-12)


def test_distance_lower_bound():
    rho = projector(dicke(6, 3))
    a = np.sqrt(scs(rho, 6))
    for seed in range(20):
        d = classical_distance(rho, classical_sample(6, 3, seed), 6)
        assert d >= a - 1 - 1e-9
