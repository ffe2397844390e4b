import math

import numpy as np
import pytest
from scipy.special import sph_harm_y

from spincoherence import DomainError, ValidationError
from spincoherence.channel import tensor_operator
from spincoherence.coherence import scs
from spincoherence.quasiprob import (
    SphereGrid,
    cg_asymptotics,
    default_grid,
    diagonal_representation,
    grid_with_min_nodes,
    husimi,
    legendre_table,
    operator_field,
    order_factors,
    order_shift,
    overlap,
    s_shift_check,
    scs_quasiprob,
    spherical_harmonic,
    wigner_s,
)
from spincoherence.spin import SpinLabel, maximally_mixed, projector, random_density_matrix, spin_coherent_state


def test_harmonics_match_scipy():
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, np.pi, 50)
    phi = rng.uniform(0, 2 * np.pi, 50)
    for k in range(0, 25, 3):
        for q in range(-k, k + 1):
            np.testing.assert_allclose(spherical_harmonic(k, q, theta, phi), sph_harm_y(k, q, theta, phi), atol=1e-12)


def test_high_degree_legendre_stays_bounded():
    x = np.linspace(-1, 1, 101)
    table = legendre_table(160, x)
    assert np.all(np.isfinite(table))
    # |Pbar_l^q| <= sqrt((2l+1)/4pi)
    assert np.max(np.abs(table)) <= math.sqrt(321 / (4 * math.pi)) + 1e-9


def test_grid_integrates_harmonic_products():
    grid = SphereGrid.gauss_legendre(6, 11)
    assert grid.integrate(np.ones(grid.size)) == pytest.approx(4 * np.pi, abs=1e-13)
    for (k1, q1), (k2, q2) in [((3, 1), (3, 1)), ((5, 2), (4, 2)), ((2, -1), (5, -1))]:
        y1 = spherical_harmonic(k1, q1, grid.theta, grid.phi)
        y2 = spherical_harmonic(k2, q2, grid.theta, grid.phi)
        expected = 1.0 if (k1, q1) == (k2, q2) else 0.0
        assert abs(grid.integrate(np.conj(y1) * y2) - expected) < 1e-13


def test_grid_helpers():
    g = grid_with_min_nodes(2000)
    assert g.size >= 2000 and g.n_phi == 2 * g.n_theta - 1
    d = default_grid(6)
    assert (d.n_theta, d.n_phi) == (8, 15)
    assert np.all(np.diff(d.theta_1d) > 0)
    with pytest.raises(ValidationError):
        SphereGrid.gauss_legendre(0, 3)


@pytest.mark.parametrize("two_j", [1, 2, 5])
def test_husimi_is_coherent_expectation(two_j):
    lab = SpinLabel(two_j)
    rho = random_density_matrix(lab.dim, two_j)
    grid = SphereGrid.gauss_legendre(4, 5)
    q = husimi(rho, lab, grid)
    ref = [np.vdot(v, rho @ v).real for v in (spin_coherent_state(lab, t, p) for t, p in zip(grid.theta, grid.phi))]
    np.testing.assert_allclose(q.values, ref, atol=1e-13)


def test_husimi_of_top_state():
    grid = SphereGrid.gauss_legendre(5, 4)
    top = np.zeros(7)
    top[0] = 1
    q = husimi(projector(top), 6, grid)
    np.testing.assert_allclose(q.values, ((1 + np.cos(grid.theta)) / 2) ** 6, atol=1e-14)


@pytest.mark.parametrize("s", [-1.0, 0.0, 0.5, 1.0])
def test_maximally_mixed_is_flat(s):
    field = wigner_s(maximally_mixed(5), 4, s)
    np.testing.assert_allclose(field.values, 1 / 5, atol=1e-14)


@pytest.mark.parametrize("two_j", [1, 3, 6])
@pytest.mark.parametrize("s", [-1.0, 0.0, 1.0])
def test_normalization(two_j, s):
    rho = random_density_matrix(two_j + 1, 7)
    assert wigner_s(rho, two_j, s).normalization(two_j) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("s", [-1.0, -0.3, 0.0, 1.0])
def test_overlap_relation(s):
    lab = SpinLabel(4)
    rng = np.random.default_rng(1)
    a, b = random_density_matrix(5, rng), random_density_matrix(5, rng)
    grid = default_grid(lab)
    val = overlap(wigner_s(a, lab, -s, grid), wigner_s(b, lab, s, grid), lab)
    assert val == pytest.approx(np.vdot(a, b).real, abs=1e-13)


def test_overlap_rejects_mismatch():
    rho = maximally_mixed(3)
    g1, g2 = default_grid(2), SphereGrid.gauss_legendre(3, 3)
    with pytest.raises(ValidationError):
        overlap(wigner_s(rho, 2, 0.5, g1), wigner_s(rho, 2, 0.5, g1), 2)
    with pytest.raises(ValidationError):
        overlap(wigner_s(rho, 2, 0.5, g1), wigner_s(rho, 2, -0.5, g2), 2)


def test_p_function_reconstructs_state():
    lab = SpinLabel(3)
    rho = random_density_matrix(4, 5)
    p = wigner_s(rho, lab, 1.0)
    np.testing.assert_allclose(diagonal_representation(p, lab), rho, atol=1e-12)


def test_operator_field_non_hermitian_is_complex():
    op = np.zeros((3, 3), dtype=complex)
    op[0, 1] = 1
    field = operator_field(op, 2, 0.0, default_grid(2))
    assert np.iscomplexobj(field.values)


def test_order_factor_flags():
    f = order_factors(4, 1.0)
    assert f[0] == 1.0 and np.all(np.diff(f) > 0)
    field = wigner_s(maximally_mixed(41), 40, 3.0, SphereGrid.gauss_legendre(2, 2))
    assert field.nonstandard_order
    assert field.amplified


def test_csv_output_is_deterministic():
    rho = random_density_matrix(3, 2)
    a = wigner_s(rho, 2, 0.0).to_csv()
    b = wigner_s(rho, 2, 0.0).to_csv()
    assert a == b
    assert a.splitlines()[0] == "theta,phi,weight,value"
    assert len(a.splitlines()) == 1 + default_grid(2).size


def test_cg_asymptotics_frozen():
    exact, first, second = cg_asymptotics(SpinLabel(2), 1)
    assert exact == pytest.approx(0.5 * math.log(0.5), abs=1e-15)
    assert first == -0.5
    assert second == -0.25


def test_cg_asymptotic_error_quarters():
    for k in (1, 2, 3):
        errs = []
        for j in (10, 20, 40):
            exact, first, second = cg_asymptotics(SpinLabel(2 * j), k)
            errs.append(abs(exact - first))
            assert abs(exact - second) < abs(exact - first)
        assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)
        assert errs[1] / errs[2] == pytest.approx(4, abs=0.5)


def test_order_shift_variants():
    assert order_shift(4, 0.1) == pytest.approx(0.2)
    assert order_shift(4, 0.1, "improved") == pytest.approx(0.2 * 2 / 1.5)
    assert order_shift(4, 0.1, 0.05) == 0.05
    with pytest.raises(DomainError):
        order_shift(1, 0.1, "improved")
    with pytest.raises(ValidationError):
        order_shift(4, 0.1, "bogus")


def test_s_shift_relative_deviation_shrinks():
    devs = []
    for two_j in (10, 20):
        lab = SpinLabel(two_j)
        rho = maximally_mixed(lab.dim)
        rho = rho + (0.15 * tensor_operator(lab, 1, 0) + 0.1 * tensor_operator(lab, 2, 0)) / np.sqrt(lab.dim)
        devs.append(s_shift_check(rho, lab, 0.0, 0.05, relative=True))
    assert devs[1] < devs[0]
    assert devs[0] / devs[1] == pytest.approx(2, rel=0.25)


def test_s_shift_undefined_for_fixed_point():
    with pytest.raises(DomainError):
        s_shift_check(maximally_mixed(3), 2, 0.0, 0.1, relative=True)


@pytest.mark.parametrize("s", [-1.0, 0.0, 1.0])
def test_scs_as_quasiprobability_ratio(s):
    rho = random_density_matrix(5, 17)
    val = scs_quasiprob(rho, 4, s)
    assert not val.degenerate
    assert val.value == pytest.approx(scs(rho, 4), abs=1e-12)


def test_scs_quasiprob_degenerate():
    val = scs_quasiprob(maximally_mixed(4), 3)
    assert val.degenerate and val.value == 0.0
