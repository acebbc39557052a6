import numpy as np
import pytest

from conftest import random_fock
from qbethe.core import ModelParams, e_factor, laurent_s, q_int
from qbethe.fock import FockVector, enumerate_sector, sector_basis, weight_vector
from qbethe.transfer import (apply_boundary, apply_creation, apply_periodic,
                             apply_transfer, bethe_eigenvalues,
                             boundary_coeff, hamiltonian_matrix, is_strip,
                             operator_matrix, permutation_matrix, phi_psi,
                             r_matrix, strips_above, strips_below,
                             transfer_matrix, unitarity_scalar,
                             weighted_adjoint)


def test_phi_psi_values(params):
    t = params.t
    phi, _ = phi_psi((1,), (), t)
    assert phi == pytest.approx(1 - t)
    for n in (1, 2, 3):
        phi, _ = phi_psi((0,) * n, (0,) * (n - 1), t)
        assert phi == pytest.approx(1 - t ** n)
    phi, psi = phi_psi((2, 1), (2, 1), t)
    assert phi == 1.0 and psi == 1.0


def test_phi_psi_rejects_non_strip(params):
    with pytest.raises(ValueError):
        phi_psi((1, 1), (3,), params.t)


def test_strip_enumeration_consistency():
    lam = (3, 1)
    below = list(strips_below(lam, 1))
    assert all(is_strip(lam, mu) for mu in below)
    assert below == [(1,), (2,), (3,)]
    above = list(strips_above(lam, 2, m=4))
    assert all(is_strip(mu, lam) for mu in above)
    assert (4, 3) in above and (3, 1) in above


def test_periodic_vacuum_actions(params):
    t, m, u = params.t, 3, 0.85
    vac = FockVector.vacuum(m)
    a_img = apply_periodic("A", u, vac, t)
    assert a_img[()] == pytest.approx(u ** (-m - 1))
    b_img = apply_periodic("B", u, vac, t)
    for l in range(m + 1):
        assert b_img[(l,)] == pytest.approx((1 - t) * u ** (2 * l - m))
    one = FockVector.basis_state((2,), m)
    c_img = apply_periodic("C", u, one, t)
    assert c_img.basis.n == 0


def test_periodic_cb_vacuum_scalar(params):
    # C(u) B(1/u) |vac> = (1-t) s(u^(2m+2))/s(u^2) |vac>, which follows from
    # the exchange relation for C and B together with the vacuum eigenvalues
    # A|vac> = u^(-m-1)|vac>, D|vac> = u^(m+1)|vac>
    t, m, u = params.t, 3, 1.17
    vac = FockVector.vacuum(m)
    img = apply_periodic("C", u, apply_periodic("B", 1.0 / u, vac, t), t)
    expected = (1 - t) * laurent_s(u ** (2 * m + 2)) / laurent_s(u * u)
    assert img[()] == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("u", [0.6, 0.85, 1.3])
def test_boundary_vacuum_eigenvalues(params, u):
    q, m, a = params.q, 3, params.a_minus
    vac = FockVector.vacuum(m)
    alpha = q ** (-m - 1) * u ** (-2 * m - 2) * e_factor(u, a)
    a_img = apply_boundary("A", u, a, vac, params)
    assert a_img[()] == pytest.approx(alpha, rel=1e-11)
    c_img = apply_boundary("C", u, a, vac, params)
    assert np.max(np.abs(c_img.amp)) == 0.0
    delta = (q ** (-m - 1) * u ** (2 * m + 2)
             * laurent_s(q * u * u) / laurent_s(u * u) * e_factor(1.0 / u, a))
    d_img = apply_boundary("Dhat", u, a, vac, params)
    assert d_img[()] == pytest.approx(delta, rel=1e-11)


def test_boundary_coeff_empty_support(params):
    # pairs with no admissible intermediate partition give exactly zero
    assert boundary_coeff("A", (3, 3), (1, 0), 0.7 + 0.2j, params.t,
                          params.a_minus, 3) == 0.0
    # while e.g. the creation entry connects far-apart pairs (wide support)
    assert boundary_coeff("B", (3, 3), (0,), 0.7 + 0.2j, params.t,
                          params.a_minus, 3) != 0.0


def test_transfer_vacuum_eigenvalue(params):
    m = params.m
    vac = FockVector.vacuum(m)
    for u in (0.6, 1.3):
        img = apply_transfer(u, vac, params)
        expected, _ = bethe_eigenvalues(u, np.array([]), params)
        assert img[()] == pytest.approx(expected, rel=1e-11)


def test_transfer_commutes(params):
    mu = transfer_matrix(0.6, 2, 3, params)
    mv = transfer_matrix(1.3, 2, 3, params)
    comm = mu @ mv - mv @ mu
    scale = np.linalg.norm(mu) * np.linalg.norm(mv)
    assert np.linalg.norm(comm) <= 1e-12 * scale


def test_transfer_commutes_with_hamiltonian(params):
    mt = transfer_matrix(0.85, 2, 3, params)
    mh = hamiltonian_matrix(2, 3, params)
    comm = mt @ mh - mh @ mt
    assert np.max(np.abs(comm)) <= 1e-10 * np.max(np.abs(mt))


def test_transfer_preserves_sector(params, rng):
    f = random_fock(sector_basis(2, 3), rng)
    out = apply_transfer(0.85, f, params)
    assert out.basis is f.basis


def test_operator_matrix_identity(params):
    om = operator_matrix(lambda f: f, 2, 2)
    np.testing.assert_allclose(om.mat, np.eye(om.mat.shape[0]))
    assert om.source is om.target


def test_periodic_adjoint_pairs(params):
    # B_m(u) = (1-t) C_m(1/u)^* and D_m(u) = A_m(1/u)^* for real u
    t, n, m, u = params.t, 1, 2, 0.85
    om_b = operator_matrix(lambda f: apply_periodic("B", u, f, t), n, m)
    om_c = operator_matrix(lambda f: apply_periodic("C", 1.0 / u, f, t), n + 1, m)
    np.testing.assert_allclose(om_b.mat, (1 - t) * weighted_adjoint(om_c, t).mat,
                               atol=1e-12)
    om_d = operator_matrix(lambda f: apply_periodic("D", u, f, t), n, m)
    om_a = operator_matrix(lambda f: apply_periodic("A", 1.0 / u, f, t), n, m)
    np.testing.assert_allclose(om_d.mat, weighted_adjoint(om_a, t).mat, atol=1e-12)


def test_creation_number_conjugation(params):
    # N Bhat = t Bhat N, realized on sector matrices
    q, t, m = params.q, params.t, 2
    n = 1
    p2 = ModelParams(n=n, m=m, q=q, a_plus=params.a_plus, a_minus=params.a_minus)
    om = operator_matrix(lambda f: apply_creation(0.85, f, p2), n, m)
    n_src = q ** (m + 1) * t ** n
    n_tgt = q ** (m + 1) * t ** (n + 1)
    np.testing.assert_allclose(n_tgt * om.mat, t * om.mat * n_src, rtol=1e-13)


@pytest.mark.parametrize("u", [0.6, 1.3])
def test_creation_reflection_and_even(params, u):
    m = 2
    p2 = ModelParams(n=0, m=m, q=params.q, a_plus=params.a_plus,
                     a_minus=params.a_minus)
    vac = FockVector.vacuum(m)
    ref = apply_creation(u, vac, p2)
    inv = apply_creation(1.0 / u, vac, p2)
    neg = apply_creation(-u, vac, p2)
    np.testing.assert_allclose(ref.amp, inv.amp, rtol=1e-10)
    np.testing.assert_allclose(ref.amp, neg.amp, rtol=1e-10)


def test_creation_family_commutes(params):
    m = 2
    p0 = ModelParams(n=0, m=m, q=params.q, a_plus=params.a_plus,
                     a_minus=params.a_minus)
    p1 = ModelParams(n=1, m=m, q=params.q, a_plus=params.a_plus,
                     a_minus=params.a_minus)
    u, v = 0.6, 1.3
    b_u0 = operator_matrix(lambda f: apply_creation(u, f, p0), 0, m)
    b_v0 = operator_matrix(lambda f: apply_creation(v, f, p0), 0, m)
    b_u1 = operator_matrix(lambda f: apply_creation(u, f, p1), 1, m)
    b_v1 = operator_matrix(lambda f: apply_creation(v, f, p1), 1, m)
    lhs = (b_v1 @ b_u0).mat
    rhs = (b_u1 @ b_v0).mat
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


def test_creation_vacuum_is_one_particle_wave(params):
    # (Bhat(u)|vac>)(l) = s_l(u^2) - a s_(l-1)(u^2)
    m, u, a = 3, 0.85, params.a_minus
    p0 = ModelParams(n=0, m=m, q=params.q, a_plus=params.a_plus, a_minus=a)
    z = u * u
    img = apply_creation(u, FockVector.vacuum(m), p0)

    def chebyshev_like(l):
        return (z ** (l + 1) - z ** (-l - 1)) / (z - 1.0 / z)

    for l in range(m + 1):
        expected = chebyshev_like(l) - a * chebyshev_like(l - 1)
        assert img[(l,)] == pytest.approx(expected, rel=1e-12)


def test_bethe_eigenvalue_hamiltonian_part(params):
    _, e = bethe_eigenvalues(0.85, np.array([0.0, 0.0]), params)
    assert e == pytest.approx(4.0)


def test_bethe_eigenvalue_leading_term(params):
    # small-u expansion starts at q^(-m) t^(-n) u^(-2m-4)
    xi = np.array([1.1, 0.5])
    n, m = len(xi), params.m
    u = 0.01
    ev, _ = bethe_eigenvalues(u, xi, params)
    lead = params.q ** (-m) * params.t ** (-n)
    assert ev * u ** (2 * m + 4) == pytest.approx(lead, rel=1e-3)


def test_bethe_eigenvalue_singularity_guard(params):
    with pytest.raises(ValueError):
        bethe_eigenvalues(1.0, np.array([1.0, 0.5]), params)


def test_transfer_matrix_matches_eigendecomposition(params):
    # diagonalize T(u) once and confirm a second T(v) is diagonal in that frame
    mu = transfer_matrix(0.6, 1, 2, params)
    mv = transfer_matrix(0.85, 1, 2, params)
    _, vecs = np.linalg.eig(mu)
    off = np.linalg.inv(vecs) @ mv @ vecs
    np.testing.assert_allclose(off - np.diag(np.diag(off)),
                               np.zeros_like(off), atol=1e-9)


def test_r_matrix_unitarity():
    q, u = 0.6, 0.7
    prod = r_matrix(u, q) @ r_matrix(1.0 / u, q)
    rho = unitarity_scalar(u, q)
    np.testing.assert_allclose(prod, rho * np.eye(4), atol=1e-13)
    assert rho == pytest.approx(laurent_s(q * u) * laurent_s(q / u))


def test_r_matrix_pt_symmetry():
    q, u = 0.6, 1.3
    r = r_matrix(u, q)
    pm = permutation_matrix()
    np.testing.assert_allclose(r.T, pm @ r @ pm, atol=1e-14)
