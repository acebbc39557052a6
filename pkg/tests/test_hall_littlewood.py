import itertools

import numpy as np
import pytest

from qbethe.bethe import MorseProblem, solve_spectral_point
from qbethe.core import ModelParams, q_factorial, q_int
from qbethe.fock import enumerate_sector, multiplicities, norm
from qbethe.hall_littlewood import (HLParams, branch_coeff, gram_discrete,
                                    hl_direct, hl_leading_coefficient,
                                    one_particle_wave, pieri_residual,
                                    transfer_pieri_residual, wave_at_point,
                                    wave_by_branching, wave_by_creation,
                                    wave_by_symmetrization)
from qbethe.transfer import apply_transfer, bethe_eigenvalues

GENERIC_V = [
    np.array([0.9 + 0.31j, 1.17 - 0.2j]),
    np.array([1.4 + 0.1j, 0.55 + 0.62j]),
    np.array([0.83 - 0.44j, 1.06 + 0.37j]),
    np.array([0.5 + 1.1j, 1.3 - 0.08j]),
    np.array([1.02 + 0.57j, 0.71 - 0.33j]),
]


def test_one_particle_wave_examples():
    v = 0.8 + 0.3j
    a = -0.4
    assert one_particle_wave(v, a, 0) == 1.0
    assert one_particle_wave(v, a, 1) == pytest.approx(v ** 2 + v ** -2 - a)
    # single-variable reduction of the symmetrized polynomial
    for l in range(5):
        direct = hl_direct((l,), np.array([v ** 2]), HLParams(t=0.36, a=a))
        assert one_particle_wave(v, a, l) == pytest.approx(direct, rel=1e-12)


def test_branch_coeff_vacuum_column():
    t, a = 0.36, -0.4
    for n in (1, 2, 3):
        lam = (0,) * n
        mu = (0,) * (n - 1)
        for z in (0.7 + 0.2j, 1.3 - 0.5j):
            assert branch_coeff(lam, mu, z, t, a) == pytest.approx(
                q_int(n, t), rel=1e-12)


def test_branch_coeff_non_nested_vanishes():
    assert branch_coeff((1, 1), (2,), 0.8 + 0.1j, 0.36, -0.4) == 0


def test_branch_coeff_degenerate_z_raises():
    t = 0.36
    with pytest.raises(ValueError):
        branch_coeff((1,), (), 1 / np.sqrt(t), t, -0.4)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 4)])
def test_three_way_wave_equality(n, m):
    p = ModelParams(n=n, m=m)
    hp = HLParams(t=p.t, a=p.a_minus)
    for v in GENERIC_V:
        v = v[:n] if n <= 2 else np.append(v[:2], 0.78 + 0.41j)
        w1 = wave_by_branching(v, p)
        w2 = wave_by_creation(v, p)
        w3 = wave_by_symmetrization(v, p)
        scale = np.max(np.abs(w1.amp))
        np.testing.assert_allclose(w2.amp, w1.amp, atol=1e-10 * scale)
        np.testing.assert_allclose(w3.amp, w1.amp, atol=1e-10 * scale)
        for lam, amp in zip(w1.basis.states, w1.amp):
            direct = hl_direct(lam, v * v, hp)
            assert abs(direct - amp) <= 1e-10 * scale


def test_origin_value_is_q_factorial():
    for n, m in [(1, 2), (2, 3), (3, 3)]:
        p = ModelParams(n=n, m=m)
        v = GENERIC_V[0][:n] if n <= 2 else np.append(GENERIC_V[0], 1.21 + 0.15j)
        w = wave_by_branching(v, p)
        assert w[(0,) * n] == pytest.approx(q_factorial(n, p.t), rel=1e-12)


def test_hyperoctahedral_invariance(params):
    v = GENERIC_V[1]
    base = wave_by_branching(v, params).amp
    for flipped in (v[::-1], np.array([1 / v[0], v[1]]), 1 / v[::-1]):
        other = wave_by_branching(flipped, params).amp
        np.testing.assert_allclose(other, base, atol=1e-12 * np.max(np.abs(base)))


def test_genericity_violation_raises(params):
    # t v^4 = 1 degenerates the branching denominators
    bad = np.array([0.9 + 0.1j, params.t ** -0.25])
    with pytest.raises(ValueError):
        wave_by_branching(bad, params)


def test_hl_direct_coincident_arguments_raise():
    hp = HLParams(t=0.36, a=-0.4)
    with pytest.raises(ValueError):
        hl_direct((1, 0), np.array([0.7, 0.7]), hp)


@pytest.mark.parametrize("lam", [(0,), (2,), (0, 0), (1, 1), (2, 1), (3, 3)])
def test_leading_coefficient(lam):
    hp = HLParams(t=0.36, a=-0.4)
    expect = 1.0
    for mult in multiplicities(lam).values():
        expect *= q_factorial(mult, hp.t)
    got = hl_leading_coefficient(lam, hp)
    assert abs(got.imag) < 1e-8
    assert got.real == pytest.approx(expect, abs=1e-8)


@pytest.fixture(scope="module")
def solved_points():
    p = ModelParams()
    return p, [solve_spectral_point(MorseProblem(lam, p))
               for lam in enumerate_sector(2, 3)]


def test_eigenfunction_residuals(solved_points):
    p, points = solved_points
    for point in points:
        wave = wave_at_point(point, p)
        wnorm = norm(wave, p.t)
        for u in (0.6, 1.3):
            ev, en = bethe_eigenvalues(u, point.xi, p)
            out = apply_transfer(u, wave, p)
            out.amp -= ev * wave.amp
            assert norm(out, p.t) <= 1e-8 * wnorm * max(abs(ev), 1.0)
        from qbethe.fock import apply_hamiltonian
        hw = apply_hamiltonian(wave, p)
        hw.amp -= en * wave.amp
        assert norm(hw, p.t) <= 1e-10 * wnorm * max(abs(en), 1.0)


def test_pieri_residual_every_nu(solved_points):
    p, points = solved_points
    for point in points:
        wave = wave_at_point(point, p)
        for nu in enumerate_sector(2, 3):
            assert pieri_residual(point, nu, p, wave=wave) <= 1e-9


def test_transfer_pieri_residual(solved_points):
    p, points = solved_points
    for point in points:
        assert transfer_pieri_residual(point, p, u=0.6) <= 1e-9


def test_pieri_one_particle_by_hand():
    # n=1 the recurrence is the three-term relation of the one-particle wave
    p = ModelParams(n=1, m=3)
    point = solve_spectral_point(MorseProblem((2,), p))
    v = np.exp(0.5j * point.xi[0])
    w = [one_particle_wave(v, p.a_minus, l) for l in range(p.m + 1)]
    energy = 2.0 * np.cos(point.xi[0])
    assert energy * w[0] == pytest.approx(p.a_minus * w[0] + w[1], rel=1e-12)
    for l in (1, 2):
        assert energy * w[l] == pytest.approx(w[l - 1] + w[l + 1], rel=1e-12)
    assert energy * w[3] == pytest.approx(w[2] + p.a_plus * w[3], rel=1e-12)


def test_gram_discrete_orthogonality(solved_points):
    p, points = solved_points
    G = gram_discrete(points, p)
    d = np.real(np.diag(G))
    assert np.all(d > 0)
    np.testing.assert_allclose(G, G.conj().T, atol=1e-12 * d.max())
    corr = np.abs(G) / np.sqrt(np.outer(d, d))
    np.fill_diagonal(corr, 0.0)
    assert corr.max() <= 1e-8


def test_gram_single_point(solved_points):
    p, points = solved_points
    G = gram_discrete(points[:1], p)
    assert G.shape == (1, 1)
    assert G[0, 0].real > 0


def test_wave_at_point_matches_branching(solved_points):
    p, points = solved_points
    point = points[3]
    direct = wave_by_branching(np.exp(0.5j * point.xi), p)
    np.testing.assert_allclose(wave_at_point(point, p).amp, direct.amp)


FROZEN_WAVE_2_2 = {
    (2, 2): 15.193439382461715 - 5.813172194839396j,
    (2, 1): 14.837771241396519 - 4.240820352229998j,
    (2, 0): 7.641395349218209 - 1.8458736877462434j,
    (1, 1): 7.301506093869824 - 1.0232159060711128j,
    (1, 0): 4.125802401949634 - 0.35387634982374916j,
    (0, 0): 1.36 + 0j,
}

FROZEN_GRAM_DIAG_2_2 = {
    (2, 2): 11.363249124816937,
    (2, 1): 3.877523429858715,
    (2, 0): 8.224475238294005,
    (1, 1): 7.055212360869459,
    (1, 0): 9.054154103263947,
    (0, 0): 64.01834024933986,
}


def test_frozen_wave_regression():
    p = ModelParams(n=2, m=2)
    w = wave_by_branching(GENERIC_V[0], p)
    for lam, expect in FROZEN_WAVE_2_2.items():
        assert w[lam] == pytest.approx(expect, rel=1e-12)


def test_frozen_gram_regression():
    p = ModelParams(n=2, m=2)
    points = [solve_spectral_point(MorseProblem(lam, p))
              for lam in enumerate_sector(2, 2)]
    G = gram_discrete(points, p)
    for k, lam in enumerate(enumerate_sector(2, 2)):
        assert G[k, k].real == pytest.approx(FROZEN_GRAM_DIAG_2_2[lam], rel=1e-10)
