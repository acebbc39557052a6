import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad

from qbethe.bethe import (MorseProblem, SpectralPoint, bae_residual,
                          bound_margins, casoratian, kappa_continuum,
                          kappa_lattice, morse_gradient, morse_hessian,
                          solve_spectral_point, v_a, v_a_prime)
from qbethe.core import ContinuumParams, ModelParams
from qbethe.fock import enumerate_sector


def test_v_a_examples():
    assert v_a(0.0, 0.3) == 0.0
    th = np.linspace(-7, 7, 11)
    np.testing.assert_allclose(v_a(th, 0.0), th, atol=1e-14)
    for a in (-0.7, 0.0, 0.36, 0.9):
        assert v_a(3 * np.pi, a) == pytest.approx(3 * np.pi)
        # quasi-periodicity and continuity across the +-pi seam
        assert v_a(1.4 + 2 * np.pi, a) == pytest.approx(v_a(1.4, a) + 2 * np.pi)
        eps = 1e-9
        assert abs(v_a(np.pi + eps, a) - v_a(np.pi - eps, a)) < 1e-7


def test_v_a_prime_is_derivative():
    h = 1e-6
    for a in (-0.4, 0.36):
        for th in (0.3, 2.2, -1.7, np.pi - 0.05):
            fd = (v_a(th + h, a) - v_a(th - h, a)) / (2 * h)
            assert v_a_prime(th, a) == pytest.approx(fd, rel=1e-7)


def _morse_value(prob, xi):
    """The Morse function itself, by 1-d quadrature of its defining integrals."""
    xi = np.asarray(xi, dtype=float)
    lam = np.asarray(prob.lam, dtype=float)
    rhs = 2.0 * np.pi * (prob.rho + lam)
    if prob.flavor == "lattice":
        p = prob.params
        quad_terms = [(p.a_plus, 1.0), (p.a_minus, 1.0)]
        kinetic = (p.m + 1) * np.sum(xi * xi)
        anti = lambda a, th: quad(lambda s: v_a(s, a), 0.0, th, limit=200)[0]
        pair_a = p.t
    else:
        cp = prob.params
        kinetic = 0.5 * np.sum(xi * xi)
        anti = lambda g, th: quad(lambda s: 2.0 * np.arctan(s / g), 0.0, th,
                                  limit=200)[0]
        quad_terms = [(cp.g_plus, 1.0), (cp.g_minus, 1.0)]
        pair_a = cp.g
    val = kinetic - float(np.dot(rhs, xi))
    for j in range(prob.n):
        for a, _ in quad_terms:
            val += anti(a, xi[j])
    for j, k in itertools.combinations(range(prob.n), 2):
        val += anti(pair_a, xi[j] + xi[k]) + anti(pair_a, xi[j] - xi[k])
    return val


@pytest.mark.parametrize("prob_kind", ["lattice", "continuum"])
def test_gradient_matches_quadrature_morse_value(prob_kind):
    if prob_kind == "lattice":
        prob = MorseProblem((2, 1), ModelParams())
        xi = np.array([1.3, 0.6])
    else:
        prob = MorseProblem((1, 0), ContinuumParams())
        xi = np.array([7.0, 2.1])
    g = morse_gradient(prob, xi)
    h = 1e-5
    for j in range(prob.n):
        e = np.zeros(prob.n)
        e[j] = h
        fd = (_morse_value(prob, xi + e) - _morse_value(prob, xi - e)) / (2 * h)
        assert g[j] == pytest.approx(fd, rel=1e-6, abs=1e-6)


@pytest.mark.parametrize("prob_kind", ["lattice", "continuum"])
def test_hessian_matches_gradient_differences(prob_kind):
    if prob_kind == "lattice":
        prob = MorseProblem((3, 0), ModelParams())
        xi = np.array([1.9, 0.8])
    else:
        prob = MorseProblem((2, 2), ContinuumParams())
        xi = np.array([12.0, 5.0])
    hess = morse_hessian(prob, xi)
    np.testing.assert_allclose(hess, hess.T)
    h = 1e-6
    for j in range(prob.n):
        e = np.zeros(prob.n)
        e[j] = h
        fd = (morse_gradient(prob, xi + e) - morse_gradient(prob, xi - e)) / (2 * h)
        np.testing.assert_allclose(hess[:, j], fd, rtol=1e-6, atol=1e-6)


def test_lattice_hessian_spectral_floor(params):
    prob = MorseProblem((2, 1), params)
    for xi in (np.array([1.0, 0.4]), np.array([2.8, 0.1]), np.array([1.6, 1.59])):
        w = np.linalg.eigvalsh(morse_hessian(prob, xi))
        assert w[0] >= 2 * (params.m + 1) - 1e-9


def test_free_limit_point():
    # (t, a+, a-) -> 0: xi -> pi (rho + lam) / (m + n + 1); here pi/5
    eps = 1e-8
    p = ModelParams(n=1, m=3, q=math.sqrt(eps), a_plus=eps, a_minus=eps)
    point = solve_spectral_point(MorseProblem((0,), p))
    assert point.xi[0] == pytest.approx(np.pi / 5, abs=1e-6)


def test_free_limit_sector_2_3():
    eps = 1e-8
    p = ModelParams(n=2, m=3, q=math.sqrt(eps), a_plus=eps, a_minus=eps)
    for lam in enumerate_sector(2, 3):
        point = solve_spectral_point(MorseProblem(lam, p))
        target = np.pi * (np.array([2.0, 1.0]) + np.array(lam)) / (p.m + p.n + 1)
        np.testing.assert_allclose(point.xi, target, atol=1e-6)


def test_lattice_solves_sector_2_3(params):
    for lam in enumerate_sector(2, 3):
        prob = MorseProblem(lam, params)
        point = solve_spectral_point(prob)
        assert point.iterations <= 30
        assert point.grad_norm <= 1e-12
        assert bae_residual(point.xi, prob) <= 1e-10
        margins = bound_margins(point, prob)
        assert margins["ok"], (lam, margins)


def test_continuum_solves(cparams):
    kap = kappa_continuum(cparams)
    for lam in [(0, 0), (1, 0), (2, 1), (3, 3)]:
        prob = MorseProblem(lam, cparams)
        point = solve_spectral_point(prob)
        assert bae_residual(point.xi, prob) <= 1e-10
        base = 2 * np.pi * (prob.rho + np.array(lam, dtype=float))
        assert np.all(base / (1 + kap) < point.xi) and np.all(point.xi < base)
        assert bound_margins(point, prob)["ok"]


def test_injectivity_sector_2_3(params):
    points = {lam: solve_spectral_point(MorseProblem(lam, params)).xi
              for lam in enumerate_sector(2, 3)}
    for lam, mu in itertools.combinations(points, 2):
        assert np.max(np.abs(points[lam] - points[mu])) > 1e-6


@pytest.mark.parametrize("lam", [(0,), (2,)])
def test_strong_coupling_limit(lam):
    target = 2 * np.pi * (1 + np.array(lam, dtype=float))
    devs = []
    for g in (10.0, 100.0, 1000.0):
        cp = ContinuumParams(n=1, g=g, g_plus=g, g_minus=g)
        point = solve_spectral_point(MorseProblem(lam, cp))
        devs.append(np.max(np.abs(point.xi - target)))
    assert devs[0] > devs[1] > devs[2]
    assert devs[-1] < 2 * np.pi * 0.05


def test_parameter_continuity(params):
    base = solve_spectral_point(MorseProblem((2, 1), params)).xi
    for kw in ({"q": params.q + 1e-4}, {"a_plus": params.a_plus + 1e-4},
               {"a_minus": params.a_minus + 1e-4}):
        p2 = ModelParams(**{**params.__dict__, **kw})
        moved = solve_spectral_point(MorseProblem((2, 1), p2)).xi
        assert np.max(np.abs(moved - base)) < 1e-3


def test_kappa_values(params, cparams):
    kp, km = kappa_lattice(params)
    assert km > kp  # the minus branch has the larger denominator corrections
    assert kappa_continuum(cparams) == pytest.approx(
        2 * (1 / cparams.g_plus + 1 / cparams.g_minus + 2 / cparams.g))


def test_casoratian_properties(params):
    xi1 = solve_spectral_point(MorseProblem((2, 1), params)).xi
    xi2 = solve_spectral_point(MorseProblem((3, 0), params)).xi
    assert casoratian(0.77, xi1, xi1, params.q) == 0.0
    w = casoratian(0.77, xi1, xi2, params.q)
    assert abs(w) > 1e-8
    assert casoratian(-0.77, xi1, xi2, params.q) == pytest.approx(w, rel=1e-12)
    with pytest.raises(ValueError):
        casoratian(0.0, xi1, xi2, params.q)


def test_problem_validation(params, cparams):
    with pytest.raises(ValueError):
        MorseProblem((1, 2), params)  # not weakly decreasing
    with pytest.raises(ValueError):
        MorseProblem((4, 0), params)  # exceeds box height m=3
    with pytest.raises(ValueError):
        MorseProblem((1,), cparams)  # continuum expects n=2 parts
    point = solve_spectral_point(MorseProblem((0, 0), cparams))
    assert isinstance(point, SpectralPoint)
    assert point.flavor == "continuum"
