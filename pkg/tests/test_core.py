import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbethe.core import (ContinuumParams, ModelParams, Tolerances, e_factor,
                         f_factor, laurent_c, laurent_s, q_factorial, q_int)


def test_laurent_s_values():
    assert laurent_s(1.0) == 0.0
    assert laurent_s(2.0) == pytest.approx(1.5)
    assert laurent_s(1j) == pytest.approx(2j)


def test_laurent_c_value():
    assert laurent_c(2.0) == pytest.approx(2.5)


@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3,
                          allow_nan=False, allow_infinity=False))
def test_laurent_parity(u):
    assert laurent_s(1.0 / u) == pytest.approx(-laurent_s(u), rel=1e-12, abs=1e-12)
    assert laurent_c(1.0 / u) == pytest.approx(laurent_c(u), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("u", [0.3, 0.85, 1.7, 0.4 + 0.9j])
@pytest.mark.parametrize("a", [0.3, -0.4])
def test_f_factor_expansion(u, a):
    # f(u; a) = e(1/(qu); a) collapses to a/(qu) - qu
    q = 0.6
    assert f_factor(u, a, q) == pytest.approx(a / (q * u) - q * u, rel=1e-14)
    assert e_factor(u, a) == pytest.approx(a * u - 1.0 / u, rel=1e-14)


def test_q_integers():
    t = 0.36
    assert q_int(0, t) == 0.0
    assert q_int(1, t) == 1.0
    assert q_int(3, t) == pytest.approx(1 + t + t * t)
    assert q_factorial(2, t) == pytest.approx(1 + t)
    assert q_factorial(3, t) == pytest.approx((1 + t) * (1 + t + t * t))


def test_model_params_defaults():
    p = ModelParams()
    assert (p.n, p.m) == (2, 3)
    assert p.t == pytest.approx(p.q ** 2)


@pytest.mark.parametrize("kw", [
    {"q": 1.7}, {"q": 0.0}, {"a_plus": 1.0}, {"a_minus": -1.2}, {"n": -1}, {"m": -2},
])
def test_model_params_rejects_bad_values(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


@pytest.mark.parametrize("kw", [{"n": 0}, {"g": 0.0}, {"g_plus": -1.0}])
def test_continuum_params_rejects_bad_values(kw):
    with pytest.raises(ValueError):
        ContinuumParams(**kw)


def test_tolerances_defaults():
    tol = Tolerances()
    assert tol.identity_tol == 1e-9
    assert tol.solver_tol == 1e-12
    assert tol.singularity_floor == 1e-6
