import numpy as np
import pytest

from qbethe.core import ContinuumParams, ModelParams


@pytest.fixture
def params():
    """Generic verification parameters: q=0.6 (t=0.36), a+=0.3, a-=-0.4."""
    return ModelParams()


@pytest.fixture
def cparams():
    return ContinuumParams()


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def random_fock(basis, rng):
    from qbethe.fock import FockVector

    f = FockVector.zero(basis.n, basis.m)
    f.amp[:] = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
    return f
