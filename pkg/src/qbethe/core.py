"""Model parameters and the Laurent-pair scalar helpers shared by all modules.

Everything downstream is expressed through four tiny functions of a spectral
variable u (generically complex, nonzero):

    laurent_s(u) = u - 1/u          (odd pair difference)
    laurent_c(u) = u + 1/u          (even pair sum)
    e(u, a)      = a*u - 1/u        (boundary factor)
    f(u, a, q)   = e(1/(q*u), a)    (reflected boundary factor)

The lattice model is parametrized by (n, m, q, a_plus, a_minus) with
t = q**2 fixed by q, and the continuum model by (n, g, g_plus, g_minus).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

__all__ = [
    "ModelParams",
    "ContinuumParams",
    "Tolerances",
    "laurent_s",
    "laurent_c",
    "e_factor",
    "f_factor",
    "q_int",
    "q_factorial",
    "use_mp",
]

#: toggled by :func:`use_mp`; when True the scalar helpers route through mpmath
_MP_MODE = False


def use_mp(enabled: bool = True) -> None:
    """Switch the scalar helpers to extended precision (>= 30 digits).

    Intended for ill-conditioned coefficient-extraction runs; ordinary code
    paths stay in float/complex doubles.
    """
    global _MP_MODE
    _MP_MODE = bool(enabled)
    if enabled and mp.mp.dps < 30:
        mp.mp.dps = 50


def _inv(u):
    if _MP_MODE:
        return 1 / mp.mpmathify(u)
    return 1.0 / u


def laurent_s(u):
    """s(u) = u - 1/u."""
    return u - _inv(u)


def laurent_c(u):
    """c(u) = u + 1/u."""
    return u + _inv(u)


def e_factor(u, a):
    """e(u; a) = a*u - 1/u."""
    return a * u - _inv(u)


def f_factor(u, a, q):
    """f(u; a) = e(1/(q*u); a) = a/(q*u) - q*u."""
    return e_factor(_inv(q * u), a)


def q_int(k: int, t) -> float:
    """Deformed integer [k] = (1 - t**k) / (1 - t)."""
    if k < 0:
        raise ValueError(f"q_int needs k >= 0, got {k}")
    # sum form avoids 0/0 bookkeeping and is exact for small k
    return sum(t**j for j in range(k)) if k else 0 * t

def q_factorial(k: int, t):
    """Deformed factorial [k]! = [1][2]...[k], with [0]! = 1."""
    out = 1.0
    for j in range(1, k + 1):
        out *= q_int(j, t)
    return out


@dataclass(frozen=True)
class ModelParams:
    """Open q-boson chain on sites 0..m with n particles.

    t is not free: it is always q**2.  Boundary couplings a_plus, a_minus
    live in (-1, 1).
    """

    n: int = 2
    m: int = 3
    q: float = 0.6
    a_plus: float = 0.3
    a_minus: float = -0.4

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"need n >= 0, got n={self.n}")
        if self.m < 0:
            raise ValueError(f"need m >= 0, got m={self.m}")
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"need 0 < q < 1, got q={self.q}")
        for name in ("a_plus", "a_minus"):
            a = getattr(self, name)
            if not (-1.0 < a < 1.0):
                raise ValueError(f"need -1 < {name} < 1, got {a}")

    @property
    def t(self) -> float:
        return self.q * self.q


@dataclass(frozen=True)
class ContinuumParams:
    """Laplacian on the rescaled Weyl alcove with Robin-type walls.

    All couplings are strictly positive; g governs the interior walls,
    g_minus the wall at x_n = 0 and g_plus the affine wall at x_1 = 1/2.
    """

    n: int = 2
    g: float = 1.0
    g_plus: float = 1.0
    g_minus: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got n={self.n}")
        for name in ("g", "g_plus", "g_minus"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ValueError(f"need {name} > 0, got {v}")


@dataclass(frozen=True)
class Tolerances:
    """Numerical gates used across the package."""

    identity_tol: float = 1e-9     # relative, for exact operator identities
    solver_tol: float = 1e-12      # gradient max-norm at spectral points
    singularity_floor: float = 1e-6  # minimum distance to singular loci

    def __post_init__(self):
        for name in ("identity_tol", "solver_tol", "singularity_floor"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ValueError(f"need {name} > 0, got {v}")


DEFAULT_TOL = Tolerances()
