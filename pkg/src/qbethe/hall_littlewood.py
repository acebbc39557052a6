"""Bethe wave functions and BC_n Hall-Littlewood polynomials.

Three independent constructions of the same n-particle wave function live
here: the strip-sum branching rule (cheap, the default), repeated application
of the Bethe creation operator (module transfer), and the direct 2^n n!
hyperoctahedral symmetrization.  Their agreement, the affine Pieri rules and
the discrete orthogonality of the wave functions at spectral points are the
main exported checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import ModelParams, Tolerances, DEFAULT_TOL, q_int
from .fock import FockVector, Partition, multiplicities, sector_basis, weight_vector
from .bethe import SpectralPoint
from .transfer import (
    apply_creation,
    apply_transfer,
    bethe_eigenvalues,
    boundary_coeff,
)

__all__ = [
    "HLParams",
    "one_particle_wave",
    "branch_coeff",
    "wave_by_branching",
    "wave_by_creation",
    "wave_at_point",
    "hl_coefficient",
    "hl_direct",
    "hl_leading_coefficient",
    "pieri_residual",
    "transfer_pieri_residual",
    "gram_discrete",
]


@dataclass(frozen=True)
class HLParams:
    """Parameters (t, a, a_hat) of the three-parameter BC_n family."""

    t: float
    a: float
    a_hat: float = 0.0


def _chebyshev_like(l: int, z: complex) -> complex:
    """s_l(z) = (z^(l+1) - z^-(l+1))/(z - 1/z) by the stable three-term recursion."""
    if l < 0:
        return 0.0j
    s_prev, s_cur = 0.0j, 1.0 + 0.0j
    w = z + 1.0 / z
    for _ in range(l):
        s_prev, s_cur = s_cur, w * s_cur - s_prev
    return s_cur


def one_particle_wave(v: complex, a: float, l: int) -> complex:
    """Wave value at site l for a single particle: s_l(v^2) - a s_{l-1}(v^2)."""
    z = v * v
    return _chebyshev_like(l, z) - a * _chebyshev_like(l - 1, z)


def branch_coeff(lam: Partition, mu: Partition, z: complex, t: float, a: float,
                 tol: Tolerances = DEFAULT_TOL) -> complex:
    """Branching weight for growing the wave from n-1 to n particles.

    Equals the n-1 -> n particle-creation coefficient sum divided by
    (1-t)(1/z - t z); z = v_n^2 must keep that denominator away from zero.
    Vanishes (through an empty intermediate sum) on unrelated pairs; the
    support is wider than single horizontal strips.
    """
    lam, mu = tuple(lam), tuple(mu)
    if len(mu) != len(lam) - 1:
        raise ValueError("branching expects len(mu) = len(lam) - 1")
    if abs(1.0 / z - t * z) < tol.singularity_floor:
        raise ValueError(f"branching degenerate: t z^2 = {t * z * z} too close to 1")
    den = (1.0 - t) * (1.0 / z - t * z)
    m_cap = lam[0] if lam else 0
    return boundary_coeff("B", lam, mu, z, t, a, m_cap) / den


def wave_by_branching(v, p: ModelParams, tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """n-particle wave over the (n, m) sector by iterated branching."""
    v = np.asarray(v, dtype=complex)
    n, m, t = len(v), p.m, p.t
    if n == 0:
        return FockVector.vacuum(m)
    cur = FockVector.zero(1, m)
    for i, lam in enumerate(cur.basis.states):
        cur.amp[i] = one_particle_wave(v[0], p.a_minus, lam[0])
    for j in range(1, n):
        z = v[j] * v[j]
        nxt = FockVector.zero(j + 1, m)
        for i, lam in enumerate(nxt.basis.states):
            acc = 0.0j
            for k, mu in enumerate(cur.basis.states):
                if cur.amp[k] != 0:
                    acc += branch_coeff(lam, mu, z, t, p.a_minus, tol) * cur.amp[k]
            nxt.amp[i] = acc
        cur = nxt
    return cur


def wave_by_creation(v, p: ModelParams, tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """Same wave by acting with the normalized creation operators on the vacuum."""
    v = np.asarray(v, dtype=complex)
    out = FockVector.vacuum(p.m)
    for vv in v[::-1]:
        out = apply_creation(vv, out, p, tol)
    return out


def wave_by_symmetrization(v, p: ModelParams, tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """Same wave over the whole sector via the symmetrization formula.

    The group data (signed permutations of z = v^2 and their coefficients)
    does not depend on the partition, so it is assembled once and the 2^n n!
    monomials are evaluated for all sector states in a single vectorized
    pass.  This is what keeps large-m sweeps cheap; branching is quadratic in
    the sector dimension.
    """
    v = np.asarray(v, dtype=complex)
    n, m = len(v), p.m
    if n == 0:
        return FockVector.vacuum(m)
    z = v * v
    hp = HLParams(t=p.t, a=p.a_minus)
    coeffs = []
    words = []
    for perm in itertools.permutations(range(n)):
        zs = z[list(perm)]
        for eps in itertools.product((1, -1), repeat=n):
            w = zs ** np.asarray(eps)
            coeffs.append(hl_coefficient(w, hp, tol))
            words.append(w)
    coeffs = np.asarray(coeffs)
    words = np.asarray(words)
    out = FockVector.zero(n, m)
    lams = np.asarray(out.basis.states, dtype=float)
    monomials = np.prod(words[None, :, :] ** lams[:, None, :], axis=2)
    out.amp[:] = monomials @ coeffs
    return out


def wave_at_point(point: SpectralPoint, p: ModelParams,
                  tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """Wave function at a solved lattice spectral point (v_j = e^{i xi_j / 2})."""
    if point.flavor != "lattice":
        raise ValueError("expected a lattice spectral point")
    return wave_by_branching(np.exp(0.5j * point.xi), p, tol)


def hl_coefficient(z, hp: HLParams, tol: Tolerances = DEFAULT_TOL) -> complex:
    """The coefficient C(z_1..z_n; t, a, a_hat) of the symmetrization formula."""
    z = np.asarray(z, dtype=complex)
    n = len(z)
    out = 1.0 + 0.0j
    for j in range(n):
        den = z[j] * z[j] - 1.0
        if abs(den) < tol.singularity_floor:
            raise ValueError(f"coefficient singular: z_{j + 1}^2 - 1 = {den}")
        out *= (z[j] - hp.a) * (z[j] - hp.a_hat) / den
    for j in range(n):
        for k in range(j + 1, n):
            for w in (z[j] * z[k], z[j] / z[k]):
                den = w - 1.0
                if abs(den) < tol.singularity_floor:
                    raise ValueError(f"coefficient singular: z_{j + 1} z_{k + 1}^(+-1) - 1 = {den}")
                out *= (w - hp.t) / den
    return out


def hl_direct(lam: Partition, z, hp: HLParams, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Full 2^n n! hyperoctahedral symmetrization of C(z) z^lam."""
    lam = tuple(lam)
    z = np.asarray(z, dtype=complex)
    n = len(z)
    if len(lam) != n:
        raise ValueError("partition length must match the number of variables")
    lam_arr = np.asarray(lam, dtype=float)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        zs = z[list(perm)]
        for eps in itertools.product((1, -1), repeat=n):
            w = zs ** np.asarray(eps)
            total += hl_coefficient(w, hp, tol) * np.prod(w ** lam_arr)
    return total


def hl_leading_coefficient(lam: Partition, hp: HLParams, radii=None) -> complex:
    """Coefficient of z^lam extracted by discrete Fourier inversion.

    Samples each variable on its own circle of radius != 1 (distinct radii keep
    the z_j z_k^{+-1} = 1 and z_j^2 = 1 manifolds away from the grid).
    """
    lam = tuple(lam)
    n = len(lam)
    if radii is None:
        radii = [1.05 + 0.17 * j for j in range(n)]
    deg = (lam[0] if lam else 0) + 1
    sizes = [2 * deg + 1] * n
    acc = 0.0 + 0.0j
    for ks in itertools.product(*(range(s) for s in sizes)):
        z = np.array([radii[j] * np.exp(2j * np.pi * ks[j] / sizes[j]) for j in range(n)])
        val = hl_direct(lam, z, hp)
        phase = np.prod([z[j] ** (-lam[j]) for j in range(n)])
        acc += val * phase
    return acc / np.prod(sizes)


def pieri_residual(point: SpectralPoint, nu: Partition, p: ModelParams,
                   wave: FockVector = None) -> float:
    """Relative defect of the three-term recurrence at a spectral point.

    The wave components at nu and its single-box neighbours must reproduce
    P_nu(z) * sum(z_j + 1/z_j); exact at solved points.
    """
    from .fock import _hops

    nu = tuple(nu)
    if wave is None:
        wave = wave_at_point(point, p)
    t = p.t
    zsum = float(np.sum(2.0 * np.cos(point.xi)))
    lhs = wave[nu] * zsum
    counts = multiplicities(nu)
    rhs = (p.a_minus * q_int(counts.get(0, 0), t)
           + p.a_plus * q_int(counts.get(p.m, 0), t)) * wave[nu]
    for nxt, mult in _hops(nu, p.m):
        rhs += q_int(mult, t) * wave[nxt]
    scale = max(abs(lhs), abs(rhs), 1e-30)
    return abs(lhs - rhs) / scale


def transfer_pieri_residual(point: SpectralPoint, p: ModelParams, u: complex = 0.6,
                            wave: FockVector = None) -> float:
    """Relative defect of the transfer-operator Pieri system at a sampled u."""
    if wave is None:
        wave = wave_at_point(point, p)
    ev, _ = bethe_eigenvalues(u, point.xi, p)
    out = apply_transfer(u, wave, p)
    scale = max(float(np.max(np.abs(wave.amp))) * abs(ev), 1e-30)
    return float(np.max(np.abs(out.amp - ev * wave.amp))) / scale


def gram_discrete(points, p: ModelParams) -> np.ndarray:
    """Weighted Gram matrix of the waves at the given spectral points."""
    waves = [wave_at_point(pt, p) for pt in points]
    basis = sector_basis(p.n, p.m)
    for w in waves:
        if w.basis != basis:
            raise ValueError("all points must belong to the same sector")
    weights = weight_vector(basis, p.t)
    mat = np.array([w.amp for w in waves])
    return (mat * weights[None, :]) @ mat.conj().T
