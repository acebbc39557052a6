"""Monodromy and boundary transfer operators on Fock sectors.

The periodic monodromy entries A, B, C, D act by single horizontal-strip
sums; the boundary entries cA, cB, cC, cD act by double-strip sums with
site-parity prefactors.  The boundary transfer operator is the two-term
combination of the cA and cD coefficient sums; its eigenvalues on Bethe
vectors come in a closed product form.

A horizontal strip mu <= lam (written mu ~ lam below) interleaves the parts:
lam_1 >= mu_1 >= lam_2 >= mu_2 >= ..., where mu has as many parts as lam or
one fewer.  The strip weights are products over sites where the occupation
jumps by one:

    phi_{lam/mu} = prod over l with m_l(lam) = m_l(mu)+1 of (1 - t**m_l(lam))
    psi_{lam/mu} = prod over l with m_l(lam) = m_l(mu)-1 of (1 - t**m_l(mu))
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, ModelParams, Tolerances, e_factor, laurent_s, q_int
from .fock import (
    FockVector,
    Partition,
    SectorBasis,
    sector_basis,
    weight_vector,
)

__all__ = [
    "StripRelation",
    "is_strip",
    "phi_psi",
    "strips_below",
    "strips_above",
    "apply_periodic",
    "boundary_coeff",
    "apply_boundary",
    "apply_transfer",
    "apply_creation",
    "OperatorMatrix",
    "operator_matrix",
    "weighted_adjoint",
    "transfer_matrix",
    "hamiltonian_matrix",
    "bethe_eigenvalues",
    "hamiltonian_eigenvalue",
    "r_matrix",
    "k_minus",
    "k_plus",
    "permutation_matrix",
    "unitarity_scalar",
    "lax_entry",
]


# ---------------------------------------------------------------------------
# horizontal strips
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StripRelation:
    """A verified pair mu <= lam with its strip weights."""

    lam: Partition
    mu: Partition
    phi: float
    psi: float


def is_strip(lam: Partition, mu: Partition) -> bool:
    """True when mu interleaves lam (mu has len(lam) or len(lam)-1 parts)."""
    p = len(lam)
    if len(mu) not in (p, p - 1) or p == 0 and len(mu) != 0:
        return False
    for i, v in enumerate(mu):
        if v > lam[i]:
            return False
        if i + 1 < p and v < lam[i + 1]:
            return False
    return True


def phi_psi(lam: Partition, mu: Partition, t: float) -> tuple:
    """Strip weights (phi_{lam/mu}, psi_{lam/mu}); raises when mu is not a strip of lam."""
    if not is_strip(lam, mu):
        raise ValueError(f"{mu} is not a horizontal strip of {lam}")
    return _phi(lam, mu, t), _psi(lam, mu, t)


def _phi(lam: Partition, mu: Partition, t: float) -> float:
    cl, cm = Counter(lam), Counter(mu)
    out = 1.0
    for l in cl.keys() | cm.keys():
        if cl[l] == cm[l] + 1:
            out *= 1.0 - t ** cl[l]
    return out


def _psi(lam: Partition, mu: Partition, t: float) -> float:
    cl, cm = Counter(lam), Counter(mu)
    out = 1.0
    for l in cl.keys() | cm.keys():
        if cl[l] == cm[l] - 1:
            out *= 1.0 - t ** cm[l]
    return out


def strips_below(lam: Partition, length: int):
    """All mu with mu <= lam and len(mu) = length (len(lam) or len(lam)-1).

    The interleaving constraints decouple per part: mu_i ranges over
    [lam_{i+1}, lam_i] (with lam_{p+1} = 0), so the strips are a product of
    integer windows.
    """
    p = len(lam)
    if length not in (p, p - 1):
        raise ValueError(f"strip length {length} incompatible with {p} parts")
    windows = [range(lam[i + 1] if i + 1 < p else 0, lam[i] + 1) for i in range(length)]
    return itertools.product(*windows)


def strips_above(lam: Partition, length: int, m: int):
    """All nu with lam <= nu, len(nu) = length (len(lam) or len(lam)+1), parts <= m."""
    p = len(lam)
    if length not in (p, p + 1):
        raise ValueError(f"strip length {length} incompatible with {p} parts")
    windows = []
    for i in range(length):
        hi = lam[i - 1] if i >= 1 else m
        lo = lam[i] if i < p else 0
        windows.append(range(lo, hi + 1))
    return itertools.product(*windows)


def _window(lo: int, hi: int) -> range:
    return range(lo, hi + 1)


def _between_windows(top: Partition, bottom: Partition, length: int, m: int):
    """Windows for nu with bottom <= nu <= top, len(nu) = length.

    Valid length values are len(top) and len(top)-1 combined with len(bottom)
    and len(bottom)+1; the caller guarantees consistency.  Returns None when
    some window is empty.
    """
    pt, pb = len(top), len(bottom)
    windows = []
    for i in range(length):
        # nu <= top: top_i >= nu_i >= top_{i+1}
        hi = top[i] if i < pt else 0
        lo = top[i + 1] if i + 1 < pt else 0
        # bottom <= nu: nu_i >= bottom_i, nu_i <= bottom_{i-1}, nu_1 <= m
        if i < pb:
            lo = max(lo, bottom[i])
        if i >= 1 and i - 1 < pb:
            hi = min(hi, bottom[i - 1])
        else:
            hi = min(hi, m)
        if lo > hi:
            return None
        windows.append(_window(lo, hi))
    return windows


# ---------------------------------------------------------------------------
# periodic monodromy actions
# ---------------------------------------------------------------------------

def apply_periodic(which: str, u: complex, f: FockVector, t: float) -> FockVector:
    """Act with a periodic monodromy entry A, B, C or D on a sector function.

    A and D preserve the particle number, B raises it by one, C lowers it by
    one (and yields the zero vector on the vacuum sector).  u must be nonzero.
    """
    n, m = f.basis.n, f.basis.m
    u2 = u * u
    if which == "A":
        out = FockVector.zero(n, m)
        pref = u ** (-(m + 1))
        for i, lam in enumerate(out.basis.states):
            wl = sum(lam)
            acc = 0.0j
            for mu in strips_below(lam, n):
                acc += u2 ** (wl - sum(mu)) * _phi(lam, mu, t) * f[mu]
            out.amp[i] = pref * acc
        return out
    if which == "B":
        out = FockVector.zero(n + 1, m)
        pref = u ** (-m)
        for i, lam in enumerate(out.basis.states):
            wl = sum(lam)
            acc = 0.0j
            for mu in strips_below(lam, n):
                acc += u2 ** (wl - sum(mu)) * _phi(lam, mu, t) * f[mu]
            out.amp[i] = pref * acc
        return out
    if which == "C":
        if n == 0:
            return FockVector.zero(0, m)
        out = FockVector.zero(n - 1, m)
        pref = u**m
        for i, lam in enumerate(out.basis.states):
            wl = sum(lam)
            acc = 0.0j
            for mu in strips_above(lam, n, m):
                acc += u2 ** (wl - sum(mu)) * _psi(mu, lam, t) * f[mu]
            out.amp[i] = pref * acc
        return out
    if which == "D":
        out = FockVector.zero(n, m)
        pref = u ** (m + 1)
        for i, lam in enumerate(out.basis.states):
            wl = sum(lam)
            acc = 0.0j
            for mu in strips_above(lam, n, m):
                acc += u2 ** (wl - sum(mu)) * _psi(mu, lam, t) * f[mu]
            out.amp[i] = pref * acc
        return out
    raise ValueError(f"unknown periodic entry {which!r}")


# ---------------------------------------------------------------------------
# boundary monodromy coefficients and actions
# ---------------------------------------------------------------------------

def _double_strip_sum(top: Partition, bottom: Partition, length: int, m: int,
                      z: complex, t: float, top_weight: str, bottom_weight: str) -> complex:
    """sum over nu between bottom and top of w(top/nu) w(nu/bottom) z^(|top|+|bottom|-2|nu|).

    top_weight / bottom_weight select phi or psi for the outer and inner strip.
    """
    windows = _between_windows(top, bottom, length, m)
    if windows is None:
        return 0.0j
    wt, wb = sum(top), sum(bottom)
    acc = 0.0j
    for nu in itertools.product(*windows):
        wn = sum(nu)
        w1 = _phi(top, nu, t) if top_weight == "phi" else _psi(top, nu, t)
        w2 = _phi(nu, bottom, t) if bottom_weight == "phi" else _psi(nu, bottom, t)
        acc += w1 * w2 * z ** (wt + wb - 2 * wn)
    return acc


def boundary_coeff(which: str, lam: Partition, mu: Partition, z: complex,
                   t: float, a: float, m: int) -> complex:
    """Double-strip coefficient of a boundary monodromy entry.

    which selects the entry: 'A' (lam, mu same length n), 'B' (lam has n+1
    parts, mu has n), 'C' (lam has n-1 parts, mu has n), 'D' (same length).
    Returns 0 when no intermediate partition exists, i.e. when the pair is
    not related.
    """
    nl, nm = len(lam), len(mu)
    if which == "A":
        if nl != nm:
            raise ValueError(f"entry A needs equal lengths, got {nl} and {nm}")
        n = nl
        # nu below both lam and mu
        s_same = _dual_strip_sum(lam, mu, n, m, z, t)
        s_less = _dual_strip_sum(lam, mu, n - 1, m, z, t) if n >= 1 else 0.0j
        return z ** (-m) * ((a - 1 / z) * s_same + (t * z - a) * s_less)
    if which == "B":
        if nl != nm + 1:
            raise ValueError(f"entry B needs len(lam) = len(mu)+1, got {nl} and {nm}")
        s_long = _double_strip_sum(lam, mu, nl, m, z, t, "phi", "phi")
        s_short = _double_strip_sum(lam, mu, nm, m, z, t, "phi", "phi")
        return (1 / z - a) * s_long + (a - t * z) * s_short
    if which == "C":
        if nl != nm - 1:
            raise ValueError(f"entry C needs len(lam) = len(mu)-1, got {nl} and {nm}")
        s_long = _double_strip_sum(mu, lam, nm, m, z, t, "psi", "psi")
        s_short = _double_strip_sum(mu, lam, nl, m, z, t, "psi", "psi")
        return (a - 1 / z) * s_long + (t * z - a) * s_short
    if which == "D":
        if nl != nm:
            raise ValueError(f"entry D needs equal lengths, got {nl} and {nm}")
        n = nl
        s_long = _codual_strip_sum(lam, mu, n + 1, m, z, t)
        s_same = _codual_strip_sum(lam, mu, n, m, z, t)
        return z**m * ((1 / z - a) * s_long + (a - t * z) * s_same)
    raise ValueError(f"unknown boundary entry {which!r}")


def _dual_strip_sum(lam: Partition, mu: Partition, length: int, m: int,
                    z: complex, t: float) -> complex:
    """sum over nu <= lam and nu <= mu of phi_{lam/nu} psi_{mu/nu} z^(|lam|+|mu|-2|nu|)."""
    if length < 0:
        return 0.0j
    p1, p2 = len(lam), len(mu)
    windows = []
    for i in range(length):
        hi = min(lam[i] if i < p1 else 0, mu[i] if i < p2 else 0)
        lo = max(lam[i + 1] if i + 1 < p1 else 0, mu[i + 1] if i + 1 < p2 else 0)
        if lo > hi:
            return 0.0j
        windows.append(_window(lo, hi))
    wl, wm = sum(lam), sum(mu)
    acc = 0.0j
    for nu in itertools.product(*windows):
        acc += _phi(lam, nu, t) * _psi(mu, nu, t) * z ** (wl + wm - 2 * sum(nu))
    return acc


def _codual_strip_sum(lam: Partition, mu: Partition, length: int, m: int,
                      z: complex, t: float) -> complex:
    """sum over nu with lam <= nu and mu <= nu of psi_{nu/lam} phi_{nu/mu} z^(|lam|+|mu|-2|nu|)."""
    p1, p2 = len(lam), len(mu)
    windows = []
    for i in range(length):
        lo = max(lam[i] if i < p1 else 0, mu[i] if i < p2 else 0)
        hi = min(lam[i - 1] if 1 <= i <= p1 else m, mu[i - 1] if 1 <= i <= p2 else m, m)
        if lo > hi:
            return 0.0j
        windows.append(_window(lo, hi))
    wl, wm = sum(lam), sum(mu)
    acc = 0.0j
    for nu in itertools.product(*windows):
        acc += _psi(nu, lam, t) * _phi(nu, mu, t) * z ** (wl + wm - 2 * sum(nu))
    return acc


def apply_boundary(which: str, u: complex, a: float, f: FockVector,
                   p: ModelParams) -> FockVector:
    """Act with a boundary monodromy entry cA, cB, cC, cD or the combination cDhat.

    The boundary coupling a is passed explicitly (the reflected-end coupling
    a_minus in all product formulas); q, t, m come from the params.  cDhat is
    cD + (s(q)/s(u^2)) cA and needs |s(u^2)| above the singularity floor.
    """
    n, m = f.basis.n, f.basis.m
    q, t = p.q, p.t
    z = u * u
    if which == "Dhat":
        s_u2 = laurent_s(z)
        if abs(s_u2) < DEFAULT_TOL.singularity_floor:
            raise ValueError(f"Dhat is singular at u^2 = {z} (s(u^2) ~ 0)")
        g = apply_boundary("D", u, a, f, p)
        h = apply_boundary("A", u, a, f, p)
        return g + (laurent_s(q) / s_u2) * h
    if which == "A":
        out = FockVector.zero(n, m)
        pref = q ** (-(m + 1)) * t ** (-n) / u
        target = "A"
    elif which == "B":
        out = FockVector.zero(n + 1, m)
        pref = q ** (-m) * t ** (-(n + 1))
        target = "B"
    elif which == "C":
        if n == 0:
            return FockVector.zero(0, m)
        out = FockVector.zero(n - 1, m)
        pref = q ** (-(m + 1)) * t ** (-n)
        target = "C"
    elif which == "D":
        out = FockVector.zero(n, m)
        pref = q ** (-m) * t ** (-(n + 1)) * u
        target = "D"
    else:
        raise ValueError(f"unknown boundary entry {which!r}")
    for i, lam in enumerate(out.basis.states):
        acc = 0.0j
        for j, mu in enumerate(f.basis.states):
            if f.amp[j] == 0:
                continue
            acc += boundary_coeff(target, lam, mu, z, t, a, m) * f.amp[j]
        out.amp[i] = pref * acc
    return out


def apply_transfer(u: complex, f: FockVector, p: ModelParams) -> FockVector:
    """Boundary transfer operator: two coefficient sums with a_plus prefactors."""
    n, m = f.basis.n, f.basis.m
    q, t = p.q, p.t
    z = u * u
    c_a = q ** (-m) * t ** (-(n + 1)) * (p.a_plus - t / z)
    c_d = q ** (-m) * t ** (-(n + 1)) * (p.a_plus - z)
    out = FockVector.zero(n, m)
    for i, lam in enumerate(out.basis.states):
        acc = 0.0j
        for j, mu in enumerate(f.basis.states):
            if f.amp[j] == 0:
                continue
            acc += (
                c_a * boundary_coeff("A", lam, mu, z, t, p.a_minus, m)
                + c_d * boundary_coeff("D", lam, mu, z, t, p.a_minus, m)
            ) * f.amp[j]
        out.amp[i] = acc
    return out


def apply_creation(u: complex, f: FockVector, p: ModelParams,
                   tol: Tolerances = DEFAULT_TOL) -> FockVector:
    """Normalized Bethe creation operator: (1/b(u)) cB(u; a_minus) N with
    b(u) = q s(q) s(q u^2).  Requires q u^2 away from +-1."""
    q = p.q
    qu2 = q * u * u
    if min(abs(qu2 - 1.0), abs(qu2 + 1.0)) <= tol.singularity_floor:
        raise ValueError(f"creation operator singular: q*u^2 = {qu2} too close to +-1")
    b = q * laurent_s(q) * laurent_s(qu2)
    scale = q ** (p.m + 1) * p.t ** f.basis.n / b
    return scale * apply_boundary("B", u, p.a_minus, f, p)


# ---------------------------------------------------------------------------
# dense operator matrices
# ---------------------------------------------------------------------------

@dataclass
class OperatorMatrix:
    """Dense matrix of a sector-to-sector linear map (columns indexed by source)."""

    source: SectorBasis
    target: SectorBasis
    mat: np.ndarray

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.target != self.source:
            raise ValueError("operator composition sector mismatch")
        return OperatorMatrix(other.source, self.target, self.mat @ other.mat)


def operator_matrix(op, n: int, m: int) -> OperatorMatrix:
    """Materialize op (a FockVector -> FockVector callable) on the (n, m) sector."""
    src = sector_basis(n, m)
    cols = []
    for k in range(src.size):
        amp = np.zeros(src.size, dtype=complex)
        amp[k] = 1.0
        cols.append(op(FockVector(src, amp)))
    tgt = cols[0].basis
    mat = np.column_stack([c.amp for c in cols]) if cols else np.zeros((0, 0))
    return OperatorMatrix(src, tgt, mat)


def weighted_adjoint(om: OperatorMatrix, t: float) -> OperatorMatrix:
    """Adjoint with respect to the weighted sector inner products."""
    w_src = weight_vector(om.source, t)
    w_tgt = weight_vector(om.target, t)
    mat = (om.mat.conj().T * w_tgt[None, :]) / w_src[:, None]
    return OperatorMatrix(om.target, om.source, mat)


def transfer_matrix(u: complex, n: int, m: int, p: ModelParams) -> np.ndarray:
    return operator_matrix(lambda f: apply_transfer(u, f, p), n, m).mat


def hamiltonian_matrix(n: int, m: int, p: ModelParams) -> np.ndarray:
    from .fock import apply_hamiltonian

    return operator_matrix(lambda f: apply_hamiltonian(f, p), n, m).mat


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------

def bethe_eigenvalues(u: complex, xi: np.ndarray, p: ModelParams,
                      tol: Tolerances = DEFAULT_TOL) -> tuple:
    """(transfer eigenvalue, Hamiltonian eigenvalue) at spectral parameter u.

    xi holds the real Bethe roots; the transfer eigenvalue is the two-term
    product formula in z = u^2 and the Hamiltonian eigenvalue is
    sum_j 2 cos(xi_j).  Poles of the product formula (z^2 = 1 or
    z = e^{+-i xi_j}) are guarded by the singularity floor and reported by
    name.
    """
    xi = np.asarray(xi, dtype=float)
    n, m = len(xi), p.m
    z = u * u
    floor = tol.singularity_floor
    if abs(z * z - 1.0) < floor:
        raise ValueError(f"eigenvalue formula singular: u^4 = {z * z} too close to 1")
    zs = np.exp(1j * xi)
    for j, w in enumerate(zs):
        if abs(z * w - 1.0) < floor or abs(z / w - 1.0) < floor:
            raise ValueError(
                f"eigenvalue formula singular: u^2 e^(+-i xi_{j + 1}) too close to 1"
            )
    t, ap, am = p.t, p.a_plus, p.a_minus

    def half(w):
        # one of the two reflection-symmetric halves, w = z or 1/z
        val = w ** (-(m + 2)) * (1.0 - w * w / t) / (1.0 - w * w)
        val *= (1.0 - ap * w) * (1.0 - am * w)
        for s in zs:
            val *= (1.0 - t * w * s) * (1.0 - t * w / s) / ((1.0 - w * s) * (1.0 - w / s))
        return val

    energy = p.q ** (-m) * t ** (-n) * (half(z) + half(1.0 / z))
    return energy, hamiltonian_eigenvalue(xi)


def hamiltonian_eigenvalue(xi: np.ndarray) -> float:
    return float(np.sum(2.0 * np.cos(np.asarray(xi, dtype=float))))


# ---------------------------------------------------------------------------
# 2x2 / 4x4 building blocks
# ---------------------------------------------------------------------------

def r_matrix(u: complex, q: float) -> np.ndarray:
    """4x4 intertwiner on C^2 x C^2, rows/columns ordered (11, 12, 21, 22)."""
    qi = 1.0 / q
    return np.array(
        [
            [laurent_s(qi * u), 0, 0, 0],
            [0, laurent_s(qi), qi * laurent_s(u), 0],
            [0, q * laurent_s(u), laurent_s(qi), 0],
            [0, 0, 0, laurent_s(qi * u)],
        ],
        dtype=complex,
    )


def k_minus(u: complex, a: float, q: float) -> np.ndarray:
    from .core import f_factor

    return np.diag([e_factor(u, a), f_factor(u, a, q)]).astype(complex)


def k_plus(u: complex, a: float, q: float) -> np.ndarray:
    from .core import f_factor

    return np.diag([f_factor(u, a, q), e_factor(u, a)]).astype(complex)


def permutation_matrix() -> np.ndarray:
    pmat = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            pmat[2 * j + i, 2 * i + j] = 1.0
    return pmat


def unitarity_scalar(u: complex, q: float) -> complex:
    """rho(u) = s(qu) s(q/u); also the crossing scalar."""
    return laurent_s(q * u) * laurent_s(q / u)


def lax_entry(which: str, l: int, u: complex, t: float):
    """Site-l Lax matrix entry as a FockVector -> FockVector callable.

    Entries: ('a', 'b', 'c', 'd') -> (1/u, (1-t) beta*_l, beta_l, u).
    """
    from .fock import apply_generator

    if which == "a":
        return lambda f: (1.0 / u) * f
    if which == "b":
        return lambda f: (1.0 - t) * apply_generator("create", l, f, t)
    if which == "c":
        return lambda f: apply_generator("annihilate", l, f, t)
    if which == "d":
        return lambda f: u * f
    raise ValueError(f"unknown Lax entry {which!r}")
