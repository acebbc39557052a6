"""Finite Fock sectors of the open q-boson chain.

States of the n-particle sector on sites 0..m are partitions
lambda = (lambda_1 >= ... >= lambda_n), 0 <= lambda_j <= m, zero parts
included.  Functions on a sector are stored as amplitude vectors over the
sector basis; the basis order is reverse-lexicographic with the largest
partition first, e.g. for n = m = 2:

    (2,2), (2,1), (2,0), (1,1), (1,0), (0,0)

and is deterministic across runs.  The sector inner product carries the
weight delta(lambda) = prod_l 1/[m_l(lambda)]! where m_l is the number of
parts equal to l.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ModelParams, q_factorial, q_int

__all__ = [
    "Partition",
    "SectorBasis",
    "FockVector",
    "enumerate_sector",
    "sector_basis",
    "sector_dimension",
    "weight_delta",
    "weight_vector",
    "inner_product",
    "norm",
    "apply_generator",
    "apply_hamiltonian",
    "multiplicities",
]

Partition = tuple  # tuple[int, ...], weakly decreasing


def _check_partition(lam: Partition, n: int, m: int) -> None:
    if len(lam) != n:
        raise ValueError(f"partition {lam} has {len(lam)} parts, expected {n}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"parts of {lam} are not weakly decreasing")
    if lam and (lam[0] > m or lam[-1] < 0):
        raise ValueError(f"parts of {lam} fall outside 0..{m}")


@lru_cache(maxsize=None)
def enumerate_sector(n: int, m: int) -> tuple:
    """All partitions of the (n, m) sector, largest first (rev-lex order).

    The n = 0 sector is the single empty partition.
    """
    if n < 0 or m < 0:
        raise ValueError(f"need n, m >= 0, got n={n}, m={m}")
    return tuple(itertools.combinations_with_replacement(range(m, -1, -1), n))


def sector_dimension(n: int, m: int) -> int:
    return math.comb(n + m, n)


class SectorBasis:
    """Indexed basis of one (n, m) sector."""

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        self.states = enumerate_sector(n, m)
        self.index = {lam: i for i, lam in enumerate(self.states)}
        self.size = len(self.states)

    def __eq__(self, other):
        return isinstance(other, SectorBasis) and (self.n, self.m) == (other.n, other.m)

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self):
        return f"SectorBasis(n={self.n}, m={self.m}, size={self.size})"


@lru_cache(maxsize=None)
def sector_basis(n: int, m: int) -> SectorBasis:
    return SectorBasis(n, m)


def multiplicities(lam: Partition) -> Counter:
    """Site occupation numbers m_l(lambda) as a Counter over part values."""
    return Counter(lam)


def weight_delta(lam: Partition, t: float) -> float:
    """delta(lambda) = prod_l 1/[m_l(lambda)]!."""
    out = 1.0
    for mult in Counter(lam).values():
        out /= q_factorial(mult, t)
    return out


def weight_vector(basis: SectorBasis, t: float) -> np.ndarray:
    return np.array([weight_delta(lam, t) for lam in basis.states])


@dataclass
class FockVector:
    """Amplitude vector over one sector basis."""

    basis: SectorBasis
    amp: np.ndarray

    def __post_init__(self):
        self.amp = np.asarray(self.amp, dtype=complex)
        if self.amp.shape != (self.basis.size,):
            raise ValueError(
                f"amplitude shape {self.amp.shape} does not match sector size {self.basis.size}"
            )

    @classmethod
    def zero(cls, n: int, m: int) -> "FockVector":
        b = sector_basis(n, m)
        return cls(b, np.zeros(b.size, dtype=complex))

    @classmethod
    def vacuum(cls, m: int) -> "FockVector":
        b = sector_basis(0, m)
        return cls(b, np.ones(1, dtype=complex))

    @classmethod
    def basis_state(cls, lam: Partition, m: int) -> "FockVector":
        lam = tuple(lam)
        b = sector_basis(len(lam), m)
        _check_partition(lam, len(lam), m)
        amp = np.zeros(b.size, dtype=complex)
        amp[b.index[lam]] = 1.0
        return cls(b, amp)

    def __getitem__(self, lam) -> complex:
        return self.amp[self.basis.index[tuple(lam)]]

    def __add__(self, other: "FockVector") -> "FockVector":
        if self.basis != other.basis:
            raise ValueError("cannot add vectors from different sectors")
        return FockVector(self.basis, self.amp + other.amp)

    def __sub__(self, other: "FockVector") -> "FockVector":
        if self.basis != other.basis:
            raise ValueError("cannot subtract vectors from different sectors")
        return FockVector(self.basis, self.amp - other.amp)

    def __mul__(self, scalar) -> "FockVector":
        return FockVector(self.basis, self.amp * scalar)

    __rmul__ = __mul__


def inner_product(f: FockVector, g: FockVector, t: float) -> complex:
    """Weighted sector inner product (f, g) = sum_lam f(lam) conj(g(lam)) delta(lam).

    Linear in the first slot, antilinear in the second.  Raises on a sector
    mismatch rather than guessing an embedding.
    """
    if f.basis != g.basis:
        raise ValueError(
            f"inner product across sectors {f.basis} vs {g.basis} is undefined"
        )
    w = weight_vector(f.basis, t)
    return complex(np.sum(f.amp * np.conj(g.amp) * w))


def norm(f: FockVector, t: float) -> float:
    return math.sqrt(max(inner_product(f, f, t).real, 0.0))


def _insert_part(lam: Partition, l: int) -> Partition:
    out = list(lam)
    for i, v in enumerate(out):
        if l >= v:
            out.insert(i, l)
            break
    else:
        out.append(l)
    return tuple(out)


def _remove_part(lam: Partition, l: int) -> Partition:
    out = list(lam)
    out.remove(l)
    return tuple(out)


def apply_generator(kind: str, l: int, f: FockVector, t: float) -> FockVector:
    """Act with a single site generator on a sector function.

    kind: 'annihilate' (beta_l), 'create' (beta*_l), 'tn' (t**N_l) or
    'tn_inv' (t**-N_l).  Annihilation maps the n sector to n - 1 and on the
    vacuum sector returns the zero vector; creation maps n to n + 1 and
    multiplies by the deformed occupancy [m_l + 1] on basis states.
    """
    n, m = f.basis.n, f.basis.m
    if not (0 <= l <= m):
        raise ValueError(f"site index {l} outside 0..{m}")
    if kind in ("tn", "tn_inv"):
        sign = 1 if kind == "tn" else -1
        amp = np.array(
            [f.amp[i] * t ** (sign * lam.count(l)) for i, lam in enumerate(f.basis.states)]
        )
        return FockVector(f.basis, amp)
    if kind == "annihilate":
        if n == 0:
            return FockVector.zero(0, m)
        out = FockVector.zero(n - 1, m)
        for i, lam in enumerate(f.basis.states):
            if f.amp[i] != 0 and l in lam:
                out.amp[out.basis.index[_remove_part(lam, l)]] += f.amp[i]
        return out
    if kind == "create":
        out = FockVector.zero(n + 1, m)
        for i, lam in enumerate(f.basis.states):
            if f.amp[i] != 0:
                coeff = q_int(lam.count(l) + 1, t)
                out.amp[out.basis.index[_insert_part(lam, l)]] += coeff * f.amp[i]
        return out
    raise ValueError(f"unknown generator kind {kind!r}")


def _hops(lam: Partition, m: int):
    """Admissible single-box moves (new_partition, coefficient_multiplicity)."""
    n = len(lam)
    for j in range(n):
        # raise part j by one box
        if lam[j] + 1 <= m and (j == 0 or lam[j - 1] >= lam[j] + 1):
            yield lam[:j] + (lam[j] + 1,) + lam[j + 1:], lam.count(lam[j])
        # lower part j by one box
        if lam[j] - 1 >= 0 and (j == n - 1 or lam[j + 1] <= lam[j] - 1):
            yield lam[:j] + (lam[j] - 1,) + lam[j + 1:], lam.count(lam[j])


def apply_hamiltonian(f: FockVector, p: ModelParams) -> FockVector:
    """Nearest-neighbour hopping Hamiltonian with boundary terms.

    (H f)(lam) = (a_minus [m_0(lam)] + a_plus [m_m(lam)]) f(lam)
                 + sum over single-box moves lam -> lam +- e_j of
                   [m_{lam_j}(lam)] f(lam +- e_j).
    """
    if f.basis.m != p.m:
        raise ValueError(f"vector lives on m={f.basis.m}, params have m={p.m}")
    t = p.t
    out = FockVector.zero(f.basis.n, f.basis.m)
    for i, lam in enumerate(f.basis.states):
        acc = (
            p.a_minus * q_int(lam.count(0), t) + p.a_plus * q_int(lam.count(p.m), t)
        ) * f.amp[i]
        for nxt, mult in _hops(lam, p.m):
            acc += q_int(mult, t) * f[nxt]
        out.amp[i] = acc
    return out
