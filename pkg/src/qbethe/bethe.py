"""Bethe equation solvers via strictly convex Morse functions.

Both the lattice and the continuum Bethe equations arise as the critical
equations of strictly convex Morse functions, so each spectral point is the
unique global minimum and a damped Newton iteration on the analytic gradient
finds it reliably.  The Morse-function *value* involves antiderivatives of
v_a / arctan that we never need: the line search backtracks on the squared
gradient norm instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContinuumParams, ModelParams, Tolerances, DEFAULT_TOL

__all__ = [
    "MorseProblem",
    "SpectralPoint",
    "v_a",
    "v_a_prime",
    "morse_gradient",
    "morse_hessian",
    "solve_spectral_point",
    "bae_residual",
    "kappa_lattice",
    "kappa_continuum",
    "bound_margins",
    "casoratian",
]


@dataclass(frozen=True)
class MorseProblem:
    """A convex minimization target labelled by a partition.

    params selects the flavor: ModelParams gives the lattice problem (n
    particles on m+1 sites), ContinuumParams the alcove Laplacian problem.
    """

    lam: tuple
    params: object

    def __post_init__(self):
        lam = tuple(int(v) for v in self.lam)
        object.__setattr__(self, "lam", lam)
        n = len(lam)
        if any(lam[i] < lam[i + 1] for i in range(n - 1)) or (n and lam[-1] < 0):
            raise ValueError(f"label {lam} is not a partition")
        if self.flavor == "lattice":
            p = self.params
            if n != p.n:
                raise ValueError(f"partition has {n} parts, sector expects {p.n}")
            if lam and lam[0] > p.m:
                raise ValueError(f"part {lam[0]} exceeds the box height m={p.m}")
        else:
            if n != self.params.n:
                raise ValueError(f"partition has {n} parts, expected {self.params.n}")

    @property
    def flavor(self) -> str:
        return "lattice" if isinstance(self.params, ModelParams) else "continuum"

    @property
    def n(self) -> int:
        return len(self.lam)

    @property
    def rho(self) -> np.ndarray:
        n = self.n
        return np.arange(n, 0, -1, dtype=float)


@dataclass(frozen=True)
class SpectralPoint:
    """Converged minimum of a Morse problem."""

    xi: np.ndarray
    lam: tuple
    grad_norm: float
    iterations: int
    flavor: str

    def __post_init__(self):
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=float))


def v_a(theta, a: float):
    """Quasi-periodic phase function: odd, increasing, v_a(theta+2pi) = v_a(theta)+2pi.

    On (-pi, pi) this is 2*arctan(((1+a)/(1-a)) tan(theta/2)); the two-argument
    arctangent form below stays finite at theta = pi and glues the branches so
    the extension is continuous on all of R (v_a(+-pi) = +-pi).
    """
    if not -1.0 < a < 1.0:
        raise ValueError(f"phase parameter a={a} outside (-1, 1)")
    theta = np.asarray(theta, dtype=float)
    k = (1.0 + a) / (1.0 - a)
    j = np.floor((theta + np.pi) / (2.0 * np.pi))
    half = theta / 2.0 - np.pi * j
    out = 2.0 * np.arctan2(k * np.sin(half), np.cos(half)) + 2.0 * np.pi * j
    return out if out.shape else float(out)


def v_a_prime(theta, a: float):
    theta = np.asarray(theta, dtype=float)
    out = (1.0 - a * a) / (1.0 - 2.0 * a * np.cos(theta) + a * a)
    return out if out.shape else float(out)


def morse_gradient(prob: MorseProblem, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    n = prob.n
    lam = np.asarray(prob.lam, dtype=float)
    rhs = 2.0 * np.pi * (prob.rho + lam)
    g = np.zeros(n)
    if prob.flavor == "lattice":
        p = prob.params
        t = p.t
        for j in range(n):
            acc = 2.0 * (p.m + 1) * xi[j] + v_a(xi[j], p.a_plus) + v_a(xi[j], p.a_minus)
            for k in range(n):
                if k != j:
                    acc += v_a(xi[k] + xi[j], t) - v_a(xi[k] - xi[j], t)
            g[j] = acc - rhs[j]
    else:
        cp = prob.params
        for j in range(n):
            acc = xi[j] + 2.0 * np.arctan(xi[j] / cp.g_plus) + 2.0 * np.arctan(xi[j] / cp.g_minus)
            for k in range(n):
                if k != j:
                    acc += 2.0 * (np.arctan((xi[k] + xi[j]) / cp.g)
                                  - np.arctan((xi[k] - xi[j]) / cp.g))
            g[j] = acc - rhs[j]
    return g


def morse_hessian(prob: MorseProblem, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    n = prob.n
    H = np.zeros((n, n))
    if prob.flavor == "lattice":
        p = prob.params
        t = p.t
        for j in range(n):
            H[j, j] = 2.0 * (p.m + 1) + v_a_prime(xi[j], p.a_plus) + v_a_prime(xi[j], p.a_minus)
            for k in range(n):
                if k != j:
                    sp = v_a_prime(xi[j] + xi[k], t)
                    sm = v_a_prime(xi[j] - xi[k], t)
                    H[j, j] += sp + sm
                    H[j, k] = sp - sm
    else:
        cp = prob.params
        lor = lambda g, th: 2.0 * g / (g * g + th * th)
        for j in range(n):
            H[j, j] = 1.0 + lor(cp.g_plus, xi[j]) + lor(cp.g_minus, xi[j])
            for k in range(n):
                if k != j:
                    sp = lor(cp.g, xi[j] + xi[k])
                    sm = lor(cp.g, xi[j] - xi[k])
                    H[j, j] += sp + sm
                    H[j, k] = sp - sm
    return H


def _initial_guess(prob: MorseProblem) -> np.ndarray:
    base = prob.rho + np.asarray(prob.lam, dtype=float)
    if prob.flavor == "lattice":
        p = prob.params
        return np.pi * base / (p.m + p.n + 1)
    kap = kappa_continuum(prob.params)
    lo = 2.0 * np.pi * base / (1.0 + kap)
    hi = 2.0 * np.pi * base
    return 0.5 * (lo + hi)


def solve_spectral_point(prob: MorseProblem, tol: Tolerances = DEFAULT_TOL,
                         max_iter: int = 200, max_halvings: int = 60) -> SpectralPoint:
    """Damped Newton iteration for the unique Morse minimum.

    Backtracking (Armijo, c = 1e-4) acts on the squared gradient norm; since
    the Hessian is positive definite everywhere, the Newton direction is a
    descent direction for that merit and every accumulation point is the root.
    """
    xi = _initial_guess(prob)
    g = morse_gradient(prob, xi)
    merit = float(g @ g)
    for it in range(1, max_iter + 1):
        if np.max(np.abs(g)) <= tol.solver_tol:
            return SpectralPoint(xi, prob.lam, float(np.max(np.abs(g))), it - 1, prob.flavor)
        H = morse_hessian(prob, xi)
        step = np.linalg.solve(H, -g)
        alpha = 1.0
        for _ in range(max_halvings):
            trial = xi + alpha * step
            gt = morse_gradient(prob, trial)
            mt = float(gt @ gt)
            if mt <= (1.0 - 2.0e-4 * alpha) * merit:
                break
            alpha *= 0.5
        else:
            raise RuntimeError(
                f"line search stalled for {prob.flavor} lam={prob.lam} at iteration {it} "
                f"(|grad|={np.max(np.abs(g)):.3e})")
        xi, g, merit = trial, gt, mt
    raise RuntimeError(
        f"Newton did not converge in {max_iter} iterations for {prob.flavor} "
        f"lam={prob.lam} (|grad|={np.max(np.abs(g)):.3e})")


def bae_residual(xi: np.ndarray, prob: MorseProblem) -> float:
    """Max deviation of the exponentiated Bethe equations at xi.

    Every factor has unit modulus for real xi, so the absolute deviation is
    already a relative one.
    """
    xi = np.asarray(xi, dtype=float)
    n = prob.n
    worst = 0.0
    if prob.flavor == "lattice":
        p = prob.params
        t = p.t
        for j in range(n):
            zj = np.exp(1j * xi[j])
            lhs = np.exp(2j * (p.m + 1) * xi[j])
            rhs = ((1 - p.a_plus * zj) / (zj - p.a_plus)) * ((1 - p.a_minus * zj) / (zj - p.a_minus))
            for k in range(n):
                if k != j:
                    zp = np.exp(1j * (xi[j] + xi[k]))
                    zm = np.exp(1j * (xi[j] - xi[k]))
                    rhs *= ((1 - t * zp) / (zp - t)) * ((1 - t * zm) / (zm - t))
            worst = max(worst, abs(lhs - rhs))
    else:
        cp = prob.params
        for j in range(n):
            lhs = np.exp(1j * xi[j])
            rhs = (((1j * cp.g_plus + xi[j]) / (1j * cp.g_plus - xi[j]))
                   * ((1j * cp.g_minus + xi[j]) / (1j * cp.g_minus - xi[j])))
            for k in range(n):
                if k != j:
                    rhs *= ((1j * cp.g + xi[j] + xi[k]) / (1j * cp.g - xi[j] - xi[k]))
                    rhs *= ((1j * cp.g + xi[j] - xi[k]) / (1j * cp.g - xi[j] + xi[k]))
            worst = max(worst, abs(lhs - rhs))
    return worst


def kappa_lattice(p: ModelParams) -> tuple:
    """(kappa_plus, kappa_minus) entering the lattice momentum bounds."""
    out = []
    for sign in (+1.0, -1.0):
        acc = 0.5 * ((1 - p.a_plus ** 2) / (1 + sign * abs(p.a_plus)) ** 2
                     + (1 - p.a_minus ** 2) / (1 + sign * abs(p.a_minus)) ** 2)
        acc += (p.n - 1) * (1 - p.t ** 2) / (1 + sign * p.t) ** 2
        out.append(acc)
    return out[0], out[1]


def kappa_continuum(cp: ContinuumParams) -> float:
    return 2.0 * (1.0 / cp.g_plus + 1.0 / cp.g_minus + 2.0 * (cp.n - 1) / cp.g)


def bound_margins(point: SpectralPoint, prob: MorseProblem) -> dict:
    """Check the two-sided momentum and moment-gap bounds at a solved point.

    Returns a dict with per-component booleans plus chamber/alcove membership;
    'ok' aggregates everything.
    """
    xi = point.xi
    n = prob.n
    base = prob.rho + np.asarray(prob.lam, dtype=float)
    report = {}
    ordered = bool(np.all(np.diff(xi) < 0)) and bool(xi[-1] > 0) if n else True
    report["chamber"] = ordered
    if prob.flavor == "lattice":
        kp, km = kappa_lattice(prob.params)
        mm = prob.params.m
        lo = np.pi * base / (mm + 1 + km)
        hi = np.pi * base / (mm + 1 + kp)
        report["alcove"] = bool(np.all(xi < np.pi)) if n else True
        gap_scale_lo, gap_scale_hi = mm + 1 + km, mm + 1 + kp
        gap_lo = lambda d: np.pi * d / gap_scale_lo
        gap_hi = lambda d: np.pi * d / gap_scale_hi
    else:
        kap = kappa_continuum(prob.params)
        lo = 2.0 * np.pi * base / (1.0 + kap)
        hi = 2.0 * np.pi * base
        gap_lo = lambda d: 2.0 * np.pi * d / (1.0 + kap)
        gap_hi = lambda d: 2.0 * np.pi * d
    report["lower"] = bool(np.all(lo < xi))
    report["upper"] = bool(np.all(xi < hi))
    gaps_ok = True
    for j in range(n):
        for k in range(j + 1, n):
            d = base[j] - base[k]
            gap = xi[j] - xi[k]
            if not (gap_lo(d) < gap < gap_hi(d)):
                gaps_ok = False
    report["gaps"] = gaps_ok
    report["ok"] = all(v for v in report.values())
    return report


def casoratian(u: complex, xi1: np.ndarray, xi2: np.ndarray, q: float) -> complex:
    """Discrete Wronskian W(u) = F(qu)G(u) - F(u)G(qu) of two spectral points."""
    if u == 0:
        raise ValueError("casoratian needs u != 0")
    v = np.exp(1j * np.asarray(xi1, dtype=float) / 2.0)
    w = np.exp(1j * np.asarray(xi2, dtype=float) / 2.0)

    def spectral_poly(uu, roots):
        out = 1.0 + 0.0j
        for r in roots:
            out *= (uu * uu - r * r) * (uu * uu - 1.0 / (r * r))
        return out

    return (spectral_poly(q * u, v) * spectral_poly(u, w)
            - spectral_poly(u, v) * spectral_poly(q * u, w))
