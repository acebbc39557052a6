"""Render diagnostic figures for CLI report payloads.

Imported lazily by the CLI so that headless runs without --output never touch
matplotlib.  Every renderer takes the already-assembled JSON payload, writes
PNG files into outdir and returns the written paths.
"""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path


def _label(lam) -> str:
    return "(" + ",".join(str(v) for v in lam) + ")"


def _spectrum(payload, outdir):
    rows = payload["results"]["table"]
    labels = [_label(r["lam"]) for r in rows]
    energies = [r["energy"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(range(len(rows)), energies, "o-")
    ax1.set_xticks(range(len(rows)))
    ax1.set_xticklabels(labels, rotation=60, fontsize=7)
    ax1.set_ylabel("energy")
    ax1.set_title("eigenvalues by label")
    for i, r in enumerate(rows):
        xi = r["xi"]
        ax2.plot([i] * len(xi), xi, "k.", ms=8)
    ax2.set_xticks(range(len(rows)))
    ax2.set_xticklabels(labels, rotation=60, fontsize=7)
    ax2.set_ylabel(r"spectral components $\xi_j$")
    ax2.set_title("spectral points")
    fig.tight_layout()
    return [_save(fig, outdir, "spectrum.png")]


def _gram(payload, outdir):
    re = np.asarray(payload["results"]["matrix_re"], dtype=float)
    im = np.asarray(payload["results"]["matrix_im"], dtype=float)
    mag = np.hypot(re, im)
    d = np.sqrt(np.maximum(np.diag(mag), 1e-300))
    corr = mag / np.outer(d, d)
    fig, ax = plt.subplots(figsize=(5, 4))
    with np.errstate(divide="ignore"):
        img = ax.imshow(np.log10(np.maximum(corr, 1e-18)), cmap="viridis")
    fig.colorbar(img, ax=ax, label="log10 |G_ij| / sqrt(G_ii G_jj)")
    ax.set_title("Gram correlation magnitude")
    return [_save(fig, outdir, "gram.png")]


def _verify(payload, outdir):
    checks = payload["results"]["checks"]
    names = [c["check"] for c in checks]
    devs = [max(c["max_deviation"], 1e-18) for c in checks]
    tols = [c["tol"] for c in checks]
    y = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(7, 0.45 * len(names) + 1.5))
    ax.barh(y, np.log10(devs), color=["tab:green" if c["passed"] else "tab:red" for c in checks])
    for yi, tol in zip(y, tols):
        ax.plot([np.log10(tol)] * 2, [yi - 0.4, yi + 0.4], "k--", lw=1)
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("log10 max deviation (dashed: tolerance)")
    ax.set_title("structural checks")
    fig.tight_layout()
    return [_save(fig, outdir, "verify.png")]


def _converge(payload, outdir):
    table = payload["results"]["table"]
    ms = [r["m"] for r in table]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.loglog(ms, [r["xi_dev"] for r in table], "o-", label="spectral point")
    ax.loglog(ms, [r["wave_dev"] for r in table], "s-", label="wave values")
    ax.loglog(ms, [r["gram_diag_dev"] for r in table], "^-", label="Gram diagonal")
    ref = table[0]["xi_dev"]
    ax.loglog(ms, [ref * ms[0] / m for m in ms], "k:", label="1/m")
    ax.set_xlabel("lattice size m")
    ax.set_ylabel("deviation from continuum")
    ax.legend(fontsize=8)
    ax.set_title("continuum limit, label " + _label(payload["results"]["lam"]))
    fig.tight_layout()
    return [_save(fig, outdir, "converge.png")]


def _wavefn(payload, outdir):
    rows = payload["results"]["table"]
    fig, ax = plt.subplots(figsize=(6.5, 4))
    if payload["params"]["flavor"] == "lattice":
        vals = [complex(r["amp_re"], r["amp_im"]) for r in rows]
        x = np.arange(len(rows))
        ax.bar(x - 0.18, [v.real for v in vals], width=0.36, label="Re")
        ax.bar(x + 0.18, [v.imag for v in vals], width=0.36, label="Im")
        ax.set_xticks(x)
        ax.set_xticklabels([_label(r["lam"]) for r in rows], rotation=60, fontsize=7)
        ax.set_ylabel("amplitude")
        ax.set_title("eigenfunction on the occupation basis")
        ax.legend(fontsize=8)
    else:
        vals = [abs(complex(r["psi_re"], r["psi_im"])) for r in rows]
        ax.plot(range(len(rows)), vals, "o-")
        ax.set_xlabel("sample index (interior alcove points)")
        ax.set_ylabel(r"$|\psi(\xi, x)|$")
        ax.set_title("eigenfunction samples")
    fig.tight_layout()
    return [_save(fig, outdir, "wavefn.png")]


_RENDERERS = {
    "spectrum": _spectrum,
    "gram": _gram,
    "verify": _verify,
    "converge": _converge,
    "wavefn": _wavefn,
}


def render(command: str, payload: dict, outdir: str) -> list:
    fn = _RENDERERS.get(command)
    if fn is None:
        return []
    return fn(payload, outdir)
