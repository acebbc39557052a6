"""Command-line driver: spectra, Gram matrices, structural checks, sweeps.

Every command prints a single JSON report to stdout (deterministic: identical
configuration gives byte-identical bytes).  With --output DIR the report is
also written to disk, either as report.json or as one CSV file per table, and
a small set of diagnostic figures is rendered unless --no-figures is passed.

Exit status: 0 when every requested tolerance is met, 1 when the run finished
but some residual exceeded its tolerance, 2 for invalid parameters or usage.
"""

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from .bethe import MorseProblem, bae_residual, bound_margins, solve_spectral_point
from .continuum import (alcove_samples, continuum_energy, convergence_sweep,
                        gram_continuum, robin_residual, wall_samples,
                        wave_exponential_sum, wave_sup_norm)
from .core import ContinuumParams, ModelParams
from .fock import apply_hamiltonian, enumerate_sector, sector_basis
from .hall_littlewood import gram_discrete, wave_at_point
from .structure import CHECKS, verify_structure
from .transfer import apply_transfer, bethe_eigenvalues, hamiltonian_eigenvalue

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2

OUTPUT_ENV_VAR = "QBETHE_OUTPUT_DIR"


class CLIError(Exception):
    """Invalid parameters or run configuration."""


# ---------------------------------------------------------------------------
# deterministic JSON
# ---------------------------------------------------------------------------

def format_float(x) -> str:
    """17-significant-digit decimal form; round-trips any float64."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def render_json(obj, indent: int = 0) -> str:
    """Serialize a report payload with stable key order and float format.

    The stdlib encoder is avoided only because repr-based float formatting
    varies in digit count; byte-identical output is part of the contract.
    """
    pad = "  " * indent
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return render_json({"re": c.real, "im": c.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            "%s  %s: %s" % (pad, json.dumps(str(k)), render_json(v, indent + 1))
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, np.ndarray):
        return render_json(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        scalar = all(
            isinstance(v, (bool, int, float, np.bool_, np.integer, np.floating))
            for v in obj
        )
        if scalar:
            return "[" + ", ".join(render_json(v) for v in obj) + "]"
        rows = [pad + "  " + render_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__} into the report")


# ---------------------------------------------------------------------------
# CSV artifacts
# ---------------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return f"{format_float(v.real)}+{format_float(v.imag)}j"
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_cell(w) for w in v)
    if v is None:
        return ""
    return str(v)


def write_csv(path: str, rows: list) -> None:
    """One table per file; the header row names the columns."""
    header = list(rows[0]) if rows else []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row[k]) for k in header])


def _matrix_rows(mat: np.ndarray, prefix: str = "c") -> list:
    out = []
    for i, row in enumerate(np.asarray(mat)):
        rec = {"row": i}
        for j, v in enumerate(row):
            rec[f"{prefix}{j}"] = float(v)
        out.append(rec)
    return out


# ---------------------------------------------------------------------------
# configuration parsing
# ---------------------------------------------------------------------------

_LATTICE_FIELDS = {"n": int, "m": int, "q": float, "a_plus": float, "a_minus": float}
_CONTINUUM_FIELDS = {"n": int, "g": float, "g_plus": float, "g_minus": float}


def _parse_assignments(tokens, fields, label: str) -> dict:
    kw = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in fields:
            raise CLIError(
                f"bad --{label} token {tok!r}; expected key=value with keys "
                + ", ".join(fields)
            )
        try:
            kw[key] = fields[key](val)
        except ValueError:
            raise CLIError(f"bad value in --{label} token {tok!r}") from None
    return kw


def build_params(args):
    """Return (params, flavor) from --lattice / --continuum token lists.

    Omitting both selects the default lattice model; passing both is an error
    except for `converge`, which owns its lattice family via the scaling map.
    """
    lat = getattr(args, "lattice", None)
    con = getattr(args, "continuum", None)
    if lat is not None and con is not None:
        raise CLIError("pass --lattice or --continuum, not both")
    if con is not None:
        kw = _parse_assignments(con, _CONTINUUM_FIELDS, "continuum")
        return ContinuumParams(**kw), "continuum"
    kw = _parse_assignments(lat or [], _LATTICE_FIELDS, "lattice")
    return ModelParams(**kw), "lattice"


def _parse_partition(text: str) -> tuple:
    toks = text.replace(",", " ").split()
    try:
        return tuple(int(v) for v in toks)
    except ValueError:
        raise CLIError(f"bad partition {text!r}; expected comma-separated parts") from None


def select_lambdas(args, p, flavor: str) -> list:
    if getattr(args, "lam", None):
        return [_parse_partition(s) for s in args.lam]
    if flavor == "lattice":
        return list(sector_basis(p.n, p.m).states)
    # graded order, smallest first; the first few labels of the alcove spectrum
    return [tuple(lam) for lam in reversed(enumerate_sector(p.n, 2))][:4]


def merge_tolerances(args, defaults: dict) -> dict:
    tols = dict(defaults)
    for tok in getattr(args, "tol", None) or []:
        key, sep, val = tok.partition("=")
        if not sep or key not in tols:
            raise CLIError(
                f"bad --tol token {tok!r}; known names: " + ", ".join(defaults)
            )
        try:
            tols[key] = float(val)
        except ValueError:
            raise CLIError(f"bad value in --tol token {tok!r}") from None
    return tols


def params_dict(p) -> dict:
    if isinstance(p, ModelParams):
        return {
            "flavor": "lattice",
            "n": p.n,
            "m": p.m,
            "q": p.q,
            "t": p.t,
            "a_plus": p.a_plus,
            "a_minus": p.a_minus,
        }
    return {
        "flavor": "continuum",
        "n": p.n,
        "g": p.g,
        "g_plus": p.g_plus,
        "g_minus": p.g_minus,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args):
    p, flavor = build_params(args)
    lambdas = select_lambdas(args, p, flavor)
    tols = merge_tolerances(args, {"bae": 1e-10, "gradient": 1e-10})
    rows = []
    worst_bae = 0.0
    worst_grad = 0.0
    bounds_ok = True
    for lam in lambdas:
        prob = MorseProblem(lam, p)
        point = solve_spectral_point(prob)
        resid = bae_residual(point.xi, prob)
        margins = bound_margins(point, prob)
        energy = (hamiltonian_eigenvalue(point.xi) if flavor == "lattice"
                  else continuum_energy(point.xi))
        row = {
            "lam": [int(v) for v in lam],
            "xi": [float(v) for v in point.xi],
            "energy": float(energy),
            "bae_residual": float(resid),
            "grad_norm": float(point.grad_norm),
            "iterations": int(point.iterations),
        }
        for key, flag in margins.items():
            row[f"bound_{key}"] = bool(flag)
        rows.append(row)
        worst_bae = max(worst_bae, resid)
        worst_grad = max(worst_grad, point.grad_norm)
        bounds_ok = bounds_ok and margins["ok"]
    residuals = {
        "max_bae_residual": worst_bae,
        "max_grad_norm": worst_grad,
        "bounds_ok": bounds_ok,
    }
    passed = (worst_bae <= tols["bae"] and worst_grad <= tols["gradient"]
              and bounds_ok)
    payload = {
        "command": "spectrum",
        "params": params_dict(p),
        "results": {"count": len(rows), "table": rows},
        "residuals": residuals,
        "tolerances": tols,
        "pass": passed,
    }
    return payload, {"spectrum": rows}


def cmd_gram(args):
    p, flavor = build_params(args)
    lambdas = select_lambdas(args, p, flavor)
    if flavor == "lattice":
        points = [solve_spectral_point(MorseProblem(lam, p)) for lam in lambdas]
        mat = gram_discrete(points, p)
        defaults = {"offdiag": 1e-8, "hermiticity": 1e-10}
    else:
        mat = gram_continuum(lambdas, p)
        defaults = {"offdiag": 1e-6, "hermiticity": 1e-10}
    tols = merge_tolerances(args, defaults)
    diag = np.real(np.diag(mat)).copy()
    corr = 0.0
    for i in range(len(lambdas)):
        for j in range(len(lambdas)):
            if i != j:
                corr = max(corr, abs(mat[i, j]) / math.sqrt(diag[i] * diag[j]))
    scale = max(1.0, float(np.max(np.abs(mat))))
    herm = float(np.max(np.abs(mat - mat.conj().T))) / scale
    residuals = {"max_offdiag_correlation": corr, "hermiticity_dev": herm}
    passed = corr <= tols["offdiag"] and herm <= tols["hermiticity"]
    payload = {
        "command": "gram",
        "params": params_dict(p),
        "results": {
            "basis": [[int(v) for v in lam] for lam in lambdas],
            "diag": [float(v) for v in diag],
            "matrix_re": np.real(mat).tolist(),
            "matrix_im": np.imag(mat).tolist(),
        },
        "residuals": residuals,
        "tolerances": tols,
        "pass": passed,
    }
    tables = {
        "gram_basis": [
            {"index": i, "lam": list(lam), "diag": float(diag[i])}
            for i, lam in enumerate(lambdas)
        ],
        "gram_matrix_re": _matrix_rows(np.real(mat)),
        "gram_matrix_im": _matrix_rows(np.imag(mat)),
        "gram_summary": [
            {
                "max_offdiag_correlation": corr,
                "hermiticity_dev": herm,
                "offdiag_tol": tols["offdiag"],
                "pass": passed,
            }
        ],
    }
    return payload, tables


def cmd_verify(args):
    p, flavor = build_params(args)
    if flavor != "lattice":
        raise CLIError("verify runs on the lattice model; use --lattice")
    names = []
    for raw in getattr(args, "check", None) or ["all"]:
        if raw == "all":
            names.extend(c for c in CHECKS if c not in names)
        elif raw in CHECKS:
            if raw not in names:
                names.append(raw)
        else:
            raise CLIError(
                f"unknown check {raw!r}; known checks: all, " + ", ".join(CHECKS)
            )
    samples = None
    if getattr(args, "samples", None):
        samples = tuple(float(v) for v in args.samples.replace(",", " ").split())
        if not samples:
            raise CLIError("--samples needs at least one spectral value")
    tol_map = merge_tolerances(args, {"identity": 0.0})
    override = tol_map["identity"] if tol_map["identity"] > 0.0 else None
    results = [verify_structure(name, p, samples=samples, tol=override) for name in names]
    rows = []
    detail_rows = []
    residuals = {}
    for res in results:
        rows.append(
            {
                "check": res.check,
                "passed": res.passed,
                "max_deviation": res.max_deviation,
                "tol": res.tol,
                "notes": "; ".join(res.notes),
            }
        )
        residuals[res.check] = res.max_deviation
        for name, dev in res.details.items():
            detail_rows.append(
                {"check": res.check, "subcheck": name, "deviation": float(dev)}
            )
    passed = all(res.passed for res in results)
    payload = {
        "command": "verify",
        "params": params_dict(p),
        "results": {
            "checks": [
                {
                    "check": res.check,
                    "passed": res.passed,
                    "max_deviation": res.max_deviation,
                    "tol": res.tol,
                    "details": {k: float(v) for k, v in res.details.items()},
                    "notes": list(res.notes),
                }
                for res in results
            ]
        },
        "residuals": residuals,
        "tolerances": {res.check: res.tol for res in results},
        "pass": passed,
    }
    return payload, {"verify_checks": rows, "verify_details": detail_rows}


def cmd_converge(args):
    p, flavor = build_params(args)
    if flavor != "continuum":
        raise CLIError("converge needs --continuum parameters")
    lams = select_lambdas(args, p, flavor) if getattr(args, "lam", None) else [(0,) * p.n]
    if len(lams) != 1:
        raise CLIError("converge tracks a single --lam label per run")
    lam = lams[0]
    m_list = tuple(int(v) for v in args.m_list.replace(",", " ").split())
    if not m_list:
        raise CLIError("--m-list needs at least one lattice size")
    tols = merge_tolerances(args, {"final": 0.02, "ratio": 1.5})
    report = convergence_sweep(lam, p, m_list=m_list)
    devs = [row["xi_dev"] for row in report]
    ratios = [devs[i] / devs[i + 1] if devs[i + 1] > 0 else math.inf
              for i in range(len(devs) - 1)]
    final = devs[-1]
    passed = final < tols["final"] and all(r >= tols["ratio"] for r in ratios)
    payload = {
        "command": "converge",
        "params": params_dict(p),
        "results": {
            "lam": [int(v) for v in lam],
            "m_list": list(m_list),
            "table": report,
            "ratios": ratios,
        },
        "residuals": {"final_xi_dev": final, "min_ratio": min(ratios) if ratios else math.inf},
        "tolerances": tols,
        "pass": passed,
    }
    return payload, {"converge": report}


def cmd_wavefn(args):
    p, flavor = build_params(args)
    lams = select_lambdas(args, p, flavor) if getattr(args, "lam", None) else [(0,) * p.n]
    if len(lams) != 1:
        raise CLIError("wavefn tabulates a single --lam label per run")
    lam = lams[0]
    point = solve_spectral_point(MorseProblem(lam, p))
    if flavor == "lattice":
        tols = merge_tolerances(args, {"h_residual": 1e-10, "transfer_residual": 1e-8})
        wave = wave_at_point(point, p)
        amps = wave.amp
        scale = float(np.max(np.abs(amps)))
        energy = hamiltonian_eigenvalue(point.xi)
        h_img = apply_hamiltonian(wave, p)
        h_res = float(np.max(np.abs(h_img.amp - energy * amps))) / scale
        u = float(args.u)
        t_img = apply_transfer(u, wave, p)
        t_eig, _ = bethe_eigenvalues(u, point.xi, p)
        t_res = float(np.max(np.abs(t_img.amp - t_eig * amps))) / scale
        rows = [
            {
                "lam": list(mu),
                "amp_re": float(amps[i].real),
                "amp_im": float(amps[i].imag),
            }
            for i, mu in enumerate(wave.basis.states)
        ]
        residuals = {"h_residual": h_res, "transfer_residual": t_res}
        results = {
            "lam": [int(v) for v in lam],
            "xi": [float(v) for v in point.xi],
            "energy": float(energy),
            "transfer_u": u,
            "transfer_eigenvalue": complex(t_eig),
            "table": rows,
        }
        passed = (h_res <= tols["h_residual"]
                  and t_res <= tols["transfer_residual"])
    else:
        tols = merge_tolerances(args, {"robin_affine": 1e-8, "robin_nonaffine": 1e-10})
        es = wave_exponential_sum(point.xi, p)
        scale = max(wave_sup_norm(es), 1e-30)
        n = p.n
        walls = ["origin", "affine"] + list(range(1, n))
        worst_aff = 0.0
        worst_non = 0.0
        for wall in walls:
            for x in wall_samples(wall, n, count=4):
                r = robin_residual(point.xi, p, wall, x) / scale
                if wall == "affine":
                    worst_aff = max(worst_aff, r)
                else:
                    worst_non = max(worst_non, r)
        rows = []
        for x in alcove_samples(n, count=args.points):
            val = es(x)
            rows.append(
                {
                    "x": [float(v) for v in x],
                    "psi_re": float(val.real),
                    "psi_im": float(val.imag),
                }
            )
        residuals = {"robin_affine": worst_aff, "robin_nonaffine": worst_non}
        results = {
            "lam": [int(v) for v in lam],
            "xi": [float(v) for v in point.xi],
            "energy": float(continuum_energy(point.xi)),
            "sup_norm": scale,
            "table": rows,
        }
        passed = (worst_aff <= tols["robin_affine"]
                  and worst_non <= tols["robin_nonaffine"])
    payload = {
        "command": "wavefn",
        "params": params_dict(p),
        "results": results,
        "residuals": residuals,
        "tolerances": tols,
        "pass": passed,
    }
    return payload, {"wavefn": rows}


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "gram": cmd_gram,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "wavefn": cmd_wavefn,
}


# ---------------------------------------------------------------------------
# argument parser and entry point
# ---------------------------------------------------------------------------

def _add_common(sub, continuum=True):
    sub.add_argument("--lattice", nargs="*", metavar="KEY=VAL",
                     help="lattice model: n, m, q, a_plus, a_minus")
    if continuum:
        sub.add_argument("--continuum", nargs="*", metavar="KEY=VAL",
                         help="alcove model: n, g, g_plus, g_minus")
    sub.add_argument("--lam", action="append", metavar="PARTS",
                     help="partition label, comma-separated parts (repeatable)")
    sub.add_argument("--tol", action="append", metavar="NAME=VAL",
                     help="tolerance override (repeatable)")
    sub.add_argument("--output", metavar="DIR",
                     default=os.environ.get(OUTPUT_ENV_VAR),
                     help=f"artifact directory (default ${OUTPUT_ENV_VAR})")
    sub.add_argument("--format", choices=("json", "csv"), default="json",
                     help="artifact format written under --output")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip figure rendering under --output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbethe",
        description="Bethe spectra and eigenfunctions for the open q-boson "
                    "chain and the alcove Laplacian.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="solve all requested spectral points")
    _add_common(sp)

    gr = subs.add_parser("gram", help="Gram matrix and off-diagonal correlation")
    _add_common(gr)

    ve = subs.add_parser("verify", help="structural identity checks")
    _add_common(ve, continuum=False)
    ve.add_argument("--check", action="append", metavar="NAME",
                    help="check id or 'all' (repeatable); unknown names list "
                         "the available ids in the error message")
    ve.add_argument("--samples", metavar="U1,U2,...",
                    help="spectral-parameter samples for the checks")

    co = subs.add_parser("converge", help="lattice-to-continuum sweep")
    _add_common(co)
    co.add_argument("--m-list", default="8,16,32,64", metavar="M1,M2,...",
                    help="lattice sizes for the sweep")

    wf = subs.add_parser("wavefn", help="tabulate one eigenfunction")
    _add_common(wf)
    wf.add_argument("--u", type=float, default=0.6,
                    help="transfer spectral parameter for the residual check")
    wf.add_argument("--points", type=int, default=8,
                    help="number of interior sample points (continuum)")

    return parser


def _write_artifacts(args, payload, tables, text: str) -> None:
    outdir = args.output
    os.makedirs(outdir, exist_ok=True)
    written = []
    if args.format == "json":
        path = os.path.join(outdir, "report.json")
        with open(path, "w") as fh:
            fh.write(text)
        written.append(path)
    else:
        for name, rows in tables.items():
            if not rows:
                continue
            path = os.path.join(outdir, f"{name}.csv")
            write_csv(path, rows)
            written.append(path)
    if not args.no_figures:
        from . import figures

        written.extend(figures.render(payload["command"], payload, outdir))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, tables = _COMMANDS[args.command](args)
    except (CLIError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_json(payload) + "\n"
    sys.stdout.write(text)
    if args.output:
        _write_artifacts(args, payload, tables, text)
    return EXIT_OK if payload["pass"] else EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
