"""Command-line interface.

Each command prints (or writes to ``--out``) a JSON envelope with the command,
the resolved configuration, results and provenance. ``--format csv`` emits the
main table instead. Exit codes: 0 ok, 2 configuration error, 3 data error,
4 numerical or detection failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from ._accel import backend_name
from .alphastar import kuiper_lower_bound, normal_tolerance_region, tk_index
from .asymptotics import confidence_bounds, credibility_bounds, subsample_credibility
from .distributions import Beta, Logistic, Mixture, Normal, Uniform
from .errors import DataError, InputError, ParameterError, TKError
from .simulate import comp, figure2, table1, table3
from .testing import lambda_rho, plan_test, run_test
from .trimdist import empirical_trimmed_kd, theoretical_trimmed_kd

EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4

_KINDS = {"normal": (Normal, 2), "uniform": (Uniform, 2), "logistic": (Logistic, 2), "beta": (Beta, 2)}


def parse_model(spec):
    """Parse ``kind:p1,p2`` or ``mix:w;kind:..;kind:..`` into a model.

    >>> parse_model("mix:0.9;normal:0,1;normal:3,1").weight
    0.9
    """
    spec = spec.strip()
    if spec.startswith("mix:"):
        parts = spec[4:].split(";")
        if len(parts) != 3:
            raise ParameterError(f"mixture spec needs 'mix:w;model;model', got {spec!r}")
        try:
            w = float(parts[0])
        except ValueError:
            raise ParameterError(f"bad mixture weight {parts[0]!r}") from None
        return Mixture(w, parse_model(parts[1]), parse_model(parts[2]))
    kind, _, params = spec.partition(":")
    kind = kind.strip().lower()
    if kind not in _KINDS:
        raise ParameterError(f"unknown model kind {kind!r}; expected one of {sorted(_KINDS)} or mix")
    cls, arity = _KINDS[kind]
    try:
        vals = [float(v) for v in params.split(",")] if params.strip() else []
    except ValueError:
        raise ParameterError(f"bad parameters in model spec {spec!r}") from None
    if len(vals) != arity:
        raise ParameterError(f"{kind} takes {arity} parameters, got {len(vals)}")
    return cls(*vals)


def ingest_sample(path, column=None):
    """Read one numeric column from a CSV file.

    Without ``column`` the file must have a single column, optionally headed by
    one non-numeric line. With ``column`` the first line is a header naming it.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror or e}") from None
    start, idx = 0, 0
    if column is not None:
        if not rows:
            raise DataError(f"{path}: file is empty")
        header = [h.strip() for h in rows[0]]
        if column not in header:
            raise DataError(f"{path}: no column named {column!r} in header {header}")
        idx, start = header.index(column), 1
    values = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row or all(not c.strip() for c in row):
            continue  # blank line
        if column is None and len(row) != 1:
            raise DataError(f"{path}, line {lineno}: expected one column, found {len(row)}; use --column")
        cell = row[idx].strip() if idx < len(row) else ""
        try:
            v = float(cell)
        except ValueError:
            if column is None and lineno == 1:
                continue  # single header line
            raise DataError(f"{path}, line {lineno}: cannot parse {cell!r} as a number") from None
        if not math.isfinite(v):
            raise DataError(f"{path}, line {lineno}: non-finite value {cell!r}")
        values.append(v)
    if not values:
        raise DataError(f"{path}: no numeric values found")
    return np.asarray(values)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _clean(v):
    """Round floats to 6 significant digits; non-finite floats become strings."""
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return float(f"{v:.6g}")
    return v


def _table_csv(rows):
    buf = io.StringIO()
    if not rows:
        return ""
    cols = list(rows[0].keys())
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([json.dumps(_clean(r[c])) if isinstance(r[c], list) else _clean(r[c]) for c in cols])
    return buf.getvalue()


def render(envelope, fmt):
    if fmt == "json":
        return json.dumps(_clean(envelope), indent=2) + "\n"
    tables = envelope.get("tables") or {}
    if tables:
        return "".join(_table_csv(rows) for rows in tables.values())
    res = _clean(envelope["results"])
    return _table_csv([{"key": k, "value": v} for k, v in res.items()])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _sample(a):
    if not a.input:
        raise ParameterError("--input is required for this command")
    return ingest_sample(a.input, a.column)


def _need(a, *names):
    for n in names:
        if getattr(a, n) is None:
            raise ParameterError(f"--{n.replace('_', '-')} is required for {a.command}")


def cmd_distance(a):
    _need(a, "alpha")
    f0 = parse_model(a.model)
    if a.target:
        d = theoretical_trimmed_kd(f0, parse_model(a.target), a.alpha, a.grid or 100_000)
        return {"distance": d}, {}
    x = _sample(a)
    r = empirical_trimmed_kd(x, f0, a.alpha)
    return {"n": x.size, "distance": r.distance}, {}


def cmd_test(a):
    _need(a, "alpha", "eps1", "eps2")
    x = _sample(a)
    plan = plan_test(a.alpha, a.eps1, a.eps2, x.size, a.rho1)
    out = run_test(x, parse_model(a.model), plan)
    return {"n": plan.n, "lambda": plan.lam, "rho": plan.rho, "rho_n": plan.rho_n,
            "threshold": out.threshold, "statistic": out.statistic, "reject": out.reject,
            "ei_bound": out.ei_bound, "eii_bound": out.eii_bound}, {}


def cmd_confbounds(a):
    _need(a, "alpha")
    if a.dn is not None:
        if a.n is None:
            raise ParameterError("--n is required with --dn")
        d, n = a.dn, a.n
    else:
        x = _sample(a)
        d, n = empirical_trimmed_kd(x, parse_model(a.model), a.alpha).distance, x.size
    ci = confidence_bounds(d, n, a.alpha, a.beta)
    return {"n": n, "distance": d, "lower": ci.lower, "upper": ci.upper, "beta": ci.level}, {}


def cmd_credibility(a):
    _need(a, "alpha", "eps1", "eps2")
    lam, rho = lambda_rho(a.alpha, a.eps1, a.eps2)
    x = None
    if a.dn is not None:
        d = a.dn
    else:
        x = _sample(a)
        d = empirical_trimmed_kd(x, parse_model(a.model), a.alpha).distance
    cb = credibility_bounds(d, a.alpha, lam, rho, a.delta)
    res = {"distance": d, "lambda": lam, "rho": rho, "l_delta": cb.l_delta, "u_delta": cb.u_delta,
           "l_defined": cb.l_defined, "u_defined": cb.u_defined, "inside": cb.inside}
    if a.subsample:
        if x is None:
            raise ParameterError("--subsample needs --input")
        _need(a, "seed")
        ns = subsample_credibility(x, parse_model(a.model), a.alpha, a.eps1, a.eps2, a.delta,
                                   a.replicates or 200, a.seed)
        res["n_subs"] = ns if ns is not None else "not reached"
    return res, {}


def cmd_alphastar(a):
    _need(a, "eps1")
    r = tk_index(_sample(a), parse_model(a.model), a.eps1)
    return {"alpha_star": r.alpha_star, "threshold": r.threshold, "d_untrimmed": r.d_untrimmed,
            "bracket": list(r.bracket)}, {}


def cmd_kuiper(a):
    x = _sample(a)
    return {"n": x.size, "gamma": a.gamma,
            "bound": kuiper_lower_bound(x, parse_model(a.model), a.gamma, restrict=a.restrict)}, {}


def _grid_spec(s, name):
    try:
        lo, hi, k = s.split(":")
        return np.linspace(float(lo), float(hi), int(k))
    except ValueError:
        raise ParameterError(f"--{name} must look like lo:hi:count, got {s!r}") from None


def cmd_tolregion(a):
    _need(a, "alpha")
    f0 = parse_model(a.model)
    if not isinstance(f0, Normal):
        raise ParameterError("tolregion needs a normal model")
    reg = normal_tolerance_region(f0.mu, f0.sigma, a.alpha, _grid_spec(a.mu_grid, "mu-grid"),
                                  _grid_spec(a.sigma_grid, "sigma-grid"), a.tol,
                                  grid_size=a.grid or 10_000)
    rows = [{"mu": float(m), "sigma": float(s), "distance": float(reg.distances[i, j]),
             "member": bool(reg.membership[i, j])}
            for i, m in enumerate(reg.mu_grid) for j, s in enumerate(reg.sigma_grid)]
    bnd = [{"mu": float(p[0]), "sigma": float(p[1])} for p in reg.boundary]
    return {"tol": reg.tol, "members": int(reg.membership.sum())}, {"region": rows, "boundary": bnd}


def cmd_simulate(a):
    if a.suite != "table1":
        _need(a, "seed")
    w = a.workers
    if a.suite == "table1":
        rows = table1(0.1 if a.alpha is None else a.alpha, a.n or 1000)
        return {}, {"table1": rows}
    if a.suite == "figure2":
        alphas = np.round(np.arange(0.0, 0.2001, 0.01), 4) if a.alphas is None else \
            [float(v) for v in a.alphas.split(",")]
        ns = [a.n] if a.n else [2000, 6000]
        out = figure2(alphas, ns, a.replicates or 150, a.seed,
                      a.eps1 or 0.05, a.eps2 or 0.05, workers=w)
        rows = [{"n": n, "alpha": float(al), "reject_freq": f}
                for n in ns for al, f in zip(alphas, out[n])]
        return {}, {"figure2": rows}
    if a.suite == "table3":
        ns = [a.n] if a.n else [100, 1000, 5000]
        rows = table3(ns=ns, M=a.replicates or 1200, seed=a.seed, beta=a.beta, workers=w)
        return {}, {"table3": rows}
    if a.suite == "comp":
        out = comp(n=a.n or 1000, runs=a.replicates or 100, seed=a.seed,
                   eps1=a.eps1 or 0.05, gamma=a.gamma, workers=w)
        rows = [{"scenario": r["scenario"], "alpha_star": r["alpha_star"], "run": i,
                 "tk_index": t, "kuiper": k}
                for r in out for i, (t, k) in enumerate(zip(r["tk_index"], r["kuiper"]))]
        return {}, {"comp": rows}
    raise ParameterError(f"unknown suite {a.suite!r}")


COMMANDS = {
    "distance": cmd_distance, "test": cmd_test, "confbounds": cmd_confbounds,
    "credibility": cmd_credibility, "alphastar": cmd_alphastar, "kuiper": cmd_kuiper,
    "tolregion": cmd_tolregion, "simulate": cmd_simulate,
}


def build_parser():
    p = argparse.ArgumentParser(prog="tkfit", description="Trimmed Kolmogorov distance tools")
    p.add_argument("--version", action="version", version=f"tkfit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True, data=True):
        if model:
            sp.add_argument("--model", required=True, help="model spec, e.g. normal:0,1")
        if data:
            sp.add_argument("--input", help="CSV file with the sample")
            sp.add_argument("--column", help="column name (first line is a header)")
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--eps1", type=float)
        sp.add_argument("--eps2", type=float)
        sp.add_argument("--beta", type=float, default=0.05)
        sp.add_argument("--delta", type=float, default=0.5)
        sp.add_argument("--gamma", type=float, default=0.05)
        sp.add_argument("--grid", type=int)
        sp.add_argument("--replicates", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = sub.add_parser("distance", help="trimmed distance of a sample or of two laws")
    common(sp)
    sp.add_argument("--target", help="second law; compute d_K(model, R_alpha(target)) on a grid")
    sub_test = sub.add_parser("test", help="contamination test")
    common(sub_test)
    sub_test.add_argument("--rho1", type=float, default=0.0)
    sp = sub.add_parser("confbounds", help="confidence bounds for the trimmed distance")
    common(sp)
    sp.add_argument("--dn", type=float, help="use this distance instead of a sample")
    sp.add_argument("--n", type=int)
    sp = sub.add_parser("credibility", help="credibility index bounds")
    common(sp)
    sp.add_argument("--dn", type=float, help="use this distance instead of a sample")
    sp.add_argument("--subsample", action="store_true", help="also run the subsampling estimate")
    sp = sub.add_parser("alphastar", help="tK-index of fit")
    common(sp)
    sp = sub.add_parser("kuiper", help="Bonferroni lower bound for the contamination level")
    common(sp)
    sp.add_argument("--restrict", action="store_true", help="only spacings up to n/2")
    sp = sub.add_parser("tolregion", help="normal tolerance region")
    common(sp, data=False)
    sp.add_argument("--mu-grid", default="-1:1:41", help="lo:hi:count (write --mu-grid=-1:1:41 for negative lo)")
    sp.add_argument("--sigma-grid", default="0.5:2:61", help="lo:hi:count")
    sp.add_argument("--tol", type=float)
    sp = sub.add_parser("simulate", help="reproduction suites")
    sp.add_argument("suite", choices=["table1", "figure2", "table3", "comp"])
    common(sp, model=False, data=False)
    sp.add_argument("--n", type=int)
    sp.add_argument("--alphas", help="comma-separated trimming levels for figure2")
    return p


def _config(a):
    return {k: v for k, v in sorted(vars(a).items()) if k not in ("out", "format")}


def main(argv=None):
    parser = build_parser()
    a = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        results, tables = COMMANDS[a.command](a)
    except ParameterError as e:
        return _fail(a.command, e, EXIT_CONFIG)
    except InputError as e:
        return _fail(a.command, e, EXIT_DATA)
    except TKError as e:
        return _fail(a.command, e, EXIT_NUMERIC)
    envelope = {
        "command": a.command,
        "config": _config(a),
        "results": results,
        "tables": tables,
        "provenance": {"version": __version__, "seed": getattr(a, "seed", None),
                       "backend": backend_name(),
                       "wall_time_s": round(time.perf_counter() - t0, 3)},
    }
    text = render(envelope, a.format)
    if a.out:
        try:
            with open(a.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as e:
            return _fail(a.command, DataError(f"cannot write {a.out}: {e.strerror or e}"), EXIT_DATA)
    else:
        sys.stdout.write(text)
    return 0


def _fail(command, err, code):
    sys.stderr.write(f"tkfit {command}: {type(err).__name__}: {err}\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
