"""Command-line front end: point evaluation, identity verification, report rendering.

    struvelab eval D nu=0.5 x=1,2,3
    struvelab verify sonin_gubler --grid default --format json
    struvelab verify all
    struvelab report saved.json --format plain

Exit codes: 0 all pass, 1 some report failed, 2 usage error, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bessel_struve import CylinderKind, cylinder_eval, d_nu
from .errors import StruvelabError
from .identities import REGISTRY, IdentityReport, grid_for, run_identity
from .scalar_core import NumericConfig, eta_result, hyp_pFq, polylog, zeta_result
from .series_engines import constant_sequence, kapteyn_K, mathieu_S, omega, schloemilch_T

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NONCONVERGED = 3

REPORT_FIELDS = ("identity", "params", "lhs", "lhs_err", "rhs", "rhs_err", "abs_residual", "rel_residual", "pass")
EVAL_FIELDS = ("function", "params", "value", "err_est", "work", "converged")


class CliUsageError(Exception):
    """Bad command line; maps to exit code 2."""


@dataclass
class RunSpec:
    command: str
    target: str
    grid: list[dict] | str = "default"
    config: NumericConfig = field(default_factory=NumericConfig)
    fmt: str = "plain"
    jobs: int = 1


# --------------------------------------------------------------------------
# eval
# --------------------------------------------------------------------------


def _cyl(kind):
    return lambda nu, x, cfg: cylinder_eval(kind, nu, x, cfg)


def _float_list(v) -> list[float]:
    if isinstance(v, (list, tuple)):
        return [float(t) for t in v]
    if isinstance(v, str):
        return [float(t) for t in v.split(":") if t]
    return [float(v)]


# function id -> (required parameter names, evaluator)
FUNCTIONS = {
    "J": (("nu", "x"), _cyl(CylinderKind.BESSEL_J)),
    "I": (("nu", "x"), _cyl(CylinderKind.BESSEL_I)),
    "H": (("nu", "x"), _cyl(CylinderKind.STRUVE_H)),
    "L": (("nu", "x"), _cyl(CylinderKind.STRUVE_L)),
    "D": (("nu", "x"), lambda nu, x, cfg: d_nu(nu, x, cfg).result(cfg)),
    "S": (("x",), lambda x, cfg: mathieu_S(x, False, "series", cfg)),
    "S_alt": (("x",), lambda x, cfg: mathieu_S(x, True, "series", cfg)),
    "Omega": (("w",), lambda w, cfg: omega(w, "integral", cfg)),
    "T": (("nu", "mu", "x"), lambda nu, mu, x, cfg: schloemilch_T(nu, mu, x, False, cfg)),
    "T_alt": (("nu", "mu", "x"), lambda nu, mu, x, cfg: schloemilch_T(nu, mu, x, True, cfg)),
    "K": (("nu", "mu", "x"), lambda nu, mu, x, cfg: kapteyn_K(constant_sequence(), nu, mu, x, cfg)),
    "zeta": (("s",), lambda s, cfg: zeta_result(s, cfg)),
    "eta": (("s",), lambda s, cfg: eta_result(s, cfg)),
    "Li": (("s", "z"), lambda s, z, cfg: polylog(s, z, cfg)),
    "pFq": (("a", "b", "z"), lambda a, b, z, cfg: hyp_pFq(_float_list(a), _float_list(b), z, cfg)),
}


def run_eval(spec: RunSpec) -> list[dict]:
    if spec.target not in FUNCTIONS:
        raise CliUsageError(f"unknown function id {spec.target!r}; choose from {', '.join(FUNCTIONS)}")
    names, fn = FUNCTIONS[spec.target]
    if isinstance(spec.grid, str):
        raise CliUsageError("eval needs explicit parameters, e.g. nu=0.5 x=1,2")
    rows = []
    for params in spec.grid:
        missing = [n for n in names if n not in params]
        extra = [k for k in params if k not in names]
        if missing or extra:
            raise CliUsageError(f"{spec.target} takes parameters {', '.join(names)}")
        args = {k: (params[k] if spec.target == "pFq" and k in ("a", "b") else float(params[k])) for k in names}
        try:
            r = fn(**args, cfg=spec.config)
        except (StruvelabError, ValueError, TypeError) as exc:
            raise CliUsageError(f"{spec.target}{params}: {exc}") from exc
        rows.append({"function": spec.target, "params": dict(params), "value": r.value,
                     "err_est": r.err_est, "work": r.work, "converged": r.converged})
    return rows


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _run_point(args) -> list[IdentityReport]:
    iid, params, cfg = args
    return run_identity(iid, params, cfg)


def _points(spec: RunSpec) -> list[tuple]:
    ids = list(REGISTRY) if spec.target == "all" else [spec.target]
    for iid in ids:
        if iid not in REGISTRY:
            raise CliUsageError(f"unknown identity id {iid!r}; choose from all, {', '.join(REGISTRY)}")
    pts = []
    for iid in ids:
        grid = grid_for(iid, spec.grid) if isinstance(spec.grid, str) else spec.grid
        pts.extend((iid, p, spec.config) for p in grid)
    return pts


def run_verify(spec: RunSpec) -> tuple[list[IdentityReport], int]:
    """Run identities over their grids; returns reports in grid order and the exit code."""
    pts = _points(spec)
    try:
        if spec.jobs > 1 and len(pts) > 1:
            with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
                # map preserves grid order regardless of completion order
                batches = list(pool.map(_run_point, pts, chunksize=1))
        else:
            batches = [_run_point(p) for p in pts]
    except (StruvelabError, TypeError) as exc:
        raise CliUsageError(str(exc)) from exc
    reports = [r for b in batches for r in b]
    return reports, exit_code(reports)


def exit_code(reports) -> int:
    if any(not r.converged for r in reports):
        return EXIT_NONCONVERGED
    if any(not r.passed for r in reports):
        return EXIT_FAIL
    return EXIT_OK


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def report_row(r: IdentityReport) -> dict:
    return {
        "identity": r.identity_id,
        "params": dict(r.params),
        "lhs": r.lhs.value,
        "lhs_err": r.lhs.err_est,
        "rhs": r.rhs.value,
        "rhs_err": r.rhs.err_est,
        "abs_residual": r.abs_residual,
        "rel_residual": r.rel_residual,
        "pass": r.passed,
    }


def _num(v) -> str:
    """17 significant digits: enough to round-trip any double."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _params_text(p: dict) -> str:
    # repr gives the shortest decimal that round-trips
    return ";".join(f"{k}={repr(v) if isinstance(v, float) else _num(v)}" for k, v in p.items())


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return v


def emit_rows(rows: list[dict], fields, fmt: str) -> str:
    if fmt == "json":
        # Python's float repr is the shortest string that round-trips exactly
        return json.dumps([{k: _json_value(r[k]) for k in fields} for r in rows], indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_params_text(r[k]) if isinstance(r[k], dict) else _num(r[k]) for k in fields])
        return buf.getvalue()
    if fmt == "plain":
        table = [list(fields)]
        for r in rows:
            table.append([_params_text(r[k]) if isinstance(r[k], dict)
                          else (format(r[k], ".10g") if isinstance(r[k], float) else _num(r[k])) for k in fields])
        widths = [max(len(row[i]) for row in table) for i in range(len(fields))]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in table) + "\n"
    raise CliUsageError(f"unknown format {fmt!r}")


def emit_report(reports: list[IdentityReport], fmt: str = "json") -> bytes:
    return emit_rows([report_row(r) for r in reports], REPORT_FIELDS, fmt).encode()


def load_report_rows(text: str) -> list[dict]:
    rows = json.loads(text)
    if not isinstance(rows, list) or any(set(REPORT_FIELDS) - set(r) for r in rows):
        raise CliUsageError("not a struvelab JSON report")
    return rows


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _scalar(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return float(text)
    except ValueError:
        return text


def parse_assignments(items) -> list[dict]:
    """['nu=0.5,1', 'x=2'] -> Cartesian product of the listed values."""
    axes = {}
    for item in items:
        if "=" not in item:
            raise CliUsageError(f"expected name=value[,value...], got {item!r}")
        name, vals = item.split("=", 1)
        vals = [v for v in vals.split(",") if v]
        if not name or not vals:
            raise CliUsageError(f"empty parameter in {item!r}")
        axes[name.strip()] = [_scalar(v.strip()) for v in vals]
    keys = list(axes)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(axes[k] for k in keys))]


def parse_grid(text: str | None, assignments) -> list[dict] | str:
    if assignments:
        if text not in (None, "default"):
            raise CliUsageError("give parameters either positionally or through --grid, not both")
        return parse_assignments(assignments)
    if text is None:
        return "default"
    if text in ("default", "fine"):
        return text
    return parse_assignments([t for t in text.split(";") if t.strip()])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="struvelab", description="Modified Struve/Bessel numerics and identity checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--rel-tol", type=float, default=1e-10)
        sp.add_argument("--abs-tol", type=float, default=1e-14)
        sp.add_argument("--max-terms", type=int, default=100_000)
        sp.add_argument("--quad-budget", type=int, default=4000)
        sp.add_argument("--precision", choices=("standard", "compensated"), default="compensated")
        sp.add_argument("--format", choices=("json", "csv", "plain"), default="plain")

    ev = sub.add_parser("eval", help="evaluate a function over a parameter grid")
    ev.add_argument("target", help=f"one of {', '.join(FUNCTIONS)}")
    ev.add_argument("params", nargs="*", help="name=v1,v2,... (pFq lists use ':' e.g. a=0.5:1)")
    ev.add_argument("--grid", default=None, help="'name=v1,v2;name2=...' instead of positional parameters")
    common(ev)

    ve = sub.add_parser("verify", help="check identities and report residuals")
    ve.add_argument("target", help=f"'all' or one of {', '.join(REGISTRY)}")
    ve.add_argument("params", nargs="*", help="explicit grid as name=v1,v2,...")
    ve.add_argument("--grid", default=None, help="'default', 'fine', or 'name=v1,v2;name2=...'")
    ve.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    common(ve)

    rp = sub.add_parser("report", help="re-render a saved JSON report")
    rp.add_argument("target", help="JSON file written by 'verify --format json'")
    rp.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    return p


def _config(ns) -> NumericConfig:
    try:
        return NumericConfig(rel_tol=ns.rel_tol, abs_tol=ns.abs_tol, max_terms=ns.max_terms,
                             precision_tier=ns.precision, quad_budget=ns.quad_budget)
    except StruvelabError as exc:
        raise CliUsageError(str(exc)) from exc


def _write(out, text: str) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = sys.stdout
    try:
        if ns.command == "report":
            try:
                with open(ns.target, encoding="utf-8") as fh:
                    rows = load_report_rows(fh.read())
            except (OSError, json.JSONDecodeError) as exc:
                raise CliUsageError(str(exc)) from exc
            _write(out, emit_rows(rows, REPORT_FIELDS, ns.format))
            return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL
        spec = RunSpec(ns.command, ns.target, parse_grid(ns.grid, ns.params), _config(ns), ns.format,
                       getattr(ns, "jobs", 1))
        if ns.command == "eval":
            rows = run_eval(spec)
            _write(out, emit_rows(rows, EVAL_FIELDS, spec.fmt))
            return EXIT_OK if all(r["converged"] for r in rows) else EXIT_NONCONVERGED
        reports, code = run_verify(spec)
        _write(out, emit_report(reports, spec.fmt).decode())
        n_pass = sum(r.passed for r in reports)
        print(f"{n_pass}/{len(reports)} reports passed", file=sys.stderr)
        return code
    except CliUsageError as exc:
        print(f"struvelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
