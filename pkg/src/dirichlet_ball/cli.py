"""Command-line experiments with JSON (and optional CSV) reports.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .cyclicity import approximant_sweep, dilation_sweep
from .errors import InvalidInput, NumericalFailure, ParseError
from .norms import SpaceParams, bergman_norm_sq, check_norm_equivalence, norm_sq, weight
from .parser import format_series, parse
from .sampling import qmc_ball
from .series import enumerate_multiindices
from .verifier import (
    ManifoldSpec,
    ModelIntegralSpec,
    domination_check,
    lojasiewicz_estimate,
    model_integral,
    monte_carlo_bergman_norm,
    near_manifold_samples,
    peak_check,
    rineq_check,
)

log = logging.getLogger("dirichlet_ball")

MEASURE_NORMALIZATION = "volume measure on B_n normalized to total mass 1"


@dataclass
class ExperimentReport:
    command: str
    params: dict
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isfinite(x):
            return x
        return "NaN" if math.isnan(x) else ("Infinity" if x > 0 else "-Infinity")
    if isinstance(x, complex):
        return [_jsonable(x.real), _jsonable(x.imag)]
    return x


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = " ".join(str(e) for e in v)
        else:
            out[key] = v
    return out


def write_report(report: ExperimentReport, json_path=None, csv_path=None) -> None:
    """Write the report as sorted-key JSON and, optionally, a flat CSV of its rows."""
    payload = _jsonable(asdict(report))
    if json_path is not None:
        try:
            Path(json_path).write_text(
                json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
        except OSError as exc:
            raise OSError(f"cannot write JSON report to {json_path}: {exc}") from exc
    if csv_path is not None:
        flat = [_flatten(r) for r in payload["rows"]]
        header: list[str] = []
        for r in flat:
            header.extend(k for k in r if k not in header)
        try:
            with open(csv_path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=header)
                writer.writeheader()
                writer.writerows(flat)
        except OSError as exc:
            raise OSError(f"cannot write CSV report to {csv_path}: {exc}") from exc


# ---------------------------------------------------------------------------
# argument helpers


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise InvalidInput(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _manifold(args) -> ManifoldSpec:
    return ManifoldSpec(_need(args, "manifold"), args.n)


def _expr(args, name):
    return parse(_need(args, name), args.n)


def _params(args, alpha=0.0) -> SpaceParams:
    return SpaceParams(args.n, alpha, args.formula)


# ---------------------------------------------------------------------------
# subcommands; each returns (rows, summary)


def cmd_weights(args):
    rows = []
    for alpha in _need(args, "alpha"):
        p = _params(args, alpha)
        for k in enumerate_multiindices(args.n, args.degree if args.degree is not None else 4):
            rows.append({"alpha": alpha, "k": list(k), "degree": sum(k), "weight": weight(p, k)})
    return rows, {"count": len(rows)}


def cmd_norm(args):
    f = _expr(args, "f")
    rows = []
    for alpha in _need(args, "alpha"):
        v = norm_sq(f, _params(args, alpha))
        rows.append({"alpha": alpha, "f": format_series(f), "norm_sq": v, "norm": math.sqrt(v)})
    return rows, {}


def cmd_approximant_sweep(args):
    f = _expr(args, "f")
    sweep = approximant_sweep(f, _need(args, "degree"), _need(args, "alpha"), _params(args))
    summary = {
        "aitken_limit": {str(a): sweep.limits[a] for a in sweep.alphas},
        "nonincreasing": {str(a): sweep.nonincreasing[a] for a in sweep.alphas},
        "strictly_decreasing": {str(a): sweep.strictly_decreasing[a] for a in sweep.alphas},
    }
    if sweep.failure:
        summary["ill_conditioned_degree_reached"] = {str(a): d for a, d in sweep.failure.items()}
    return sweep.rows(), summary


def cmd_dilation_sweep(args):
    f = _expr(args, "f")
    sweep = dilation_sweep(
        f,
        _need(args, "r"),
        _need(args, "alpha"),
        _params(args),
        bounded_ratio=args.bounded_ratio,
        growing_ratio=args.growing_ratio,
        max_degree=args.max_degree,
    )
    summary = {
        "verdict": {str(a): sweep.verdicts[a] for a in sweep.alphas},
        "thresholds": {"bounded_max_over_min": args.bounded_ratio, "growing_last_over_first": args.growing_ratio},
    }
    return sweep.rows(), summary


def cmd_berg_check(args):
    rows = []
    summary = {}
    f = _expr(args, "f") if args.f is not None else None
    D = args.degree if args.degree is not None else 30
    for alpha in _need(args, "alpha"):
        rep = check_norm_equivalence(_params(args, alpha), D)
        for r in rep.rows():
            rows.append({"alpha": alpha, **r})
        entry = {
            "min_ratio": rep.min_ratio,
            "max_ratio": rep.max_ratio,
            "max_over_min": rep.spread,
            "last_decade_variation": rep.last_decade_variation(),
        }
        if f is not None:
            c = rep.bergman_exponent
            mc = monte_carlo_bergman_norm(f, c, args.samples, args.seed)
            exact = bergman_norm_sq(f, c)
            entry["monte_carlo"] = {
                "mean": mc.mean,
                "stderr": mc.stderr,
                "coefficient_sum": exact,
                "sigmas": abs(mc.mean - exact) / mc.stderr if mc.stderr > 0 else 0.0,
            }
        summary[str(alpha)] = entry
    return rows, summary


def cmd_model_integral(args):
    rows = []
    summary = {}
    radii = _need(args, "r")
    for alpha in _need(args, "alpha"):
        vals = []
        for r in radii:
            spec = ModelIntegralSpec(args.n, _need(args, "m"), alpha, _need(args, "l"), r)
            res = model_integral(spec)
            vals.append(res.value)
            rows.append(
                {
                    "alpha": alpha,
                    "r": r,
                    "value": res.value,
                    "rel_change": res.rel_change,
                    "nodes": res.nodes,
                    "corner_exponent": spec.corner_exponent,
                }
            )
        summary[str(alpha)] = {
            "max_over_min": max(vals) / min(vals),
            "last_over_first": vals[-1] / vals[0],
        }
    summary["critical_exponent"] = (2 * args.n - args.m) / 2
    return rows, summary


def _ball_points(args):
    return qmc_ball(args.n, args.samples, args.seed)


def cmd_rineq_check(args):
    g = _expr(args, "g")
    rep = rineq_check(g, _need(args, "l"), _need(args, "r"), _ball_points(args))
    rows = [{"r": r, "C_l": c} for r, c in rep.details["per_r"].items()]
    return rows, {"stability": rep.details["stability"], "passed": rep.passed, "skipped": rep.skipped}


def cmd_peak_check(args):
    M = _manifold(args)
    g = _expr(args, "g") if args.g is not None else M.model_peak_function()
    pts = near_manifold_samples(M, args.samples, 1e-4, 0.3, args.seed)
    rep = peak_check(g, M, pts)
    row = {"g": format_series(g), "manifold": M.kind, "m": M.m, **rep.constants,
           "passed": rep.passed, "samples": rep.sample_count, **rep.details}
    return [row], {"critical_exponent": M.critical_exponent}


def cmd_loja_fit(args):
    M = _manifold(args)
    f = _expr(args, "f") if args.f is not None else M.model_peak_function()
    pts = near_manifold_samples(M, args.samples, 1e-4, 1e-1, args.seed)
    fit = lojasiewicz_estimate(f, M, pts, exponent=args.exponent)
    return [{"f": format_series(f), "manifold": M.kind, **asdict(fit)}], {}


def cmd_dominate(args):
    g, f = _expr(args, "g"), _expr(args, "f")
    pts = _ball_points(args)
    if args.manifold is not None:
        pts = np.concatenate([pts, near_manifold_samples(_manifold(args), args.samples, 1e-4, 0.3, args.seed)])
    res = domination_check(g, f, pts, args.power, scale=args.scale)
    return [{"g": format_series(g), "f": format_series(f), **asdict(res)}], {"passed": res.passed}


COMMANDS = {
    "weights": cmd_weights,
    "norm": cmd_norm,
    "approximant-sweep": cmd_approximant_sweep,
    "dilation-sweep": cmd_dilation_sweep,
    "berg-check": cmd_berg_check,
    "model-integral": cmd_model_integral,
    "rineq-check": cmd_rineq_check,
    "peak-check": cmd_peak_check,
    "loja-fit": cmd_loja_fit,
    "dominate": cmd_dominate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="complex dimension")
    common.add_argument("--alpha", type=_floats, help="comma-separated alpha values")
    common.add_argument("--f", help="expression in z1..zn")
    common.add_argument("--g", help="expression in z1..zn")
    common.add_argument("--degree", type=int)
    common.add_argument("--r", type=_floats, help="comma-separated dilation radii")
    common.add_argument("--manifold", choices=["point", "circle", "torus"])
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--m", type=int, help="real dimension of the boundary zero set")
    common.add_argument("--l", type=int, help="radial derivative order")
    common.add_argument("--power", type=int, default=1)
    common.add_argument("--scale", type=float, default=1.0)
    common.add_argument("--exponent", type=int, help="fixed Lojasiewicz exponent to certify")
    common.add_argument("--formula", choices=["standard", "printed"], default="standard")
    common.add_argument("--bounded-ratio", type=float, default=3.0)
    common.add_argument("--growing-ratio", type=float, default=10.0)
    common.add_argument("--max-degree", type=int, default=50_000)
    common.add_argument("--out", help="JSON report path")
    common.add_argument("--csv", help="CSV mirror of the report rows")
    common.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="dirichlet-ball", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _print_table(rows, stream):
    if not rows:
        print("(no rows)", file=stream)
        return
    flat = [_flatten(_jsonable(r)) for r in rows]
    cols = list(flat[0])

    def fmt(v):
        return f"{v:.10g}" if isinstance(v, float) else str(v)

    widths = {c: max(len(c), *(len(fmt(r.get(c, ""))) for r in flat)) for c in cols}
    print("  ".join(c.ljust(widths[c]) for c in cols), file=stream)
    for r in flat:
        print("  ".join(fmt(r.get(c, "")).ljust(widths[c]) for c in cols), file=stream)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    params_echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "csv", "quiet")}
    try:
        rows, summary = COMMANDS[args.command](args)
    except (InvalidInput, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        best = getattr(exc, "best_estimate", None)
        if best is not None:
            print(f"best estimate: {best!r}", file=sys.stderr)
        return 3
    report = ExperimentReport(
        command=args.command,
        params=params_echo,
        rows=rows,
        summary=summary,
        meta={
            "tool_version": __version__,
            "weight_formula": args.formula,
            "measure_normalization": MEASURE_NORMALIZATION,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
    )
    try:
        write_report(report, args.out, args.csv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        _print_table(rows, sys.stdout)
        if summary:
            print(json.dumps(_jsonable(summary), sort_keys=True, indent=2))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
