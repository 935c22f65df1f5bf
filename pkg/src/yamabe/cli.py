"""Command-line front end.

Subcommands::

    yamabe curvature      --zoo NAME | --config PATH   curvature report
    yamabe classify       ... --field NAME             torse-forming fit
    yamabe soliton        ... [--field --kind --connection --p --pi]
    yamabe check          [--zoo NAME | --config PATH] invariant suites
    yamabe paper-example                               bundled 3d example

Every command prints a human-readable report and, with ``--json PATH``,
writes the machine-readable JSON holding exactly the same numbers. Given
the same config and seed the JSON bytes are identical across runs except
for the ``timestamp`` field.

Exit codes: 0 success, 1 invariant or acceptance failure, 2 configuration
error, 3 runtime numeric error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

import numpy as np

from . import __version__
from .expr import EvalDomainError, ParseError
from .geometry import (
    GeometryError,
    christoffel_at,
    covariant_derivative_at,
    curvature_at,
    frame_components_at,
)
from .connections import ConnectionSpec
from .solitons import (
    SolitonReport,
    ZeroFieldError,
    check_soliton,
    classify,
    fit_torse_forming_at,
    NotTorseFormingError,
)
from .config import (
    ConfigError,
    ManifoldConfig,
    SamplingError,
    load_config,
    load_zoo,
    sample_points,
)
from .checks import (
    CheckResult,
    run_all_checks,
    run_config_checks,
    worked_example_suite,
)
from .zoo import ZOO_NAMES

INDEX_CONVENTION = (
    "christoffel[k][i][j] is the coefficient of d_k in the derivative of d_j "
    "along d_i; riemann[l][k][i][j] is component l of R(d_i, d_j) d_k; "
    "ricci[a][b] traces the first curvature slot; arrays are nested lists in "
    "row-major index order"
)


def _plain(obj):
    """Reduce numpy containers to plain Python so JSON output is canonical."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def build_report(command: str, seed: int, body: dict,
                 config: ManifoldConfig | None = None) -> dict:
    report = {
        "tool": "yamabe",
        "version": __version__,
        "command": command,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seed": seed,
        "index_convention": INDEX_CONVENTION,
    }
    if config is not None:
        report["config_name"] = config.name
        report["config_text"] = config.text
    report.update(body)
    return _plain(report)


def _human_lines(key, value, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        yield f"{pad}{key}:"
        for k, v in value.items():
            yield from _human_lines(k, v, indent + 1)
    elif isinstance(value, list):
        if all(not isinstance(x, (dict, list)) for x in value):
            yield f"{pad}{key}: [" + ", ".join(str(x) for x in value) + "]"
        else:
            yield f"{pad}{key}:"
            for i, item in enumerate(value):
                yield from _human_lines(f"[{i}]", item, indent + 1)
    else:
        yield f"{pad}{key}: {value}"


def render_human(report: dict) -> str:
    """Plain-text rendering carrying exactly the numbers of the JSON form
    (floats are printed with repr, which is what json emits too)."""
    lines = [f"yamabe {report['command']} (v{report['version']})"]
    for key, value in report.items():
        if key in ("tool", "version", "command", "config_text", "index_convention"):
            continue
        lines.extend(_human_lines(key, value, 0))
    return "\n".join(lines) + "\n"


def _checks_body(results: list[CheckResult]) -> dict:
    return {
        "checks": [{"name": r.name, "max_defect": r.max_defect,
                    "tolerance": r.tolerance, "passed": r.passed}
                   for r in results],
        "failed": [r.name for r in results if not r.passed],
        "status": "pass" if all(r.passed for r in results) else "fail",
    }


def _soliton_body(rep: SolitonReport) -> dict:
    return {
        "kind": rep.kind,
        "connection": rep.connection,
        "verdict": rep.verdict,
        "lambda": {"value": rep.lambda_value, "min": rep.lambda_min,
                   "max": rep.lambda_max, "spread": rep.lambda_spread},
        "lambda_formula": rep.lambda_formula,
        "classification": list(rep.classification),
        "p": rep.p_field,
        "trace_residual_max": rep.trace_residual,
        "full_residual_sup": rep.full_residual_sup,
        "fit_residual_max": rep.fit_residual_max,
        **({"star_asymmetry_max": rep.star_asymmetry_max}
           if rep.star_asymmetry_max is not None else {}),
        "notes": list(rep.notes),
        "per_point": [{
            "point": row.point,
            "phi": row.phi,
            "alpha_tau": row.alpha_tau,
            "fit_residual": row.fit_residual,
            "lambda": row.lam,
            "residual_trace": row.residual_trace,
            "residual_sup": row.residual_sup,
        } for row in rep.per_point],
    }


# ---------------------------------------------------------------------------
# commands

def cmd_curvature(config: ManifoldConfig, seed: int, count: int | None) -> dict:
    points = sample_points(config, seed=seed, count=count)
    per_point = []
    for p in points:
        conn = christoffel_at(config.metric, p)
        curv = curvature_at(config.metric, p)
        entry = {
            "point": p,
            "scalar_curvature": curv.scalar,
            "ricci": curv.ricci,
            "christoffel": conn.gamma,
            "riemann": curv.riemann,
        }
        if config.frame is not None:
            e = config.frame.matrix_at(p)
            table = []
            for b, vec in enumerate(config.frame.vectors):
                dcov = covariant_derivative_at(conn, vec, p)
                along = e.T @ dcov
                table.append([frame_components_at(config.frame, along[a], p)
                              for a in range(config.chart.dim)])
            # table[b][a] lists the frame components of the derivative of
            # frame vector b along frame vector a
            entry["frame_connection_table"] = [
                [table[b][a] for b in range(config.chart.dim)]
                for a in range(config.chart.dim)]
            entry["frame_ricci"] = e.T @ curv.ricci @ e
        per_point.append(entry)
    invariants = run_config_checks(config, seed)
    body = {"sample_count": len(points), "per_point": per_point}
    body.update(_checks_body(invariants))
    return build_report("curvature", seed, body, config)


def cmd_classify(config: ManifoldConfig, field_name: str, seed: int,
                 count: int | None, tol: float) -> dict:
    if field_name not in config.fields:
        raise ConfigError([f"field {field_name!r} is not declared; "
                           f"available: {', '.join(sorted(config.fields))}"])
    tau = config.fields[field_name]
    points = sample_points(config, seed=seed, count=count)
    fits = [fit_torse_forming_at(config.metric, tau, p, tol) for p in points]
    try:
        labels = list(classify(fits, tol))
        verdict = "torse-forming"
    except NotTorseFormingError:
        labels = []
        verdict = "not-torse-forming"
    body = {
        "field": field_name,
        "tolerance": tol,
        "verdict": verdict,
        "labels": labels,
        "fit_residual_max": max(f.residual for f in fits),
        "per_point": [{
            "point": p,
            "phi": f.phi,
            "alpha": f.alpha,
            "alpha_tau": f.alpha_tau,
            "residual": f.residual,
            "labels": list(f.labels),
        } for p, f in zip(points, fits)],
        "status": "pass",
    }
    return build_report("classify", seed, body, config)


def cmd_soliton(config: ManifoldConfig, field_name: str | None, kind: str | None,
                connection: str | None, p_value: float | None,
                pi_name: str | None, seed: int, count: int | None,
                tol: float) -> dict:
    defaults = config.soliton
    field_name = field_name or defaults.get("field")
    kind = kind or defaults.get("kind", "conformal")
    connection = connection or defaults.get("connection", "lc")
    pi_name = pi_name or defaults.get("pi")
    if p_value is None:
        p_value = float(defaults.get("p", 0.0))
    if not field_name or field_name not in config.fields:
        raise ConfigError([f"soliton field {field_name!r} is not declared"])
    tau = config.fields[field_name]
    if connection == "lc":
        spec = ConnectionSpec.levi_civita()
    else:
        if not pi_name or pi_name not in config.oneforms:
            raise ConfigError([
                f"connection {connection!r} needs a declared 1-form (--pi)"])
        spec = ConnectionSpec(connection, config.oneforms[pi_name])
    j = None
    if kind == "star":
        if config.structure is None:
            raise ConfigError(["star kind needs a [structure] tensor in the config"])
        j = config.structure
    points = sample_points(config, seed=seed, count=count)
    rep = check_soliton(config.metric, tau, kind, spec, p_value, points,
                        j=j, class_tol=tol)
    body = {"field": field_name, "sample_count": len(points)}
    body.update(_soliton_body(rep))
    body["status"] = "pass"
    return build_report("soliton", seed, body, config)


def cmd_check(config: ManifoldConfig | None, seed: int) -> dict:
    if config is None:
        results = run_all_checks(seed)
        body = {"scope": "zoo-all", "zoo": list(ZOO_NAMES)}
    else:
        results = run_config_checks(config, seed)
        body = {"scope": config.name}
    body.update(_checks_body(results))
    return build_report("check", seed, body, config)


def cmd_paper_example(seed: int, p_value: float, count: int | None) -> dict:
    config = load_zoo("paper_sec5")
    results = worked_example_suite(seed, count=count or 20)
    points = sample_points(config, seed=seed, count=count)
    classify_rep = cmd_classify(config, "Y", seed, count, 1e-7)
    soliton_rep = check_soliton(config.metric, config.fields["Y"], "conformal",
                                ConnectionSpec.levi_civita(), p_value, points)
    body = {
        "sample_count": len(points),
        "assertions": _checks_body(results),
        "classify_Y": {k: classify_rep[k] for k in
                       ("field", "verdict", "labels", "fit_residual_max", "per_point")},
        "soliton_Y": _soliton_body(soliton_rep),
        "status": "pass" if all(r.passed for r in results) else "fail",
    }
    return build_report("paper-example", seed, body, config)


# ---------------------------------------------------------------------------
# argument plumbing

def _add_source(sp, required=True):
    group = sp.add_mutually_exclusive_group(required=required)
    group.add_argument("--config", metavar="PATH", help="config file path")
    group.add_argument("--zoo", metavar="NAME",
                       help=f"built-in manifold: {', '.join(ZOO_NAMES)}")


def _add_common(sp):
    sp.add_argument("--seed", type=int, default=None, metavar="U64",
                    help="sampling seed (defaults to the config's seed)")
    sp.add_argument("--samples", type=int, default=None, metavar="N",
                    help="number of sample points (defaults to the config's count)")
    sp.add_argument("--tol", type=float, default=1e-7, metavar="REAL",
                    help="classification tolerance (default 1e-7)")
    sp.add_argument("--json", metavar="PATH", default=None,
                    help="write the machine-readable report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yamabe",
        description="Curvature, torse-forming classification and Yamabe-type "
                    "soliton verification on coordinate charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("curvature", help="connection and curvature report")
    _add_source(sp)
    _add_common(sp)

    sp = sub.add_parser("classify", help="torse-forming fit and labels")
    _add_source(sp)
    sp.add_argument("--field", metavar="NAME", required=True,
                    help="vector field declared in the config")
    _add_common(sp)

    sp = sub.add_parser("soliton", help="soliton condition check")
    _add_source(sp)
    sp.add_argument("--field", metavar="NAME", default=None)
    sp.add_argument("--kind", choices=["yamabe", "conformal", "star"], default=None)
    sp.add_argument("--connection", choices=["lc", "ssm", "pss"], default=None)
    sp.add_argument("--p", type=float, default=None, metavar="REAL",
                    help="constant scalar entering the conformal equation")
    sp.add_argument("--pi", metavar="NAME", default=None,
                    help="1-form to drive the modified connections")
    _add_common(sp)

    sp = sub.add_parser("check", help="run the invariant suites")
    _add_source(sp, required=False)
    _add_common(sp)

    sp = sub.add_parser("paper-example", help="reproduce the bundled "
                        "3-dimensional worked example end to end")
    sp.add_argument("--p", type=float, default=0.0, metavar="REAL")
    _add_common(sp)

    return parser


def _resolve_config(args) -> ManifoldConfig | None:
    if getattr(args, "config", None):
        return load_config(args.config)
    if getattr(args, "zoo", None):
        return load_zoo(args.zoo)
    return None


def _dispatch(args) -> dict:
    if args.command == "paper-example":
        seed = args.seed if args.seed is not None else 42
        return cmd_paper_example(seed, args.p, args.samples)
    config = _resolve_config(args)
    if args.command == "check":
        seed = args.seed if args.seed is not None else (
            config.seed if config is not None else 42)
        return cmd_check(config, seed)
    if config is None:
        raise ConfigError(["a --config or --zoo source is required"])
    seed = args.seed if args.seed is not None else config.seed
    if args.command == "curvature":
        return cmd_curvature(config, seed, args.samples)
    if args.command == "classify":
        return cmd_classify(config, args.field, seed, args.samples, args.tol)
    if args.command == "soliton":
        return cmd_soliton(config, args.field, args.kind, args.connection,
                           args.p, args.pi, seed, args.samples, args.tol)
    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _dispatch(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SamplingError, EvalDomainError, GeometryError, ZeroFieldError,
            np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(render_human(report))
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2)
            handle.write("\n")
    return 1 if report.get("status") == "fail" else 0


if __name__ == "__main__":
    sys.exit(main())
