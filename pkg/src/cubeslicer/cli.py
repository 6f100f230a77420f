"""Command-line entry point wiring all modules.

Results go to stdout (JSON, JSON-lines, or CSV).  A run manifest (flags,
seed, code version, wall time, input hashes) accompanies every run: with
--out DIR the result and manifest.json are written into DIR, otherwise the
manifest is a single JSON line on stderr.  Result artifacts never contain
wall-clock data, so fixed seeds give byte-identical outputs regardless of
--threads.

Exit codes: 0 success, 1 domain error (or incomplete slicing for `verify`),
2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    EXACT,
    FLOAT,
    Configuration,
    config_from_json_dict,
    config_to_json_dict,
    construction,
)
from .anticonc import LinearFormSpec, levy_q, linear_form_atoms, sperner_bound
from .decomp import binary_decompose
from .errors import SlicerError
from .lab import (
    SweepCell,
    estimate_evasion,
    estimate_glue_sum,
    estimate_linf_tail,
    local_search_slicing,
    random_unit_configuration,
    sweep,
)
from .sampler import RngSpec, sample_bias_simple, sample_evasive_edge, sample_mu
from .verifier import verify_slicing


# --------------------------------------------------------------------------
# Deterministic serialization: floats carry 17 significant digits (lossless
# round-trip), exact rationals become "p/q" strings.
# --------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x}")
    return format(x, ".17g")


def _json_token(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"unsupported scalar {type(obj).__name__}")


def to_json_text(obj, indent: int = 0, level: int = 0) -> str:
    pad = " " * (indent * (level + 1)) if indent else ""
    end_pad = " " * (indent * level) if indent else ""
    sep = ",\n" if indent else ", "
    nl = "\n" if indent else ""
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json_text(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + nl + sep.join(items) + nl + end_pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{to_json_text(v, indent, level + 1)}" for v in obj]
        return "[" + nl + sep.join(items) + nl + end_pad + "]"
    return _json_token(obj)


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return _fmt_float(float(x))
    return str(x)


def csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Parsing helpers
# --------------------------------------------------------------------------


def _parse_scalars(text: str, kind: str) -> list:
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        out.append(Fraction(token) if kind == EXACT else float(Fraction(token)))
    return out


def _load_config(path: str) -> tuple[Configuration, dict]:
    if path == "-":
        data = sys.stdin.read()
        digest = {"<stdin>": hashlib.sha256(data.encode()).hexdigest()}
    else:
        data = Path(path).read_text()
        digest = {path: hashlib.sha256(data.encode()).hexdigest()}
    return config_from_json_dict(json.loads(data)), digest


def _rng_from_args(args) -> RngSpec:
    return RngSpec(args.seed, args.stream)


def _report_dict(rep) -> dict:
    return {
        "point_estimate": rep.point_estimate,
        "std_error": rep.std_error,
        "ci95": [rep.ci95[0], rep.ci95[1]],
        "samples": rep.samples,
        "seed": rep.seed,
        "target_bound": rep.target_bound,
    }


def _edge_dict(edge) -> dict:
    return {"axis": edge.axis, "base_signs": list(edge.base.coords())}


def _verify_dict(c: Configuration, report) -> dict:
    # elapsed_ms deliberately omitted: results must be byte-stable across runs
    return {
        "n": report.n,
        "m": report.m,
        "mode": c.mode,
        "total_edges": report.total_edges,
        "unsliced_count": report.unsliced_count,
        "complete": report.unsliced_count == 0,
        "per_plane_crossings": list(report.per_plane_crossings),
        "unsliced_sample": [_edge_dict(e) for e in report.unsliced_sample],
    }


# --------------------------------------------------------------------------
# Subcommand handlers: each returns (exit_code, result_text, artifact_name)
# --------------------------------------------------------------------------


def _cmd_construct(args):
    kind = FLOAT if args.float else EXACT
    config = construction(args.name, args.n, kind=kind, mode=args.mode)
    return 0, to_json_text(config_to_json_dict(config), indent=2) + "\n", "config.json"


def _cmd_decompose(args):
    vec = _parse_scalars(args.v, EXACT if args.mode == EXACT else FLOAT)
    d = binary_decompose(vec)
    rows = [
        {"j": j, "indices": list(d.parts[j][0]), "values": list(d.parts[j][1])}
        for j in sorted(d.parts)
    ]
    return 0, to_json_text(rows, indent=2) + "\n", "decomposition.json"


def _cmd_verify(args):
    config, hashes = _load_config(args.config)
    args._input_hashes = hashes
    if args.mode:
        config = Configuration(config.n, config.planes, args.mode)
    if config.n > 24:
        per_plane = config.n * (1 << (config.n - 1))
        print(
            f"# cost estimate: {config.m} planes x {per_plane} edges = "
            f"{config.m * per_plane} edge tests",
            file=sys.stderr,
        )
    report = verify_slicing(config, threads=args.threads)
    result = _verify_dict(config, report)
    if args.report == "csv":
        rows = [
            [report.n, report.m, config.mode, report.total_edges, report.unsliced_count, ell, cnt]
            for ell, cnt in enumerate(report.per_plane_crossings)
        ] or [[report.n, report.m, config.mode, report.total_edges, report.unsliced_count, None, None]]
        text = csv_text(
            ["n", "m", "mode", "total_edges", "unsliced_count", "plane_index", "crossings"], rows
        )
        return (0 if report.unsliced_count == 0 else 1), text, "report.csv"
    return (0 if report.unsliced_count == 0 else 1), to_json_text(result, indent=2) + "\n", "report.json"


def _cmd_sample(args):
    config, hashes = _load_config(args.config)
    args._input_hashes = hashes
    gen = _rng_from_args(args).generator()
    lines = []
    for _ in range(args.count):
        if args.emit == "bias":
            if args.variant == "dyadic":
                from .sampler import sample_bias_conditioned

                bv = sample_bias_conditioned(config, gen, args.max_retries)
            else:
                bv = sample_bias_simple(config, gen)
            lines.append(
                to_json_text(
                    {"p": bv.p.tolist(), "conditioned": bv.conditioned, "clamped": bv.clamped}
                )
            )
        else:
            if args.variant == "dyadic":
                edge = sample_evasive_edge(config, gen, args.max_retries)
            else:
                bv = sample_bias_simple(config, gen)
                u = sample_mu(bv.p, gen)
                k = int(gen.integers(config.n))
                from .core import Edge

                edge = Edge(u, k)
            lines.append(to_json_text(_edge_dict(edge)))
    return 0, "\n".join(lines) + "\n", "samples.jsonl"


def _cmd_qfunc(args):
    v = _parse_scalars(args.v, args.mode)
    p = _parse_scalars(args.p, args.mode) if args.p else [0] * len(v)
    if args.mode == FLOAT:
        p = [float(x) for x in p]
    spec = LinearFormSpec(tuple(v), tuple(p))
    alpha = Fraction(args.alpha) if args.mode == EXACT else float(Fraction(args.alpha))
    d = linear_form_atoms(spec)
    q = levy_q(d, alpha)
    a = sum(1 for vi in spec.v if abs(vi) >= alpha)
    result = {
        "a": a,
        "q": q,
        "sperner": sperner_bound(a) if a >= 1 else None,
        "ratio": float(q) * math.sqrt(a),
    }
    return 0, to_json_text(result, indent=2) + "\n", "qfunc.json"


def _estimate_config(args):
    if args.config:
        config, hashes = _load_config(args.config)
        args._input_hashes = hashes
        return config
    if args.n is None or args.m is None:
        raise SlicerError("estimate needs --config or both --n and --m")
    return random_unit_configuration(args.n, args.m, _rng_from_args(args).child(0))


def _cmd_estimate(args):
    config = _estimate_config(args)
    rng = _rng_from_args(args).child(1)
    if args.what == "evasion":
        per_plane, union = estimate_evasion(config, args.samples, rng, args.threads)
        result = {
            "estimator": "evasion",
            "n": config.n,
            "m": config.m,
            "samples": args.samples,
            "per_plane": [_report_dict(r) for r in per_plane],
            "union": _report_dict(union),
        }
        if args.report == "csv":
            rows = [
                ["plane", ell, r.point_estimate, r.std_error, r.ci95[0], r.ci95[1], r.target_bound]
                for ell, r in enumerate(per_plane)
            ]
            rows.append(
                ["union", None, union.point_estimate, union.std_error, union.ci95[0], union.ci95[1], union.target_bound]
            )
            text = csv_text(["kind", "plane_index", "point_estimate", "std_error", "ci95_low", "ci95_high", "target_bound"], rows)
            return 0, text, "estimate.csv"
        return 0, to_json_text(result, indent=2) + "\n", "estimate.json"
    if args.what == "linf-tail":
        rep = estimate_linf_tail(config, args.samples, rng, args.threads)
        name = "linf_tail"
    else:
        rep = estimate_glue_sum(config, args.plane_index, args.t, args.samples, rng, args.threads)
        name = "glue_sum"
    result = {"estimator": name, "n": config.n, "m": config.m, "samples": args.samples, **_report_dict(rep)}
    if args.report == "csv":
        text = csv_text(
            ["estimator", "n", "m", "point_estimate", "std_error", "ci95_low", "ci95_high", "target_bound"],
            [[name, config.n, config.m, rep.point_estimate, rep.std_error, rep.ci95[0], rep.ci95[1], rep.target_bound]],
        )
        return 0, text, "estimate.csv"
    return 0, to_json_text(result, indent=2) + "\n", "estimate.json"


def _cmd_search(args):
    config, report = local_search_slicing(
        args.n,
        args.m,
        args.iters,
        _rng_from_args(args),
        coeff_range=args.coeff_range,
        replicas=args.replicas,
        threads=args.threads,
    )
    result = {
        "objective": report.unsliced_count,
        "config": config_to_json_dict(config),
        "report": _verify_dict(config, report),
    }
    return 0, to_json_text(result, indent=2) + "\n", "search.json"


def _cmd_sweep(args):
    ns = [int(x) for x in args.n.split(",")]
    if args.m == "diag":
        cells = [SweepCell(n, round(n ** (2.0 / 3.0)), args.construction) for n in ns]
    else:
        ms = [int(x) for x in args.m.split(",")]
        cells = [SweepCell(n, m, args.construction) for n in ns for m in ms]
    rows = sweep(cells, args.samples, _rng_from_args(args), args.threads, estimator=args.estimator)
    if args.report == "json":
        return 0, to_json_text(rows, indent=2) + "\n", "sweep.json"
    header = [
        "n", "m", "construction", "estimator", "samples", "point_estimate",
        "std_error", "ci95_low", "ci95_high", "target_bound", "max_plane_estimate", "error",
    ]
    table = [[row.get(col) for col in header] for row in rows]
    return 0, csv_text(header, table), "sweep.csv"


# --------------------------------------------------------------------------
# Parser and dispatch
# --------------------------------------------------------------------------


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SLICER_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubeslicer", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--stream", type=int, default=0, help="substream index")
    common.add_argument("--threads", type=int, default=None, help="worker count (default $SLICER_THREADS or 1)")
    common.add_argument("--out", type=str, default=None, help="directory for result + run manifest")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("construct", parents=[common], help="emit a classical slicing configuration")
    p.add_argument("name", choices=["axis", "middle-layers", "middle_layers"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--float", action="store_true", help="float-kind planes (middle layers normalized)")
    p.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("decompose", parents=[common], help="dyadic decomposition of a vector")
    p.add_argument("--v", required=True, help="comma-separated scalars (p/q allowed in exact mode)")
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="exhaustively verify a slicing")
    p.add_argument("--config", default="-", help="configuration JSON path, or - for stdin")
    p.add_argument("--mode", choices=["strict", "relaxed"], default=None, help="override config mode")
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", parents=[common], help="draw bias vectors or evasive edges")
    p.add_argument("--config", default="-")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--variant", choices=["dyadic", "simple"], default="dyadic")
    p.add_argument("--emit", choices=["edges", "bias"], default="edges")
    p.add_argument("--max-retries", type=int, default=1000)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("qfunc", parents=[common], help="exact concentration of a biased linear form")
    p.add_argument("--v", required=True)
    p.add_argument("--p", default=None)
    p.add_argument("--alpha", required=True)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.set_defaults(func=_cmd_qfunc)

    p = sub.add_parser("estimate", parents=[common], help="Monte Carlo estimators")
    p.add_argument("what", choices=["evasion", "linf-tail", "glue"])
    p.add_argument("--config", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--plane-index", type=int, default=0)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("search", parents=[common], help="anneal small integer slicing configurations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--coeff-range", type=int, default=8)
    p.add_argument("--report", choices=["json"], default="json")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("sweep", parents=[common], help="estimator grid over (n, m) cells")
    p.add_argument("--estimator", choices=["evasion", "linf_tail", "glue"], default="evasion")
    p.add_argument("--n", required=True, help="comma-separated dimensions")
    p.add_argument("--m", default="diag", help="comma-separated plane counts, or 'diag' for round(n^(2/3))")
    p.add_argument("--construction", choices=["random", "axis", "middle_layers"], default="random")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--report", choices=["json", "csv"], default="csv")
    p.set_defaults(func=_cmd_sweep)

    return parser


def _manifest(args, argv, wall_time: float) -> dict:
    flags = {
        k: v
        for k, v in vars(args).items()
        if not k.startswith("_") and k != "func" and not callable(v)
    }
    return {
        "subcommand": args.subcommand,
        "argv": list(argv),
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "code_version": __version__,
        "wall_time_s": wall_time,
        "input_hashes": getattr(args, "_input_hashes", {}),
    }


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is None:
        args.threads = _default_threads()
    start = time.perf_counter()
    try:
        code, text, artifact_name = args.func(args)
    except SlicerError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(to_json_text(err), file=sys.stderr)
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            manifest = _manifest(args, argv, time.perf_counter() - start)
            manifest["error"] = err
            (out / "manifest.json").write_text(to_json_text(manifest, indent=2) + "\n")
        return 1
    sys.stdout.write(text)
    manifest = _manifest(args, argv, time.perf_counter() - start)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / artifact_name).write_text(text)
        (out / "manifest.json").write_text(to_json_text(manifest, indent=2) + "\n")
    else:
        # a manifest accompanies every run; without --out it goes to stderr
        # as one line, keeping stdout clean for piping
        print(to_json_text(manifest), file=sys.stderr)
    return code


def main() -> None:
    sys.exit(dispatch())
