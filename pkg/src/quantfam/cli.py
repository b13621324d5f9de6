"""Command-line interface: ``quantfam {fit,simulate,sample,lmom,gof}``.

Exit codes: 0 success, 1 usage or I/O error, 2 non-convergence (or, for
``simulate``, a cell with more than 10% failed fits).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .dataio import read_column, write_sample
from .distributions import sample
from .errors import QuantFamError
from .estimators import Method, OptimizerSettings, fit
from .families import FamilyKind, FamilySpec
from .lmoments import sample_lmoments
from .reporting import GofReport
from .simstudy import StudyConfig, run_study, write_outputs

log = logging.getLogger("quantfam")

EXIT_OK, EXIT_USAGE, EXIT_NOCONV = 0, 1, 2
_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


def _dump(obj: Any) -> str:
    # json writes floats with repr, the shortest text that round-trips exactly
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"{path}: cannot read ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc


def _check_output(path: str) -> None:
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise UsageError(f"{path}: output directory {parent} does not exist")


def _check_input(path: str) -> None:
    if not Path(path).is_file():
        raise UsageError(f"{path}: no such file")


def _load_column(args) -> Any:
    data = read_column(args.input, args.column, args.skip_bad_rows)
    if data.skipped:
        log.warning("skipped %d bad rows in %s (lines %s)", len(data.skipped), args.input,
                    ", ".join(map(str, data.skipped[:10])) + (" ..." if len(data.skipped) > 10 else ""))
    return data


def _spec_from_args(family: str, params: str) -> FamilySpec:
    try:
        values = json.loads(params)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--params is not valid JSON ({exc.msg})") from exc
    if not isinstance(values, dict):
        raise UsageError("--params must be a JSON object")
    return FamilySpec.from_dict(values, kind=family)


# -- subcommands ----------------------------------------------------------------

def cmd_fit(args) -> int:
    _check_input(args.input)
    _check_output(args.out)
    config = _read_json(args.config) if args.config else {}
    unknown = set(config) - {"optimizer", "c", "fixed"}
    if unknown:
        raise UsageError(f"{args.config}: unknown keys {sorted(unknown)}")
    opt = dict(config.get("optimizer", {}))
    if args.seed is not None:
        opt["seed"] = args.seed
    settings = OptimizerSettings(**opt)
    method = Method.parse(args.method)
    kwargs = {}
    if "c" in config:
        kwargs["c"] = float(config["c"])
    if "fixed" in config:
        if method is not Method.MoLM:
            raise UsageError("'fixed' shape parameters are only supported by molm")
        kwargs["fixed"] = config["fixed"]
    data = _load_column(args)
    res = fit(data.values, args.family, method, settings, **kwargs)
    out = res.to_dict(include_timing=args.record_timing)
    out["seed"] = settings.seed
    out["input"] = {"path": str(args.input), "column": args.column, "n": int(data.values.size),
                    "skipped_rows": len(data.skipped)}
    Path(args.out).write_text(_dump(out))
    est = ", ".join(f"{k}={v:.6g}" for k, v in res.spec.to_dict().items()
                    if isinstance(v, float))
    status = "converged" if res.converged else "NOT converged"
    print(f"{res.method.name} {res.spec.kind.value}: {est}; objective={res.objective:.6g}; {status}")
    return EXIT_OK if res.converged else EXIT_NOCONV


def cmd_simulate(args) -> int:
    _check_input(args.config)
    raw = _read_json(args.config)
    if args.parallelism is not None:
        raw["parallelism"] = args.parallelism
    if args.seed is not None:
        raw["master_seed"] = args.seed
    try:
        config = StudyConfig.from_dict(raw)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.config}: bad study config ({exc})") from exc
    _check_output(args.out_prefix)
    summary = run_study(config)
    files = write_outputs(summary, args.out_prefix)
    print(f"study: {len(config.methods)} methods x {len(config.sample_sizes)} sizes x "
          f"{config.replicates} replicates, master_seed={config.master_seed}")
    for name, path in files.items():
        print(f"  {name}: {path}")
    bad = summary.excessive_failures()
    for cell in bad:
        print(f"  cell {cell.method.value}/n={cell.n}: {cell.failures}/{cell.replicates} failed",
              file=sys.stderr)
    return EXIT_NOCONV if bad else EXIT_OK


def cmd_sample(args) -> int:
    spec = _spec_from_args(args.family, args.params)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    _check_output(args.out)
    payload = sample(args.n, args.seed, spec)
    sidecar = write_sample(payload, args.out, args.column)
    print(f"wrote {payload.n} draws to {args.out} (seed={args.seed}; metadata in {sidecar})")
    return EXIT_OK


def cmd_lmom(args) -> int:
    _check_input(args.input)
    if args.out:
        _check_output(args.out)
    data = _load_column(args)
    lm = sample_lmoments(data.values)
    payload = dict(lm.to_dict(), n=int(data.values.size))
    text = _dump(payload)
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return EXIT_OK


def cmd_gof(args) -> int:
    _check_input(args.input)
    _check_output(args.out)
    if args.qq:
        _check_output(args.qq)
    if args.spec:
        raw = _read_json(args.spec)
        # accept either a bare spec or the output of `fit`
        spec = FamilySpec.from_dict(raw["spec"] if "spec" in raw else raw)
    elif args.family and args.params:
        spec = _spec_from_args(args.family, args.params)
    else:
        raise UsageError("gof needs --spec FILE or both --family and --params")
    data = _load_column(args)
    report = GofReport.build(data.values, spec)
    Path(args.out).write_text(_dump(report.to_dict()))
    if args.qq:
        Path(args.qq).write_text(report.qq_csv())
    print(f"rmse={report.rmse:.6g} n={report.n}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def _family(text: str) -> str:
    try:
        return FamilyKind.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _method(text: str) -> str:
    try:
        return Method.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_column_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--column", required=True, help="name of the numeric column")
    p.add_argument("--skip-bad-rows", action="store_true",
                   help="drop non-numeric rows (and report how many) instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quantfam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="estimate parameters from a CSV column")
    p.add_argument("--family", required=True, type=_family)
    p.add_argument("--method", required=True, type=_method)
    _add_column_args(p)
    p.add_argument("--config", help="JSON with optional 'optimizer', 'c', 'fixed'")
    p.add_argument("--out", required=True, help="FitResult JSON path")
    p.add_argument("--seed", type=int, help="optimizer restart seed (default 0)")
    p.add_argument("--record-timing", action="store_true",
                   help="include wall-clock time in the JSON (breaks byte-reproducibility)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="run a Monte Carlo estimator study")
    p.add_argument("--config", required=True, help="StudyConfig JSON")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--parallelism", type=int, help="worker processes (overrides config)")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", help="draw a seeded sample")
    p.add_argument("--family", required=True, type=_family)
    p.add_argument("--params", required=True, help='JSON object, e.g. {"a":0,"b":1,"g":0.5,"h":0.2}')
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True, help="CSV path; metadata goes to <out>.json")
    p.add_argument("--column", default="x")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("lmom", help="sample L-moments of a CSV column")
    _add_column_args(p)
    p.add_argument("--out", help="also write the JSON here")
    p.set_defaults(func=cmd_lmom)

    p = sub.add_parser("gof", help="quantile RMSE and Q-Q points for a fitted model")
    _add_column_args(p)
    p.add_argument("--spec", help="spec JSON or fit output JSON")
    p.add_argument("--family", type=_family)
    p.add_argument("--params")
    p.add_argument("--out", required=True, help="GofReport JSON path")
    p.add_argument("--qq", help="two-column Q-Q CSV path")
    p.set_defaults(func=cmd_gof)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("QUANTFAM_LOG", "warn").lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quantfam {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuantFamError as exc:
        code = EXIT_NOCONV if type(exc).__name__ in ("NoConvergence", "NoRoot") else EXIT_USAGE
        print(f"quantfam {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except ValueError as exc:
        print(f"quantfam {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"quantfam {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
