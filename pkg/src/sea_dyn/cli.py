"""Command-line entry point: ``sea-dyn run | sweep | verify``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

import sentry_sdk

from sea_dyn import __version__
from sea_dyn.error_reporting import configure_logging, init_error_reporting
from sea_dyn.errors import ConfigError, IntegrationAbort
from sea_dyn.modules.scenario_cli import parse_document, preset_ids, run_scenario, run_sweep, run_verify
from sea_dyn.modules.scenario_cli.config import merge, resolve_document

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ABORT = 3
EXIT_VERIFY = 4


def _source_document(args: argparse.Namespace) -> Any:
    if args.preset:
        return args.preset
    if not args.config:
        raise ConfigError(["document: pass --config <path> or --preset <id>"])
    try:
        return json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise ConfigError([f"config: cannot read {args.config}: {exc.strerror}"])
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"])


def _overrides(args: argparse.Namespace, doc: dict[str, Any]) -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    if getattr(args, "gamma", None) is not None:
        overrides["gamma"] = args.gamma
    if getattr(args, "lam", None) is not None:
        overrides["lambda"] = args.lam
    if getattr(args, "dt", None) is not None:
        overrides["integrator"] = {"dt": args.dt}
    if getattr(args, "t_final", None) is not None:
        t_span = list(doc.get("t_span") or [0.0, args.t_final])
        overrides["t_span"] = [t_span[0], args.t_final]
    output = {}
    if getattr(args, "out", None):
        output["path"] = args.out
    if getattr(args, "stride", None) is not None:
        output["stride"] = args.stride
    if output:
        overrides["output"] = output
    if getattr(args, "compare_unitary", False):
        overrides["compare_unitary"] = True
    return overrides


def load_config(args: argparse.Namespace):
    doc = resolve_document(_source_document(args))
    if not isinstance(doc, dict):
        raise ConfigError(["document: expected an object or a preset id"])
    return parse_document(merge(doc, _overrides(args, doc)))


def cmd_run(args: argparse.Namespace) -> int:
    result = run_scenario(load_config(args))
    print(json.dumps({"files": result.files, "beta_eff": result.beta_eff,
                      "max_fidelity_deviation": result.max_fidelity_deviation}, indent=2))
    return EXIT_OK


def _values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError([f"values: expected comma-separated numbers, got {text!r}"])


def cmd_sweep(args: argparse.Namespace) -> int:
    summary = run_sweep(load_config(args), args.param, _values(args.values),
                        out_dir=Path(args.out_dir) if args.out_dir else None, workers=args.workers)
    print(summary.to_string(index=False))
    return EXIT_ABORT if (summary["status"] == "aborted").any() else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_verify(n_states=args.states, seed=args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<36} worst/bound = {r.worst_ratio:.3g}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _add_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="path to a JSON scenario document")
    source.add_argument("--preset", choices=preset_ids(), help="built-in scenario")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sea-dyn", description="Steepest-entropy-ascent density-matrix dynamics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its CSV")
    _add_source(run)
    run.add_argument("--gamma", type=float)
    run.add_argument("--lambda", dest="lam", type=float)
    run.add_argument("--dt", type=float)
    run.add_argument("--t-final", dest="t_final", type=float)
    run.add_argument("--out", help="CSV output path")
    run.add_argument("--compare-unitary", action="store_true")
    run.add_argument("--stride", type=int)
    run.set_defaults(handler=cmd_run)

    sweep = sub.add_parser("sweep", help="run one scenario per parameter value")
    _add_source(sweep)
    sweep.add_argument("--param", required=True, help="dotted path, e.g. gamma or model.omega")
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--out-dir")
    sweep.add_argument("--workers", type=int)
    sweep.set_defaults(handler=cmd_sweep)

    verify = sub.add_parser("verify", help="stationarity and conservation suite")
    verify.add_argument("--states", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=20240601)
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    init_error_reporting()
    try:
        return args.handler(args)
    except ConfigError as exc:
        logger.error(str(exc))
        for line in exc.diagnostics:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationAbort as exc:
        sentry_sdk.capture_exception(exc)
        logger.error(f"integration aborted: {exc}")
        print(json.dumps({"reason": exc.reason, "t": exc.t, "monitor": exc.monitor}, indent=2), file=sys.stderr)
        return EXIT_ABORT
    except Exception as exc:
        sentry_sdk.capture_exception(exc)
        logger.error(f"unexpected failure: {exc}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
