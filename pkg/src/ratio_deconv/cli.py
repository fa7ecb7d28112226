"""Command-line front end: ``ratio-deconv catalog|deconvolve|verify|moments``.

Exit codes: 0 success, 1 verification failure, 2 configuration or capability
error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from ratio_deconv.closed_form import CASE_NAMES, get_case
from ratio_deconv.deconvolve import DeconvolutionProblem, DensityGrid, deconvolve
from ratio_deconv.distributions import DistributionSpec, families
from ratio_deconv.errors import (
    CapabilityError,
    ConfigError,
    ContractError,
    DomainError,
    NumericError,
    RatioDeconvError,
    UnknownCaseError,
    ValidationError,
)
from ratio_deconv.laplace import GaverStehfest, InversionConfig, Talbot
from ratio_deconv.decomposition import PowerLaw, decompose, kernel_class

log = logging.getLogger("ratio_deconv")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
_CONFIG_ERRORS = (DomainError, ValidationError, ConfigError, ContractError, CapabilityError,
                  UnknownCaseError)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, _CONFIG_ERRORS):
        return EXIT_CONFIG
    if isinstance(exc, (NumericError, ArithmeticError)):
        return EXIT_NUMERIC
    return EXIT_NUMERIC if isinstance(exc, RatioDeconvError) else EXIT_CONFIG


def _method_from_flags(args, kernel=None) -> InversionConfig | None:
    if args.method is None:
        if args.order is not None or args.nodes is not None:
            raise ConfigError("--order/--nodes need --method")
        return None
    if args.method == "gaver-stehfest":
        if args.nodes is not None:
            raise ConfigError("--nodes applies to talbot only")
        inner = InversionConfig(Talbot(16)) if isinstance(kernel, PowerLaw) else None
        return InversionConfig(GaverStehfest(args.order if args.order is not None else 14), inner)
    if args.order is not None:
        raise ConfigError("--order applies to gaver-stehfest only")
    return InversionConfig(Talbot(args.nodes if args.nodes is not None else 32))


# ----------------------------------------------------------------------------
# catalog


def cmd_catalog(args) -> int:
    rows = []
    for name, info in families().items():
        if args.support and info.support != args.support:
            continue
        rows.append({
            "family": name,
            "params": list(info.params),
            "support": info.support,
            "complex_eval": info.complex_eval,
            "sampler": info.sampler is not None,
            "kernel": kernel_class(name),
        })
    if args.json:
        print(json.dumps(rows, indent=2))
        return EXIT_OK
    print(f"{'family':24s} {'support':9s} {'params':32s} {'complex':8s} {'sampler':8s} kernel")
    for r in rows:
        print(f"{r['family']:24s} {r['support']:9s} {', '.join(r['params']):32s} "
              f"{'yes' if r['complex_eval'] else 'no':8s} {'yes' if r['sampler'] else 'no':8s} "
              f"kernel: {r['kernel'] or '-'}")
    return EXIT_OK


# ----------------------------------------------------------------------------
# deconvolve


def load_job(path) -> tuple[DeconvolutionProblem, dict]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("job config must be a JSON object")
    output = doc.get("output", {})
    if not isinstance(output, dict) or set(output) - {"grid_csv", "diagnostics_json"}:
        raise ValidationError("output must be an object with grid_csv and diagnostics_json")
    return DeconvolutionProblem.from_dict(doc, extra_keys=frozenset({"output"})), output


def cmd_deconvolve(args) -> int:
    stage = "config"
    try:
        prob, output = load_job(args.config)
        cfg = _method_from_flags(args, prob.decomposition.kernel)
        if cfg is not None:
            prob = DeconvolutionProblem(prob.z_spec, prob.y_spec, prob.grid, cfg)
        csv_path = args.out or output.get("grid_csv")
        if not csv_path:
            raise ConfigError("no output path: give --out or output.grid_csv")
        diag_path = output.get("diagnostics_json") or str(Path(csv_path).with_suffix(".json"))
        stage = prob.decomposition.kernel.name
        grid = deconvolve(prob)
        stage = "output"
        grid.to_csv(csv_path)
        grid.write_diagnostics(diag_path)
    except (RatioDeconvError, ValueError) as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    d = grid.diagnostics
    print(f"wrote {csv_path} ({grid.abscissae.size} points, mass {d['mass']:.6f}, "
          f"clamped {d['clamped_count']})")
    return EXIT_OK


# ----------------------------------------------------------------------------
# verify


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise ConfigError(f"--param {key}: not a number: {val!r}") from None
        if out[key].is_integer() and key in ("b", "v"):
            out[key] = int(out[key])
    return out


def cmd_verify(args) -> int:
    from dataclasses import replace

    from ratio_deconv.verify import run_oracle_case, score_grid, suite_summary

    try:
        if args.all and args.cases:
            raise ConfigError("give case names or --all, not both")
        names = list(CASE_NAMES) if args.all else list(args.cases)
        if not names:
            raise ConfigError("no cases given (name one or use --all)")
        params = _parse_params(args.param)
        if (params or args.z_spec or args.grid) and len(names) != 1:
            raise ConfigError("--param, --z-spec and --grid need exactly one case")
        reports = []
        for name in names:
            case = get_case(name, **params)
            if args.z_spec:
                case = replace(case, z_spec=DistributionSpec.from_json(args.z_spec))
            cfg = _method_from_flags(args, _kernel_of(case))
            if args.grid:
                grid = DensityGrid.from_csv(args.grid)
                report = score_grid(case, grid, n_mc=args.mc, seed=args.seed)
            else:
                report, _ = run_oracle_case(case, cfg, args.mc, args.seed)
            reports.append(report)
            print(report.summary_line())
            for note in report.notes:
                print(f"    note: {note}")
    except (RatioDeconvError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    summary = suite_summary(reports)
    if args.out:
        Path(args.out).write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    print(f"{sum(r.passed for r in reports)}/{len(reports)} passed")
    return EXIT_OK if summary["passed"] else EXIT_FAILED


def _kernel_of(case):
    return decompose(case.y_spec).kernel


def cmd_moments(args) -> int:
    from ratio_deconv.verify import moment_formula_report

    rep = moment_formula_report()
    if args.json:
        print(json.dumps(rep, indent=2))
        return EXIT_OK
    print(f"{'c':>5s} {'beta':>5s} {'lam':>5s} {'j':>2s} {'r':>4s} {'printed':>14s} "
          f"{'quadrature':>14s} {'c+j+r form':>14s}")
    for row in rep["rows"]:
        print(f"{row['c']:5g} {row['beta']:5g} {row['lambda']:5g} {row['j']:2d} {row['r']:4g} "
              f"{row['printed']:14.10f} {row['quadrature']:14.10f} {row['derived']:14.10f}")
    print("printed formula agrees with quadrature" if rep["printed_agrees"] else rep["flag"])
    return EXIT_OK


# ----------------------------------------------------------------------------


def _add_method_flags(p):
    p.add_argument("--method", choices=("gaver-stehfest", "talbot"))
    p.add_argument("--order", type=int, help="Gaver-Stehfest order (even, 4..18)")
    p.add_argument("--nodes", type=int, help="Talbot node count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratio-deconv",
                     description="Recover the density of X from the law of X/(X+Y).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list distribution families and capabilities")
    p.add_argument("--support", choices=("positive", "unit"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("deconvolve", help="run a deconvolution job")
    p.add_argument("--config", required=True, help="job JSON (problem plus output paths)")
    p.add_argument("--out", help="grid CSV path (overrides output.grid_csv)")
    _add_method_flags(p)
    p.set_defaults(func=cmd_deconvolve)

    p = sub.add_parser("verify", help="check pipelines against closed-form cases")
    p.add_argument("cases", nargs="*", metavar="CASE", help=", ".join(CASE_NAMES))
    p.add_argument("--all", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc", type=int, default=100_000, help="Monte Carlo sample size (0 skips)")
    p.add_argument("--out", help="write the JSON summary here")
    p.add_argument("--grid", help="score this grid CSV instead of running the pipeline")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="override a case parameter")
    p.add_argument("--z-spec", help="replace the case's Z distribution (JSON)")
    _add_method_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moments", help="compare the weighted-Lindley ratio moment formula")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_moments)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("RATIO_DECONV_LOG", "").strip().upper()
    if level:
        logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                            format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RatioDeconvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
