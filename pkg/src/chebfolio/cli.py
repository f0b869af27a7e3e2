"""``chebfolio`` command-line entry point.

Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 bad configuration.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from chebfolio import capm as capm_mod
from chebfolio.errors import ConfigError, DegenerateError, InputError, NumericalError
from chebfolio.fitting import DEFAULT_DEGREE, FitConfig, fit
from chebfolio.heatmap import render_svg
from chebfolio.ingestion import (
    ManifestEntry,
    align,
    day_to_date,
    load_all,
    load_manifest,
)
from chebfolio.report import (
    RunReport,
    capm_to_csv,
    coefficients_to_csv,
    format_agreement,
    matrix_to_csv,
    to_json,
    write_outputs,
)
from chebfolio.similarity import agreement, cosine_matrix, pearson_matrix

EXIT_INPUT, EXIT_NUMERICAL, EXIT_CONFIG = 2, 3, 4


def _setup_logging():
    level = os.environ.get("CHEBFOLIO_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="*", type=Path, help="date,close CSV files")
    common.add_argument("--manifest", type=Path, help="JSON list of {ticker, path, is_market}")
    common.add_argument("--degree", type=int, default=DEFAULT_DEGREE,
                        help=f"expansion degree N, N+1 terms (default {DEFAULT_DEGREE})")
    common.add_argument("--time-axis", choices=("days", "index"), default="days")
    common.add_argument("-o", "--output", type=Path, required=True, help="output directory")

    ap = argparse.ArgumentParser(prog="chebfolio", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("fit", parents=[common], help="write per-asset coefficient files")
    rep = sub.add_parser("report", parents=[common], help="cosine/correlation/agreement report")
    rep.add_argument("--basis", choices=("prices", "returns"), default="prices")
    rep.add_argument("--drop-constant-term", action="store_true",
                     help="exclude c_0 from cosines and phi")
    rep.add_argument("--market-ticker")
    rep.add_argument("--rf", type=float, help="risk-free rate per period")
    rep.add_argument("--erm", type=float, help="expected market return per period")
    rep.add_argument("--heatmap", type=Path, help="write an SVG heatmap to this path")
    return ap


def _entries(args) -> list[ManifestEntry]:
    if args.manifest and args.files:
        raise ConfigError("give either --manifest or input files, not both")
    if args.manifest:
        return load_manifest(args.manifest)
    if not args.files:
        raise ConfigError("no input files")
    return [ManifestEntry(p.stem, p) for p in args.files]


def _prepare(args, entries):
    """Load, align and re-time the inputs; returns (series list, alignment info)."""
    series = load_all(entries)
    info = {}
    if len(series) >= 2:
        panel = align(series)
        series = panel.as_series_list()
        info = {
            "observations": int(panel.timestamps.size),
            "first_date": day_to_date(panel.timestamps[0]).isoformat(),
            "last_date": day_to_date(panel.timestamps[-1]).isoformat(),
            "dropped": panel.dropped,
        }
    if args.time_axis == "index":
        series = [s.with_index_time() for s in series]
    return series, info


def _diagnostics(cv):
    return {
        "asset_id": cv.asset_id,
        "degree": cv.degree,
        "rmse": cv.rmse,
        "max_abs_residual": cv.max_abs_residual,
        "condition_number": cv.condition_number,
        "rank": cv.rank,
    }


def _inputs_echo(entries):
    return [{"ticker": e.ticker, "path": str(e.path), "is_market": e.is_market} for e in entries]


def cmd_fit(args) -> int:
    entries = _entries(args)
    series, info = _prepare(args, entries)
    cfg = FitConfig(args.degree)
    cvs = [fit(s, cfg) for s in series]
    files = {f"coeff_{cv.asset_id}.csv": coefficients_to_csv(cv.coefficients) for cv in cvs}
    files["fit_diagnostics.json"] = to_json({
        "config_echo": {
            "command": "fit",
            "inputs": _inputs_echo(entries),
            "degree": cfg.degree,
            "time_axis": args.time_axis,
        },
        "alignment": info,
        "per_asset": [_diagnostics(cv) for cv in cvs],
    })
    write_outputs(args.output, files)
    return 0


def cmd_report(args) -> int:
    entries = _entries(args)
    market = args.market_ticker
    if market is None:
        market = next((e.ticker for e in entries if e.is_market), None)
    capm_inputs = None
    if market is not None:
        if args.rf is None or args.erm is None:
            raise ConfigError(f"market ticker {market!r} requires both --rf and --erm")
        if market not in [e.ticker for e in entries]:
            raise ConfigError(f"market ticker {market!r} is not among the inputs")
        capm_inputs = capm_mod.CapmInputs(args.rf, args.erm)
    elif args.rf is not None or args.erm is not None:
        raise ConfigError("--rf/--erm given without a market ticker")
    if len(entries) < 2:
        raise InputError("report needs at least 2 input series")

    series, info = _prepare(args, entries)
    cfg = FitConfig(args.degree)
    cvs = [fit(s, cfg) for s in series]
    cos_m = cosine_matrix(cvs, drop_constant=args.drop_constant_term)
    cor_m = pearson_matrix(series, args.basis)
    cos_m.check()
    cor_m.check()

    agree, agree_err = None, None
    try:
        agree = agreement(cos_m, cor_m)
    except DegenerateError as exc:
        agree_err = str(exc)
        print(f"chebfolio: warning: agreement not computed: {exc}", file=sys.stderr)

    estimates = None
    if capm_inputs is not None:
        by_id = {s.asset_id: (s, cv) for s, cv in zip(series, cvs)}
        m_series, m_cv = by_id[market]
        estimates = [
            capm_mod.estimate(s, m_series, cv, m_cv, capm_inputs, args.drop_constant_term)
            for s, cv in zip(series, cvs)
        ]

    config_echo = {
        "command": "report",
        "inputs": _inputs_echo(entries),
        "degree": cfg.degree,
        "time_axis": args.time_axis,
        "basis": args.basis,
        "drop_constant_term": args.drop_constant_term,
        "market_ticker": market,
        "rf": args.rf,
        "erm": args.erm,
        "heatmap": None if args.heatmap is None else str(args.heatmap),
    }
    report = RunReport(
        config_echo=config_echo,
        per_asset=[_diagnostics(cv) for cv in cvs],
        cosine_matrix=cos_m,
        correlation_matrix=cor_m,
        agreement=agree,
        agreement_error=agree_err,
        alignment=info,
        capm=estimates,
    )
    files = {
        "report.json": to_json(report.to_dict()),
        "cosine.csv": matrix_to_csv(cos_m),
        "correlation.csv": matrix_to_csv(cor_m),
    }
    if agree is not None:
        files["agreement.txt"] = format_agreement(agree.statistic)
    if estimates is not None:
        files["capm.csv"] = capm_to_csv(estimates)
    svg = None
    if args.heatmap is not None:
        svg = render_svg([("cosine", cos_m), (f"correlation ({args.basis})", cor_m)])
    write_outputs(args.output, files)
    if svg is not None:
        write_outputs(args.heatmap.parent, {args.heatmap.name: svg})
    return 0


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    handler = cmd_fit if args.command == "fit" else cmd_report
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"chebfolio: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, OSError) as exc:
        print(f"chebfolio: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"chebfolio: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
