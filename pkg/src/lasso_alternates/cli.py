"""Command-line front end.

    lasso-alternates fit --input d.svm --loss logistic --rho 0.001 --rho-per-sample --output sol.json
    lasso-alternates alternates --input d.svm --solution sol.json --emit json --output rep.json
    lasso-alternates report --input rep.json --emit tsv --origin space --top-k 20

Exit codes: 0 success, 1 usage error, 2 data error, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass

from . import report as rp
from .alternates import AlternateReport, find_alternates
from .datamodel import DataError, Dataset, load_csv, load_libsvm, load_text, read_word_list
from .loss import KINDS, LossModel
from .solver import (
    IncompatibleLossError,
    LassoSolution,
    NonConvergenceWarning,
    RegParam,
    SolverOptions,
    fit_lasso,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (v >= 0.0 and v != float("inf")):
        raise argparse.ArgumentTypeError(f"must be a finite nonnegative number, got {s}")
    return v


def _pos_float(s: str) -> float:
    v = _nonneg_float(s)
    if v == 0.0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {v}")
    return v


def _pos_int(s: str) -> int:
    v = _nonneg_int(s)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


@dataclass
class RunConfig:
    input: str
    format: str = "libsvm"
    loss: str | None = None
    rho: float = 0.0
    rho_per_sample: bool = False
    tol: float = 1e-6
    max_sweeps: int = 10_000
    max_prox_iters: int = 10_000
    emit: str = "json"
    top_k: int | None = None
    origin: str | None = None
    stop_words: str | None = None
    min_df: int = 1
    target_column: str | None = None
    has_header: bool = True
    threads: int = 1
    output: str | None = None
    solution: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__}
        return cls(**fields)

    def options(self) -> SolverOptions:
        return SolverOptions(kkt_tolerance=self.tol, max_sweeps=self.max_sweeps,
                             max_prox_iters=self.max_prox_iters)


def load_dataset(cfg: RunConfig, loss: LossModel) -> Dataset:
    if cfg.format == "libsvm":
        return load_libsvm(cfg.input, task=loss.task)
    if cfg.format == "csv":
        if cfg.target_column is None:
            raise UsageError("--target-column is required for CSV input")
        return load_csv(cfg.input, cfg.target_column, has_header=cfg.has_header, task=loss.task)
    if loss.task != "classification":
        raise UsageError("text input yields +1/-1 labels; use --loss logistic")
    stop = read_word_list(cfg.stop_words) if cfg.stop_words else None
    return load_text(cfg.input, stop_words=stop, min_df=cfg.min_df)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _info_stream(cfg: RunConfig):
    # keep stdout clean when the artifact itself goes there
    return sys.stderr if cfg.output in (None, "-") else sys.stdout


def cmd_fit(cfg: RunConfig) -> int:
    loss = LossModel(cfg.loss or "squared")
    dataset = load_dataset(cfg, loss)
    reg = RegParam(cfg.rho, cfg.rho_per_sample)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonConvergenceWarning)
        sol = fit_lasso(dataset, loss, reg, cfg.options())
    _write(cfg.output, rp.solution_json(sol))
    out = _info_stream(cfg)
    print(f"effective rho: {sol.rho!r}", file=out)
    print(f"support size: {len(sol.support)}", file=out)
    print(f"objective: {sol.objective!r}", file=out)
    print(f"converged: {'yes' if sol.converged else 'no'} (kkt residual {sol.kkt:.3g})", file=out)
    print(f"sweeps: {sol.sweeps_used}", file=out)
    if not sol.converged:
        print(f"error: no convergence within {cfg.max_sweeps} sweeps", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def _resolve_origin(label: str, report: AlternateReport, dataset: Dataset | None = None) -> int:
    if dataset is not None and dataset.matrix.feature_names is not None:
        names = dataset.matrix.feature_names
        if label in names:
            return names.index(label)
    j = report.index_of(label)
    if j is None:
        raise UsageError(f"unknown feature {label!r}")
    return j


def _emit(cfg: RunConfig, report: AlternateReport, dataset: Dataset | None = None) -> str:
    if cfg.emit == "json":
        return rp.report_json(report)
    if cfg.emit == "dot":
        return rp.emit_dot(report)
    if cfg.origin is not None:
        return rp.emit_table(report, _resolve_origin(cfg.origin, report, dataset), cfg.top_k)
    return rp.emit_full_table(report, cfg.top_k)


def cmd_alternates(cfg: RunConfig) -> int:
    with open(cfg.solution, encoding="utf-8") as fh:
        doc = json.load(fh)
    loss = LossModel(cfg.loss or doc["loss"])
    if loss.kind != doc["loss"]:
        raise DataError(f"solution was fitted with {doc['loss']} loss, not {loss.kind}")
    dataset = load_dataset(cfg, loss)
    sol = LassoSolution.from_dict(doc, dataset)
    if not sol.converged:
        print("error: solution did not converge; refit with more sweeps", file=sys.stderr)
        return EXIT_NONCONVERGED
    report = find_alternates(dataset, loss, sol, RegParam(sol.rho), cfg.options(),
                             threads=cfg.threads)
    _write(cfg.output, _emit(cfg, report, dataset))
    out = _info_stream(cfg)
    print(f"pairs: {len(report.pairs)}, actual solves: {report.actual_solve_count}", file=out)
    print(rp.counts_line(report), file=out)
    if report.failures:
        print(f"warning: {len(report.failures)} univariate solves did not converge "
              f"(raise --max-prox-iters)", file=sys.stderr)
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    with open(cfg.input, encoding="utf-8") as fh:
        report = rp.report_from_json(fh.read())
    _write(cfg.output, _emit(cfg, report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lasso-alternates", description="Lasso fits and their alternate features.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_flags(p, loss_default):
        p.add_argument("--input", required=True, help="dataset path")
        p.add_argument("--format", choices=("libsvm", "csv", "text"), default="libsvm")
        p.add_argument("--loss", choices=KINDS, default=loss_default)
        p.add_argument("--target-column", help="CSV target column name or index")
        p.add_argument("--no-header", dest="has_header", action="store_false",
                       help="CSV file has no header row")
        p.add_argument("--stop-words", help="whitespace-separated stop-word file (text input)")
        p.add_argument("--min-df", type=_pos_int, default=1, help="minimum document frequency (text input)")
        p.add_argument("--max-prox-iters", type=_pos_int, default=10_000)
        p.add_argument("--output", help="output path (default: standard output)")

    def emit_flags(p):
        p.add_argument("--emit", choices=("json", "dot", "tsv"), default="json")
        p.add_argument("--top-k", type=_nonneg_int, default=None, help="alternates kept per origin (tsv)")
        p.add_argument("--origin", help="restrict the tsv table to one selected feature")

    fit = sub.add_parser("fit", help="fit the Lasso and write a solution JSON")
    data_flags(fit, "squared")
    fit.add_argument("--rho", type=_nonneg_float, required=True)
    fit.add_argument("--rho-per-sample", action="store_true", help="use rho * n as the penalty")
    fit.add_argument("--tol", type=_pos_float, default=1e-6, help="KKT residual tolerance")
    fit.add_argument("--max-sweeps", type=_pos_int, default=10_000)
    fit.set_defaults(func=cmd_fit)

    alt = sub.add_parser("alternates", help="find and score alternate features of a fit")
    data_flags(alt, None)
    emit_flags(alt)
    alt.add_argument("--solution", required=True, help="solution JSON written by `fit`")
    alt.add_argument("--threads", type=_pos_int, default=os.cpu_count() or 1)
    alt.set_defaults(func=cmd_alternates)

    rep = sub.add_parser("report", help="re-emit a saved alternates JSON report")
    rep.add_argument("--input", required=True, help="report JSON written by `alternates`")
    rep.add_argument("--output")
    emit_flags(rep)
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        return args.func(cfg)
    except UsageError as exc:
        print(f"lasso-alternates: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, IncompatibleLossError, OSError, ValueError, KeyError) as exc:
        print(f"lasso-alternates: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
