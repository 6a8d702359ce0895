"""Command-line entry point: ``ohlcpca <command> ...``.

Exit status is 0 on success, 1 on a usage error and 2 on a data error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import charts, ohlc, ppca, simulate, tables
from .errors import OhlcPcaError

log = logging.getLogger("ohlcpca")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _preprocess_table(table, config: ohlc.PreprocessConfig):
    rng = config.make_rng()
    records, dropped = [], []
    for r in table.records:
        try:
            bar = ohlc.preprocess(r.values, config, rng)
        except OhlcPcaError as exc:
            raise OhlcPcaError(f"row {r.row} ({r.entity}, {r.variable}): {exc}") from exc
        if bar is ohlc.DROPPED:
            dropped.append(r)
            continue
        records.append(tables.Record(r.entity, r.variable, tuple(bar), r.row))
    for r in dropped:
        log.warning("row %d (%s, %s): all-zero bar dropped", r.row, r.entity, r.variable)
    return tables.Table(tuple(records), table.value_columns), dropped


def _raw_to_features(path, config):
    table, dropped = _preprocess_table(tables.parse_ohlc_csv(path), config)
    bad = {r.entity for r in dropped}
    if bad:
        log.warning("dropping entities with suspended bars: %s", ", ".join(sorted(bad)))
        table = tables.Table(tuple(r for r in table.records if r.entity not in bad),
                             table.value_columns)
    return table


def _config(args) -> ohlc.PreprocessConfig:
    try:
        return ohlc.PreprocessConfig(args.epsilon, args.flat_policy, args.jitter_seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def cmd_transform(args) -> int:
    table = _preprocess_table(tables.parse_ohlc_csv(args.input), _config(args))[0]
    features = []
    for r in table.records:
        try:
            features.append(ohlc.to_features(np.array(r.values)))
        except OhlcPcaError as exc:
            raise OhlcPcaError(f"row {r.row} ({r.entity}, {r.variable}): {exc}") from exc
    out = tables.Table(
        tuple(tables.Record(r.entity, r.variable, tuple(float(x) for x in f), r.row)
              for r, f in zip(table.records, features)),
        tables.FEATURE_COLUMNS,
    )
    tables.write_table_csv(out, args.output, digits=None)
    return EXIT_OK


def cmd_inverse(args) -> int:
    table = tables.parse_feature_csv(args.input)
    records = []
    for r in table.records:
        try:
            bar = ohlc.from_features(np.array(r.values))
        except OhlcPcaError as exc:
            raise OhlcPcaError(f"row {r.row} ({r.entity}, {r.variable}): {exc}") from exc
        records.append(tables.Record(r.entity, r.variable, tuple(float(x) for x in bar), r.row))
    tables.write_table_csv(tables.Table(tuple(records), tables.OHLC_COLUMNS),
                           args.output, digits=None)
    return EXIT_OK


def cmd_ppca(args) -> int:
    if args.input_kind == "raw":
        raw = _raw_to_features(args.input, _config(args))
        grid = ohlc.to_features(raw.pivot())
        matrix = ppca.FeatureMatrix(grid, raw.entities, raw.variables)
    else:
        matrix = tables.parse_feature_csv(args.input).to_feature_matrix()
    components = args.components or matrix.p
    model = ppca.fit(matrix, components, standardized=args.input_kind == "standardized")
    bars = ppca.scores_to_ohlc(ppca.scores(model, matrix))
    tables.write_model(model, bars, args.outdir)
    with open(os.path.join(args.outdir, "scree.svg"), "w", encoding="utf-8") as fh:
        fh.write(charts.render_scree_svg(
            model.all_eigenvalues,
            charts.ChartSpec(title="Cumulative variance contribution",
                             x_label="component", y_label="share of variance")))
    with open(os.path.join(args.outdir, "candles.svg"), "w", encoding="utf-8") as fh:
        fh.write(charts.render_candlestick_svg(
            bars.component(0), bars.row_labels,
            charts.ChartSpec(title="OHLC formed scores of PC1")))
    if model.m >= 2:
        with open(os.path.join(args.outdir, "loadings.svg"), "w", encoding="utf-8") as fh:
            fh.write(charts.render_loading_svg(
                model.loadings, model.column_labels,
                charts.ChartSpec(width=520, height=520, margin_bottom=60,
                                 title="Loadings on PC1 and PC2")))
    q = model.cumulative_contribution
    print(f"fitted {model.m} of {model.p} components; cumulative contribution {q[-1]:.3f}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        config = simulate.SimConfig(tuple(args.n or (50, 100, 150, 200)), args.repeats, args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    report = simulate.run_study(config)
    svg = args.svg
    if svg is None:
        svg = os.path.splitext(args.output)[0] + ".svg"
    simulate.write_report(report, args.output, svg)
    for s in report.sizes:
        if s.failures:
            log.warning("n=%d: %d repeats failed", s.n, len(s.failures))
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.kind == "scree":
        if not args.model:
            raise _UsageError("plot scree requires --model")
        path = args.model
        if os.path.isdir(path):
            path = os.path.join(path, "eigenvalues.csv")
        svg = charts.render_scree_svg(
            tables.read_eigenvalues(path),
            charts.ChartSpec(title="Cumulative variance contribution",
                             x_label="component", y_label="share of variance"))
    else:
        if not args.scores:
            raise _UsageError("plot candles requires --scores")
        labels, bars = tables.read_scores_ohlc(args.scores, args.component)
        if not labels:
            raise OhlcPcaError(f"{args.scores}: no rows for component {args.component}")
        svg = charts.render_candlestick_svg(
            bars, labels, charts.ChartSpec(title=f"OHLC formed scores of PC{args.component}"))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def _add_preprocess_flags(p):
    p.add_argument("--epsilon", type=float, default=0.01,
                   help="nudge for convex coefficients at 0 or 1 (default 0.01)")
    p.add_argument("--flat-policy", choices=ohlc.FLAT_POLICIES, default="limit-up")
    p.add_argument("--jitter-seed", type=int, default=None,
                   help="draw nudges uniformly from (epsilon/2, epsilon) with this seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ohlcpca", description="Pseudo-PCA for OHLC data.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="raw OHLC CSV -> feature CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    _add_preprocess_flags(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("inverse", help="feature CSV -> raw OHLC CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("ppca", help="fit a pseudo-PCA and write model files and charts")
    p.add_argument("--input", required=True)
    p.add_argument("--input-kind", choices=("raw", "features", "standardized"), default="raw")
    p.add_argument("--components", type=int, default=None)
    p.add_argument("--outdir", required=True)
    _add_preprocess_flags(p)
    p.set_defaults(func=cmd_ppca)

    p = sub.add_parser("simulate", help="run the redundant-variable simulation study")
    p.add_argument("--n", type=int, action="append",
                   help="sample size; repeat for several (default 50 100 150 200)")
    p.add_argument("--repeats", type=int, default=300)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", required=True)
    p.add_argument("--svg", default=None,
                   help="cumulative-variance chart path (default: OUTPUT with .svg suffix)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", help="render a chart from written model files")
    p.add_argument("kind", choices=("scree", "candles"))
    p.add_argument("--model", help="eigenvalues.csv or the ppca output directory")
    p.add_argument("--scores", help="scores_ohlc.csv")
    p.add_argument("--component", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except OhlcPcaError as exc:
        print(f"ohlcpca: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"ohlcpca: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
