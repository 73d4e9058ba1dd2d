"""Command line entry point: ``nrblockade {sweep,g2tau,predict,converge}``.

Exit codes: 0 success, 2 configuration error, 3 every point failed,
4 some points failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from .errors import BlockadeError, ConfigurationError, ConvergenceError
from .sweep import (
    _fmt,
    certify_cutoffs,
    list_presets,
    load_config,
    load_preset,
    predict_resonances,
    run_g2_delay,
    run_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_PARTIAL = 0, 2, 3, 4

log = logging.getLogger("nrblockade")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="path to a key = value config file")
    src.add_argument("--preset", help=f"bundled config name ({', '.join(list_presets())})")
    common.add_argument("--out", help="write CSV data to this path")
    common.add_argument("--threads", type=int, default=1, help="size of the worker pool for sweep points")
    common.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    common.add_argument("-q", "--quiet", action="store_true", help="suppress progress log")

    p = argparse.ArgumentParser(prog="nrblockade", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="steady-state sweep over Delta or n_th")
    sub.add_parser("g2tau", parents=[common], help="delay sweep of g2(tau)")
    sub.add_parser("predict", parents=[common], help="dressed-state resonance table vs sweep extrema")
    sub.add_parser("converge", parents=[common], help="certify truncation cutoffs")
    return p


def _load(args):
    if args.preset:
        return load_preset(args.preset, args.override)
    return load_config(args.config, args.override)


def _exit_for(result) -> int:
    if len(result) and result.n_failed == len(result):
        return EXIT_SOLVER
    if result.n_failed:
        return EXIT_PARTIAL
    return EXIT_OK


def _progress(total):
    state = {"n": 0}

    def cb(row):
        state["n"] += 1
        n = state["n"]
        if n == total or n % max(1, total // 20) == 0:
            log.info("%d/%d points (%s)", n, total, row["status"])

    return cb


def _write_rows(rows, columns, path):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stdout, force=True)
    try:
        config = _load(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command in ("sweep", "g2tau"):
            if args.command == "g2tau" and config.sweep_variable != "tau":
                raise ConfigurationError("g2tau needs sweep.variable = tau")
            if args.command == "sweep" and config.sweep_variable == "tau":
                raise ConfigurationError("use the g2tau subcommand for tau sweeps")
            total = len(config.values) * len(config.series_values)
            log.info("%s: %d points, variable %s", args.command, total, config.sweep_variable)
            runner = run_g2_delay if args.command == "g2tau" else run_sweep
            result = runner(config, threads=args.threads, progress=_progress(total))
            if args.out:
                result.to_csv(args.out)
                log.info("wrote %s", args.out)
            log.info("%d/%d points ok", len(result) - result.n_failed, len(result))
            return _exit_for(result)

        if args.command == "predict":
            report = predict_resonances(config, threads=args.threads)
            print(report.format_table())
            if args.out:
                _write_rows(report.rows(), ("kind", "pair", "photon_order", "Delta_over_G",
                                            "series_value", "T21", "nearest", "deviation"), args.out)
            return EXIT_OK

        if args.command == "converge":
            try:
                (cp, cm), report = certify_cutoffs(config)
            except ConvergenceError as exc:
                print(f"convergence error: {exc}", file=sys.stderr)
                for row in exc.table:
                    print(row, file=sys.stderr)
                return EXIT_SOLVER
            for entry in report:
                log.info("Delta/G = %.6g, n_th = %g: certified (%d, %d)",
                         entry["Delta_over_G"], entry["n_th"], entry["cutoff_photon"],
                         entry["cutoff_phonon"])
            print(f"certified cutoffs: photon {cp}, phonon {cm}")
            if args.out:
                rows = [{"Delta_over_G": e["Delta_over_G"], "n_th": e["n_th"], **t}
                        for e in report for t in e["table"]]
                cols = list(dict.fromkeys(k for r in rows for k in r))
                _write_rows(rows, cols, args.out)
            return EXIT_OK
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlockadeError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
