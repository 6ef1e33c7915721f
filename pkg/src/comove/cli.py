"""Command-line interface.

Subcommands:
  gen      write a seeded synthetic trajectory CSV
  mine     trajectories (or pre-clustered columns) -> itemset store + patterns
  append   combine a stored mining result with newly arrived trajectories
  convert  rewrite between formats (trajectories -> columns, store -> patterns)

Exit codes: 0 success, 1 usage error, 2 data/parameter error.  Each run ends
with a single JSON summary line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from pathlib import Path

from .clustering import DbscanParams, build_cluster_matrix
from .combine import combine_fcis, shift_times, should_update
from .incremental import mine_incremental, mine_parameter_free
from .ingest import interpolate, parse_trajectories, periodic_decompose
from .miner import mine_fci
from .model import CoMoveError, MiningParams, TimeRangeError, UniverseError
from .patterns import ExtractionContext, extract_patterns
from .store import (
    FciStore,
    read_cluster_columns,
    read_fci_store,
    write_cluster_columns,
    write_fci_store,
    write_patterns_csv,
    write_patterns_geojson,
    write_trajectories,
)
from .synthetic import SyntheticSpec, gen_synthetic

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; we reserve 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _clustering_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("clustering")
    g.add_argument("--eps", type=float, default=0.001,
                   help="density radius (closed ball, default 0.001)")
    g.add_argument("--minpts", "--min-pts", dest="min_pts", type=int, default=2,
                   help="min neighborhood size for a core point, self included "
                        "(default 2)")
    g.add_argument("--no-interpolate", action="store_true",
                   help="skip linear gap filling before clustering")
    return p


def _mining_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("mining")
    g.add_argument("--epsilon", type=int, default=2,
                   help="min objects per itemset (default 2)")
    g.add_argument("--mode", choices=("monolithic", "incremental", "nested"),
                   default="monolithic", help="mining strategy (default monolithic)")
    g.add_argument("--block-size", type=int, default=None,
                   help="timestamps per block for --mode incremental (default 25)")
    return p


def _extraction_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("patterns")
    g.add_argument("--min-t", type=int, default=1,
                   help="min involved time units (default 1)")
    g.add_argument("--theta", type=float, default=0.5,
                   help="Jaccard threshold for moving clusters (default 0.5)")
    g.add_argument("--min-c", type=int, default=1,
                   help="min segments per group pattern (default 1)")
    g.add_argument("--min-wei", type=float, default=0.0,
                   help="min covered fraction per group pattern (default 0)")
    return p


def _common_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for clustering and block mining "
                        "(output is thread-count independent)")
    return p


def _emit_flag(p: argparse.ArgumentParser):
    p.add_argument("--emit", choices=("csv", "geojson", "both"), default="csv",
                   help="pattern output format(s) (default csv)")


def build_parser() -> _Parser:
    parser = _Parser(prog="comove",
                     description="Co-movement pattern mining over trajectories.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="write a synthetic trajectory CSV",
                           parents=[])
    p_gen.add_argument("output", help="destination CSV path")
    p_gen.add_argument("--objects", type=int, default=100)
    p_gen.add_argument("--times", type=int, default=100)
    p_gen.add_argument("--groups", type=int, default=4)
    p_gen.add_argument("--switch-prob", type=float, default=0.0)
    p_gen.add_argument("--spread", type=float, default=0.5)
    p_gen.add_argument("--seed", type=int, default=0)

    p_mine = sub.add_parser(
        "mine", help="mine itemsets and patterns from trajectories",
        parents=[_clustering_flags(), _mining_flags(), _extraction_flags(),
                 _common_flags()])
    p_mine.add_argument("input", help="trajectory CSV (or columns TSV with "
                                      "--pre-clustered)")
    p_mine.add_argument("out_dir", help="directory for fcis.tsv / patterns.csv")
    p_mine.add_argument("--pre-clustered", action="store_true",
                        help="input is a pre-clustered columns TSV")
    p_mine.add_argument("--period", type=int, default=None,
                        help="decompose into sub-trajectories of this length "
                             "and mine periodic patterns")
    _emit_flag(p_mine)

    p_app = sub.add_parser(
        "append", help="fold newly arrived trajectories into a stored result",
        parents=[_clustering_flags(), _common_flags()])
    p_app.add_argument("input", help="trajectory CSV with the new timestamps")
    p_app.add_argument("out_dir", help="directory for the combined fcis.tsv")
    p_app.add_argument("--store", required=True,
                       help="existing itemset store (fcis.tsv)")
    p_app.add_argument("--epsilon", type=int, default=None,
                       help="must match the store's epsilon when given")

    p_conv = sub.add_parser("convert", help="rewrite between formats")
    conv_sub = p_conv.add_subparsers(dest="conversion", required=True)

    p_cols = conv_sub.add_parser(
        "columns", help="trajectory CSV -> pre-clustered columns TSV",
        parents=[_clustering_flags(), _common_flags()])
    p_cols.add_argument("input", help="trajectory CSV")
    p_cols.add_argument("output", help="destination TSV path")

    p_pat = conv_sub.add_parser(
        "patterns", help="itemset store + trajectories -> pattern files",
        parents=[_clustering_flags(), _extraction_flags(), _common_flags()])
    p_pat.add_argument("store", help="itemset store (fcis.tsv)")
    p_pat.add_argument("input", help="the trajectory CSV the store was mined from")
    p_pat.add_argument("out_dir", help="directory for patterns.csv")
    _emit_flag(p_pat)

    return parser


def _summary(**fields):
    print(json.dumps(fields), file=sys.stderr)


def _kind_counts(patterns) -> dict:
    return dict(sorted(Counter(p.kind for p in patterns).items()))


def _load_db(args):
    db = parse_trajectories(args.input)
    if not args.no_interpolate:
        db = interpolate(db)
    return db


def _cmd_gen(args) -> int:
    spec = SyntheticSpec(n_objects=args.objects, n_times=args.times,
                         n_groups=args.groups, switch_prob=args.switch_prob,
                         spread=args.spread, seed=args.seed)
    db = gen_synthetic(spec)
    write_trajectories(db, args.output)
    _summary(command="gen", output=args.output, n_objects=db.n_objects,
             n_times=db.n_times, seed=args.seed)
    return 0


def _mine_with_mode(matrix, params: MiningParams, threads: int):
    if params.mode == "incremental":
        return mine_incremental(matrix, params.epsilon, params.block_size,
                                threads=threads)
    if params.mode == "nested":
        return mine_parameter_free(matrix, params.epsilon, threads=threads)
    return mine_fci(matrix, params.epsilon, threads=threads)


def _write_outputs(out_dir: str, store: FciStore, patterns, matrix, db, emit: str):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_fci_store(store, out / "fcis.tsv")
    if emit in ("csv", "both"):
        write_patterns_csv(patterns, matrix, out / "patterns.csv")
    if emit in ("geojson", "both"):
        write_patterns_geojson(patterns, matrix, db, out / "patterns.geojson")


def _cmd_mine(args, parser: _Parser) -> int:
    if args.pre_clustered and args.period is not None:
        parser.error("--period cannot be combined with --pre-clustered")
    if args.pre_clustered and args.emit in ("geojson", "both"):
        parser.error("--emit geojson needs trajectories, not --pre-clustered input")
    t0 = time.perf_counter()
    params = MiningParams(epsilon=args.epsilon, min_t=args.min_t,
                          theta=args.theta, min_c=args.min_c,
                          min_wei=args.min_wei, block_size=args.block_size,
                          mode=args.mode)
    db = None
    if args.pre_clustered:
        matrix = read_cluster_columns(args.input)
    else:
        db = _load_db(args)
        if args.period is not None:
            db = periodic_decompose(db, args.period).sub_db
        kind = "periodic" if args.period is not None else "per-timestamp"
        matrix = build_cluster_matrix(
            db, DbscanParams(eps=args.eps, min_pts=args.min_pts),
            kind=kind, threads=args.threads)
    fcis = _mine_with_mode(matrix, params, args.threads)
    patterns = extract_patterns(fcis, ExtractionContext(matrix, params))
    store = FciStore(params.epsilon, matrix.object_labels, matrix.time_labels,
                     tuple(fcis))
    _write_outputs(args.out_dir, store, patterns, matrix, db, args.emit)
    _summary(command="mine", mode=params.mode, input=args.input,
             n_objects=matrix.n_objects, n_times=matrix.n_times,
             n_columns=matrix.n_columns, n_fcis=len(fcis),
             n_patterns=len(patterns), patterns=_kind_counts(patterns),
             threads=args.threads,
             elapsed_s=round(time.perf_counter() - t0, 3))
    return 0


def _cmd_append(args) -> int:
    t0 = time.perf_counter()
    store = read_fci_store(args.store)
    if args.epsilon is not None and args.epsilon != store.epsilon:
        raise CoMoveError(
            f"--epsilon {args.epsilon} does not match the store's epsilon "
            f"{store.epsilon}")
    new_db = _load_db(args)
    if store.time_labels and new_db.time_labels[0] <= store.time_labels[-1]:
        raise TimeRangeError(
            f"new data starts at {new_db.time_labels[0]!r}, not strictly after "
            f"the store's last timestamp {store.time_labels[-1]!r}")
    new_matrix = build_cluster_matrix(
        new_db.align_to(store.object_labels),
        DbscanParams(eps=args.eps, min_pts=args.min_pts), threads=args.threads)
    new_fcis = mine_fci(new_matrix, store.epsilon, threads=args.threads)
    shifted = shift_times(new_fcis, len(store.time_labels))
    counters: dict = {}
    combined = combine_fcis(list(store.fcis), shifted, store.epsilon,
                            counters=counters)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    combined_store = FciStore(store.epsilon, store.object_labels,
                              store.time_labels + new_db.time_labels,
                              tuple(combined))
    write_fci_store(combined_store, out / "fcis.tsv")
    _summary(command="append", store=args.store, input=args.input,
             n_existing=len(store.fcis), n_incoming=len(new_fcis),
             n_combined=len(combined),
             update_was_recommended=should_update(store.time_span, new_db.n_times),
             **counters, elapsed_s=round(time.perf_counter() - t0, 3))
    return 0


def _cmd_convert_columns(args) -> int:
    db = _load_db(args)
    matrix = build_cluster_matrix(
        db, DbscanParams(eps=args.eps, min_pts=args.min_pts), threads=args.threads)
    write_cluster_columns(matrix, args.output)
    _summary(command="convert", conversion="columns", input=args.input,
             output=args.output, n_columns=matrix.n_columns)
    return 0


def _cmd_convert_patterns(args) -> int:
    store = read_fci_store(args.store)
    db = parse_trajectories(args.input)
    if not args.no_interpolate:
        db = interpolate(db)
    if db.object_labels != store.object_labels:
        raise UniverseError(
            "trajectories and store cover different object universes")
    if db.time_labels != store.time_labels:
        raise TimeRangeError("trajectories and store cover different time ranges")
    matrix = build_cluster_matrix(
        db, DbscanParams(eps=args.eps, min_pts=args.min_pts), threads=args.threads)
    params = MiningParams(epsilon=store.epsilon, min_t=args.min_t,
                          theta=args.theta, min_c=args.min_c, min_wei=args.min_wei)
    patterns = extract_patterns(store.fcis, ExtractionContext(matrix, params))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.emit in ("csv", "both"):
        write_patterns_csv(patterns, matrix, out / "patterns.csv")
    if args.emit in ("geojson", "both"):
        write_patterns_geojson(patterns, matrix, db, out / "patterns.geojson")
    _summary(command="convert", conversion="patterns", store=args.store,
             input=args.input, n_patterns=len(patterns),
             patterns=_kind_counts(patterns))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "mine":
            return _cmd_mine(args, parser)
        if args.command == "append":
            return _cmd_append(args)
        if args.command == "convert":
            if args.conversion == "columns":
                return _cmd_convert_columns(args)
            return _cmd_convert_patterns(args)
        raise AssertionError(f"unhandled command {args.command}")
    except CoMoveError as e:
        print(f"comove: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"comove: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
