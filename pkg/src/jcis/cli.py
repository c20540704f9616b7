"""Command-line front end: ``jcis screen | cutoff | simulate | mdr``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import __version__
from . import io as jio
from .cutoff import estimate_cutoff
from .errors import ConfigurationError, JcisError
from .mdr import MdrConfig, cross_validated_mdr
from .screening import ALL_PAIRS, WITHIN_GROUP, screen
from .simulate import ScenarioConfig, run_scenario

log = logging.getLogger("jcis")


def _top_k(value):
    if value in ("n", "all"):
        return value
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, 'n' or 'all'")
    if k < 1:
        raise argparse.ArgumentTypeError("top-k must be positive")
    return k


def _search_bound(value):
    if value == "max":
        return value
    return int(value)


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o", default=None,
                   help="output file (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="jcis", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("screen", help="score and rank all covariate pairs")
    p.add_argument("--input", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--groups", default=None)
    p.add_argument("--pairs", choices=["all", "within-group"], default="all")
    p.add_argument("--top-k", type=_top_k, default="n",
                   help="pairs to keep: an integer, 'n' (sample size, default) or 'all'")
    p.add_argument("--delimiter", default=None)
    p.add_argument("--max-missing", type=float, default=0.05)
    p.add_argument("--impute-mode", choices=["none", "mean"], default="none")
    p.add_argument("--min-minor-freq", type=float, nargs="?", const=0.10,
                   default=None, help="drop rare-category columns (0.10 if no value)")
    _common(p)

    p = sub.add_parser("cutoff", help="adjacent-ratio cutoff from a scores file")
    p.add_argument("--scores", required=True)
    p.add_argument("--search-bound", type=_search_bound, default=None)
    p.add_argument("--floor", type=float, default=None)
    p.add_argument("--n", type=int, default=None,
                   help="sample size (bounds the default search range)")
    _common(p)

    p = sub.add_parser("simulate", help="replicate a benchmark scenario")
    p.add_argument("--scenario", required=True, choices=["1", "2", "3", "4"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--top-window", type=int, default=5)
    _common(p)

    p = sub.add_parser("mdr", help="cross-validated MDR on candidate columns")
    p.add_argument("--input", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--candidates", required=True,
                   help="scores TSV or file with one column name per line")
    p.add_argument("--score-threshold", type=float, default=None)
    p.add_argument("--cutoff", default=None,
                   help="cutoff JSON; keep the top d_hat pairs of the scores file")
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--threshold", choices=["classic", "adjusted"], default="adjusted")
    p.add_argument("--delimiter", default=None)
    p.add_argument("--cells-tsv", default=None,
                   help="write cell risk tables to PREFIX.k<K>.tsv")
    _common(p)
    return parser


def _emit(args, payload, started):
    text = jio.dumps(payload)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
        _write_manifest(args, started)


def _write_manifest(args, started):
    flags = {k: v for k, v in vars(args).items()
             if k != "command" and not k.startswith("_")}
    manifest = {"subcommand": args.command, "flags": flags, "seed": args.seed,
                "version": __version__,
                "duration_seconds": round(time.perf_counter() - started, 6)}
    if getattr(args, "_n_observations", None) is not None:
        manifest["n_observations"] = args._n_observations
    jio.write_json(manifest, jio.manifest_path(args.output))


def cmd_screen(args, started):
    data = jio.load_matrix(args.input, args.response, args.delimiter,
                           args.max_missing, args.impute_mode,
                           args.min_minor_freq)
    restriction = ALL_PAIRS if args.pairs == "all" else WITHIN_GROUP
    if args.groups is not None:
        data = jio.attach_groups(data, jio.load_groups(args.groups))
    elif restriction == WITHIN_GROUP:
        raise ConfigurationError("--pairs within-group requires --groups")
    top_k = {"n": data.n, "all": None}.get(args.top_k, args.top_k)
    result = screen(data, restriction, top_k, args.workers)
    for j, reason in result.skipped_columns:
        log.warning("skipped column %s: %s", data.column_names[j], reason)
    args._n_observations = data.n
    if args.output is None:
        jio.write_scores(result, sys.stdout)
    else:
        jio.write_scores(result, args.output)
        _write_manifest(args, started)


def _sample_size_from_manifest(scores_path):
    path = jio.manifest_path(scores_path)
    if os.path.exists(path):
        with open(path) as fh:
            return json.load(fh).get("n_observations")
    return None


def cmd_cutoff(args, started):
    scores = jio.read_scores(args.scores)
    n = args.n if args.n is not None else _sample_size_from_manifest(args.scores)
    bound = None if args.search_bound == "max" else args.search_bound
    if args.search_bound == "max":
        n = None
    est = estimate_cutoff([s.r_hat for s in scores], bound, args.floor, n)
    out = est.to_dict()
    cut = scores[:est.d_hat]
    out["pairs"] = [[s.name1, s.name2] for s in cut]
    _emit(args, out, started)


def cmd_simulate(args, started):
    config = ScenarioConfig(args.scenario, args.n, args.p, args.reps,
                            args.seed, args.top_window)
    report = run_scenario(config, workers=args.workers)
    _emit(args, report.to_dict(), started)


def cmd_mdr(args, started):
    data = jio.load_matrix(args.input, args.response, args.delimiter)
    top_pairs = None
    if args.cutoff is not None:
        with open(args.cutoff) as fh:
            top_pairs = int(json.load(fh)["d_hat"])
    names = jio.read_candidates(args.candidates, args.score_threshold, top_pairs)
    index = {c: j for j, c in enumerate(data.column_names)}
    unknown = [c for c in names if c not in index]
    if unknown:
        raise ConfigurationError(f"candidate columns not in input: {unknown[:5]}")
    mode = "classic_T1" if args.threshold == "classic" else "adjusted"
    models = []
    for k in args.k:
        config = MdrConfig(k, [index[c] for c in names], args.folds, mode, args.seed)
        model = cross_validated_mdr(data, config)
        models.append(model.to_dict())
        if args.cells_tsv is not None:
            jio.write_cell_risk_tsv(model, f"{args.cells_tsv}.k{k}.tsv")
    _emit(args, {"candidates": names, "models": models}, started)


COMMANDS = {"screen": cmd_screen, "cutoff": cmd_cutoff,
            "simulate": cmd_simulate, "mdr": cmd_mdr}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    started = time.perf_counter()
    try:
        COMMANDS[args.command](args, started)
    except JcisError as exc:
        print(f"jcis {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"jcis {args.command}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
