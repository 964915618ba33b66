"""Command-line interface: ``wlpa {detect,eval,generate,bench,betweenness}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import _backend
from .betweenness import format_scores, local_edge_betweenness
from .experiment import ALGORITHMS, RunConfig, bench, run_experiment, write_bench_csv
from .generators import GeneratorConfig, generate, generate_weighted
from .graph import GraphFormatError, PartitionMismatchError, load_edge_list, load_partition, save_edge_list, save_partition
from .metrics import quality_report

log = logging.getLogger("wlpa")


def _int_list(text):
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _threads(value):
    return value if value is not None else _backend.default_threads()


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_detect(args):
    g = load_edge_list(args.graph, weighted=args.weighted)
    truth = load_partition(args.truth, g) if args.truth else None
    cfg = RunConfig(
        algorithm=args.algo,
        runs=args.runs,
        seed=args.seed,
        max_passes=args.max_passes,
        depth=args.depth,
        threads=_threads(args.threads),
        weighted=args.weighted,
        gn_max_nodes=args.gn_max_nodes,
    )
    report, best, dendrogram = run_experiment(g, cfg, truth=truth)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_partition(best, out / "partition.txt")
    body = report.to_dict()
    body["best_partition"] = quality_report(g, best, truth).to_dict()
    if args.format == "json":
        _dump_json(body, out / "report.json")
    else:
        with open(out / "report.csv", "w", encoding="utf-8") as fh:
            report.write_runs_csv(fh)
    with open(out / "timings.csv", "w", encoding="utf-8") as fh:
        report.write_timings_csv(fh)
    if dendrogram is not None:
        (out / "dendrogram.json").write_text(dendrogram.to_json(g.node_labels) + "\n", encoding="utf-8")
    print(
        f"{args.algo}: best modularity {report.best_modularity:.4f} "
        f"(avg {report.average_modularity:.4f}, worst {report.worst_modularity:.4f}) "
        f"over {len(report.runs)} run(s) -> {out}"
    )
    return 0


def cmd_eval(args):
    g = load_edge_list(args.graph, weighted=args.weighted)
    p = load_partition(args.partition, g)
    truth = load_partition(args.truth, g) if args.truth else None
    _dump_json(quality_report(g, p, truth).to_dict(), args.out)
    return 0


def cmd_generate(args):
    if args.preset == "gn":
        groups, size, degree = 4, 32, 16.0
    else:
        missing = [n for n in ("groups", "size", "degree") if getattr(args, n) is None]
        if missing:
            raise ValueError("without --preset, --groups, --size and --degree are required")
        groups, size, degree = args.groups, args.size, args.degree
    cfg = GeneratorConfig(groups, size, degree, args.mu, args.seed)
    if args.wmu is None:
        g, truth = generate(cfg)
    else:
        g, truth = generate_weighted(cfg, args.wmu)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_edge_list(g, out / "graph.txt")
    save_partition(truth, out / "truth.txt")
    print(f"generated n={g.n} m={g.m} (p_in={cfg.p_in:.4g}, p_out={cfg.p_out:.4g}) -> {out}")
    return 0


def cmd_bench(args):
    rows = bench(
        args.sizes,
        threads=args.threads,
        depths=args.depths,
        algorithms=args.algos,
        betweenness=not args.no_betweenness,
        repeats=args.repeats,
        seed=args.seed,
        degree=args.degree,
        mu=args.mu,
        group_size=args.group_size,
    )
    if args.out == "-":
        write_bench_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_bench_csv(rows, fh)
    return 0


def cmd_betweenness(args):
    g = load_edge_list(args.graph, weighted=False)
    scores = local_edge_betweenness(g, args.depth, threads=_threads(args.threads))
    text = format_scores(g, scores)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="wlpa", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run seeded community detection")
    p.add_argument("--algo", choices=ALGORITHMS, default="wlpa-leb")
    p.add_argument("--graph", required=True)
    p.add_argument("--weighted", action="store_true", help="use edge weights")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-passes", type=int, default=100)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--threads", type=int, default=None, help="default: $WLPA_THREADS or 1")
    p.add_argument("--truth", help="ground-truth partition; adds NMI to the report")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--gn-max-nodes", type=int, default=10_000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="score a partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--truth")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generate", help="planted-partition benchmark graph")
    p.add_argument("--preset", choices=("gn",))
    p.add_argument("--groups", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--degree", type=float)
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--wmu", type=float, help="weight mixing; emits a weighted graph")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="runtime scaling ladder, CSV output")
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--threads", type=_int_list, default=[1])
    p.add_argument("--depths", type=_int_list, default=[2])
    p.add_argument("--algos", type=lambda s: s.split(","), default=["wlpa-leb", "lpa"])
    p.add_argument("--no-betweenness", action="store_true", help="skip betweenness-only rows")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--degree", type=float, default=15.0)
    p.add_argument("--mu", type=float, default=0.4)
    p.add_argument("--group-size", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("betweenness", help="dump local edge betweenness")
    p.add_argument("--graph", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_betweenness)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GraphFormatError, PartitionMismatchError, ValueError, OSError, RuntimeError) as exc:
        print(f"wlpa {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
