"""Command-line entry point.

Subcommands: gen-maps, solve, gen-dataset, benchmark, downscale.
Exit codes: 0 success, 1 usage, 2 no path, 3 IO, 4 file format.
Coordinates are `x,y` pairs with the origin at the top-left.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import dataset, evaluation, heuristics, inference, riskmap
from .errors import (DatasetFormatError, DimensionError, MapFormatError,
                     NoDestinationError, PlannerError, WeightFormatError)
from .search import DEFAULT_EPSILON, Task, asd_astar

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOPATH = 2
EXIT_IO = 3
EXIT_FORMAT = 4

log = logging.getLogger("asdplanner")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cell(text: str):
    try:
        x, y = text.split(",")
        return int(x), int(y)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y pair, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def load_config(path) -> dict[str, str]:
    """key=value lines; blank lines and #-comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DatasetFormatError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def build_source(spec: str) -> heuristics.HeuristicSource:
    if spec == "manhattan":
        return heuristics.ManhattanSource()
    if spec == "zero":
        return heuristics.ZeroSource()
    if spec == "oracle":
        return heuristics.OracleSource()
    kind, _, arg = spec.partition(":")
    if kind == "table" and arg:
        return heuristics.TableSource(heuristics.load_table(arg))
    if kind == "riskmap2" and arg:
        return heuristics.Riskmap2Source(inference.load_weights(arg))
    if kind == "state" and arg:
        return heuristics.StateSource(inference.load_weights(arg))
    raise DatasetFormatError(f"unknown heuristic spec {spec!r}")


def cmd_gen_maps(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    for i in range(args.count):
        m = riskmap.generate_random_map(args.size, args.size, args.seed + i)
        riskmap.save_map(m, os.path.join(args.out_dir, f"map_{i}.riskmap"))
    log.info("wrote %d maps to %s", args.count, args.out_dir)
    return EXIT_OK


def cmd_solve(args) -> int:
    m = riskmap.load_map(args.map)
    task = Task(m, args.start, args.dest, args.epsilon)
    if not m.in_bounds(args.start) or not m.in_bounds(args.dest):
        raise DimensionError("start or dest out of bounds")
    result = asd_astar(task, build_source(args.heuristic))
    print(f"nodes_explored: {result.nodes_explored}")
    print(f"wall_time_s: {result.wall_time:.6f}")
    print(f"heuristic_time_s: {result.heuristic_time:.6f}")
    if not result.found:
        print("no feasible path")
        return EXIT_NOPATH
    print(f"path_length: {result.path_length}")
    print(f"path_safety: {result.path_safety!r}")
    print("path: " + " ".join(f"{x},{y}" for x, y in result.path))
    return EXIT_OK


def cmd_gen_dataset(args) -> int:
    summary = dataset.gen_dataset(args.kind, args.size, args.count, args.seed,
                                  args.out, epsilon=args.epsilon,
                                  penalty=args.penalty)
    if args.size not in dataset.REFERENCE_SIZES[args.kind]:
        log.warning("map size %d is outside the reference sizes %s",
                    args.size, dataset.REFERENCE_SIZES[args.kind])
    print(f"written: {summary.written}")
    print(f"skipped: {summary.skipped}")
    print(f"wall_time_s: {summary.wall_time:.3f}")
    return EXIT_OK


def _bench_one(packed):
    st, spec = packed
    return evaluation.run_task(st, build_source(spec))


def cmd_benchmark(args) -> int:
    suite = evaluation.make_suite(args.size, args.maps, args.tasks, args.seed,
                                  args.epsilon)
    records = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for spec in args.heuristics:
                work = [(st, spec) for st in suite]
                records.extend(pool.map(_bench_one, work, chunksize=8))
    else:
        for spec in args.heuristics:
            source = build_source(spec)
            for st in suite:
                records.append(evaluation.run_task(st, source))
    for rec in records:
        if not rec.success:
            raise PlannerError(f"task {rec.task_id} infeasible under {rec.heuristic}")
    summary = evaluation.summarize(suite, records)
    evaluation.emit_report(summary, records, args.report, args.format)
    for h in summary.per_heuristic:
        print(f"{h.heuristic}: mean_nodes={h.mean_nodes_explored:.2f} "
              f"mean_time_ms={h.mean_search_time * 1e3:.3f} "
              f"SPL={h.spl * 100:.2f}%")
    return EXIT_OK


def cmd_downscale(args) -> int:
    m = riskmap.load_map(getattr(args, "in"))
    riskmap.save_map(riskmap.downscale(m, args.factor), args.out)
    return EXIT_OK


def make_parser() -> _Parser:
    parser = _Parser(prog="asdplanner")
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-maps", help="generate random risk maps")
    p.add_argument("--size", type=_positive, required=True)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen_maps)

    p = sub.add_parser("solve", help="solve one task on a map file")
    p.add_argument("--map", required=True)
    p.add_argument("--start", type=_cell, required=True)
    p.add_argument("--dest", type=_cell, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--heuristic", default="manhattan",
                   help="manhattan | zero | oracle | table:<path> | "
                        "riskmap2:<weights> | state:<weights>")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen-dataset", help="generate a labeled dataset")
    p.add_argument("--kind", choices=("riskmap2", "state"), required=True)
    p.add_argument("--size", type=_positive, required=True)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--penalty", type=int, default=dataset.DEFAULT_PENALTY)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("benchmark", help="run a task suite under heuristics")
    p.add_argument("--size", type=_positive, required=True)
    p.add_argument("--maps", type=_positive, default=100)
    p.add_argument("--tasks", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--heuristics", nargs="+", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("downscale", help="mean-pool a map file")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--factor", type=_positive, required=True)
    p.set_defaults(func=cmd_downscale)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = load_config(args.config)
        for key, value in defaults.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and f"--{key}" not in (argv or sys.argv):
                current = getattr(args, attr)
                if current is None:
                    setattr(args, attr, value)
    log.info("resolved config: %s",
             {k: v for k, v in vars(args).items() if k not in ("func",)})
    try:
        return args.func(args)
    except (MapFormatError, WeightFormatError, DatasetFormatError) as e:
        log.error("%s", e)
        return EXIT_FORMAT
    except (DimensionError, NoDestinationError, PlannerError) as e:
        log.error("%s", e)
        return EXIT_USAGE
    except OSError as e:
        log.error("%s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
