"""Benchmark harness: task suites, per-heuristic records, SPL, reports.

A suite is a deterministic set of feasible tasks sampled from freshly
generated maps. Each task's optimal length comes from the exact oracle, so
SPL never trusts the heuristic under test.
"""

from __future__ import annotations

import csv
import json
import random
import time
from dataclasses import asdict, dataclass

from .errors import DatasetFormatError, PlannerError
from .oracle import exact_distance
from .riskmap import Cell, RiskMap, generate_random_map, pick_destination
from .search import DEFAULT_EPSILON, HeuristicSource, Task, asd_astar

CSV_RECORD_HEADER = ("task_id,heuristic,success,found_length,optimal_length,"
                     "nodes_explored,wall_time_s,heuristic_time_s")
CSV_SUMMARY_HEADER = "heuristic,mean_nodes_explored,mean_search_time_s,spl"


@dataclass
class SuiteTask:
    task_id: int
    task: Task
    optimal_length: int


@dataclass
class EvalRecord:
    task_id: int
    heuristic: str
    success: int
    found_length: int
    optimal_length: int
    nodes_explored: int
    wall_time: float
    heuristic_time: float


@dataclass
class HeuristicSummary:
    heuristic: str
    mean_nodes_explored: float
    mean_search_time: float
    spl: float


@dataclass
class SuiteSummary:
    n_tasks: int
    per_heuristic: list[HeuristicSummary]


def spl(records: list[EvalRecord]) -> float:
    """Success weighted by normalized inverse path length:
    (1/N) * sum(S_i * l_i / max(p_i, l_i))."""
    if not records:
        raise PlannerError("SPL over an empty record set")
    total = 0.0
    for r in records:
        if r.success:
            total += r.optimal_length / max(r.found_length, r.optimal_length)
    return total / len(records)


def make_suite(map_size: int, n_maps: int, n_tasks: int, seed: int,
               epsilon: float = DEFAULT_EPSILON,
               max_attempts: int = 64) -> list[SuiteTask]:
    """Sample n_tasks feasible tasks (start != dest) across n_maps random
    maps; records each task's oracle-optimal length."""
    rng = random.Random(seed)
    maps = [generate_random_map(map_size, map_size, rng.getrandbits(32))
            for _ in range(n_maps)]
    suite = []
    while len(suite) < n_tasks:
        m = maps[rng.randrange(n_maps)]
        dest = pick_destination(m, rng.getrandbits(32))
        cells = [c for c in m.cells() if c != dest]
        for _ in range(max_attempts):
            start = cells[rng.randrange(len(cells))]
            opt = exact_distance(m, start, 1.0, dest, epsilon)
            if opt is not None:
                suite.append(SuiteTask(len(suite), Task(m, start, dest, epsilon), opt))
                break
    return suite


def run_task(st: SuiteTask, source: HeuristicSource) -> EvalRecord:
    res = asd_astar(st.task, source)
    if res.found and st.optimal_length > res.path_length:
        raise PlannerError(
            f"task {st.task_id}: found length {res.path_length} below the "
            f"oracle optimum {st.optimal_length}"
        )
    return EvalRecord(
        task_id=st.task_id, heuristic=source.name,
        success=1 if res.found else 0,
        found_length=res.path_length if res.found else 0,
        optimal_length=st.optimal_length,
        nodes_explored=res.nodes_explored,
        wall_time=res.wall_time, heuristic_time=res.heuristic_time,
    )


def run_suite(suite: list[SuiteTask],
              sources: list[HeuristicSource]) -> tuple[SuiteSummary, list[EvalRecord]]:
    """Run every task once per heuristic. Suite tasks are generated
    feasible, so a NoPath result aborts with the offending task id."""
    records = []
    for source in sources:
        for st in suite:
            rec = run_task(st, source)
            if not rec.success:
                raise PlannerError(
                    f"task {st.task_id} reported NoPath under "
                    f"{source.name!r} but was generated feasible"
                )
            records.append(rec)
    return summarize(suite, records), records


def summarize(suite, records: list[EvalRecord]) -> SuiteSummary:
    per = []
    names = []
    for r in records:
        if r.heuristic not in names:
            names.append(r.heuristic)
    for name in names:
        recs = [r for r in records if r.heuristic == name]
        per.append(HeuristicSummary(
            heuristic=name,
            mean_nodes_explored=sum(r.nodes_explored for r in recs) / len(recs),
            mean_search_time=sum(r.wall_time for r in recs) / len(recs),
            spl=spl(recs),
        ))
    return SuiteSummary(n_tasks=len(suite), per_heuristic=per)


def emit_report(summary: SuiteSummary, records: list[EvalRecord],
                path, fmt: str = "csv") -> None:
    if fmt == "json":
        payload = {
            "n_tasks": summary.n_tasks,
            "summary": [asdict(h) for h in summary.per_heuristic],
            "records": [asdict(r) for r in records],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    if fmt != "csv":
        raise DatasetFormatError(f"unknown report format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(CSV_RECORD_HEADER + "\n")
        writer = csv.writer(fh)
        for r in records:
            writer.writerow([r.task_id, r.heuristic, r.success, r.found_length,
                             r.optimal_length, r.nodes_explored,
                             repr(r.wall_time), repr(r.heuristic_time)])
        fh.write("\n")
        fh.write(CSV_SUMMARY_HEADER + "\n")
        for h in summary.per_heuristic:
            writer.writerow([h.heuristic, repr(h.mean_nodes_explored),
                             repr(h.mean_search_time), repr(h.spl)])


def parse_report(path, fmt: str = "csv") -> tuple[SuiteSummary, list[EvalRecord]]:
    if fmt == "json":
        with open(path) as fh:
            payload = json.load(fh)
        records = [EvalRecord(**r) for r in payload["records"]]
        per = [HeuristicSummary(**h) for h in payload["summary"]]
        return SuiteSummary(payload["n_tasks"], per), records
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_RECORD_HEADER:
        raise DatasetFormatError("bad CSV record header")
    split = lines.index("")
    records = []
    for row in csv.reader(lines[1:split]):
        records.append(EvalRecord(int(row[0]), row[1], int(row[2]), int(row[3]),
                                  int(row[4]), int(row[5]), float(row[6]),
                                  float(row[7])))
    if lines[split + 1] != CSV_SUMMARY_HEADER:
        raise DatasetFormatError("bad CSV summary header")
    per = [HeuristicSummary(row[0], float(row[1]), float(row[2]), float(row[3]))
           for row in csv.reader(lines[split + 2:]) if row]
    task_ids = {r.task_id for r in records}
    return SuiteSummary(len(task_ids), per), records
