"""Supervised dataset generation with exact oracle labels.

Two kinds of entries:
  * riskmap2: a full per-grid heuristic field (Manhattan distance on one
    labeled optimal path, Manhattan + penalty everywhere else);
  * state: a single (cell, safety) node labeled with its exact
    constrained distance to the destination.

Files are JSONL: one header object, then one object per entry.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass

import numpy as np

from .errors import DatasetFormatError
from .oracle import exact_distance, exact_shortest_path
from .riskmap import Cell, RiskMap, generate_random_map, pick_destination
from .search import DEFAULT_EPSILON, Task, manhattan_heuristic

DATASET_FORMAT = "asdplanner-dataset"
DATASET_VERSION = 1
DEFAULT_PENALTY = 4
MAX_ATTEMPTS = 64

REFERENCE_SIZES = {"riskmap2": (16, 24, 32), "state": (16, 64)}


@dataclass
class Riskmap2Entry:
    map: RiskMap
    start: Cell
    dest: Cell
    expert_h: np.ndarray  # (height, width) ints
    epsilon: float = DEFAULT_EPSILON


@dataclass
class RiskmapStateEntry:
    map: RiskMap
    current: tuple[Cell, float]
    dest: Cell
    expert_h: int
    epsilon: float = DEFAULT_EPSILON


@dataclass
class GenSummary:
    written: int
    skipped: int
    wall_time: float


def expert_table(riskmap: RiskMap, dest: Cell, path: list[Cell],
                 penalty: int) -> np.ndarray:
    task = Task(riskmap, path[0], dest)
    on_path = set(path)
    h = np.empty((riskmap.height, riskmap.width), dtype=np.int64)
    for x, y in riskmap.cells():
        base = int(manhattan_heuristic(task, (x, y)))
        h[y, x] = base if (x, y) in on_path else base + penalty
    return h


def gen_riskmap2_entry(riskmap: RiskMap, dest: Cell, seed: int,
                       epsilon: float = DEFAULT_EPSILON,
                       penalty: int = DEFAULT_PENALTY,
                       max_attempts: int = MAX_ATTEMPTS) -> Riskmap2Entry | None:
    """Per-grid expert field for a random feasible start; None if no
    feasible start is drawn within the attempt bound."""
    rng = random.Random(seed)
    cells = list(riskmap.cells())
    for _ in range(max_attempts):
        start = cells[rng.randrange(len(cells))]
        if start == dest:
            continue
        path = exact_shortest_path(riskmap, start, 1.0, dest, epsilon)
        if path is None:
            continue
        return Riskmap2Entry(riskmap, start, dest,
                             expert_table(riskmap, dest, path, penalty), epsilon)
    return None


def gen_state_entry(riskmap: RiskMap, dest: Cell, seed: int,
                    epsilon: float = DEFAULT_EPSILON,
                    max_attempts: int = MAX_ATTEMPTS) -> RiskmapStateEntry | None:
    """One labeled search node: uniform non-high-risk cell, safety uniform
    on [0.9, 1]; None if every draw within the bound is infeasible."""
    rng = random.Random(seed)
    eligible = [c for c in riskmap.cells() if riskmap.risk_at(c) < 1.0]
    if not eligible:
        return None
    for _ in range(max_attempts):
        cell = eligible[rng.randrange(len(eligible))]
        safety = rng.uniform(0.9, 1.0)
        d = exact_distance(riskmap, cell, safety, dest, epsilon)
        if d is None:
            continue
        return RiskmapStateEntry(riskmap, (cell, safety), dest, d, epsilon)
    return None


def _risk_list(riskmap: RiskMap) -> list[float]:
    return [float(v) for v in riskmap.risk.ravel()]


def entry_to_json(entry) -> dict:
    if isinstance(entry, Riskmap2Entry):
        return {
            "risk": _risk_list(entry.map),
            "start": list(entry.start),
            "dest": list(entry.dest),
            "h": [int(v) for v in entry.expert_h.ravel()],
        }
    (cell, safety) = entry.current
    return {
        "risk": _risk_list(entry.map),
        "cur": [cell[0], cell[1], safety],
        "dest": list(entry.dest),
        "h": int(entry.expert_h),
    }


def gen_dataset(kind: str, map_size: int, n_entries: int, seed: int,
                out_path, epsilon: float = DEFAULT_EPSILON,
                penalty: int = DEFAULT_PENALTY) -> GenSummary:
    """Stream n_entries generated entries to a JSONL file. Deterministic
    from the seed; skipped entries (no feasible draw) are counted."""
    if kind not in ("riskmap2", "state"):
        raise DatasetFormatError(f"unknown dataset kind {kind!r}")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    header = {
        "format": DATASET_FORMAT, "version": DATASET_VERSION, "kind": kind,
        "map_size": map_size, "epsilon": epsilon, "penalty": penalty,
        "seed": seed,
    }
    written = skipped = 0
    with open(out_path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        while written < n_entries:
            m = generate_random_map(map_size, map_size, rng.getrandbits(32))
            dest = pick_destination(m, rng.getrandbits(32))
            entry_seed = rng.getrandbits(32)
            if kind == "riskmap2":
                entry = gen_riskmap2_entry(m, dest, entry_seed, epsilon, penalty)
            else:
                entry = gen_state_entry(m, dest, entry_seed, epsilon)
            if entry is None:
                skipped += 1
                continue
            fh.write(json.dumps(entry_to_json(entry)) + "\n")
            written += 1
    return GenSummary(written, skipped, time.perf_counter() - t0)


def load_dataset(path):
    """Parse a dataset file; returns (header, entries) with entries as
    Riskmap2Entry / RiskmapStateEntry objects."""
    with open(path) as fh:
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as e:
            raise DatasetFormatError(f"bad header: {e}") from None
        if header.get("format") != DATASET_FORMAT:
            raise DatasetFormatError(f"not an {DATASET_FORMAT} file")
        kind = header.get("kind")
        if kind not in ("riskmap2", "state"):
            raise DatasetFormatError(f"unknown dataset kind {kind!r}")
        n = header["map_size"]
        eps = header["epsilon"]
        entries = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetFormatError(f"line {lineno}: {e}") from None
            risk = np.array(obj["risk"], dtype=np.float64)
            if risk.size != n * n:
                raise DatasetFormatError(
                    f"line {lineno}: {risk.size} risks for map_size {n}"
                )
            m = RiskMap(n, n, risk.reshape(n, n))
            dest = tuple(obj["dest"])
            if kind == "riskmap2":
                h = np.array(obj["h"], dtype=np.int64).reshape(n, n)
                entries.append(Riskmap2Entry(m, tuple(obj["start"]), dest, h, eps))
            else:
                cx, cy, safety = obj["cur"]
                entries.append(RiskmapStateEntry(
                    m, ((int(cx), int(cy)), float(safety)), dest,
                    int(obj["h"]), eps))
    return header, entries
