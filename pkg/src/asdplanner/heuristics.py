"""Concrete heuristic sources for the search: static tables, the two
transformer models, and the exact oracle (testing reference)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import inference
from .errors import DimensionError
from .oracle import exact_distance
from .riskmap import Cell, RiskMap
from .search import HeuristicSource, ManhattanSource, Task, manhattan_heuristic

__all__ = [
    "HeuristicTable", "TableSource", "ZeroSource", "ManhattanSource",
    "Riskmap2Source", "StateSource", "OracleSource", "zero_table",
]


@dataclass
class HeuristicTable:
    width: int
    height: int
    h: np.ndarray  # (height, width), non-negative reals

    def __post_init__(self):
        arr = np.asarray(self.h, dtype=np.float64)
        if arr.shape != (self.height, self.width):
            raise DimensionError(
                f"table shape {arr.shape} does not match "
                f"{self.width}x{self.height}"
            )
        if not np.all(np.isfinite(arr)):
            raise DimensionError("table contains non-finite entries")
        self.h = arr

    def lookup(self, cell: Cell) -> float:
        return float(self.h[cell[1], cell[0]])


TABLE_MAGIC = "htable v1"


def save_table(table: HeuristicTable, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{TABLE_MAGIC} {table.width} {table.height}\n")
        for y in range(table.height):
            fh.write(" ".join(repr(float(v)) for v in table.h[y]))
            fh.write("\n")


def load_table(path) -> HeuristicTable:
    from .errors import MapFormatError
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or " ".join(header[:2]) != TABLE_MAGIC:
            raise MapFormatError(f"bad header in {path}")
        width, height = int(header[2]), int(header[3])
        rows = []
        for y in range(height):
            toks = fh.readline().split()
            if len(toks) != width:
                raise MapFormatError(f"row {y}: expected {width} values")
            rows.append([float(t) for t in toks])
    return HeuristicTable(width, height, np.array(rows))


def zero_table(riskmap: RiskMap) -> HeuristicTable:
    return HeuristicTable(riskmap.width, riskmap.height,
                          np.zeros((riskmap.height, riskmap.width)))


class TableSource(HeuristicSource):
    """Replay a fixed per-cell table (expert labels, precomputed fields)."""

    name = "table"

    def __init__(self, table: HeuristicTable):
        self.table = table

    def prepare(self, task):
        m = task.map
        if (self.table.width, self.table.height) != (m.width, m.height):
            raise DimensionError(
                f"table is {self.table.width}x{self.table.height}, "
                f"map is {m.width}x{m.height}"
            )

    def value(self, task, cell, safety):
        return self.table.lookup(cell)


class ZeroSource(HeuristicSource):
    """h = 0 everywhere; degenerates the search to uniform-cost."""

    name = "zero"

    def value(self, task, cell, safety):
        return 0.0


class Riskmap2Source(HeuristicSource):
    """Per-task model heuristic: one forward pass builds a full table at
    prepare time, queries are table lookups."""

    name = "riskmap2"

    def __init__(self, weights: inference.ModelWeights):
        self.weights = weights
        self.table: HeuristicTable | None = None

    def prepare(self, task):
        logits = inference.riskmap2_forward(task.map, task.start, task.dest,
                                            self.weights)
        n = self.weights.map_size
        values = inference.riskmap2_decode(logits).reshape(n, n)
        self.table = HeuristicTable(n, n, values.astype(np.float64))

    def value(self, task, cell, safety):
        return self.table.lookup(cell)


class StateSource(HeuristicSource):
    """Per-node model heuristic: one forward pass per queried node."""

    name = "state"

    def __init__(self, weights: inference.ModelWeights):
        self.weights = weights

    def value(self, task, cell, safety):
        h = inference.state_forward(task.map, cell, safety, task.dest,
                                    self.weights)
        return max(h, 0.0)


class OracleSource(HeuristicSource):
    """Perfect heuristic: the exact constrained distance. Infeasible states
    answer None so the search never inserts them."""

    name = "oracle"

    def value(self, task, cell, safety):
        d = exact_distance(task.map, cell, safety, task.dest, task.epsilon)
        return None if d is None else float(d)
