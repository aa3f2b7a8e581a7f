"""Safety-dimension A*: best-first search over (cell, accumulated safety)
states with pluggable heuristics and per-cell Pareto dominance pruning.

Search nodes carry the product of per-cell safeties along their path
(start cell excluded, every entered cell included) and are pruned as soon
as that product drops below the task threshold. Tie-break on equal f:
higher g, then higher safety, then insertion order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heappop, heappush

from .oracle import SAFETY_SLACK, neighbors
from .riskmap import Cell, RiskMap, path_safety

DEFAULT_EPSILON = 0.9


@dataclass(frozen=True)
class Task:
    map: RiskMap
    start: Cell
    dest: Cell
    epsilon: float = DEFAULT_EPSILON


@dataclass
class SearchNode:
    cell: Cell
    safety: float
    g: int
    f: float
    parent: "SearchNode | None" = None


@dataclass
class SearchResult:
    path: list[Cell] | None
    path_length: int
    path_safety: float
    nodes_explored: int
    wall_time: float
    heuristic_time: float

    @property
    def found(self) -> bool:
        return self.path is not None


class HeuristicSource:
    """Supplier of h-values for the search.

    `prepare` runs once per task (no-op by default); `value` returns a
    finite h >= 0 for a (cell, safety) state, or None to signal the state
    has no feasible completion and must not be inserted.
    """

    name = "heuristic"

    def prepare(self, task: Task) -> None:
        pass

    def value(self, task: Task, cell: Cell, safety: float) -> float | None:
        raise NotImplementedError


def manhattan_heuristic(task: Task, cell: Cell) -> float:
    """|dx| + |dy| to the destination; admissible under unit-cost moves."""
    return abs(cell[0] - task.dest[0]) + abs(cell[1] - task.dest[1])


class ManhattanSource(HeuristicSource):
    name = "manhattan"

    def value(self, task, cell, safety):
        return manhattan_heuristic(task, cell)


class _Dominance:
    """Per-cell Pareto frontier of (g, safety) pairs over expanded states."""

    def __init__(self):
        self.expanded: dict[Cell, list[tuple[int, float]]] = {}

    def dominated(self, cell: Cell, g: int, safety: float) -> bool:
        for g2, s2 in self.expanded.get(cell, ()):
            if g2 <= g and s2 >= safety - SAFETY_SLACK:
                return True
        return False

    def add(self, cell: Cell, g: int, safety: float) -> None:
        entries = self.expanded.setdefault(cell, [])
        entries[:] = [(g2, s2) for g2, s2 in entries
                      if not (g <= g2 and safety >= s2)]
        entries.append((g, safety))


def asd_astar(task: Task, source: HeuristicSource) -> SearchResult:
    """Run safety-dimension A* on a task; always terminates, returning a
    NoPath result (path=None) when no feasible path exists."""
    t0 = time.perf_counter()
    heuristic_time = 0.0

    def timed_value(cell, safety):
        nonlocal heuristic_time
        th = time.perf_counter()
        h = source.value(task, cell, safety)
        heuristic_time += time.perf_counter() - th
        return h

    th = time.perf_counter()
    source.prepare(task)
    heuristic_time += time.perf_counter() - th

    m, eps = task.map, task.epsilon
    if task.start == task.dest:
        return SearchResult([task.start], 0, 1.0, 1,
                            time.perf_counter() - t0, heuristic_time)

    # node table: (cell, safety, g, parent_index)
    nodes: list[tuple[Cell, float, int, int]] = []
    heap: list[tuple[float, int, float, int, int]] = []
    seq = 0

    def push(cell, safety, g, parent_idx, h):
        nonlocal seq
        nodes.append((cell, safety, g, parent_idx))
        heappush(heap, (g + h, -g, -safety, seq, len(nodes) - 1))
        seq += 1

    store = _Dominance()
    explored = 0
    h0 = timed_value(task.start, 1.0)
    if h0 is not None:
        push(task.start, 1.0, 0, -1, h0)

    while heap:
        _, _, _, _, idx = heappop(heap)
        cell, safety, g, parent_idx = nodes[idx]
        if store.dominated(cell, g, safety):
            continue
        explored += 1
        if cell == task.dest:
            path = []
            i = idx
            while i != -1:
                path.append(nodes[i][0])
                i = nodes[i][3]
            path.reverse()
            return SearchResult(path, g, path_safety(m, path), explored,
                                time.perf_counter() - t0, heuristic_time)
        store.add(cell, g, safety)
        for nb in neighbors(m, cell):
            ns = safety * m.safety_at(nb)
            if ns < eps - SAFETY_SLACK:
                continue
            if store.dominated(nb, g + 1, ns):
                continue
            h = timed_value(nb, ns)
            if h is None:
                continue
            push(nb, ns, g + 1, idx, h)

    return SearchResult(None, 0, 0.0, explored,
                        time.perf_counter() - t0, heuristic_time)
