"""Exact constrained-shortest-path solvers.

Ground truth for dataset labels and tests. `exact_distance` /
`exact_shortest_path` run a Pareto label-setting sweep (exact because the
safety resource is a monotone product); `brute_force_distance` enumerates
simple paths on tiny maps as an independent cross-check.

Start-cell semantics match the search module: the departing cell's risk is
never charged, every entered cell's is.
"""

from __future__ import annotations

from .errors import DimensionError
from .riskmap import Cell, RiskMap

SAFETY_SLACK = 1e-12

# move order: up, down, left, right
MOVES = ((0, -1), (0, 1), (-1, 0), (1, 0))

BRUTE_FORCE_MAX_AREA = 36


def neighbors(riskmap: RiskMap, cell: Cell):
    x, y = cell
    for dx, dy in MOVES:
        nb = (x + dx, y + dy)
        if riskmap.in_bounds(nb):
            yield nb


def _label_sweep(riskmap, src, src_safety, dest, epsilon):
    """Layered label-setting. Returns (dist, parents) or None.

    With unit edge costs every frontier layer shares one distance, so a new
    label at a cell is non-dominated iff its safety strictly exceeds the
    best safety recorded there at any earlier-or-equal distance.
    """
    if src_safety < epsilon - SAFETY_SLACK:
        return None
    if src == dest:
        return 0, {}
    best = {src: src_safety}
    frontier = {src: src_safety}
    parents = {}
    dist = 0
    while frontier:
        dist += 1
        nxt = {}
        # sorted source order + strict-improvement updates make the chosen
        # parent the lexicographically smallest among safety ties
        for cell in sorted(frontier):
            s = frontier[cell]
            for nb in neighbors(riskmap, cell):
                ns = s * riskmap.safety_at(nb)
                if ns < epsilon - SAFETY_SLACK:
                    continue
                if ns <= best.get(nb, -1.0) or ns <= nxt.get(nb, (-1.0,))[0]:
                    continue
                nxt[nb] = (ns, cell)
        for cell, (ns, par) in nxt.items():
            best[cell] = ns
            parents[(cell, dist)] = par
        if dest in nxt:
            return dist, parents
        frontier = {cell: ns for cell, (ns, _) in nxt.items()}
    return None


def exact_distance(riskmap: RiskMap, src: Cell, src_safety: float,
                   dest: Cell, epsilon: float) -> int | None:
    """Minimum step count among paths keeping src_safety * prod(S) >= eps.

    Returns None when no feasible path exists.
    """
    res = _label_sweep(riskmap, src, src_safety, dest, epsilon)
    return None if res is None else res[0]


def exact_shortest_path(riskmap: RiskMap, src: Cell, src_safety: float,
                        dest: Cell, epsilon: float) -> list[Cell] | None:
    """One optimal feasible path (deterministic tie-break), or None."""
    res = _label_sweep(riskmap, src, src_safety, dest, epsilon)
    if res is None:
        return None
    dist, parents = res
    path = [dest]
    cell, d = dest, dist
    while d > 0:
        cell = parents[(cell, d)]
        d -= 1
        path.append(cell)
    path.reverse()
    return path


def brute_force_distance(riskmap: RiskMap, src: Cell, src_safety: float,
                         dest: Cell, epsilon: float) -> int | None:
    """Exhaustive simple-path search; independent oracle for tiny maps.

    Revisiting a cell can never help (length grows, safety cannot), so
    simple paths cover the optimum.
    """
    if riskmap.width * riskmap.height > BRUTE_FORCE_MAX_AREA:
        raise DimensionError(
            f"brute force limited to {BRUTE_FORCE_MAX_AREA} cells, got "
            f"{riskmap.width}x{riskmap.height}"
        )
    if src_safety < epsilon - SAFETY_SLACK:
        return None
    best = None
    dx, dy = dest

    def dfs(cell, safety, length, visited):
        nonlocal best
        lower = length + abs(cell[0] - dx) + abs(cell[1] - dy)
        if best is not None and lower >= best:
            return
        if cell == dest:
            best = length
            return
        for nb in neighbors(riskmap, cell):
            if nb in visited:
                continue
            ns = safety * riskmap.safety_at(nb)
            if ns < epsilon - SAFETY_SLACK:
                continue
            visited.add(nb)
            dfs(nb, ns, length + 1, visited)
            visited.remove(nb)

    dfs(src, src_safety, 0, {src})
    return best
