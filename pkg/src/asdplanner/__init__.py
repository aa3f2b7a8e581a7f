"""Risk-constrained grid path planning with pluggable (learned) heuristics."""

from .riskmap import (Cell, CellClass, RiskMap, downscale, generate_random_map,
                      load_map, path_safety, pick_destination, save_map)
from .search import (DEFAULT_EPSILON, HeuristicSource, SearchResult, Task,
                     asd_astar, manhattan_heuristic)
from .oracle import brute_force_distance, exact_distance, exact_shortest_path

__all__ = [
    "Cell", "CellClass", "RiskMap", "downscale", "generate_random_map",
    "load_map", "path_safety", "pick_destination", "save_map",
    "DEFAULT_EPSILON", "HeuristicSource", "SearchResult", "Task",
    "asd_astar", "manhattan_heuristic",
    "brute_force_distance", "exact_distance", "exact_shortest_path",
]
