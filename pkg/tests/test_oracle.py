import random

import numpy as np
import pytest

from asdplanner.errors import DimensionError
from asdplanner.oracle import (brute_force_distance, exact_distance,
                               exact_shortest_path)
from asdplanner.riskmap import RiskMap, generate_random_map, path_safety


class TestFig2:
    def test_distance(self, fig2_map):
        assert exact_distance(fig2_map, (1, 0), 1.0, (0, 1), 0.9) == 2

    def test_brute_force(self, fig2_map):
        assert brute_force_distance(fig2_map, (1, 0), 1.0, (0, 1), 0.9) == 2

    def test_path(self, fig2_map):
        assert exact_shortest_path(fig2_map, (1, 0), 1.0, (0, 1), 0.9) == \
            [(1, 0), (1, 1), (0, 1)]


class TestTrivial:
    def test_src_equals_dest(self, fig2_map):
        assert exact_distance(fig2_map, (1, 1), 1.0, (1, 1), 0.9) == 0
        assert exact_shortest_path(fig2_map, (1, 1), 1.0, (1, 1), 0.9) == [(1, 1)]
        assert brute_force_distance(fig2_map, (1, 1), 1.0, (1, 1), 0.9) == 0

    def test_isolated_dest_infeasible(self):
        risk = np.ones((3, 3))
        risk[0, 0] = 0.0   # start corner
        risk[1, 1] = 0.0   # dest ringed by high-risk cells
        m = RiskMap(3, 3, risk)
        assert exact_distance(m, (0, 0), 1.0, (1, 1), 0.9) is None
        assert brute_force_distance(m, (0, 0), 1.0, (1, 1), 0.9) is None

    def test_brute_force_size_cap(self):
        m = generate_random_map(7, 7, seed=0)
        with pytest.raises(DimensionError):
            brute_force_distance(m, (0, 0), 1.0, (6, 6), 0.9)


def random_queries(size, n_maps, n_queries, seed):
    rng = random.Random(seed)
    for _ in range(n_maps):
        m = generate_random_map(size, size, rng.getrandbits(32))
        for _ in range(n_queries):
            src = (rng.randrange(size), rng.randrange(size))
            dst = (rng.randrange(size), rng.randrange(size))
            safety = rng.uniform(0.9, 1.0)
            yield m, src, safety, dst


class TestCrossCheck:
    def test_label_setting_vs_brute_force_6x6(self):
        n = 0
        for m, src, safety, dst in random_queries(6, 50, 20, seed=10):
            assert exact_distance(m, src, safety, dst, 0.9) == \
                brute_force_distance(m, src, safety, dst, 0.9)
            n += 1
        assert n == 1000

    def test_label_setting_vs_brute_force_4x4_sweep(self):
        for i in range(100):
            m = generate_random_map(4, 4, seed=1000 + i)
            dst = (3, 3)
            for src in m.cells():
                assert exact_distance(m, src, 1.0, dst, 0.9) == \
                    brute_force_distance(m, src, 1.0, dst, 0.9)


class TestProperties:
    def test_path_matches_distance_and_is_feasible(self):
        rng = random.Random(20)
        checked = 0
        for m, src, safety, dst in random_queries(16, 50, 20, seed=20):
            d = exact_distance(m, src, safety, dst, 0.9)
            p = exact_shortest_path(m, src, safety, dst, 0.9)
            if d is None:
                assert p is None
                continue
            assert len(p) - 1 == d
            assert p[0] == src and p[-1] == dst
            for a, b in zip(p, p[1:]):
                assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
            assert safety * path_safety(m, p) >= 0.9 - 1e-12
            checked += 1
        assert checked >= 50

    def test_monotone_in_budget(self):
        for m, src, _, dst in random_queries(8, 20, 10, seed=30):
            lo = exact_distance(m, src, 0.92, dst, 0.9)
            hi = exact_distance(m, src, 1.0, dst, 0.9)
            if lo is not None:
                assert hi is not None and hi <= lo

    def test_monotone_in_epsilon(self):
        for m, src, safety, dst in random_queries(8, 20, 10, seed=40):
            strict = exact_distance(m, src, safety, dst, 0.95)
            loose = exact_distance(m, src, safety, dst, 0.9)
            if strict is not None:
                assert loose is not None and loose <= strict

    def test_manhattan_admissible(self):
        count = 0
        for m, src, safety, dst in random_queries(8, 50, 20, seed=50):
            d = exact_distance(m, src, safety, dst, 0.9)
            if d is not None:
                assert abs(src[0] - dst[0]) + abs(src[1] - dst[1]) <= d
                count += 1
        assert count >= 100

    def test_deterministic_reconstruction(self):
        for m, src, safety, dst in random_queries(10, 10, 5, seed=60):
            a = exact_shortest_path(m, src, safety, dst, 0.9)
            b = exact_shortest_path(m, src, safety, dst, 0.9)
            assert a == b
