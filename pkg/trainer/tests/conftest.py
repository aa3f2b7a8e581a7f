import json
import subprocess
import sys

import pytest


def gen_dataset(kind, size, count, seed, out):
    subprocess.run(
        [sys.executable, "-m", "asdplanner.cli", "gen-dataset",
         "--kind", kind, "--size", str(size), "--count", str(count),
         "--seed", str(seed), "--out", str(out)],
        check=True, capture_output=True,
    )
    return out


@pytest.fixture(scope="session")
def rm2_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "rm2_16.jsonl"
    return gen_dataset("riskmap2", 16, 1000, 0, out)


@pytest.fixture(scope="session")
def state_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "state_16.jsonl"
    return gen_dataset("state", 16, 1000, 0, out)


def truncate_dataset(src, dst, count):
    """Copy the header line plus the first `count` entries."""
    with open(src) as fh:
        lines = fh.read().splitlines()
    with open(dst, "w") as fh:
        fh.write("\n".join(lines[:count + 1]) + "\n")
    return dst


@pytest.fixture(scope="session")
def rm2_small(rm2_dataset, tmp_path_factory):
    dst = tmp_path_factory.mktemp("data") / "rm2_small.jsonl"
    return truncate_dataset(rm2_dataset, dst, 100)


@pytest.fixture(scope="session")
def state_small(state_dataset, tmp_path_factory):
    dst = tmp_path_factory.mktemp("data") / "state_small.jsonl"
    return truncate_dataset(state_dataset, dst, 100)


def read_header(path):
    with open(path) as fh:
        return json.loads(fh.readline())
