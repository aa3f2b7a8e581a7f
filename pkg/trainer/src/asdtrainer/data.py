"""Dataset JSONL loading into training tensors.

Reads the planner's dataset files (header line + one JSON object per
entry); see the planner docs for the schema.
"""

from __future__ import annotations

import json

import torch

DATASET_FORMAT = "asdplanner-dataset"


class DatasetError(Exception):
    pass


def load_jsonl(path):
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != DATASET_FORMAT:
            raise DatasetError(f"{path} is not an {DATASET_FORMAT} file")
        entries = [json.loads(line) for line in fh if line.strip()]
    return header, entries


def riskmap2_tensors(header, entries):
    """-> risks (n, N^2) float, start/dest tokens (n,) long, labels (n, N^2) long."""
    n = header["map_size"]
    risks = torch.tensor([e["risk"] for e in entries], dtype=torch.float32)
    start = torch.tensor([e["start"][1] * n + e["start"][0] for e in entries])
    dest = torch.tensor([e["dest"][1] * n + e["dest"][0] for e in entries])
    labels = torch.tensor([e["h"] for e in entries], dtype=torch.long)
    return risks, start, dest, labels


def state_tensors(header, entries, max_size: int):
    """-> padded risks (n, max_size^2), cur (n, 3), dest (n, 2), labels (n,).

    Maps smaller than max_size are padded bottom/right with risk-1 cells.
    """
    n = header["map_size"]
    if n > max_size:
        raise DatasetError(f"map_size {n} exceeds model max {max_size}")
    count = len(entries)
    risks = torch.ones(count, max_size, max_size)
    grid = torch.tensor([e["risk"] for e in entries],
                        dtype=torch.float32).view(count, n, n)
    risks[:, :n, :n] = grid
    cur = torch.tensor([e["cur"] for e in entries], dtype=torch.float32)
    dest = torch.tensor([e["dest"] for e in entries], dtype=torch.float32)
    labels = torch.tensor([e["h"] for e in entries], dtype=torch.float32)
    return risks.view(count, -1), cur, dest, labels


def split_train_val(n: int, val_fraction: float = 0.1):
    """Deterministic split by entry index: the trailing fraction is
    validation."""
    n_val = int(n * val_fraction)
    n_train = n - n_val
    return list(range(n_train)), list(range(n_train, n))
