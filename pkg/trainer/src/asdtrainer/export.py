"""Weight-bundle and fixture export in the planner's portable formats.

Bundle layout (`asdplanner-weights v1`): magic line, JSON header with the
architecture fields and a tensor table (name, shape, offset, length), then
raw little-endian float32 payloads. Fixture files are JSONL: a header
object naming the bundle, then one object per fixture holding the inputs
and this trainer's own forward-pass reference outputs.
"""

from __future__ import annotations

import json
import random

import numpy as np
import torch

from .models import Riskmap2Model, StateModel

WEIGHTS_MAGIC = b"asdplanner-weights v1"
FIXTURES_FORMAT = "asdplanner-fixtures"


def _export_tensors(model: torch.nn.Module) -> dict[str, np.ndarray]:
    return {name: t.detach().numpy().astype("<f4")
            for name, t in model.state_dict().items()
            if name != "pos"}  # pos is the derived sinusoidal table


def export_weights(model, path, penalty: int = 4) -> None:
    if isinstance(model, Riskmap2Model):
        kind, map_size = "riskmap2", model.map_size
        classes, scale = model.classes, 0.0
    elif isinstance(model, StateModel):
        kind, map_size = "state", model.max_size
        classes, scale = 0, model.scale
    else:
        raise TypeError(f"cannot export {type(model).__name__}")
    layer0 = model.layers[0]
    header = {
        "kind": kind, "map_size": map_size,
        "d": layer0.ln1.weight.shape[0], "layers": len(model.layers),
        "heads": layer0.attn.heads, "ffn": layer0.ffn.fc1.weight.shape[0],
        "classes": classes, "scale": scale, "penalty": penalty,
    }
    tensors = _export_tensors(model)
    table = []
    offset = 0
    payloads = []
    for name in sorted(tensors):
        raw = np.ascontiguousarray(tensors[name]).tobytes()
        table.append({"name": name, "shape": list(tensors[name].shape),
                      "offset": offset, "length": len(raw)})
        payloads.append(raw)
        offset += len(raw)
    header["tensors"] = table
    with open(path, "wb") as fh:
        fh.write(WEIGHTS_MAGIC + b"\n")
        fh.write(json.dumps(header).encode() + b"\n")
        for raw in payloads:
            fh.write(raw)


def _random_map_risks(n: int, rng: random.Random) -> list[float]:
    total = n * n
    third = total // 3
    risks = [0.0] * (total - 2 * third)
    risks += [0.1 * (1.0 - rng.random()) for _ in range(third)]
    risks += [1.0] * third
    rng.shuffle(risks)
    return risks


@torch.no_grad()
def export_fixtures(model, weights_name: str, n_fixtures: int, seed: int,
                    path) -> None:
    """Reference inputs + outputs from this trainer's forward pass, for
    cross-implementation checks against the planner's inference."""
    rng = random.Random(seed)
    model.eval()
    lines = []
    if isinstance(model, Riskmap2Model):
        n = model.map_size
        header = {"format": FIXTURES_FORMAT, "version": 1, "kind": "riskmap2",
                  "map_size": n, "weights": weights_name}
        for _ in range(n_fixtures):
            risks = _random_map_risks(n, rng)
            start = (rng.randrange(n), rng.randrange(n))
            dest = (rng.randrange(n), rng.randrange(n))
            logits = model(
                torch.tensor([risks]),
                torch.tensor([start[1] * n + start[0]]),
                torch.tensor([dest[1] * n + dest[0]]),
            )[0]
            lines.append({"risk": risks, "start": list(start),
                          "dest": list(dest),
                          "logits": [[float(v) for v in row]
                                     for row in logits]})
    elif isinstance(model, StateModel):
        max_size = model.max_size
        header = {"format": FIXTURES_FORMAT, "version": 1, "kind": "state",
                  "max_size": max_size, "weights": weights_name}
        for _ in range(n_fixtures):
            n = rng.choice([s for s in (4, 8, 16, 24, 32, 64) if s <= max_size])
            risks = _random_map_risks(n, rng)
            cur = (rng.randrange(n), rng.randrange(n))
            safety = rng.uniform(0.9, 1.0)
            dest = (rng.randrange(n), rng.randrange(n))
            padded = torch.ones(max_size, max_size)
            padded[:n, :n] = torch.tensor(risks).view(n, n)
            h = model(
                padded.view(1, -1),
                torch.tensor([[cur[0], cur[1], safety]]),
                torch.tensor([dest], dtype=torch.float32),
            )[0]
            lines.append({"risk": risks, "size": n,
                          "cur": [cur[0], cur[1], safety],
                          "dest": list(dest), "h": float(h)})
    else:
        raise TypeError(f"cannot export fixtures for {type(model).__name__}")
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for line in lines:
            fh.write(json.dumps(line) + "\n")
