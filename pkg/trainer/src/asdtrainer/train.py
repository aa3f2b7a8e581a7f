"""Training loops for both heuristic models.

Riskmap2 is a per-grid classifier trained with cross-entropy (one map size
per run); the state model is a regressor trained with MSE on padded maps
(sizes may be mixed). Defaults (Adam, lr 3e-4, batch 64) are chosen for
stable desk-scale convergence and recorded in the exported metadata.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import torch
from torch import nn

from . import data
from .export import export_weights
from .models import Riskmap2Model, StateModel


@dataclass
class TrainConfig:
    dataset_path: str
    kind: str                      # "riskmap2" or "state"
    export_path: str | None = None
    d: int = 64
    layers: int = 3
    heads: int = 4
    ffn: int = 256
    classes: int = 0               # riskmap2; 0 -> derive from map size
    max_size: int = 64             # state
    scale: float = 0.0             # state; 0 -> derive from max size
    batch_size: int = 64
    lr: float = 3e-4
    epochs: int = 20
    seed: int = 0
    val_fraction: float = 0.1


@dataclass
class TrainReport:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    config: dict = field(default_factory=dict)


def _batches(n: int, batch_size: int, generator: torch.Generator):
    order = torch.randperm(n, generator=generator)
    for i in range(0, n, batch_size):
        yield order[i:i + batch_size]


def build_model(cfg: TrainConfig, map_size: int):
    torch.manual_seed(cfg.seed)
    if cfg.kind == "riskmap2":
        classes = cfg.classes or 2 * (map_size - 1) + 4 + 1
        return Riskmap2Model(map_size, cfg.d, cfg.layers, cfg.heads,
                             cfg.ffn, classes)
    if cfg.kind == "state":
        scale = cfg.scale or float(2 * (cfg.max_size - 1) * 2)
        return StateModel(cfg.max_size, cfg.d, cfg.layers, cfg.heads,
                          cfg.ffn, scale)
    raise ValueError(f"unknown kind {cfg.kind!r}")


def _run(model, loss_fn, forward, labels, cfg: TrainConfig,
         penalty: int) -> TrainReport:
    t0 = time.perf_counter()
    n = labels.shape[0]
    train_idx, val_idx = data.split_train_val(n, cfg.val_fraction)
    train_idx = torch.tensor(train_idx)
    val_idx = torch.tensor(val_idx)
    opt = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    gen = torch.Generator().manual_seed(cfg.seed)
    report = TrainReport(config=asdict(cfg))
    for _ in range(cfg.epochs):
        model.train()
        total = 0.0
        seen = 0
        for batch in _batches(len(train_idx), cfg.batch_size, gen):
            idx = train_idx[batch]
            opt.zero_grad()
            loss = loss_fn(forward(idx), labels[idx])
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
            seen += len(idx)
        report.train_loss.append(total / seen)
        if len(val_idx):
            model.eval()
            with torch.no_grad():
                report.val_loss.append(
                    float(loss_fn(forward(val_idx), labels[val_idx])))
    report.wall_time = time.perf_counter() - t0
    if cfg.export_path:
        export_weights(model, cfg.export_path, penalty=penalty)
        with open(str(cfg.export_path) + ".metrics.json", "w") as fh:
            json.dump(asdict(report), fh, indent=2)
    return report


def train_riskmap2(cfg: TrainConfig) -> tuple[Riskmap2Model, TrainReport]:
    header, entries = data.load_jsonl(cfg.dataset_path)
    if header["kind"] != "riskmap2":
        raise data.DatasetError(f"expected riskmap2 dataset, got {header['kind']}")
    risks, start, dest, labels = data.riskmap2_tensors(header, entries)
    model = build_model(cfg, header["map_size"])
    if int(labels.max()) >= model.classes:
        raise data.DatasetError(
            f"label {int(labels.max())} outside the {model.classes}-class head")
    ce = nn.CrossEntropyLoss()

    def loss_fn(logits, y):
        return ce(logits.reshape(-1, model.classes), y.reshape(-1))

    report = _run(model, loss_fn,
                  lambda idx: model(risks[idx], start[idx], dest[idx]),
                  labels, cfg, penalty=header.get("penalty", 4))
    return model, report


def train_state(cfg: TrainConfig) -> tuple[StateModel, TrainReport]:
    header, entries = data.load_jsonl(cfg.dataset_path)
    if header["kind"] != "state":
        raise data.DatasetError(f"expected state dataset, got {header['kind']}")
    model = build_model(cfg, header["map_size"])
    risks, cur, dest, labels = data.state_tensors(header, entries, cfg.max_size)
    mse = nn.MSELoss()
    report = _run(model, mse,
                  lambda idx: model(risks[idx], cur[idx], dest[idx]),
                  labels, cfg, penalty=header.get("penalty", 4))
    return model, report
