"""From-scratch forward passes for the two encoder-only heuristic models,
plus the portable weight-bundle file format.

Both models share a standard post-norm transformer encoder (multi-head
scaled-dot-product self-attention, residual + layernorm, ReLU feed-forward,
residual + layernorm; no attention mask). The per-grid classifier model
("riskmap2") embeds the flattened risk sequence plus broadcast start/dest
token embeddings with no positional encoding; the per-node regressor
("state") pads the map with risk-1 cells to a fixed size, adds sinusoidal
positional encodings, appends one task token, and squashes the task token's
head output through a sigmoid scaled to the bundle's output range.

Weight tensors follow the (out_features, in_features) linear convention:
y = x @ W.T + b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, WeightFormatError
from .riskmap import Cell, RiskMap

WEIGHTS_MAGIC = b"asdplanner-weights v1"
LN_EPS = 1e-5

KIND_RISKMAP2 = "riskmap2"
KIND_STATE = "state"


@dataclass
class ModelWeights:
    kind: str                 # "riskmap2" or "state"
    map_size: int             # N for riskmap2, max padded size for state
    d: int
    layers: int
    heads: int
    ffn: int
    classes: int = 0          # riskmap2 only
    scale: float = 0.0        # state only
    penalty: int = 4          # provenance echo of the dataset penalty
    tensors: dict[str, np.ndarray] = field(default_factory=dict)


def _layer_names(i: int, d: int, ffn: int) -> dict[str, tuple[int, ...]]:
    p = f"layers.{i}."
    return {
        p + "attn.q.weight": (d, d), p + "attn.q.bias": (d,),
        p + "attn.k.weight": (d, d), p + "attn.k.bias": (d,),
        p + "attn.v.weight": (d, d), p + "attn.v.bias": (d,),
        p + "attn.out.weight": (d, d), p + "attn.out.bias": (d,),
        p + "ln1.weight": (d,), p + "ln1.bias": (d,),
        p + "ffn.fc1.weight": (ffn, d), p + "ffn.fc1.bias": (ffn,),
        p + "ffn.fc2.weight": (d, ffn), p + "ffn.fc2.bias": (d,),
        p + "ln2.weight": (d,), p + "ln2.bias": (d,),
    }


def tensor_schema(w: ModelWeights) -> dict[str, tuple[int, ...]]:
    """Every tensor the architecture graph requires, with its shape."""
    d, ffn = w.d, w.ffn
    names: dict[str, tuple[int, ...]] = {
        "risk_embed.weight": (d, 1), "risk_embed.bias": (d,),
    }
    if w.kind == KIND_RISKMAP2:
        names["token_embed"] = (w.map_size * w.map_size, d)
        names["head.weight"] = (w.classes, d)
        names["head.bias"] = (w.classes,)
    elif w.kind == KIND_STATE:
        names["cur_embed.weight"] = (d, 3)
        names["cur_embed.bias"] = (d,)
        names["dest_embed.weight"] = (d, 2)
        names["dest_embed.bias"] = (d,)
        names["head.weight"] = (1, d)
        names["head.bias"] = (1,)
    else:
        raise WeightFormatError(f"unknown architecture kind {w.kind!r}")
    for i in range(w.layers):
        names.update(_layer_names(i, d, ffn))
    return names


def validate_weights(w: ModelWeights) -> None:
    schema = tensor_schema(w)
    for name, shape in schema.items():
        if name not in w.tensors:
            raise WeightFormatError(f"missing tensor {name!r}")
        t = w.tensors[name]
        if tuple(t.shape) != shape:
            raise WeightFormatError(
                f"tensor {name!r} has shape {tuple(t.shape)}, expected {shape}"
            )
        if not np.all(np.isfinite(t)):
            raise WeightFormatError(f"tensor {name!r} contains non-finite values")
    for name in w.tensors:
        if name not in schema:
            raise WeightFormatError(f"unexpected tensor {name!r}")


def save_weights(w: ModelWeights, path) -> None:
    validate_weights(w)
    table = []
    offset = 0
    payloads = []
    for name in sorted(w.tensors):
        t = np.ascontiguousarray(w.tensors[name], dtype="<f4")
        raw = t.tobytes()
        table.append({"name": name, "shape": list(t.shape),
                      "offset": offset, "length": len(raw)})
        payloads.append(raw)
        offset += len(raw)
    header = {
        "kind": w.kind, "map_size": w.map_size, "d": w.d,
        "layers": w.layers, "heads": w.heads, "ffn": w.ffn,
        "classes": w.classes, "scale": w.scale, "penalty": w.penalty,
        "tensors": table,
    }
    with open(path, "wb") as fh:
        fh.write(WEIGHTS_MAGIC + b"\n")
        fh.write(json.dumps(header).encode() + b"\n")
        for raw in payloads:
            fh.write(raw)


def load_weights(path) -> ModelWeights:
    with open(path, "rb") as fh:
        magic = fh.readline().rstrip(b"\n")
        if magic != WEIGHTS_MAGIC:
            raise WeightFormatError(f"bad magic in {path}")
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as e:
            raise WeightFormatError(f"unparsable header in {path}: {e}") from None
        payload = fh.read()
    try:
        w = ModelWeights(
            kind=header["kind"], map_size=int(header["map_size"]),
            d=int(header["d"]), layers=int(header["layers"]),
            heads=int(header["heads"]), ffn=int(header["ffn"]),
            classes=int(header.get("classes", 0)),
            scale=float(header.get("scale", 0.0)),
            penalty=int(header.get("penalty", 4)),
        )
        table = header["tensors"]
    except (KeyError, TypeError, ValueError) as e:
        raise WeightFormatError(f"incomplete header in {path}: {e}") from None
    for ent in table:
        name, shape = ent["name"], tuple(ent["shape"])
        raw = payload[ent["offset"]:ent["offset"] + ent["length"]]
        if len(raw) != ent["length"]:
            raise WeightFormatError(f"truncated payload for tensor {name!r}")
        t = np.frombuffer(raw, dtype="<f4")
        if t.size != int(np.prod(shape)):
            raise WeightFormatError(
                f"tensor {name!r} payload holds {t.size} values for shape {shape}"
            )
        w.tensors[name] = t.reshape(shape).copy()
    validate_weights(w)
    return w


def random_weights(kind: str, map_size: int, d: int = 32, layers: int = 2,
                   heads: int = 4, ffn: int = 64, classes: int = 0,
                   scale: float = 252.0, penalty: int = 4,
                   seed: int = 0) -> ModelWeights:
    """Randomly initialized bundle (tests and fixtures)."""
    if kind == KIND_RISKMAP2 and classes == 0:
        classes = 2 * (map_size - 1) + penalty + 1
    w = ModelWeights(kind, map_size, d, layers, heads, ffn,
                     classes=classes if kind == KIND_RISKMAP2 else 0,
                     scale=scale if kind == KIND_STATE else 0.0,
                     penalty=penalty)
    rng = np.random.default_rng(seed)
    for name, shape in tensor_schema(w).items():
        if name.endswith("ln1.weight") or name.endswith("ln2.weight"):
            t = np.ones(shape)
        elif name.endswith(".bias"):
            t = np.zeros(shape)
        else:
            fan_in = shape[-1] if len(shape) > 1 else shape[0]
            t = rng.normal(0.0, fan_in ** -0.5, shape)
        w.tensors[name] = t.astype(np.float32)
    return w


# ---------------------------------------------------------------------------
# numerics

def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = x - np.max(x, axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=axis, keepdims=True)


def layer_norm(x: np.ndarray, gamma: np.ndarray, beta: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mean) / np.sqrt(var + LN_EPS) * gamma + beta


def multi_head_attention(x: np.ndarray, w: ModelWeights, layer: int):
    """Self-attention for one layer. Returns (output, attn) where attn has
    shape (heads, seq, seq) and each row sums to 1."""
    d, H = w.d, w.heads
    dh = d // H
    t = w.tensors
    p = f"layers.{layer}.attn."
    q = x @ t[p + "q.weight"].T + t[p + "q.bias"]
    k = x @ t[p + "k.weight"].T + t[p + "k.bias"]
    v = x @ t[p + "v.weight"].T + t[p + "v.bias"]
    seq = x.shape[0]
    q = q.reshape(seq, H, dh).transpose(1, 0, 2)
    k = k.reshape(seq, H, dh).transpose(1, 0, 2)
    v = v.reshape(seq, H, dh).transpose(1, 0, 2)
    scores = q @ k.transpose(0, 2, 1) / np.sqrt(np.float32(dh))
    attn = softmax(scores, axis=-1)
    ctx = (attn @ v).transpose(1, 0, 2).reshape(seq, d)
    out = ctx @ t[p + "out.weight"].T + t[p + "out.bias"]
    return out, attn


def encoder_forward(x: np.ndarray, w: ModelWeights,
                    n_layers: int | None = None) -> np.ndarray:
    """Post-norm encoder stack over a (seq, d) input."""
    if x.ndim != 2 or x.shape[1] != w.d:
        raise DimensionError(f"encoder input shape {x.shape} incompatible with d={w.d}")
    n = w.layers if n_layers is None else n_layers
    t = w.tensors
    for i in range(n):
        p = f"layers.{i}."
        attn_out, _ = multi_head_attention(x, w, i)
        x = layer_norm(x + attn_out, t[p + "ln1.weight"], t[p + "ln1.bias"])
        hidden = np.maximum(x @ t[p + "ffn.fc1.weight"].T + t[p + "ffn.fc1.bias"], 0.0)
        ff = hidden @ t[p + "ffn.fc2.weight"].T + t[p + "ffn.fc2.bias"]
        x = layer_norm(x + ff, t[p + "ln2.weight"], t[p + "ln2.bias"])
    return x


def flatten(riskmap: RiskMap) -> np.ndarray:
    """Row-major flattening: cell (x, y) lands at index y*N + x."""
    if riskmap.width != riskmap.height:
        raise DimensionError("flatten requires a square map")
    return riskmap.risk.ravel().astype(np.float32)


def cell_token(cell: Cell, n: int) -> int:
    return cell[1] * n + cell[0]


def sinusoidal_encoding(seq: int, d: int) -> np.ndarray:
    pos = np.arange(seq, dtype=np.float32)[:, None]
    i = np.arange(d // 2, dtype=np.float32)[None, :]
    angle = pos / np.power(10000.0, 2.0 * i / d)
    pe = np.zeros((seq, d), dtype=np.float32)
    pe[:, 0::2] = np.sin(angle)
    pe[:, 1::2] = np.cos(angle)
    return pe


def _embed_risks(seq: np.ndarray, w: ModelWeights) -> np.ndarray:
    t = w.tensors
    return seq[:, None] @ t["risk_embed.weight"].T + t["risk_embed.bias"]


def riskmap2_forward(riskmap: RiskMap, start: Cell, dest: Cell,
                     w: ModelWeights, shape_audit: bool = False) -> np.ndarray:
    """Per-grid class logits, shape (N*N, classes). No positional encoding;
    start/dest token embeddings are broadcast-summed onto every position."""
    if w.kind != KIND_RISKMAP2:
        raise WeightFormatError(f"expected riskmap2 bundle, got {w.kind!r}")
    n = w.map_size
    if riskmap.width != n or riskmap.height != n:
        raise DimensionError(
            f"map is {riskmap.width}x{riskmap.height}, model expects {n}x{n}"
        )
    t = w.tensors
    seq = flatten(riskmap)
    x = _embed_risks(seq, w)
    x = x + t["token_embed"][cell_token(start, n)] + t["token_embed"][cell_token(dest, n)]
    x = x.astype(np.float32)
    if shape_audit:
        assert x.shape == (n * n, w.d)
    x = encoder_forward(x, w)
    logits = x @ t["head.weight"].T + t["head.bias"]
    if shape_audit:
        assert logits.shape == (n * n, w.classes)
    return logits


def riskmap2_decode(logits: np.ndarray) -> np.ndarray:
    """Per-grid heuristic = argmax class index (ties -> lowest index).
    Returns a flat (N*N,) int array in flattening order."""
    return np.argmax(logits, axis=1)


def state_forward(riskmap: RiskMap, cur: Cell, safety: float, dest: Cell,
                  w: ModelWeights, shape_audit: bool = False) -> float:
    """Scalar heuristic for one search node; output lies in [0, scale]."""
    if w.kind != KIND_STATE:
        raise WeightFormatError(f"expected state bundle, got {w.kind!r}")
    n = w.map_size
    if riskmap.width > n or riskmap.height > n:
        raise DimensionError(
            f"map is {riskmap.width}x{riskmap.height}, model max is {n}x{n}"
        )
    padded = np.ones((n, n), dtype=np.float32)
    padded[:riskmap.height, :riskmap.width] = riskmap.risk
    t = w.tensors
    x = _embed_risks(padded.ravel(), w)
    x = x + sinusoidal_encoding(n * n, w.d)
    task_vec = (np.array([cur[0], cur[1], safety], dtype=np.float32)
                @ t["cur_embed.weight"].T + t["cur_embed.bias"])
    task_vec = task_vec + (np.array(dest, dtype=np.float32)
                           @ t["dest_embed.weight"].T + t["dest_embed.bias"])
    x = np.vstack([x, task_vec[None, :]]).astype(np.float32)
    if shape_audit:
        assert x.shape == (n * n + 1, w.d)
    x = encoder_forward(x, w)
    z = float(x[-1] @ t["head.weight"].T[:, 0] + t["head.bias"][0])
    if z >= 0:
        sig = 1.0 / (1.0 + np.exp(-z))
    else:
        e = np.exp(z)
        sig = e / (1.0 + e)
    return float(w.scale * sig)
