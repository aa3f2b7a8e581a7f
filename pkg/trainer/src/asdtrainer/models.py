"""Torch implementations of the two heuristic models.

The equations here are the export contract: the planner's from-scratch
forward pass must reproduce these within 1e-4, so every operation is the
plain post-norm encoder recipe (scaled dot-product attention over split
heads, residual + LayerNorm(eps=1e-5), ReLU feed-forward) with no dropout
and no attention mask.
"""

from __future__ import annotations

import math

import torch
from torch import nn


def sinusoidal_encoding(seq: int, d: int) -> torch.Tensor:
    pos = torch.arange(seq, dtype=torch.float32).unsqueeze(1)
    i = torch.arange(d // 2, dtype=torch.float32).unsqueeze(0)
    angle = pos / torch.pow(torch.tensor(10000.0), 2.0 * i / d)
    pe = torch.zeros(seq, d)
    pe[:, 0::2] = torch.sin(angle)
    pe[:, 1::2] = torch.cos(angle)
    return pe


class SelfAttention(nn.Module):
    def __init__(self, d: int, heads: int):
        super().__init__()
        assert d % heads == 0
        self.heads = heads
        self.q = nn.Linear(d, d)
        self.k = nn.Linear(d, d)
        self.v = nn.Linear(d, d)
        self.out = nn.Linear(d, d)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        b, s, d = x.shape
        dh = d // self.heads
        q = self.q(x).view(b, s, self.heads, dh).transpose(1, 2)
        k = self.k(x).view(b, s, self.heads, dh).transpose(1, 2)
        v = self.v(x).view(b, s, self.heads, dh).transpose(1, 2)
        scores = q @ k.transpose(-2, -1) / math.sqrt(dh)
        ctx = torch.softmax(scores, dim=-1) @ v
        ctx = ctx.transpose(1, 2).reshape(b, s, d)
        return self.out(ctx)


class FeedForward(nn.Module):
    def __init__(self, d: int, ffn: int):
        super().__init__()
        self.fc1 = nn.Linear(d, ffn)
        self.fc2 = nn.Linear(ffn, d)

    def forward(self, x):
        return self.fc2(torch.relu(self.fc1(x)))


class EncoderLayer(nn.Module):
    def __init__(self, d: int, heads: int, ffn: int):
        super().__init__()
        self.attn = SelfAttention(d, heads)
        self.ln1 = nn.LayerNorm(d)
        self.ffn = FeedForward(d, ffn)
        self.ln2 = nn.LayerNorm(d)

    def forward(self, x):
        x = self.ln1(x + self.attn(x))
        return self.ln2(x + self.ffn(x))


class RiskEmbed(nn.Module):
    """Single affine map from a risk scalar to the model width."""

    def __init__(self, d: int):
        super().__init__()
        self.weight = nn.Parameter(torch.empty(d, 1))
        self.bias = nn.Parameter(torch.zeros(d))
        nn.init.normal_(self.weight, std=1.0)

    def forward(self, risks: torch.Tensor) -> torch.Tensor:
        # risks: (b, s) -> (b, s, d)
        return risks.unsqueeze(-1) @ self.weight.t() + self.bias


class Riskmap2Model(nn.Module):
    """Per-grid heuristic classifier: no positional encoding, start/dest
    token embeddings broadcast-summed onto every grid position."""

    def __init__(self, map_size: int, d: int, layers: int, heads: int,
                 ffn: int, classes: int):
        super().__init__()
        self.map_size = map_size
        self.classes = classes
        self.token_embed = nn.Parameter(
            torch.randn(map_size * map_size, d) * d ** -0.5)
        self.risk_embed = RiskEmbed(d)
        self.layers = nn.ModuleList(
            EncoderLayer(d, heads, ffn) for _ in range(layers))
        self.head = nn.Linear(d, classes)

    def forward(self, risks: torch.Tensor, start_tok: torch.Tensor,
                dest_tok: torch.Tensor) -> torch.Tensor:
        x = self.risk_embed(risks)
        x = x + self.token_embed[start_tok].unsqueeze(1)
        x = x + self.token_embed[dest_tok].unsqueeze(1)
        for layer in self.layers:
            x = layer(x)
        return self.head(x)


class StateModel(nn.Module):
    """Per-node heuristic regressor: sinusoidal positions on the padded
    grid sequence, one appended task token (no position), sigmoid output
    scaled to [0, scale]."""

    def __init__(self, max_size: int, d: int, layers: int, heads: int,
                 ffn: int, scale: float):
        super().__init__()
        self.max_size = max_size
        self.scale = scale
        self.risk_embed = RiskEmbed(d)
        self.cur_embed = nn.Linear(3, d)
        self.dest_embed = nn.Linear(2, d)
        self.register_buffer("pos", sinusoidal_encoding(max_size * max_size, d))
        self.layers = nn.ModuleList(
            EncoderLayer(d, heads, ffn) for _ in range(layers))
        self.head = nn.Linear(d, 1)

    def forward(self, risks: torch.Tensor, cur: torch.Tensor,
                dest: torch.Tensor) -> torch.Tensor:
        # risks: (b, max_size^2) already padded with 1.0; cur: (b, 3);
        # dest: (b, 2) -> (b,) heuristic values
        x = self.risk_embed(risks) + self.pos
        task = (self.cur_embed(cur) + self.dest_embed(dest)).unsqueeze(1)
        x = torch.cat([x, task], dim=1)
        for layer in self.layers:
            x = layer(x)
        z = self.head(x[:, -1]).squeeze(-1)
        return self.scale * torch.sigmoid(z)
