"""The torch models must match the planner's numpy forward pass: the two
implementations share the weight bundle format, so every architectural
choice here is pinned against asdplanner.inference within 1e-4."""

import numpy as np
import pytest
import torch

from asdplanner import inference
from asdplanner.riskmap import RiskMap
from asdtrainer.export import export_weights
from asdtrainer.models import Riskmap2Model, StateModel, sinusoidal_encoding


def torch_map(n, seed):
    rng = np.random.default_rng(seed)
    total = n * n
    third = total // 3
    risks = np.concatenate([
        np.zeros(total - 2 * third),
        0.1 * rng.random(third),
        np.ones(third),
    ])
    rng.shuffle(risks)
    return risks.astype(np.float32)


class TestSchema:
    def test_riskmap2_state_dict_matches_planner_schema(self, tmp_path):
        model = Riskmap2Model(8, 32, 2, 4, 64, classes=19)
        export_weights(model, tmp_path / "w.bin")
        w = inference.load_weights(tmp_path / "w.bin")
        inference.validate_weights(w)
        assert set(w.tensors) == set(model.state_dict())

    def test_state_dict_matches_planner_schema(self, tmp_path):
        model = StateModel(16, 32, 2, 4, 64, scale=60.0)
        export_weights(model, tmp_path / "w.bin")
        w = inference.load_weights(tmp_path / "w.bin")
        inference.validate_weights(w)
        exported = set(model.state_dict()) - {"pos"}
        assert set(w.tensors) == exported

    def test_positional_table_matches_planner(self):
        ours = sinusoidal_encoding(100, 32).numpy()
        theirs = inference.sinusoidal_encoding(100, 32)
        assert np.max(np.abs(ours - theirs)) < 1e-6


class TestCrossImplementation:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_riskmap2_forward_agrees(self, tmp_path, seed):
        n = 8
        torch.manual_seed(seed)
        model = Riskmap2Model(n, 32, 2, 4, 64, classes=19).eval()
        export_weights(model, tmp_path / "w.bin")
        w = inference.load_weights(tmp_path / "w.bin")

        risks = torch_map(n, seed)
        m = RiskMap(n, n, risks.reshape(n, n).astype(float))
        start, dest = (1, 2), (6, 5)
        with torch.no_grad():
            ours = model(torch.tensor(risks).unsqueeze(0),
                         torch.tensor([start[1] * n + start[0]]),
                         torch.tensor([dest[1] * n + dest[0]]))[0].numpy()
        theirs = inference.riskmap2_forward(m, start, dest, w)
        assert np.max(np.abs(ours - theirs)) <= 1e-4

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_state_forward_agrees(self, tmp_path, seed):
        max_size, n = 16, 8
        torch.manual_seed(seed)
        model = StateModel(max_size, 32, 2, 4, 64, scale=60.0).eval()
        export_weights(model, tmp_path / "w.bin")
        w = inference.load_weights(tmp_path / "w.bin")

        risks = torch_map(n, seed)
        m = RiskMap(n, n, risks.reshape(n, n).astype(float))
        cur, safety, dest = (3, 4), 0.95, (7, 1)
        padded = torch.ones(max_size, max_size)
        padded[:n, :n] = torch.tensor(risks).view(n, n)
        with torch.no_grad():
            ours = float(model(padded.view(1, -1),
                               torch.tensor([[cur[0], cur[1], safety]]),
                               torch.tensor([dest], dtype=torch.float32))[0])
        theirs = inference.state_forward(m, cur, safety, dest, w)
        assert abs(ours - theirs) <= 1e-4

    def test_state_output_is_bounded(self):
        model = StateModel(8, 32, 2, 4, 64, scale=28.0).eval()
        with torch.no_grad():
            h = model(torch.ones(4, 64),
                      torch.tensor([[0.0, 0.0, 0.9]] * 4),
                      torch.tensor([[7.0, 7.0]] * 4))
        assert torch.all(h >= 0) and torch.all(h <= 28.0)
