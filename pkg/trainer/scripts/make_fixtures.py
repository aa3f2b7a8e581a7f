"""Regenerates the shipped fixtures/ directory at the repo root: one
briefly trained 16x16 per-grid bundle and one randomly initialized
max_size-32 per-node bundle, each with 20 reference fixtures.

Run from anywhere:  python3 trainer/scripts/make_fixtures.py
"""

import pathlib
import subprocess
import sys
import tempfile

import torch

from asdtrainer.export import export_fixtures, export_weights
from asdtrainer.models import StateModel
from asdtrainer.train import TrainConfig, train_riskmap2

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "fixtures"


def main() -> int:
    FIXTURES.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        dataset = pathlib.Path(tmp) / "rm2_16.jsonl"
        subprocess.run(
            [sys.executable, "-m", "asdplanner.cli", "gen-dataset",
             "--kind", "riskmap2", "--size", "16", "--count", "1000",
             "--seed", "0", "--out", str(dataset)],
            check=True, capture_output=True,
        )
        cfg = TrainConfig(str(dataset), "riskmap2",
                          export_path=str(FIXTURES / "riskmap2_16.weights"),
                          d=64, layers=3, heads=4, ffn=256, epochs=2, seed=0)
        model, report = train_riskmap2(cfg)
    export_fixtures(model, "riskmap2_16.weights", 20, 0,
                    FIXTURES / "riskmap2_16.fixtures.jsonl")
    print(f"riskmap2_16: final train loss {report.train_loss[-1]:.4f}")

    torch.manual_seed(0)
    state = StateModel(32, 64, 3, 4, 256, scale=124.0).eval()
    export_weights(state, FIXTURES / "state_32.weights")
    export_fixtures(state, "state_32.weights", 20, 0,
                    FIXTURES / "state_32.fixtures.jsonl")
    print("state_32: randomly initialized bundle")
    return 0


if __name__ == "__main__":
    sys.exit(main())
