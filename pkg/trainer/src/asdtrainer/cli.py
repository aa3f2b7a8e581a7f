"""Trainer command line: fit a model on a dataset file, export the weight
bundle (and optionally reference fixtures)."""

from __future__ import annotations

import argparse
import sys

from .export import export_fixtures
from .train import TrainConfig, train_riskmap2, train_state


def make_parser():
    p = argparse.ArgumentParser(prog="asdtrainer")
    p.add_argument("--dataset", required=True)
    p.add_argument("--kind", choices=("riskmap2", "state"), required=True)
    p.add_argument("--export", required=True, help="weight bundle output path")
    p.add_argument("--d", type=int, default=64)
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--ffn", type=int, default=256)
    p.add_argument("--classes", type=int, default=0)
    p.add_argument("--max-size", type=int, default=64)
    p.add_argument("--scale", type=float, default=0.0)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=3e-4)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixtures", help="also write n reference fixtures here")
    p.add_argument("--n-fixtures", type=int, default=20)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    cfg = TrainConfig(
        dataset_path=args.dataset, kind=args.kind, export_path=args.export,
        d=args.d, layers=args.layers, heads=args.heads, ffn=args.ffn,
        classes=args.classes, max_size=args.max_size, scale=args.scale,
        batch_size=args.batch_size, lr=args.lr, epochs=args.epochs,
        seed=args.seed,
    )
    train = train_riskmap2 if args.kind == "riskmap2" else train_state
    model, report = train(cfg)
    print(f"epochs: {len(report.train_loss)}")
    print(f"first_train_loss: {report.train_loss[0]:.6f}")
    print(f"final_train_loss: {report.train_loss[-1]:.6f}")
    if report.val_loss:
        print(f"final_val_loss: {report.val_loss[-1]:.6f}")
    print(f"wall_time_s: {report.wall_time:.1f}")
    if args.fixtures:
        export_fixtures(model, args.export, args.n_fixtures, args.seed,
                        args.fixtures)
        print(f"fixtures: {args.fixtures}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
