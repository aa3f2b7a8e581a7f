"""Training and portable weight export for the asdplanner heuristic models."""

from .models import Riskmap2Model, StateModel
from .train import TrainConfig, TrainReport, train_riskmap2, train_state
from .export import export_fixtures, export_weights

__all__ = [
    "Riskmap2Model", "StateModel", "TrainConfig", "TrainReport",
    "train_riskmap2", "train_state", "export_fixtures", "export_weights",
]
