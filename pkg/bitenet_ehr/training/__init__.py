from .losses import bce_loss, soft_cross_entropy, task_loss
from .optimizer import RMSprop, RMSpropState, rmsprop_step
from .splits import split, split_counts
from .dataset import SplitDataset, build_dataset
from .trainer import TrainResult, train

__all__ = [
    "bce_loss",
    "soft_cross_entropy",
    "task_loss",
    "RMSprop",
    "RMSpropState",
    "rmsprop_step",
    "split",
    "split_counts",
    "SplitDataset",
    "build_dataset",
    "TrainResult",
    "train",
]
