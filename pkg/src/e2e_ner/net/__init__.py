from .checkpoint import CHECKPOINT_MAGIC, CHECKPOINT_VERSION, load_checkpoint, save_checkpoint
from .config import ExtensionMode, NetConfig, Phase
from .layers import GRU, Affine, BiGRU, Conv1D
from .model import AcousticModel, extend_output_layer, init_net, parameter_shapes
from .optim import MomentumSGD, global_norm
from .trainer import (
    TrainingSample,
    TrainResult,
    asr_error_rates,
    build_samples,
    ner_dev_f,
    overfit_steps,
    target_text,
    train,
    transcribe,
)

__all__ = [
    # Config
    "NetConfig",
    "Phase",
    "ExtensionMode",
    # Layers
    "Conv1D",
    "GRU",
    "BiGRU",
    "Affine",
    # Model
    "AcousticModel",
    "init_net",
    "extend_output_layer",
    "parameter_shapes",
    # Optimization
    "MomentumSGD",
    "global_norm",
    # Training
    "TrainingSample",
    "TrainResult",
    "build_samples",
    "target_text",
    "train",
    "overfit_steps",
    "transcribe",
    "asr_error_rates",
    "ner_dev_f",
    # Checkpoints
    "CHECKPOINT_MAGIC",
    "CHECKPOINT_VERSION",
    "save_checkpoint",
    "load_checkpoint",
]
