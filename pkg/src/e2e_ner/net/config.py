from enum import Enum

from pydantic import Field, model_validator

from ..core.base import BaseDocument


class Phase(str, Enum):
    ASR = "asr"
    NER = "ner"


class ExtensionMode(str, Enum):
    WARM = "warm"
    FRESH = "fresh"


class NetConfig(BaseDocument):
    """Architecture, initialization and optimization settings of the acoustic model."""

    # architecture
    feature_dim: int = Field(default=16, ge=1)
    output_size: int = Field(default=2, ge=2, description="alphabet size |A|")
    n_conv: int = Field(default=1, ge=0)
    conv_channels: int = Field(default=64, ge=1)
    conv_kernel: int = Field(default=3, ge=1)
    conv_stride: int = Field(default=2, ge=1)
    n_recurrent: int = Field(default=2, ge=1)
    hidden_size: int = Field(default=64, ge=1)
    seed: int = 0

    # optimization
    learning_rate: float = Field(default=0.005, gt=0)
    momentum: float = Field(default=0.9, ge=0, lt=1)
    clip_norm: float = Field(default=5.0, gt=0)
    epochs: int = Field(default=10, ge=0)
    batch_size: int = Field(default=16, ge=1)

    # per-epoch perturbation
    gain_range: tuple[float, float] = (-0.2, 0.2)
    tempo_range: tuple[float, float] = (0.9, 1.1)

    @model_validator(mode="after")
    def _check_ranges(self) -> "NetConfig":
        if self.conv_kernel % 2 == 0:
            raise ValueError("conv_kernel must be odd")
        for name in ("gain_range", "tempo_range"):
            low, high = getattr(self, name)
            if high < low:
                raise ValueError(f"{name} must be (low, high)")
        if self.tempo_range[0] <= 0:
            raise ValueError("tempo_range must be positive")
        return self

    @property
    def total_stride(self) -> int:
        return self.conv_stride**self.n_conv

    @property
    def perturbs(self) -> bool:
        return self.gain_range != (0.0, 0.0) or self.tempo_range != (1.0, 1.0)

    def output_length(self, n_frames: int) -> int:
        for _ in range(self.n_conv):
            n_frames = -(-n_frames // self.conv_stride)
        return n_frames
