from pydantic import Field, model_validator

from ..core.base import BaseDocument


class DecoderConfig(BaseDocument):
    """Fusion weights and search limits for prefix beam search."""

    alpha: float = Field(default=0.8, description="LM weight")
    beta: float = Field(default=1.0, description="word-count bonus")
    beam_width: int = Field(default=64, ge=1)
    n_best: int = Field(default=1, ge=1)
    prune_threshold: float | None = Field(
        default=None,
        le=0.0,
        description="per-frame log-prob floor below which symbols are not expanded",
    )
    suppress_ids: tuple[int, ...] = Field(
        default=(), description="symbol ids never emitted (e.g. markers for ASR output)"
    )

    @model_validator(mode="after")
    def _n_best_within_beam(self) -> "DecoderConfig":
        if self.n_best > self.beam_width:
            raise ValueError(f"n_best {self.n_best} exceeds beam_width {self.beam_width}")
        if 0 in self.suppress_ids:
            raise ValueError("the blank cannot be suppressed")
        return self
