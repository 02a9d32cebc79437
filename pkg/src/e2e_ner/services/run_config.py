"""The run configuration document shared by ``train`` and ``experiment``."""

from pathlib import Path

from pydantic import Field, field_validator

from ..core.base import BaseDocument
from ..core.config import settings
from ..corpus.schemas import CorpusSpec
from ..decoder.config import DecoderConfig
from ..net.config import ExtensionMode, NetConfig

SYSTEM_NAMES = ("E2E", "E2E*", "E2E+", "E2E+*", "Pip")
RESOLVED_CONFIG_NAME = "run_config.json"


class RunConfig(BaseDocument):
    """Corpus, network, decoder and rule settings of one run, plus its seed."""

    corpus: CorpusSpec = Field(default_factory=CorpusSpec)
    net: NetConfig = Field(default_factory=NetConfig)
    decoder: DecoderConfig = Field(default_factory=lambda: DecoderConfig(prune_threshold=-8.0))
    rules: str | None = Field(default=None, description="RuleSet JSON path")
    rule_coverage: float = Field(default=0.7, ge=0.0, le=1.0)
    lm_order: int = Field(default=3, ge=1)
    asr_epochs: int = Field(default=10, ge=0)
    ner_epochs: int = Field(default=10, ge=0)
    augment_weight: float = Field(default=1.0, gt=0.0)
    extension: ExtensionMode = ExtensionMode.WARM
    systems: list[str] = Field(default_factory=lambda: list(SYSTEM_NAMES))
    seed: int = 0
    output_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR)

    @field_validator("systems")
    @classmethod
    def _known_systems(cls, v: list[str]) -> list[str]:
        unknown = [s for s in v if s not in SYSTEM_NAMES]
        if unknown:
            raise ValueError(f"unknown systems {unknown}; choose from {list(SYSTEM_NAMES)}")
        if len(set(v)) != len(v):
            raise ValueError("duplicate system name")
        return v

    def resolved(self, seed: int | None = None, output_dir: str | None = None) -> "RunConfig":
        """Copy with one seed pushed into the corpus and network settings.

        The network's input width follows the corpus feature dimension.
        """
        seed = self.seed if seed is None else seed
        net = self.net.model_copy(update={"seed": seed, "feature_dim": self.corpus.feature_dim})
        return self.model_copy(
            update={
                "seed": seed,
                "output_dir": output_dir or self.output_dir,
                "corpus": self.corpus.model_copy(update={"seed": seed}),
                "net": net,
            }
        )

    def write_resolved(self, out_dir: str | Path) -> Path:
        path = Path(out_dir) / RESOLVED_CONFIG_NAME
        self.save(path)
        return path
