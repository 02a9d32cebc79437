"""Training statistics collection."""

import time
from collections import defaultdict
from pathlib import Path
from typing import Any

from pydantic import Field

from ..core.base import BaseSchema


class EpochStats(BaseSchema):
    """One line of the training-stats JSONL."""

    phase: str
    epoch: int = Field(ge=0)
    split: str = "train"
    loss: float
    samples: int = Field(ge=0)
    skipped: int = Field(ge=0)
    grad_norm: float = 0.0
    dev_cer: float | None = None
    dev_wer: float | None = None
    dev_f: float | None = None
    seconds: float = Field(default=0.0, ge=0.0)


class TrainingStatsCollector:
    """In-memory record of per-epoch statistics with an optional JSONL sink."""

    def __init__(self, run_name: str, path: str | Path | None = None):
        self.run_name = run_name
        self.path = Path(path) if path is not None else None
        self.epochs: list[EpochStats] = []
        self.skipped_by_utterance: defaultdict[str, int] = defaultdict(int)
        self.start_time = time.time()
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def record_skip(self, utterance_id: str) -> None:
        self.skipped_by_utterance[utterance_id] += 1

    def record_epoch(self, stats: EpochStats) -> None:
        self.epochs.append(stats)
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(stats.model_dump_json() + "\n")

    def losses(self, phase: str | None = None) -> list[float]:
        return [s.loss for s in self.epochs if phase is None or s.phase == phase]

    def get_summary(self) -> dict[str, Any]:
        """Current summary of the run."""
        last = self.epochs[-1] if self.epochs else None
        return {
            "run": self.run_name,
            "elapsed_seconds": time.time() - self.start_time,
            "epochs": len(self.epochs),
            "last": last.model_dump() if last else None,
            "total_skipped": sum(s.skipped for s in self.epochs),
            "skipped_utterances": len(self.skipped_by_utterance),
        }
