"""Training statistics collection."""

import json

import pytest
from pydantic import ValidationError

from e2e_ner.metrics import EpochStats, TrainingStatsCollector


def stats(epoch: int, loss: float, phase: str = "asr", skipped: int = 0) -> EpochStats:
    return EpochStats(phase=phase, epoch=epoch, loss=loss, samples=10, skipped=skipped)


class TestCollector:
    def test_jsonl_sink(self, tmp_path):
        path = tmp_path / "runs" / "asr.stats.jsonl"
        collector = TrainingStatsCollector("asr", path)
        assert path.read_text() == ""
        collector.record_epoch(stats(1, 3.5))
        collector.record_epoch(stats(2, 2.5, skipped=1))
        lines = path.read_text(encoding="utf-8").splitlines()
        assert [json.loads(line)["loss"] for line in lines] == [3.5, 2.5]
        assert EpochStats.model_validate_json(lines[1]) == collector.epochs[1]

    def test_sink_is_truncated(self, tmp_path):
        path = tmp_path / "asr.stats.jsonl"
        path.write_text("stale\n", encoding="utf-8")
        TrainingStatsCollector("asr", path)
        assert path.read_text() == ""

    def test_losses_by_phase(self):
        collector = TrainingStatsCollector("run")
        collector.record_epoch(stats(1, 3.0))
        collector.record_epoch(stats(1, 2.0, phase="ner"))
        assert collector.losses() == [3.0, 2.0]
        assert collector.losses("ner") == [2.0]

    def test_summary(self):
        collector = TrainingStatsCollector("run")
        assert collector.get_summary()["last"] is None
        collector.record_skip("train-000001")
        collector.record_skip("train-000001")
        collector.record_epoch(stats(1, 3.0, skipped=2))
        summary = collector.get_summary()
        assert summary["run"] == "run"
        assert summary["epochs"] == 1
        assert summary["last"]["loss"] == 3.0
        assert summary["total_skipped"] == 2
        assert summary["skipped_utterances"] == 1
        assert summary["elapsed_seconds"] >= 0.0

    def test_negative_counts_rejected(self):
        with pytest.raises(ValidationError):
            EpochStats(phase="asr", epoch=1, loss=1.0, samples=-1, skipped=0)
