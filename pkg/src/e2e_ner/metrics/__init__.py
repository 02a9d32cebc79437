from .collector import EpochStats, TrainingStatsCollector

__all__ = ["EpochStats", "TrainingStatsCollector"]
