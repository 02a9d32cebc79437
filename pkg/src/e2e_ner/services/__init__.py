from .decoding_service import DecodingService, read_hypotheses, write_nbest
from .experiment_service import (
    END_TO_END,
    PIPELINE,
    ExperimentResult,
    ExperimentRow,
    ExperimentRunner,
    SystemSpec,
    check_detection_order,
)
from .pipeline_service import PipelineService
from .run_config import RESOLVED_CONFIG_NAME, SYSTEM_NAMES, RunConfig

__all__ = [
    # Config
    "RunConfig",
    "SYSTEM_NAMES",
    "RESOLVED_CONFIG_NAME",
    # Decoding
    "DecodingService",
    "write_nbest",
    "read_hypotheses",
    # Pipeline baseline
    "PipelineService",
    # Experiment grid
    "ExperimentRunner",
    "ExperimentResult",
    "ExperimentRow",
    "SystemSpec",
    "END_TO_END",
    "PIPELINE",
    "check_detection_order",
]
