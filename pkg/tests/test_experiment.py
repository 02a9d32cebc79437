"""The comparison grid on a tiny configuration."""

import pytest

from e2e_ner.corpus import CorpusSpec, SplitCounts
from e2e_ner.services import (
    RESOLVED_CONFIG_NAME,
    SYSTEM_NAMES,
    ExperimentResult,
    ExperimentRunner,
    RunConfig,
)


@pytest.fixture
def tiny_run():
    return RunConfig(
        corpus=CorpusSpec(
            counts=SplitCounts(train=10, dev=4, test=4, asr_only=4),
            feature_dim=6,
            max_clauses=2,
            noise=0.1,
        ),
        net={"conv_channels": 8, "hidden_size": 8, "n_recurrent": 1, "batch_size": 4},
        decoder={"beam_width": 4},
        lm_order=2,
        asr_epochs=1,
        ner_epochs=1,
        seed=7,
    ).resolved()


@pytest.mark.slow
def test_full_grid(tmp_path, tiny_run):
    result = ExperimentRunner(tiny_run, tmp_path, threads=2).run()

    assert len(result.rows) == len(SYSTEM_NAMES) * 2
    assert {(r.system, r.corpus) for r in result.rows} == {
        (s, split) for s in SYSTEM_NAMES for split in ("dev", "test")
    }
    for row in result.rows:
        assert row.catvalue.f <= row.category.f + 1e-12

    # warm extension keeps the masked transcription of the asr model
    for system, cer in result.transfer_cer.items():
        assert cer == pytest.approx(result.asr_dev_cer), system

    assert ExperimentResult.load(tmp_path / "results.json") == result
    assert RunConfig.load(tmp_path / RESOLVED_CONFIG_NAME) == tiny_run
    for slug in ("asr", "e2e", "e2e_star", "e2e_plus", "e2e_plus_star"):
        assert (tmp_path / f"{slug}.ckpt").exists()


@pytest.mark.slow
def test_pipeline_only(tmp_path, tiny_run):
    config = tiny_run.model_copy(update={"systems": ["Pip"]})
    result = ExperimentRunner(config, tmp_path, threads=1).run()
    assert [r.system for r in result.rows] == ["Pip", "Pip"]
    assert result.transfer_cer == {}
    assert not (tmp_path / "augmented").exists()


TOY_RUN = RunConfig(
    corpus=CorpusSpec(
        counts=SplitCounts(train=400, dev=50, test=50, asr_only=200),
        feature_dim=16,
        noise=0.1,
    ),
    net={
        "conv_channels": 32,
        "hidden_size": 32,
        "n_recurrent": 1,
        "batch_size": 8,
        "learning_rate": 0.01,
    },
    decoder={"beam_width": 16, "prune_threshold": -8.0},
    lm_order=3,
    asr_epochs=15,
    ner_epochs=15,
    systems=["E2E"],
    seed=1,
)


@pytest.mark.slow
def test_toy_corpus_reaches_targets(tmp_path):
    result = ExperimentRunner(TOY_RUN.resolved(), tmp_path).run()
    assert result.asr_dev_cer <= 0.05
    test_row = next(r for r in result.rows if r.system == "E2E" and r.corpus == "test")
    assert test_row.category.f >= 0.80
