"""Acoustic network: gradients, output extension, checkpoints and training."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from e2e_ner.alphabet import build_alphabet, parse
from e2e_ner.core.exceptions import (
    CheckpointError,
    MissingInputError,
    NetError,
    TrainingDivergedError,
)
from e2e_ner.corpus import Corpus, Split
from e2e_ner.metrics import TrainingStatsCollector
from e2e_ner.net import (
    CHECKPOINT_MAGIC,
    ExtensionMode,
    MomentumSGD,
    NetConfig,
    Phase,
    build_samples,
    extend_output_layer,
    global_norm,
    init_net,
    load_checkpoint,
    overfit_steps,
    save_checkpoint,
    target_text,
    train,
    transcribe,
)


def tiny_model(alphabet, **overrides):
    cfg = NetConfig(
        feature_dim=3,
        output_size=alphabet.size,
        conv_channels=3,
        hidden_size=2,
        n_recurrent=1,
        **overrides,
    )
    return init_net(cfg, alphabet)


class TestModel:
    def test_output_shape(self, small_alphabet, rng):
        model = tiny_model(small_alphabet)
        for n_frames in (1, 2, 7, 10):
            lattice = model.forward(rng.normal(size=(n_frames, 3)))
            assert lattice.shape == (model.config.output_length(n_frames), small_alphabet.size)

    def test_output_length_without_conv(self):
        cfg = NetConfig(n_conv=0)
        assert cfg.total_stride == 1
        assert cfg.output_length(9) == 9

    def test_unit_stride_doubles_with_input(self, small_alphabet, rng):
        model = tiny_model(small_alphabet, n_conv=0)
        for n_frames in (1, 4, 7):
            short = model.forward(rng.normal(size=(n_frames, 3)))
            long = model.forward(rng.normal(size=(2 * n_frames, 3)))
            assert long.shape[0] == 2 * short.shape[0]

    def test_gradients_match_finite_differences(self, small_alphabet, rng):
        model = tiny_model(small_alphabet)
        features = rng.normal(size=(9, 3))
        target = small_alphabet.to_ids("ab")
        result, grads = model.forward_backward(features, target)
        assert result.feasible

        eps = 1e-6
        for name, param in model.params.items():
            numeric = np.zeros_like(param)
            for idx in np.ndindex(*param.shape):
                saved = param[idx]
                param[idx] = saved + eps
                up = model.forward_backward(features, target)[0].loss
                param[idx] = saved - eps
                down = model.forward_backward(features, target)[0].loss
                param[idx] = saved
                numeric[idx] = (up - down) / (2 * eps)
            np.testing.assert_allclose(grads[name], numeric, rtol=1e-4, atol=1e-8, err_msg=name)

    def test_init_is_seeded(self, small_alphabet):
        a = tiny_model(small_alphabet, seed=3)
        b = tiny_model(small_alphabet, seed=3)
        c = tiny_model(small_alphabet, seed=4)
        assert all(np.array_equal(a.params[k], b.params[k]) for k in a.params)
        assert not all(np.array_equal(a.params[k], c.params[k]) for k in a.params)

    def test_size_mismatch(self, small_alphabet):
        with pytest.raises(NetError):
            init_net(NetConfig(output_size=small_alphabet.size + 1), small_alphabet)

    def test_feature_width_mismatch(self, small_alphabet, rng):
        with pytest.raises(NetError):
            tiny_model(small_alphabet).forward(rng.normal(size=(5, 4)))

    def test_even_kernel_rejected(self):
        with pytest.raises(ValidationError):
            NetConfig(conv_kernel=4)

    def test_copy_is_independent(self, small_alphabet):
        model = tiny_model(small_alphabet)
        clone = model.copy()
        clone.params["out.b"] += 1.0
        assert not np.array_equal(model.params["out.b"], clone.params["out.b"])


class TestExtension:
    def test_warm_extension_preserves_base_outputs(self, small_alphabet, rng):
        model = tiny_model(small_alphabet)
        wide = small_alphabet.extended(star_enabled=True, tag_set_enabled=True)
        extended = extend_output_layer(model, wide, ExtensionMode.WARM)
        assert extended.alphabet == wide
        assert extended.phase is Phase.NER
        for _ in range(10):
            features = rng.normal(size=(int(rng.integers(1, 12)), 3))
            before = model.forward(features)
            after = extended.forward(features)
            np.testing.assert_allclose(after[:, : small_alphabet.size], before, rtol=1e-12)
            assert transcribe(extended, features, mask_non_base=True) == transcribe(
                model, features, mask_non_base=False
            )

    def test_fresh_extension_reinitializes_output(self, small_alphabet):
        model = tiny_model(small_alphabet)
        wide = small_alphabet.extended(star_enabled=False, tag_set_enabled=True)
        extended = extend_output_layer(model, wide, ExtensionMode.FRESH)
        assert np.array_equal(extended.params["conv0.W"], model.params["conv0.W"])
        assert not np.array_equal(
            extended.params["out.W"][:, : small_alphabet.size], model.params["out.W"]
        )

    def test_lower_layers_are_copied(self, small_alphabet):
        model = tiny_model(small_alphabet)
        wide = small_alphabet.extended(star_enabled=False, tag_set_enabled=True)
        extended = extend_output_layer(model, wide)
        extended.params["conv0.W"] += 1.0
        assert not np.array_equal(extended.params["conv0.W"], model.params["conv0.W"])

    def test_rejects_non_extension(self, small_alphabet):
        model = tiny_model(small_alphabet)
        with pytest.raises(NetError):
            extend_output_layer(model, build_alphabet(" ba", tag_set_enabled=True))


class TestCheckpoint:
    def test_round_trip(self, tmp_path, small_alphabet, rng):
        model = tiny_model(small_alphabet.extended(star_enabled=True, tag_set_enabled=True))
        model.fit_normalizer([rng.normal(2.0, 3.0, size=(20, 3))])
        model.epoch = 4
        path = tmp_path / "model.ckpt"
        save_checkpoint(model, path)
        assert path.read_bytes()[:4] == CHECKPOINT_MAGIC

        loaded = load_checkpoint(path)
        assert loaded.alphabet == model.alphabet
        assert loaded.config == model.config
        assert loaded.epoch == 4
        features = rng.normal(size=(6, 3))
        np.testing.assert_array_equal(loaded.forward(features), model.forward(features))

    def test_bad_magic(self, tmp_path, small_alphabet):
        path = tmp_path / "model.ckpt"
        save_checkpoint(tiny_model(small_alphabet), path)
        data = bytearray(path.read_bytes())
        data[:4] = b"NOPE"
        path.write_bytes(bytes(data))
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_unsupported_version(self, tmp_path, small_alphabet):
        path = tmp_path / "model.ckpt"
        save_checkpoint(tiny_model(small_alphabet), path)
        data = bytearray(path.read_bytes())
        data[4:6] = (99).to_bytes(2, "little")
        path.write_bytes(bytes(data))
        with pytest.raises(CheckpointError, match="unsupported version 99"):
            load_checkpoint(path)

    def test_truncated_payload(self, tmp_path, small_alphabet):
        path = tmp_path / "model.ckpt"
        save_checkpoint(tiny_model(small_alphabet), path)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_missing(self, tmp_path):
        with pytest.raises(MissingInputError):
            load_checkpoint(tmp_path / "absent.ckpt")


class TestOptimizer:
    def test_clipping_scales_the_step(self):
        params = {"w": np.zeros(2)}
        optimizer = MomentumSGD(params, learning_rate=1.0, momentum=0.0, clip_norm=1.0)
        norm = optimizer.step({"w": np.array([3.0, 4.0])})
        assert norm == pytest.approx(5.0)
        np.testing.assert_allclose(params["w"], [-0.6, -0.8])

    def test_momentum_accumulates(self):
        params = {"w": np.zeros(1)}
        optimizer = MomentumSGD(params, learning_rate=0.1, momentum=0.5, clip_norm=10.0)
        optimizer.step({"w": np.ones(1)})
        optimizer.step({"w": np.ones(1)})
        np.testing.assert_allclose(params["w"], [-0.1 - 0.15])

    def test_global_norm(self):
        assert global_norm({"a": np.array([3.0]), "b": np.array([[4.0]])}) == pytest.approx(5.0)


class TestTraining:
    @pytest.mark.slow
    def test_overfits_one_utterance(self, small_alphabet, rng):
        cfg = NetConfig(
            feature_dim=3,
            output_size=small_alphabet.size,
            conv_channels=16,
            hidden_size=16,
            n_recurrent=1,
            learning_rate=0.05,
        )
        model = init_net(cfg, small_alphabet)
        features = rng.normal(size=(12, 3))
        losses = overfit_steps(model, features, small_alphabet.to_ids("ab"), steps=500)
        assert losses[-1] < losses[0]
        assert min(losses) < 0.01

    def test_overfit_loss_drops(self, small_alphabet, rng):
        model = tiny_model(small_alphabet, learning_rate=0.05)
        features = rng.normal(size=(12, 3))
        losses = overfit_steps(model, features, small_alphabet.to_ids("ab a"), steps=40)
        assert losses[-1] < losses[0]

    @pytest.mark.slow
    def test_epoch_loss_mostly_decreases(self, tiny_corpus, small_net_config):
        alphabet = tiny_corpus.alphabet
        cfg = small_net_config.model_copy(
            update={
                "output_size": alphabet.size,
                "epochs": 4,
                "learning_rate": 0.02,
                "gain_range": (0.0, 0.0),
                "tempo_range": (1.0, 1.0),
            }
        )
        model = init_net(cfg, alphabet)
        result = train(model, tiny_corpus, Phase.ASR, threads=1, evaluate_dev=False)
        losses = [h.loss for h in result.history]
        assert len(losses) == 4
        assert sum(b <= a for a, b in zip(losses, losses[1:])) >= 2

    def test_nan_weights_abort_with_diagnostics(self, tiny_corpus, small_net_config):
        alphabet = tiny_corpus.alphabet
        cfg = small_net_config.model_copy(update={"output_size": alphabet.size})
        model = init_net(cfg, alphabet)
        model.params["out.W"][0, 0] = np.nan
        with pytest.raises(TrainingDivergedError) as info:
            train(model, tiny_corpus, Phase.ASR, threads=1, evaluate_dev=False)

        details = info.value.details
        assert details["utterance_id"] in {u.id for u in tiny_corpus.split(Split.TRAIN)}
        assert details["epoch"] == 0
        assert details["step"] == 0
        assert details["learning_rate"] == cfg.learning_rate
        assert math.isnan(details["loss"])
        assert "grad_norm" in details
        assert details["utterance_id"] in str(info.value)

    def test_overfit_rejects_infeasible_target(self, small_alphabet, rng):
        model = tiny_model(small_alphabet)
        with pytest.raises(NetError):
            overfit_steps(model, rng.normal(size=(2, 3)), small_alphabet.to_ids("abab"), steps=1)

    def test_target_text(self, tiny_corpus):
        utterance = next(u for u in tiny_corpus.split(Split.TRAIN) if u.tagged != u.plain)
        assert target_text(utterance, Phase.ASR, starred=False) == utterance.plain
        assert target_text(utterance, Phase.NER, starred=False) == utterance.tagged
        starred = target_text(utterance, Phase.NER, starred=True)
        assert [(e.category, e.value) for e in parse(starred).entities] == [
            (e.category, e.value) for e in parse(utterance.tagged).entities
        ]

    def test_samples_per_phase(self, tiny_corpus, tiny_spec, tagged_alphabet):
        base = tiny_corpus.alphabet
        asr = build_samples(tiny_corpus, base, Phase.ASR)
        assert len(asr) == tiny_spec.counts.train + tiny_spec.counts.asr_only
        ner = build_samples(tiny_corpus, tagged_alphabet, Phase.NER)
        assert len(ner) == tiny_spec.counts.train
        with pytest.raises(NetError):
            build_samples(tiny_corpus, base, Phase.NER)
        with pytest.raises(NetError):
            build_samples(tiny_corpus, tagged_alphabet, Phase.NER, starred=True)

    def test_training_is_thread_count_independent(self, tiny_corpus, small_net_config):
        alphabet = tiny_corpus.alphabet
        cfg = small_net_config.model_copy(update={"output_size": alphabet.size})
        single = init_net(cfg, alphabet)
        multi = init_net(cfg, alphabet)
        train(single, tiny_corpus, Phase.ASR, threads=1, evaluate_dev=False)
        train(multi, tiny_corpus, Phase.ASR, threads=3, evaluate_dev=False)
        for name in single.params:
            np.testing.assert_array_equal(single.params[name], multi.params[name])

    def test_two_phase_schedule(self, tmp_path, tiny_corpus, small_net_config):
        alphabet = tiny_corpus.alphabet
        cfg = small_net_config.model_copy(update={"output_size": alphabet.size})
        model = init_net(cfg, alphabet)
        collector = TrainingStatsCollector("asr", tmp_path / "asr.stats.jsonl")
        result = train(model, tiny_corpus, Phase.ASR, threads=2, collector=collector)
        assert model.normalizer_fitted
        assert model.epoch == 1
        assert len(result.history) == 1
        assert result.history[0].dev_cer is not None
        assert len((tmp_path / "asr.stats.jsonl").read_text().splitlines()) == 1

        wide = alphabet.extended(star_enabled=True, tag_set_enabled=True)
        ner = extend_output_layer(model, wide)
        result = train(ner, tiny_corpus, Phase.NER, starred=True, threads=2)
        assert ner.phase is Phase.NER
        assert result.history[0].phase == "ner"
        assert result.history[0].dev_f is not None

    def test_architecture_override_rejected(self, tiny_corpus, small_net_config):
        alphabet = tiny_corpus.alphabet
        cfg = small_net_config.model_copy(update={"output_size": alphabet.size})
        model = init_net(cfg, alphabet)
        with pytest.raises(NetError):
            train(
                model,
                tiny_corpus,
                Phase.ASR,
                cfg=cfg.model_copy(update={"hidden_size": 7}),
                evaluate_dev=False,
            )

    def test_reloaded_corpus_trains(self, tiny_corpus, small_net_config):
        corpus = Corpus.load(tiny_corpus.root)
        alphabet = corpus.alphabet
        model = init_net(
            small_net_config.model_copy(update={"output_size": alphabet.size, "epochs": 0}),
            alphabet,
        )
        result = train(model, corpus, Phase.ASR, threads=1, evaluate_dev=False)
        assert result.history == []
