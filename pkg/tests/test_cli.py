"""Command-line surface: exit codes and the main workflows on a tiny corpus."""

import json

import pytest
from typer.testing import CliRunner

from e2e_ner.cli.main import EXIT_DATA, EXIT_USAGE, app, run
from e2e_ner.core.config import settings
from e2e_ner.corpus import Corpus, CorpusSpec, Source, Split
from e2e_ner.evaluation import EvalReport
from e2e_ner.lm import TextMode, load_lm
from e2e_ner.net import Phase, load_checkpoint
from e2e_ner.services import RunConfig

TAGGED = "selon [ césar ] il est parti # hier ] il habite à $ paris ]"
STARRED = "* [ césar ] * # hier ] * $ paris ]"


@pytest.fixture
def run_config(tmp_path, tiny_spec):
    config = RunConfig(
        corpus=tiny_spec,
        net={"conv_channels": 8, "hidden_size": 8, "n_recurrent": 1, "batch_size": 4},
        decoder={"beam_width": 4},
        asr_epochs=1,
        ner_epochs=1,
    )
    path = tmp_path / "run.json"
    config.save(path)
    return path


@pytest.fixture
def text_file(tmp_path):
    path = tmp_path / "in.txt"
    path.write_text(TAGGED + "\nil pleut\n", encoding="utf-8")
    return path


class TestExitCodes:
    def test_version(self):
        assert run(["version"]) == 0
        result = CliRunner().invoke(app, ["version"])
        assert f"{settings.PROJECT_NAME} v" in result.output

    def test_cli_runner(self, tmp_path, text_file):
        out = tmp_path / "out.txt"
        args = ["transform", "--in", str(text_file), "--out", str(out), "--plain"]
        result = CliRunner().invoke(app, args)
        assert result.exit_code == 0
        assert "2 lines written" in result.output

    def test_unknown_command(self):
        assert run(["frobnicate"]) == EXIT_USAGE

    def test_unknown_flag(self, tmp_path, text_file):
        args = ["transform", "--in", str(text_file), "--out", str(tmp_path / "o"), "--bogus"]
        assert run(args) == EXIT_USAGE

    def test_conflicting_flags(self, tmp_path, text_file):
        args = ["transform", "--in", str(text_file), "--out", str(tmp_path / "o")]
        assert run(args + ["--star", "--plain"]) == EXIT_USAGE
        assert run(args) == EXIT_USAGE

    def test_missing_input(self, tmp_path):
        args = ["transform", "--in", str(tmp_path / "absent.txt"), "--out", str(tmp_path / "o")]
        assert run(args + ["--plain"]) == EXIT_DATA

    def test_missing_manifest(self, tmp_path):
        assert run(["corpus", "stats", "--manifest", str(tmp_path / "nowhere")]) == EXIT_DATA

    def test_invalid_config(self, tmp_path, tiny_corpus):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"asr_epochs": -1}), encoding="utf-8")
        args = ["train", "--manifest", str(tiny_corpus.root), "--out", str(tmp_path / "m.ckpt")]
        assert run(args + ["--config", str(path)]) == EXIT_DATA

    def test_ner_phase_needs_checkpoint(self, tmp_path, tiny_corpus):
        args = ["train", "--manifest", str(tiny_corpus.root), "--out", str(tmp_path / "m.ckpt")]
        assert run(args + ["--phase", "ner"]) == EXIT_USAGE


class TestTransform:
    def test_star(self, tmp_path, text_file):
        out = tmp_path / "out.txt"
        assert run(["transform", "--in", str(text_file), "--out", str(out), "--star"]) == 0
        assert out.read_text(encoding="utf-8").splitlines() == [STARRED, "*"]

    def test_plain(self, tmp_path, text_file):
        out = tmp_path / "out.txt"
        assert run(["transform", "--in", str(text_file), "--out", str(out), "--plain"]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "selon césar il est parti hier il habite à paris"

    def test_strict_encode_rejects_malformed_line(self, tmp_path):
        src = tmp_path / "in.txt"
        src.write_text("il pleut\n[ césar\n", encoding="utf-8")
        args = ["transform", "--in", str(src), "--out", str(tmp_path / "o"), "--encode"]
        assert run(args) == EXIT_DATA
        assert not (tmp_path / "o").exists()


class TestCorpusCommands:
    def test_gen_with_overrides(self, tmp_path, tiny_spec):
        spec_path = tmp_path / "spec.json"
        tiny_spec.save(spec_path)
        out = tmp_path / "gen"
        args = ["--seed", "3", "corpus", "gen", "--out", str(out), "--spec", str(spec_path)]
        assert run(args + ["--train", "4", "--dev", "2", "--test", "1", "--asr-only", "2"]) == 0

        corpus = Corpus.load(out)
        assert corpus.spec.seed == 3
        assert len(corpus.split(Split.TRAIN)) == 6
        assert len(corpus.split(Split.TRAIN, annotated_only=True)) == 4
        assert len(corpus.split(Split.DEV)) == 2

    def test_stats(self, tiny_corpus):
        assert run(["corpus", "stats", "--manifest", str(tiny_corpus.root)]) == 0

    def test_rules_and_augment(self, tmp_path, tiny_corpus, tiny_spec):
        rules = tmp_path / "rules.json"
        args = ["corpus", "rules", "--corpus", str(tiny_corpus.root), "--out", str(rules)]
        assert run(args + ["--coverage", "1.0"]) == 0
        assert rules.exists()

        out = tmp_path / "aug" / "augmented.jsonl"
        args = ["augment", "--manifest", str(tiny_corpus.root), "--out", str(out)]
        assert run(args + ["--rules", str(rules)]) == 0
        augmented = Corpus.load(out)
        assert len(augmented) == tiny_spec.counts.asr_only
        assert all(u.source is Source.AUGMENTED for u in augmented)


class TestLmCommands:
    @pytest.mark.parametrize("mode", ["--tagged", "--plain"])
    def test_train_and_score(self, tmp_path, tiny_corpus, mode):
        lm = tmp_path / "lm.arpa"
        args = ["lm", "train", "--manifest", str(tiny_corpus.root), "--out", str(lm)]
        assert run(args + ["--order", "2", mode]) == 0
        expected = TextMode.TAGGED if mode == "--tagged" else TextMode.PLAIN
        assert load_lm(lm).text_mode is expected

        assert run(["lm", "score", "--lm", str(lm), "--manifest", str(tiny_corpus.root)]) == 0

    def test_starred_needs_tagged(self, tmp_path, tiny_corpus):
        args = ["lm", "train", "--manifest", str(tiny_corpus.root), "--out", str(tmp_path / "x")]
        assert run(args + ["--plain", "--starred"]) == EXIT_USAGE


class TestEval:
    def test_reference_against_itself(self, tmp_path, tiny_corpus):
        report_path = tmp_path / "report.json"
        root = str(tiny_corpus.root)
        args = ["eval", "--ref", root, "--hyp", str(tiny_corpus.root / "manifest.jsonl")]
        assert run(args + ["--wer", "--out", str(report_path)]) == 0
        report = EvalReport.load(report_path)
        assert report.category.f == 1.0
        assert report.catvalue.f == 1.0
        assert report.wer.rate == 0.0

    def test_id_mismatch(self, tmp_path, tiny_corpus):
        hyp = tmp_path / "h.jsonl"
        hyp.write_text('{"id": "nope", "tagged": "x"}\n', encoding="utf-8")
        assert run(["eval", "--ref", str(tiny_corpus.root), "--hyp", str(hyp)]) == EXIT_DATA


class TestWorkflow:
    def test_train_decode_evaluate(self, tmp_path, tiny_corpus, run_config):
        root = str(tiny_corpus.root)
        config = str(run_config)
        asr = tmp_path / "runs" / "asr.ckpt"
        ner = tmp_path / "runs" / "ner.ckpt"

        args = ["--threads", "2", "train", "--manifest", root, "--out", str(asr)]
        assert run(args + ["--config", config]) == 0
        assert load_checkpoint(asr).phase is Phase.ASR
        assert (tmp_path / "runs" / "asr.stats.jsonl").exists()
        assert RunConfig.load(tmp_path / "runs" / "asr.run_config.json").net.n_recurrent == 1

        args = ["train", "--manifest", root, "--out", str(ner), "--phase", "ner"]
        assert run(args + ["--from", str(asr), "--starred", "--config", config]) == 0
        model = load_checkpoint(ner)
        assert model.phase is Phase.NER
        assert model.alphabet.star_enabled and model.alphabet.tag_set_enabled

        nbest = tmp_path / "dev.nbest.jsonl"
        args = ["decode", "--ckpt", str(ner), "--manifest", root, "--out", str(nbest)]
        assert run(args + ["--split", "dev", "--n-best", "2", "--config", config]) == 0
        records = [json.loads(line) for line in nbest.read_text(encoding="utf-8").splitlines()]
        assert [r["id"] for r in records] == [u.id for u in tiny_corpus.split(Split.DEV)]
        assert (tmp_path / "dev.nbest.decoder.json").exists()

        args = ["eval", "--ref", root, "--hyp", str(nbest), "--split", "dev"]
        assert run(args + ["--mode", "catvalue"]) == 0

    def test_pipeline(self, tmp_path, tiny_corpus, run_config):
        root = str(tiny_corpus.root)
        asr = tmp_path / "asr.ckpt"
        assert run(["train", "--manifest", root, "--out", str(asr), "--config", str(run_config)]) == 0
        rules = tmp_path / "rules.json"
        assert run(["corpus", "rules", "--corpus", root, "--out", str(rules)]) == 0

        out = tmp_path / "pip.jsonl"
        args = ["pipeline", "--ckpt", str(asr), "--manifest", root, "--rules", str(rules)]
        assert run(args + ["--out", str(out), "--split", "test"]) == 0
        records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
        assert len(records) == len(tiny_corpus.split(Split.TEST))
        assert all({"id", "plain", "tagged"} <= set(r) for r in records)

        assert run(["eval", "--ref", root, "--hyp", str(out), "--split", "test"]) == 0

    def test_spec_is_stored_with_the_corpus(self, tiny_corpus, tiny_spec):
        assert CorpusSpec.load(tiny_corpus.root / "corpus_spec.json") == tiny_spec

    def test_train_prints_summary(self, tmp_path, tiny_corpus, run_config):
        args = ["train", "--manifest", str(tiny_corpus.root), "--out", str(tmp_path / "a.ckpt")]
        result = CliRunner().invoke(app, args + ["--config", str(run_config), "--epochs", "2"])
        assert result.exit_code == 0
        assert "2 epoch(s) in" in result.output
        assert "skipped sample(s), loss" in result.output
