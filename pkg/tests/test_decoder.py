"""Prefix beam search with shallow LM fusion."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from e2e_ner.alphabet import build_alphabet
from e2e_ner.core.exceptions import DecoderError, SearchSpaceTooLargeError
from e2e_ner.decoder import (
    DecoderConfig,
    beam_search,
    exhaustive_oracle,
    lm_logp,
    rank_label_sequences,
    score_Q,
    word_count,
)
from e2e_ner.lm import TextMode, train_ngram

FUSION_WEIGHTS = [(0.0, 0.0), (0.5, 1.0), (1.0, -0.5)]


@pytest.fixture
def small_lm():
    return train_ngram(["a b", "ab", "b", "a a b", "ba"], order=2)


def skewed_lattice():
    """'b' is acoustically more likely than 'a' on every frame."""
    row = np.log([0.5, 0.01, 0.2, 0.29])
    return np.tile(row, (3, 1))


class TestBeamSearch:
    @pytest.mark.parametrize("alpha,beta", FUSION_WEIGHTS)
    def test_saturated_beam_matches_oracle(self, small_alphabet, small_lm, alpha, beta):
        rng = np.random.default_rng([17, int(alpha * 10), int(beta * 10 + 10)])
        cfg = DecoderConfig(alpha=alpha, beta=beta, beam_width=10_000)
        for _ in range(100):
            n_frames = int(rng.integers(1, 6))
            lattice = rng.normal(0.0, 1.5, size=(n_frames, small_alphabet.size))
            best = beam_search(lattice, small_lm, small_alphabet, cfg)[0]
            ranked = rank_label_sequences(lattice, small_lm, small_alphabet, alpha, beta)
            assert best.q == pytest.approx(ranked[0].q, abs=1e-9)
            if len(ranked) == 1 or ranked[0].q - ranked[1].q > 1e-9:
                assert best.text == ranked[0].text

    def test_oracle_returns_text_and_q(self, small_alphabet, small_lm):
        lattice = skewed_lattice()
        text, q = exhaustive_oracle(lattice, small_lm, small_alphabet, 0.0, 0.0)
        assert text == "b"
        assert q == pytest.approx(math.log(0.29 * 0.25 * 3 + 0.29**2 * 0.5 * 2 + 0.29**3))

    def test_lm_weight_flips_best_hypothesis(self, small_alphabet):
        lm = train_ngram(["a"] * 20 + ["b"], order=2)
        lattice = skewed_lattice()
        acoustic = DecoderConfig(alpha=0.0, beta=0.0, beam_width=16)
        fused = DecoderConfig(alpha=1.0, beta=0.0, beam_width=16)
        assert beam_search(lattice, lm, small_alphabet, acoustic)[0].text == "b"
        assert beam_search(lattice, lm, small_alphabet, fused)[0].text == "a"

    def test_q_agrees_with_score_q(self, small_alphabet, small_lm, rng):
        cfg = DecoderConfig(alpha=0.7, beta=0.3, beam_width=10_000, n_best=4)
        lattice = rng.normal(size=(5, small_alphabet.size))
        for hyp in beam_search(lattice, small_lm, small_alphabet, cfg):
            assert hyp.q == pytest.approx(
                score_Q(hyp.text, lattice, small_lm, small_alphabet, cfg), abs=1e-9
            )

    def test_n_best_is_sorted_and_distinct(self, small_alphabet, rng):
        cfg = DecoderConfig(alpha=0.0, beta=0.0, beam_width=16, n_best=5)
        hyps = beam_search(rng.normal(size=(4, small_alphabet.size)), None, small_alphabet, cfg)
        assert len(hyps) == 5
        assert [h.q for h in hyps] == sorted((h.q for h in hyps), reverse=True)
        assert len({h.text for h in hyps}) == 5

    def test_suppressed_symbols_never_appear(self, rng):
        alphabet = build_alphabet(" ab", tag_set_enabled=True)
        lattice = rng.normal(size=(6, alphabet.size))
        lattice[:, alphabet.marker_ids] += 5.0
        cfg = DecoderConfig(beam_width=8, n_best=3, suppress_ids=alphabet.non_base_ids)
        for hyp in beam_search(lattice, None, alphabet, cfg):
            assert not set(hyp.prefix) & set(alphabet.marker_ids)

    def test_pruning_keeps_a_result(self, small_alphabet, rng):
        cfg = DecoderConfig(beam_width=4, prune_threshold=-1.0)
        hyps = beam_search(rng.normal(size=(5, small_alphabet.size)), None, small_alphabet, cfg)
        assert len(hyps) == 1

    def test_record_fields(self, small_alphabet, rng):
        hyp = beam_search(rng.normal(size=(3, small_alphabet.size)), None, small_alphabet)[0]
        assert set(hyp.as_record()) == {"tagged", "Q", "ctc_logp", "lm_logp", "wc"}

    def test_shape_mismatch(self, small_alphabet):
        with pytest.raises(DecoderError):
            beam_search(np.zeros((3, small_alphabet.size + 1)), None, small_alphabet)

    def test_oracle_limit(self, small_alphabet):
        with pytest.raises(SearchSpaceTooLargeError):
            rank_label_sequences(np.zeros((12, small_alphabet.size)), None, small_alphabet, 0, 0)


class TestFusion:
    def test_word_count_ignores_markers(self):
        assert word_count("[ césar ] est à $ paris ]") == 4
        assert word_count("* [ césar ] *") == 1
        assert word_count("") == 0

    def test_plain_lm_skips_markers(self):
        lm = train_ngram(["paris est", "rome"], order=2, text_mode=TextMode.PLAIN)
        assert lm_logp("$ paris ] est", lm) == pytest.approx(lm.score(["paris", "est"]))

    def test_tagged_lm_scores_markers(self):
        lm = train_ngram(["$ paris ] est"], order=2)
        assert lm_logp("$ paris ] est", lm) == pytest.approx(lm.score(["$", "paris", "]", "est"]))

    def test_infeasible_text_scores_minus_infinity(self, small_alphabet):
        lattice = np.zeros((1, small_alphabet.size))
        cfg = DecoderConfig(alpha=0.0, beta=0.0)
        assert score_Q("ab", lattice, None, small_alphabet, cfg) == -math.inf


class TestConfig:
    def test_defaults(self):
        cfg = DecoderConfig()
        assert (cfg.alpha, cfg.beta, cfg.beam_width, cfg.n_best) == (0.8, 1.0, 64, 1)
        assert cfg.prune_threshold is None

    def test_n_best_cannot_exceed_beam(self):
        with pytest.raises(ValidationError):
            DecoderConfig(beam_width=2, n_best=3)

    def test_blank_cannot_be_suppressed(self):
        with pytest.raises(ValidationError):
            DecoderConfig(suppress_ids=(0, 3))

    def test_positive_prune_threshold(self):
        with pytest.raises(ValidationError):
            DecoderConfig(prune_threshold=0.5)
