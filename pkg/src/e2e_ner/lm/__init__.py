from .arpa import load_lm, save_lm
from .ngram import BOS, EOS, UNK, LmState, NgramLM, train_ngram
from .text import TextMode, lm_tokens

__all__ = [
    "NgramLM",
    "LmState",
    "BOS",
    "EOS",
    "UNK",
    "train_ngram",
    "save_lm",
    "load_lm",
    "TextMode",
    "lm_tokens",
]
