"""Exception hierarchy shared by every module."""

from typing import Any


class E2ENerError(Exception):
    """Base class; carries a human message and machine-readable details."""

    def __init__(
        self,
        message: str = "e2e-ner error occurred",
        details: dict[str, Any] | None = None,
    ):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


# Alphabet / transcripts


class AlphabetError(E2ENerError):
    """Invalid alphabet construction or lookup."""


class UnknownSymbolError(AlphabetError):
    def __init__(self, char: str, position: int | None = None):
        message = f"Character {char!r} is not in the alphabet"
        if position is not None:
            message += f" (position {position})"
        super().__init__(message, {"char": char, "position": position})


class TranscriptError(E2ENerError):
    """Malformed tagged transcript or invalid entity spans."""


class MalformedTranscriptError(TranscriptError):
    def __init__(self, reason: str, text: str | None = None):
        super().__init__(f"Malformed tagged transcript: {reason}", {"text": text})


class InvalidSpanError(TranscriptError):
    def __init__(self, reason: str, span: tuple[int, int] | None = None):
        super().__init__(f"Invalid entity span {span}: {reason}", {"span": span})


# Corpus


class CorpusError(E2ENerError):
    """Corpus generation or dataset I/O failure."""


class EmptyGazetteerError(CorpusError):
    def __init__(self, category: str):
        super().__init__(
            f"Category '{category}' is weighted but its gazetteer is empty",
            {"category": category},
        )


class FeatureFileError(CorpusError):
    def __init__(self, reason: str, path: str, utterance_id: str | None = None):
        prefix = f"utterance '{utterance_id}': " if utterance_id else ""
        super().__init__(
            f"{prefix}bad feature file {path}: {reason}",
            {"path": path, "utterance_id": utterance_id},
        )


class FeatureError(CorpusError):
    """Invalid input to feature synthesis or perturbation."""


class ManifestError(CorpusError):
    def __init__(self, reason: str, path: str, line: int | None = None):
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"bad manifest {where}: {reason}", {"path": path, "line": line})


# CTC / decoding


class CtcError(E2ENerError):
    """Invalid CTC input."""


class SearchSpaceTooLargeError(E2ENerError):
    def __init__(self, size: int, limit: int):
        super().__init__(
            f"Exhaustive search over {size} paths exceeds the limit {limit}",
            {"size": size, "limit": limit},
        )


class DecoderError(E2ENerError):
    """Decoder input mismatch."""


# Language model


class LanguageModelError(E2ENerError):
    """Language model training or file failure."""


class ArpaFormatError(LanguageModelError):
    def __init__(self, reason: str, path: str | None = None, line: int | None = None):
        super().__init__(
            f"Malformed ARPA file{f' {path}' if path else ''}"
            f"{f' at line {line}' if line is not None else ''}: {reason}",
            {"path": path, "line": line},
        )


# Network


class NetError(E2ENerError):
    """Acoustic model configuration or shape mismatch."""


class CheckpointError(NetError):
    def __init__(self, reason: str, path: str):
        super().__init__(f"Bad checkpoint {path}: {reason}", {"path": path})


class TrainingDivergedError(NetError):
    def __init__(
        self,
        utterance_id: str,
        epoch: int,
        step: int,
        loss: float,
        learning_rate: float,
        grad_norm: float,
    ):
        super().__init__(
            f"Training diverged on utterance '{utterance_id}' "
            f"(epoch {epoch}, step {step}, loss {loss}, grad norm {grad_norm})",
            {
                "utterance_id": utterance_id,
                "epoch": epoch,
                "step": step,
                "loss": loss,
                "learning_rate": learning_rate,
                "grad_norm": grad_norm,
            },
        )


# Augmentation / evaluation / configuration


class AugmentError(E2ENerError):
    """Text annotation failure."""


class EvaluationError(E2ENerError):
    """Scoring input mismatch."""


class ConfigError(E2ENerError):
    def __init__(self, reason: str, path: str | None = None, field: str | None = None):
        location = " ".join(p for p in (path, f"field '{field}'" if field else None) if p)
        super().__init__(
            f"Invalid configuration{f' ({location})' if location else ''}: {reason}",
            {"path": path, "field": field},
        )


class MissingInputError(E2ENerError):
    def __init__(self, path: str, what: str = "input file"):
        super().__init__(f"Missing {what}: {path}", {"path": path})
