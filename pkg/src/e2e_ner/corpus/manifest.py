"""JSONL manifests and the on-disk corpus directory."""

import json
from collections.abc import Iterable, Iterator
from pathlib import Path

from pydantic import ValidationError

from ..alphabet.alphabet import Alphabet, build_alphabet
from ..core.exceptions import ManifestError, MissingInputError
from ..core.logging_config import get_logger
from .features import FeatureSequence, read_features, write_features
from .generator import GeneratedUtterance
from .schemas import CorpusSpec, Split, Utterance

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.jsonl"
SPEC_NAME = "corpus_spec.json"
ALPHABET_NAME = "alphabet.txt"


def write_manifest(path: str | Path, utterances: Iterable[Utterance]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for utterance in utterances:
            fh.write(utterance.model_dump_json() + "\n")


def read_manifest(path: str | Path) -> list[Utterance]:
    path = Path(path)
    if not path.exists():
        raise MissingInputError(str(path), what="manifest")
    utterances: list[Utterance] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                utterance = Utterance.model_validate(json.loads(line))
            except json.JSONDecodeError as e:
                raise ManifestError(f"invalid JSON ({e.msg})", str(path), lineno)
            except ValidationError as e:
                first = e.errors()[0]
                field = ".".join(str(p) for p in first["loc"]) or "record"
                raise ManifestError(f"{field}: {first['msg']}", str(path), lineno)
            if utterance.id in seen:
                raise ManifestError(f"duplicate id '{utterance.id}'", str(path), lineno)
            seen.add(utterance.id)
            utterances.append(utterance)
    return utterances


class Corpus:
    """Manifest records plus lazy access to their feature files."""

    def __init__(self, root: str | Path, utterances: list[Utterance]):
        self.root = Path(root)
        self.utterances = utterances
        self._by_id = {u.id: u for u in utterances}

    @classmethod
    def load(cls, path: str | Path) -> "Corpus":
        """``path`` is a corpus directory or a manifest file."""
        path = Path(path)
        manifest = path / MANIFEST_NAME if path.is_dir() else path
        return cls(manifest.parent, read_manifest(manifest))

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    def __getitem__(self, utterance_id: str) -> Utterance:
        return self._by_id[utterance_id]

    def split(self, split: Split | str, annotated_only: bool = False) -> list[Utterance]:
        split = Split(split)
        return [
            u
            for u in self.utterances
            if u.split is split and (u.annotated or not annotated_only)
        ]

    def features(self, utterance: Utterance) -> FeatureSequence:
        return read_features(self.root / utterance.features, utterance.id)

    @property
    def spec(self) -> CorpusSpec | None:
        path = self.root / SPEC_NAME
        return CorpusSpec.load(path) if path.exists() else None

    @property
    def alphabet(self) -> Alphabet:
        path = self.root / ALPHABET_NAME
        if path.exists():
            return Alphabet.load(path)
        spec = self.spec
        if spec is None:
            raise MissingInputError(str(path), what="alphabet")
        return build_alphabet(spec.base_chars)


def write_corpus(
    out_dir: str | Path, spec: CorpusSpec, generated: list[GeneratedUtterance]
) -> Corpus:
    """Write features, manifest, spec and base alphabet under ``out_dir``."""
    out = Path(out_dir)
    (out / "features").mkdir(parents=True, exist_ok=True)
    for item in generated:
        write_features(out / item.utterance.features, item.frames)
    utterances = [item.utterance for item in generated]
    write_manifest(out / MANIFEST_NAME, utterances)
    spec.save(out / SPEC_NAME)
    build_alphabet(spec.base_chars).save(out / ALPHABET_NAME)
    logger.info("corpus_written", path=str(out), utterances=len(utterances))
    return Corpus(out, utterances)
