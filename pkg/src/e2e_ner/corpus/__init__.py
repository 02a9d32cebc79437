from .features import (
    FEATURE_MAGIC,
    FEATURE_VERSION,
    FeatureSequence,
    perturb,
    read_features,
    synthesize_features,
    write_features,
)
from .generator import (
    GeneratedUtterance,
    allocate_counts,
    generate_corpus,
    generate_transcripts,
)
from .manifest import Corpus, read_manifest, write_corpus, write_manifest
from .schemas import CorpusSpec, Source, Split, SplitCounts, Utterance

__all__ = [
    # Schemas
    "CorpusSpec",
    "SplitCounts",
    "Split",
    "Source",
    "Utterance",
    # Features
    "FeatureSequence",
    "FEATURE_MAGIC",
    "FEATURE_VERSION",
    "synthesize_features",
    "perturb",
    "read_features",
    "write_features",
    # Generation
    "GeneratedUtterance",
    "allocate_counts",
    "generate_transcripts",
    "generate_corpus",
    # Manifest
    "Corpus",
    "read_manifest",
    "write_manifest",
    "write_corpus",
]
