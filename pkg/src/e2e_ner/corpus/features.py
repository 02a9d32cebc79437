"""
Synthetic acoustic features, perturbation and the binary feature file.

A feature sequence is a float ``(T, F)`` numpy array with ``T >= 1``; each row
stands for one 20 ms frame. Feature files are a ``<4sHII`` header (magic,
version, T, F) followed by ``T * F`` little-endian float32 values.
"""

import struct
from collections.abc import Sequence
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..alphabet.tags import MARKER_SET, STAR
from ..core.exceptions import FeatureError, FeatureFileError
from .schemas import CorpusSpec

FeatureSequence = np.ndarray

FEATURE_MAGIC = b"E2EF"
FEATURE_VERSION = 1
_HEADER = struct.Struct("<4sHII")

SeedLike = int | Sequence[int] | np.random.Generator


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@lru_cache(maxsize=16)
def character_prototypes(
    base_chars: str, feature_dim: int, seed: int
) -> dict[str, np.ndarray]:
    """One fixed random vector per base character, drawn from the master seed."""
    rng = np.random.default_rng([seed, 104729])
    table = rng.standard_normal((len(base_chars), feature_dim))
    return {ch: table[i] for i, ch in enumerate(base_chars)}


def synthesize_features(
    chars: str, spec: CorpusSpec, seed: SeedLike
) -> FeatureSequence:
    """Realize each character as ``d`` noisy copies of its prototype."""
    if not chars:
        raise FeatureError("cannot synthesize features for an empty string")
    prototypes = character_prototypes(spec.base_chars, spec.feature_dim, spec.seed)
    for pos, ch in enumerate(chars):
        if ch in MARKER_SET or ch == STAR:
            raise FeatureError(
                f"marker {ch!r} has no acoustic realization", {"position": pos}
            )
        if ch not in prototypes:
            raise FeatureError(f"character {ch!r} not in the base set", {"position": pos})

    rng = make_rng(seed)
    low, high = spec.duration_range
    durations = rng.integers(low, high + 1, size=len(chars))
    frames = np.repeat(
        np.stack([prototypes[ch] for ch in chars]), durations, axis=0
    )
    if spec.noise > 0:
        frames = frames + rng.normal(0.0, spec.noise, size=frames.shape)
    return frames.astype(np.float32)


def perturb(
    frames: FeatureSequence,
    gain_range: tuple[float, float],
    tempo_range: tuple[float, float],
    seed: SeedLike,
) -> FeatureSequence:
    """Additive log-domain gain plus linear-interpolation time resampling."""
    if frames.ndim != 2 or frames.shape[0] == 0:
        raise FeatureError("cannot perturb an empty feature sequence")
    if min(tempo_range) <= 0:
        raise FeatureError(f"tempo range must be positive, got {tempo_range}")

    rng = make_rng(seed)
    gain = rng.uniform(gain_range[0], gain_range[1])
    rate = rng.uniform(tempo_range[0], tempo_range[1])

    x = frames.astype(np.float64)
    t_in = x.shape[0]
    t_out = max(1, int(np.floor(t_in / rate + 0.5)))
    if t_out != t_in:
        positions = np.linspace(0.0, t_in - 1, t_out) if t_out > 1 else np.zeros(1)
        lo = np.floor(positions).astype(np.int64)
        hi = np.minimum(lo + 1, t_in - 1)
        frac = (positions - lo)[:, None]
        x = x[lo] * (1.0 - frac) + x[hi] * frac
    return x + gain


def write_features(path: str | Path, frames: FeatureSequence) -> None:
    frames = np.asarray(frames, dtype="<f4")
    if frames.ndim != 2 or frames.shape[0] < 1:
        raise FeatureError(f"feature matrix must be (T>=1, F), got {frames.shape}")
    if not np.all(np.isfinite(frames)):
        raise FeatureError("feature matrix has non-finite values")
    t, f = frames.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(FEATURE_MAGIC, FEATURE_VERSION, t, f))
        fh.write(frames.tobytes(order="C"))


def read_features(path: str | Path, utterance_id: str | None = None) -> FeatureSequence:
    path = Path(path)
    if not path.exists():
        raise FeatureFileError("file not found", str(path), utterance_id)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise FeatureFileError("truncated header", str(path), utterance_id)
    magic, version, t, f = _HEADER.unpack_from(data)
    if magic != FEATURE_MAGIC:
        raise FeatureFileError(f"bad magic {magic!r}", str(path), utterance_id)
    if version != FEATURE_VERSION:
        raise FeatureFileError(f"unsupported version {version}", str(path), utterance_id)
    payload = len(data) - _HEADER.size
    if t < 1 or f < 1 or payload != t * f * 4:
        raise FeatureFileError(
            f"header says T={t}, F={f} but payload holds {payload} bytes",
            str(path),
            utterance_id,
        )
    return np.frombuffer(data, dtype="<f4", offset=_HEADER.size).reshape(t, f).copy()
