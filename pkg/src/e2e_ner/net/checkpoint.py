"""
Checkpoint file.

    magic   4 bytes  b"E2EC"
    version u16 LE
    length  u32 LE   size of the JSON header
    header  JSON     config, alphabet, phase, epoch, history, tensor table
    payload          float64 LE tensors in tensor-table order

Files are written to a temporary sibling and renamed into place.
"""

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from ..alphabet.alphabet import Alphabet
from ..core.exceptions import CheckpointError, MissingInputError, NetError
from ..core.logging_config import get_logger
from .config import NetConfig, Phase
from .model import AcousticModel

logger = get_logger(__name__)

CHECKPOINT_MAGIC = b"E2EC"
CHECKPOINT_VERSION = 1
_PREFIX = struct.Struct("<4sHI")

_NORM_MEAN = "norm.mean"
_NORM_STD = "norm.std"


def save_checkpoint(model: AcousticModel, path: str | Path) -> None:
    tensors = dict(model.params)
    tensors[_NORM_MEAN] = model.feature_mean
    tensors[_NORM_STD] = model.feature_std
    header = {
        "config": model.config.model_dump(mode="json"),
        "alphabet": model.alphabet.model_dump(mode="json"),
        "phase": model.phase.value,
        "epoch": model.epoch,
        "history": model.history,
        "tensors": [{"name": k, "shape": list(v.shape)} for k, v in tensors.items()],
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_PREFIX.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, len(blob)))
            fh.write(blob)
            for value in tensors.values():
                fh.write(np.ascontiguousarray(value, dtype="<f8").tobytes())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.info("checkpoint_saved", path=str(path), phase=model.phase.value, epoch=model.epoch)


def load_checkpoint(path: str | Path) -> AcousticModel:
    path = Path(path)
    if not path.exists():
        raise MissingInputError(str(path), what="checkpoint")
    where = str(path)
    data = path.read_bytes()
    if len(data) < _PREFIX.size:
        raise CheckpointError("truncated header", where)
    magic, version, length = _PREFIX.unpack_from(data)
    if magic != CHECKPOINT_MAGIC:
        raise CheckpointError(f"bad magic {magic!r}", where)
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"unsupported version {version} (expected {CHECKPOINT_VERSION})", where
        )
    start = _PREFIX.size
    if len(data) < start + length:
        raise CheckpointError("truncated JSON header", where)
    try:
        header = json.loads(data[start : start + length].decode("utf-8"))
        config = NetConfig.model_validate(header["config"])
        alphabet = Alphabet.model_validate(header["alphabet"])
        table = [(t["name"], tuple(t["shape"])) for t in header["tensors"]]
    except (ValueError, KeyError, TypeError, ValidationError) as e:
        raise CheckpointError(f"unreadable header ({e})", where)

    offset = start + length
    expected = offset + sum(8 * int(np.prod(shape)) for _, shape in table)
    if len(data) != expected:
        raise CheckpointError(
            f"payload holds {len(data) - offset} bytes, header needs {expected - offset}", where
        )
    tensors: dict[str, np.ndarray] = {}
    for name, shape in table:
        count = int(np.prod(shape))
        tensors[name] = (
            np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(shape).copy()
        )
        offset += 8 * count

    mean = tensors.pop(_NORM_MEAN, None)
    std = tensors.pop(_NORM_STD, None)
    try:
        return AcousticModel(
            config,
            alphabet,
            tensors,
            mean,
            std,
            Phase(header.get("phase", "asr")),
            int(header.get("epoch", 0)),
            header.get("history", []),
        )
    except NetError as e:
        raise CheckpointError(e.message, where)
