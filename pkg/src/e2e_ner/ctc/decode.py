"""Best-path decoding and symbol masking."""

from collections.abc import Iterable, Sequence

import numpy as np

from ..core.exceptions import CtcError
from .loss import BLANK, collapse_path


def collapse(path: Sequence[int]) -> list[int]:
    """Merge adjacent repeats, then delete blanks."""
    return list(collapse_path([int(k) for k in path]))


def mask_symbols(lattice: np.ndarray, suppress_ids: Iterable[int]) -> np.ndarray:
    """Copy of ``lattice`` whose suppressed columns can never win (-inf logits)."""
    ids = sorted(set(int(k) for k in suppress_ids))
    if not ids:
        return np.asarray(lattice, dtype=np.float64)
    if BLANK in ids:
        raise CtcError("the blank cannot be suppressed", {"suppress_ids": ids})
    masked = np.array(lattice, dtype=np.float64, copy=True)
    if ids[0] < 0 or ids[-1] >= masked.shape[-1]:
        raise CtcError(
            f"suppressed ids must lie in [1, {masked.shape[-1]})", {"suppress_ids": ids}
        )
    masked[:, ids] = -np.inf
    return masked


def greedy_decode(
    lattice: np.ndarray, suppress_ids: Iterable[int] = ()
) -> list[int]:
    """Per-frame argmax (ties to the lowest id), then collapse."""
    scores = mask_symbols(lattice, suppress_ids)
    return collapse(np.argmax(scores, axis=1).tolist())
