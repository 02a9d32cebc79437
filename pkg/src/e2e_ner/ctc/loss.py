"""
CTC loss and its exact gradient with respect to the logits.

Forward-backward over the blank-interleaved target ``l'`` (length ``2U+1``) in
natural-log space. ``alpha[t, s]`` includes the emission at ``t``; ``beta[t, s]``
excludes it, so ``alpha[t, s] + beta[t, s]`` is the log mass of all paths
through state ``s`` at ``t``.
"""

import itertools
import math
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from ..core.exceptions import CtcError, SearchSpaceTooLargeError

BLANK = 0
BRUTEFORCE_LIMIT = 10**7

NEG_INF = -np.inf


class CtcResult(NamedTuple):
    loss: float
    grad: np.ndarray
    feasible: bool = True


def log_sum_exp(values: np.ndarray, axis: int | None = None) -> np.ndarray:
    """Stable log(sum(exp(values))); all -inf inputs give -inf."""
    values = np.asarray(values, dtype=np.float64)
    peak = np.max(values, axis=axis, keepdims=True)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(values - peak), axis=axis, keepdims=True)) + peak
    return out.squeeze() if axis is None else np.squeeze(out, axis=axis)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    return logits - log_sum_exp(logits, axis=1)[:, None]


def min_frames(target: Sequence[int]) -> int:
    """Shortest lattice that can emit ``target``: one frame per label plus one per repeat."""
    repeats = sum(1 for a, b in zip(target, target[1:]) if a == b)
    return len(target) + repeats


def _check(lattice: np.ndarray, target: Sequence[int]) -> None:
    if lattice.ndim != 2 or lattice.shape[0] < 1:
        raise CtcError(f"lattice must be (T>=1, A), got {lattice.shape}")
    if not np.all(np.isfinite(lattice)):
        raise CtcError("lattice has non-finite entries")
    n_symbols = lattice.shape[1]
    for pos, k in enumerate(target):
        if k == BLANK:
            raise CtcError("blank in target", {"position": pos})
        if not 0 < k < n_symbols:
            raise CtcError(f"target id {k} outside the alphabet", {"position": pos})


def _shift(v: np.ndarray, k: int) -> np.ndarray:
    """Shift right by ``k`` (left when negative), filling with -inf."""
    out = np.full_like(v, NEG_INF)
    n = len(v)
    if k >= 0 and k < n:
        out[k:] = v[: n - k]
    elif k < 0 and -k < n:
        out[:k] = v[-k:]
    return out


def ctc_loss(lattice: np.ndarray, target: Sequence[int]) -> CtcResult:
    """Negative log-likelihood of ``target`` and its gradient w.r.t. the logits."""
    lattice = np.asarray(lattice, dtype=np.float64)
    target = [int(k) for k in target]
    _check(lattice, target)
    n_frames, n_symbols = lattice.shape

    if min_frames(target) > n_frames:
        return CtcResult(math.inf, np.zeros_like(lattice), feasible=False)

    logp = log_softmax(lattice)
    ext = [BLANK]
    for k in target:
        ext += [k, BLANK]
    ext_arr = np.array(ext)
    n_states = len(ext)

    # skip transition s-2 -> s allowed into non-blank states that differ from s-2
    can_skip = np.zeros(n_states, dtype=bool)
    for s in range(2, n_states):
        can_skip[s] = ext[s] != BLANK and ext[s] != ext[s - 2]

    emit = logp[:, ext_arr]
    alpha = np.full((n_frames, n_states), NEG_INF)
    alpha[0, 0] = emit[0, 0]
    if n_states > 1:
        alpha[0, 1] = emit[0, 1]
    for t in range(1, n_frames):
        prev = alpha[t - 1]
        skip = np.where(can_skip, _shift(prev, 2), NEG_INF)
        alpha[t] = np.logaddexp(np.logaddexp(prev, _shift(prev, 1)), skip) + emit[t]

    beta = np.full((n_frames, n_states), NEG_INF)
    beta[-1, -1] = 0.0
    if n_states > 1:
        beta[-1, -2] = 0.0
    skip_from = np.zeros(n_states, dtype=bool)
    skip_from[: max(0, n_states - 2)] = can_skip[2:]
    for t in range(n_frames - 2, -1, -1):
        nxt = beta[t + 1] + emit[t + 1]
        skip = np.where(skip_from, _shift(nxt, -2), NEG_INF)
        beta[t] = np.logaddexp(np.logaddexp(nxt, _shift(nxt, -1)), skip)

    tail = alpha[-1, -1] if n_states == 1 else np.logaddexp(alpha[-1, -1], alpha[-1, -2])
    log_likelihood = float(tail)
    if not np.isfinite(log_likelihood):
        return CtcResult(math.inf, np.zeros_like(lattice), feasible=False)

    occupancy = np.exp(alpha + beta - log_likelihood)
    grad = np.exp(logp)
    for k in set(ext):
        grad[:, k] -= occupancy[:, ext_arr == k].sum(axis=1)
    return CtcResult(max(0.0, -log_likelihood), grad, feasible=True)


def collapse_path(path: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    previous = None
    for k in path:
        if k != previous and k != BLANK:
            out.append(k)
        previous = k
    return tuple(out)


def ctc_loss_bruteforce(
    lattice: np.ndarray, target: Sequence[int], limit: int = BRUTEFORCE_LIMIT
) -> float:
    """Enumerate every path; +inf when none collapses to ``target``."""
    lattice = np.asarray(lattice, dtype=np.float64)
    target = tuple(int(k) for k in target)
    _check(lattice, target)
    n_frames, n_symbols = lattice.shape
    size = n_symbols**n_frames
    if size > limit:
        raise SearchSpaceTooLargeError(size, limit)

    logp = log_softmax(lattice)
    frames = np.arange(n_frames)
    terms = [
        logp[frames, list(path)].sum()
        for path in itertools.product(range(n_symbols), repeat=n_frames)
        if collapse_path(path) == target
    ]
    if not terms:
        return math.inf
    return max(0.0, -float(log_sum_exp(np.array(terms))))
