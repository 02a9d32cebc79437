from .decode import collapse, greedy_decode, mask_symbols
from .loss import (
    BLANK,
    BRUTEFORCE_LIMIT,
    CtcResult,
    ctc_loss,
    ctc_loss_bruteforce,
    log_softmax,
    log_sum_exp,
    min_frames,
)

__all__ = [
    "BLANK",
    "BRUTEFORCE_LIMIT",
    "CtcResult",
    "ctc_loss",
    "ctc_loss_bruteforce",
    "log_softmax",
    "log_sum_exp",
    "min_frames",
    "collapse",
    "greedy_decode",
    "mask_symbols",
]
