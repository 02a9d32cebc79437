"""Momentum SGD with clip-by-global-norm."""

import numpy as np

from .layers import Params


def global_norm(grads: Params) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


class MomentumSGD:
    """v <- momentum * v - lr * clip(g);  p <- p + v  (in place)."""

    def __init__(self, params: Params, learning_rate: float, momentum: float, clip_norm: float):
        self.params = params
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.clip_norm = clip_norm
        self.velocity = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, grads: Params) -> float:
        """Apply one update; returns the pre-clip gradient norm."""
        norm = global_norm(grads)
        scale = min(1.0, self.clip_norm / norm) if norm > 0 else 1.0
        for name, param in self.params.items():
            v = self.velocity[name]
            v *= self.momentum
            v -= self.learning_rate * scale * grads[name]
            param += v
        return norm
