"""
Layers with hand-written backward passes (float64, one utterance at a time).

Every layer owns named parameter arrays in ``params``; ``forward`` returns the
output and a cache, ``backward`` takes the output gradient and the cache and
returns the input gradient plus a gradient dict keyed like ``params``.
"""

from typing import Any

import numpy as np

Params = dict[str, np.ndarray]
Cache = dict[str, Any]


def uniform_init(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


class Layer:
    def __init__(self, params: Params):
        self.params = params

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Cache]:
        raise NotImplementedError

    def backward(self, dy: np.ndarray, cache: Cache) -> tuple[np.ndarray, Params]:
        raise NotImplementedError


class Conv1D(Layer):
    """Same-padded 1-D convolution over time with stride, tanh activation.

    ``W`` is (kernel, in, out); output length is ``ceil(T / stride)``.
    """

    def __init__(self, params: Params, stride: int):
        super().__init__(params)
        self.stride = stride
        self.kernel = params["W"].shape[0]

    @classmethod
    def init(cls, rng: np.random.Generator, n_in: int, n_out: int, kernel: int, stride: int):
        fan_in = kernel * n_in
        return cls(
            {
                "W": uniform_init(rng, (kernel, n_in, n_out), fan_in),
                "b": uniform_init(rng, (n_out,), fan_in),
            },
            stride,
        )

    def _indices(self, n_frames: int) -> np.ndarray:
        n_out = -(-n_frames // self.stride)
        return np.arange(n_out)[:, None] * self.stride + np.arange(self.kernel)[None, :]

    def forward(self, x):
        pad = self.kernel // 2
        xp = np.pad(x, ((pad, pad), (0, 0)))
        idx = self._indices(x.shape[0])
        cols = xp[idx]  # (T', K, in)
        y = np.tanh(np.einsum("tkc,kco->to", cols, self.params["W"]) + self.params["b"])
        return y, {"cols": cols, "y": y, "idx": idx, "n_frames": x.shape[0]}

    def backward(self, dy, cache):
        dpre = dy * (1.0 - cache["y"] ** 2)
        grads = {
            "W": np.einsum("tkc,to->kco", cache["cols"], dpre),
            "b": dpre.sum(axis=0),
        }
        dcols = np.einsum("to,kco->tkc", dpre, self.params["W"])
        pad = self.kernel // 2
        dxp = np.zeros((cache["n_frames"] + 2 * pad, dcols.shape[2]))
        idx = cache["idx"]
        for k in range(self.kernel):
            # positions within one kernel offset never repeat
            dxp[idx[:, k]] += dcols[:, k]
        return dxp[pad : pad + cache["n_frames"]], grads


class GRU(Layer):
    """Single-direction gated recurrent layer, gates stacked as (r, z, n).

        r = sigmoid(x Wx_r + bx_r + h Wh_r + bh_r)
        z = sigmoid(x Wx_z + bx_z + h Wh_z + bh_z)
        n = tanh(x Wx_n + bx_n + r * (h Wh_n + bh_n))
        h' = (1 - z) * n + z * h
    """

    @property
    def hidden_size(self) -> int:
        return self.params["Wh"].shape[0]

    @classmethod
    def init(cls, rng: np.random.Generator, n_in: int, hidden: int):
        return cls(
            {
                "Wx": uniform_init(rng, (n_in, 3 * hidden), hidden),
                "Wh": uniform_init(rng, (hidden, 3 * hidden), hidden),
                "bx": uniform_init(rng, (3 * hidden,), hidden),
                "bh": uniform_init(rng, (3 * hidden,), hidden),
            }
        )

    def forward(self, x):
        H = self.hidden_size
        p = self.params
        gx = x @ p["Wx"] + p["bx"]
        n_frames = x.shape[0]
        hs = np.zeros((n_frames + 1, H))
        r = np.empty((n_frames, H))
        z = np.empty((n_frames, H))
        n = np.empty((n_frames, H))
        ghn = np.empty((n_frames, H))
        for t in range(n_frames):
            gh = hs[t] @ p["Wh"] + p["bh"]
            r[t] = sigmoid(gx[t, :H] + gh[:H])
            z[t] = sigmoid(gx[t, H : 2 * H] + gh[H : 2 * H])
            ghn[t] = gh[2 * H :]
            n[t] = np.tanh(gx[t, 2 * H :] + r[t] * ghn[t])
            hs[t + 1] = (1.0 - z[t]) * n[t] + z[t] * hs[t]
        return hs[1:], {"x": x, "hs": hs, "r": r, "z": z, "n": n, "ghn": ghn}

    def backward(self, dy, cache):
        H = self.hidden_size
        Wh = self.params["Wh"]
        hs, r, z, n, ghn = cache["hs"], cache["r"], cache["z"], cache["n"], cache["ghn"]
        n_frames = dy.shape[0]
        dgx = np.empty((n_frames, 3 * H))
        dWh = np.zeros_like(Wh)
        dbh = np.zeros(3 * H)
        carry = np.zeros(H)
        for t in range(n_frames - 1, -1, -1):
            h_prev = hs[t]
            dh = dy[t] + carry
            dn = dh * (1.0 - z[t])
            dz = dh * (h_prev - n[t])
            dpre_n = dn * (1.0 - n[t] ** 2)
            dpre_r = dpre_n * ghn[t] * r[t] * (1.0 - r[t])
            dpre_z = dz * z[t] * (1.0 - z[t])
            dgh = np.concatenate((dpre_r, dpre_z, dpre_n * r[t]))
            dgx[t] = np.concatenate((dpre_r, dpre_z, dpre_n))
            dWh += np.outer(h_prev, dgh)
            dbh += dgh
            carry = dh * z[t] + Wh @ dgh
        grads = {
            "Wx": cache["x"].T @ dgx,
            "Wh": dWh,
            "bx": dgx.sum(axis=0),
            "bh": dbh,
        }
        return dgx @ self.params["Wx"].T, grads


class BiGRU(Layer):
    """Forward and time-reversed GRUs, outputs concatenated to 2 * hidden."""

    def __init__(self, forward_gru: GRU, backward_gru: GRU):
        params = {f"fw.{k}": v for k, v in forward_gru.params.items()}
        params |= {f"bw.{k}": v for k, v in backward_gru.params.items()}
        super().__init__(params)
        self.fw = forward_gru
        self.bw = backward_gru

    @classmethod
    def from_params(cls, params: Params) -> "BiGRU":
        def half(prefix: str) -> GRU:
            return GRU({k[3:]: v for k, v in params.items() if k.startswith(prefix)})

        return cls(half("fw."), half("bw."))

    @classmethod
    def init(cls, rng: np.random.Generator, n_in: int, hidden: int):
        return cls(GRU.init(rng, n_in, hidden), GRU.init(rng, n_in, hidden))

    def forward(self, x):
        yf, cf = self.fw.forward(x)
        yb, cb = self.bw.forward(x[::-1])
        return np.concatenate((yf, yb[::-1]), axis=1), {"fw": cf, "bw": cb}

    def backward(self, dy, cache):
        H = self.fw.hidden_size
        dxf, gf = self.fw.backward(dy[:, :H], cache["fw"])
        dxb, gb = self.bw.backward(dy[::-1, H:], cache["bw"])
        grads = {f"fw.{k}": v for k, v in gf.items()}
        grads |= {f"bw.{k}": v for k, v in gb.items()}
        return dxf + dxb[::-1], grads


class Affine(Layer):
    @classmethod
    def init(cls, rng: np.random.Generator, n_in: int, n_out: int):
        return cls(
            {
                "W": uniform_init(rng, (n_in, n_out), n_in),
                "b": uniform_init(rng, (n_out,), n_in),
            }
        )

    def forward(self, x):
        return x @ self.params["W"] + self.params["b"], {"x": x}

    def backward(self, dy, cache):
        grads = {"W": cache["x"].T @ dy, "b": dy.sum(axis=0)}
        return dy @ self.params["W"].T, grads
