"""
Acoustic model: standardization, conv front-end, BiGRU stack, affine output.

Parameters live in one flat ordered dict (``conv0.W``, ``rnn1.fw.Wh``,
``out.b``, ...); layers hold references to the same arrays, so in-place
optimizer updates are seen by the forward pass.
"""

import math
from collections.abc import Sequence

import numpy as np

from ..alphabet.alphabet import Alphabet
from ..core.exceptions import NetError
from ..core.logging_config import get_logger
from ..ctc.loss import CtcResult, ctc_loss
from .config import ExtensionMode, NetConfig, Phase
from .layers import Affine, BiGRU, Conv1D, Layer, Params

logger = get_logger(__name__)

OUTPUT_LAYER = "out"
_STD_FLOOR = 1e-6


def _seeded(seed: int, *salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, *salt])


class AcousticModel:
    """A trainable mapping from a feature sequence to a logit lattice."""

    def __init__(
        self,
        config: NetConfig,
        alphabet: Alphabet,
        params: Params,
        feature_mean: np.ndarray | None = None,
        feature_std: np.ndarray | None = None,
        phase: Phase = Phase.ASR,
        epoch: int = 0,
        history: list[dict] | None = None,
    ):
        if config.output_size != alphabet.size:
            raise NetError(
                f"output size {config.output_size} does not match alphabet size {alphabet.size}"
            )
        self.config = config
        self.alphabet = alphabet
        self.params = params
        self.feature_mean = (
            np.zeros(config.feature_dim)
            if feature_mean is None
            else np.asarray(feature_mean, float)
        )
        self.feature_std = (
            np.ones(config.feature_dim)
            if feature_std is None
            else np.asarray(feature_std, float)
        )
        self.phase = Phase(phase)
        self.epoch = epoch
        self.history = list(history or [])
        self.layers = self._build_layers()

    def _group(self, prefix: str) -> Params:
        start = len(prefix) + 1
        return {k[start:]: v for k, v in self.params.items() if k.startswith(prefix + ".")}

    def _build_layers(self) -> list[tuple[str, Layer]]:
        cfg = self.config
        expected = parameter_shapes(cfg)
        for name, shape in expected.items():
            if name not in self.params:
                raise NetError(f"missing parameter '{name}'")
            if self.params[name].shape != shape:
                raise NetError(
                    f"parameter '{name}' has shape {self.params[name].shape}, expected {shape}"
                )
        if set(self.params) != set(expected):
            extra = sorted(set(self.params) - set(expected))
            raise NetError(f"unexpected parameters {extra}")

        layers: list[tuple[str, Layer]] = []
        for i in range(cfg.n_conv):
            layers.append((f"conv{i}", Conv1D(self._group(f"conv{i}"), cfg.conv_stride)))
        for i in range(cfg.n_recurrent):
            layers.append((f"rnn{i}", BiGRU.from_params(self._group(f"rnn{i}"))))
        layers.append((OUTPUT_LAYER, Affine(self._group(OUTPUT_LAYER))))
        return layers

    @property
    def normalizer_fitted(self) -> bool:
        return not (np.all(self.feature_mean == 0) and np.all(self.feature_std == 1))

    def fit_normalizer(self, features: Sequence[np.ndarray]) -> None:
        """Per-dimension mean/std over every frame of ``features``."""
        if not features:
            raise NetError("cannot fit the normalizer on no features")
        frames = np.concatenate([np.asarray(f, dtype=np.float64) for f in features])
        self.feature_mean = frames.mean(axis=0)
        self.feature_std = np.maximum(frames.std(axis=0), _STD_FLOOR)

    def _check_input(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] != self.config.feature_dim:
            raise NetError(
                f"expected (T>=1, {self.config.feature_dim}) features, got {x.shape}"
            )
        return (x - self.feature_mean) / self.feature_std

    def forward(self, features: np.ndarray) -> np.ndarray:
        """Logit lattice of shape (ceil(T / total_stride), |A|)."""
        x = self._check_input(features)
        for _, layer in self.layers:
            x, _ = layer.forward(x)
        return x

    def forward_backward(
        self, features: np.ndarray, target: Sequence[int]
    ) -> tuple[CtcResult, Params | None]:
        """CTC loss of ``target`` and its parameter gradients.

        Gradients are None when the target is infeasible or the output lattice is
        not finite (loss NaN).
        """
        x = self._check_input(features)
        caches = []
        for _, layer in self.layers:
            x, cache = layer.forward(x)
            caches.append(cache)
        if not np.all(np.isfinite(x)):
            # diverged weights
            return CtcResult(math.nan, np.zeros_like(x)), None
        result = ctc_loss(x, target)
        if not result.feasible:
            return result, None

        grads: Params = {}
        dy = result.grad
        for (name, layer), cache in zip(reversed(self.layers), reversed(caches)):
            dy, layer_grads = layer.backward(dy, cache)
            for key, value in layer_grads.items():
                grads[f"{name}.{key}"] = value
        return result, {k: grads[k] for k in self.params}

    def copy(self) -> "AcousticModel":
        return AcousticModel(
            self.config,
            self.alphabet,
            {k: v.copy() for k, v in self.params.items()},
            self.feature_mean.copy(),
            self.feature_std.copy(),
            self.phase,
            self.epoch,
            self.history,
        )

    @property
    def n_parameters(self) -> int:
        return sum(v.size for v in self.params.values())

    def __repr__(self) -> str:
        cfg = self.config
        return (
            f"AcousticModel(conv={cfg.n_conv}, rnn={cfg.n_recurrent}x{cfg.hidden_size}, "
            f"|A|={cfg.output_size}, phase={self.phase.value}, params={self.n_parameters})"
        )


def parameter_shapes(cfg: NetConfig) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {}
    width = cfg.feature_dim
    for i in range(cfg.n_conv):
        shapes[f"conv{i}.W"] = (cfg.conv_kernel, width, cfg.conv_channels)
        shapes[f"conv{i}.b"] = (cfg.conv_channels,)
        width = cfg.conv_channels
    H = cfg.hidden_size
    for i in range(cfg.n_recurrent):
        for direction in ("fw", "bw"):
            shapes[f"rnn{i}.{direction}.Wx"] = (width, 3 * H)
            shapes[f"rnn{i}.{direction}.Wh"] = (H, 3 * H)
            shapes[f"rnn{i}.{direction}.bx"] = (3 * H,)
            shapes[f"rnn{i}.{direction}.bh"] = (3 * H,)
        width = 2 * H
    shapes[f"{OUTPUT_LAYER}.W"] = (width, cfg.output_size)
    shapes[f"{OUTPUT_LAYER}.b"] = (cfg.output_size,)
    return shapes


def _init_output(cfg: NetConfig, n_in: int) -> Params:
    rng = _seeded(cfg.seed, 1000, cfg.output_size)
    layer = Affine.init(rng, n_in, cfg.output_size)
    return {f"{OUTPUT_LAYER}.{k}": v for k, v in layer.params.items()}


def init_net(cfg: NetConfig, alphabet: Alphabet) -> AcousticModel:
    """Scaled-uniform initialization, one sub-stream of ``cfg.seed`` per layer."""
    if cfg.output_size != alphabet.size:
        raise NetError(
            f"config output size {cfg.output_size} does not match alphabet size {alphabet.size}"
        )
    params: Params = {}
    width = cfg.feature_dim
    for i in range(cfg.n_conv):
        conv = Conv1D.init(
            _seeded(cfg.seed, 1, i), width, cfg.conv_channels, cfg.conv_kernel, cfg.conv_stride
        )
        params |= {f"conv{i}.{k}": v for k, v in conv.params.items()}
        width = cfg.conv_channels
    for i in range(cfg.n_recurrent):
        rnn = BiGRU.init(_seeded(cfg.seed, 2, i), width, cfg.hidden_size)
        params |= {f"rnn{i}.{k}": v for k, v in rnn.params.items()}
        width = 2 * cfg.hidden_size
    params |= _init_output(cfg, width)
    model = AcousticModel(cfg, alphabet, params)
    logger.debug("net_initialized", model=repr(model))
    return model


def extend_output_layer(
    model: AcousticModel,
    new_alphabet: Alphabet,
    mode: ExtensionMode | str = ExtensionMode.WARM,
) -> AcousticModel:
    """Copy every lower layer and rebuild the output layer for ``new_alphabet``.

    ``fresh`` reinitializes the whole output layer; ``warm`` keeps the rows of
    the symbols the old alphabet already had and initializes only the new ones.
    """
    mode = ExtensionMode(mode)
    old = model.alphabet
    if not new_alphabet.is_extension_of(old) or new_alphabet.base_chars != old.base_chars:
        raise NetError(
            "new alphabet does not extend the model's alphabet",
            {"old_size": old.size, "new_size": new_alphabet.size},
        )
    cfg = model.config.model_copy(update={"output_size": new_alphabet.size})
    params = {k: v.copy() for k, v in model.params.items() if not k.startswith(OUTPUT_LAYER + ".")}
    n_in = model.params[f"{OUTPUT_LAYER}.W"].shape[0]
    fresh = _init_output(cfg, n_in)
    if mode is ExtensionMode.WARM:
        fresh[f"{OUTPUT_LAYER}.W"][:, : old.size] = model.params[f"{OUTPUT_LAYER}.W"]
        fresh[f"{OUTPUT_LAYER}.b"][: old.size] = model.params[f"{OUTPUT_LAYER}.b"]
    params |= fresh
    extended = AcousticModel(
        cfg,
        new_alphabet,
        params,
        model.feature_mean.copy(),
        model.feature_std.copy(),
        Phase.NER,
        0,
        model.history,
    )
    logger.info(
        "output_layer_extended",
        mode=mode.value,
        old_size=old.size,
        new_size=new_alphabet.size,
    )
    return extended
