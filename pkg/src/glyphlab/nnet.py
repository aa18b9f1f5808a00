"""Minimal neural stack: tanh MLP, denoising autoencoder layers, and the
stacked model with greedy pretraining plus supervised fine-tuning.

Everything is plain numpy with float64 parameters. Training is minibatch
SGD with a constant learning rate; fine-tuning keeps the parameter
snapshot with the lowest validation error seen across epochs. All
randomness (init, shuffling, corruption masks) flows through RngStream,
so a fixed seed reproduces the final parameters exactly.

Checkpoint format "CNM1" (little-endian):

    bytes 0-3   magic "CNM1"
    bytes 4-5   version (u16, currently 1)
    bytes 6-7   model kind (u16: 1 = mlp, 2 = sda)
    bytes 8-11  descriptor length (u32)
    descriptor  UTF-8 "key=value;..." architecture summary
    blob        float32 parameters, row-major, in documented order
                (mlp: W1, b1, W2, b2;
                 sda: per layer W, b, b_rec, then top W, b)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .dataset import LabeledDataset
from .rng import RngStream

INPUT_DIM = 1024
N_CLASSES = 62

# Hyper-parameter grids used for model selection at full scale.
LEARNING_RATE_GRID = (0.001, 0.01, 0.025, 0.075, 0.1, 0.5)
HIDDEN_UNITS_GRID = (300, 500, 800, 1000, 1500)
CORRUPTION_GRID = (0.10, 0.20, 0.50)
SDA_N_LAYERS = 3
MINIBATCH = 20


class DivergenceError(RuntimeError):
    """Raised when a training loss stops being finite."""


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    pretrain_learning_rate: float = 0.025
    minibatch: int = MINIBATCH
    epochs: int = 20
    pretrain_epochs: int = 10
    seed: int = 0


def _sigmoid(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    ea = np.exp(a[~pos])
    out[~pos] = ea / (1.0 + ea)
    return out


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _softplus(a: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, a)


def _glorot(rng: RngStream, rows: int, cols: int) -> np.ndarray:
    bound = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-bound, bound, (rows, cols))


def _as_batch(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x[None, :] if x.ndim == 1 else x


# ---------------------------------------------------------------------------
# MLP
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MlpModel:
    """Single tanh hidden layer with a softmax output."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    @property
    def hidden_units(self) -> int:
        return self.W1.shape[0]

    @property
    def input_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def n_classes(self) -> int:
        return self.W2.shape[0]

    def forward_probs(self, x: np.ndarray) -> np.ndarray:
        x = _as_batch(x)
        if x.shape[1] != self.input_dim:
            raise ValueError(f"expected input dim {self.input_dim}, got {x.shape[1]}")
        h = np.tanh(x @ self.W1.T + self.b1)
        return _softmax(h @ self.W2.T + self.b2)

    def loss_and_grads(self, x: np.ndarray, y: np.ndarray):
        x = _as_batch(x)
        n = x.shape[0]
        h = np.tanh(x @ self.W1.T + self.b1)
        probs = _softmax(h @ self.W2.T + self.b2)
        nll = -np.log(np.maximum(probs[np.arange(n), y], 1e-300)).mean()
        dlogits = probs
        dlogits[np.arange(n), y] -= 1.0
        dlogits /= n
        dh = dlogits @ self.W2
        dpre = dh * (1.0 - h**2)
        grads = {
            "W2": dlogits.T @ h,
            "b2": dlogits.sum(axis=0),
            "W1": dpre.T @ x,
            "b1": dpre.sum(axis=0),
        }
        return nll, grads

    def sgd_step(self, grads: dict, lr: float) -> None:
        self.W1 -= lr * grads["W1"]
        self.b1 -= lr * grads["b1"]
        self.W2 -= lr * grads["W2"]
        self.b2 -= lr * grads["b2"]

    def get_params(self) -> list[np.ndarray]:
        return [p.copy() for p in (self.W1, self.b1, self.W2, self.b2)]

    def set_params(self, params: list[np.ndarray]) -> None:
        self.W1, self.b1, self.W2, self.b2 = [p.copy() for p in params]


def init_mlp(rng: RngStream, input_dim: int = INPUT_DIM, hidden: int = 64,
             classes: int = N_CLASSES) -> MlpModel:
    return MlpModel(
        W1=_glorot(rng, hidden, input_dim),
        b1=np.zeros(hidden),
        W2=_glorot(rng, classes, hidden),
        b2=np.zeros(classes),
    )


def mlp_forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Class distribution softmax(W2 tanh(W1 x + b1) + b2)."""
    probs = model.forward_probs(x)
    return probs[0] if np.asarray(x).ndim == 1 else probs


# ---------------------------------------------------------------------------
# Denoising autoencoder layer
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class DenoisingAutoencoderLayer:
    """Sigmoid encoder with tied-weight sigmoid decoder.

    Encoder y = sigmoid(W x~ + b); decoder z = sigmoid(W^T y + b_rec).
    """

    W: np.ndarray
    b: np.ndarray
    b_rec: np.ndarray
    corruption_fraction: float

    @property
    def input_dim(self) -> int:
        return self.W.shape[1]

    @property
    def code_dim(self) -> int:
        return self.W.shape[0]

    def encode(self, x: np.ndarray) -> np.ndarray:
        return _sigmoid(_as_batch(x) @ self.W.T + self.b)


def init_da_layer(rng: RngStream, input_dim: int, code_dim: int,
                  corruption_fraction: float) -> DenoisingAutoencoderLayer:
    if not 0.0 <= corruption_fraction < 1.0:
        raise ValueError("corruption fraction must lie in [0, 1)")
    return DenoisingAutoencoderLayer(
        W=_glorot(rng, code_dim, input_dim),
        b=np.zeros(code_dim),
        b_rec=np.zeros(input_dim),
        corruption_fraction=corruption_fraction,
    )


def corruption_mask(rng: RngStream, batch: int, dim: int, fraction: float) -> np.ndarray:
    """Binary mask zeroing exactly round(fraction * dim) coordinates per
    example (1 keeps, 0 erases)."""
    k = int(round(fraction * dim))
    mask = np.ones((batch, dim), dtype=np.float64)
    if k == 0:
        return mask
    order = np.argsort(rng.uniform(0.0, 1.0, (batch, dim)), axis=1)
    rows = np.repeat(np.arange(batch), k)
    mask[rows, order[:, :k].ravel()] = 0.0
    return mask


def da_loss_masked(layer: DenoisingAutoencoderLayer, x: np.ndarray, mask: np.ndarray):
    """Cross-entropy reconstruction loss and gradients for a fixed mask.

    Loss per example is -sum_j [x_j log z_j + (1 - x_j) log(1 - z_j)],
    averaged over the batch; gradients cover W (both tied roles), b and
    b_rec.
    """
    x = _as_batch(x)
    n = x.shape[0]
    x_t = x * mask
    a1 = x_t @ layer.W.T + layer.b
    y = _sigmoid(a1)
    a2 = y @ layer.W + layer.b_rec
    loss = float((_softplus(a2) - x * a2).sum(axis=1).mean())
    if not np.isfinite(loss):
        raise DivergenceError("denoising autoencoder loss is not finite")
    z = _sigmoid(a2)
    dz = (z - x) / n
    dy = dz @ layer.W.T
    da1 = dy * y * (1.0 - y)
    grads = {
        "W": y.T @ dz + da1.T @ x_t,
        "b": da1.sum(axis=0),
        "b_rec": dz.sum(axis=0),
    }
    return loss, grads


def da_loss(layer: DenoisingAutoencoderLayer, x: np.ndarray, rng: RngStream):
    """Corrupt x with a fresh masking draw, then score reconstruction."""
    x = _as_batch(x)
    mask = corruption_mask(rng, x.shape[0], layer.input_dim, layer.corruption_fraction)
    return da_loss_masked(layer, x, mask)


def da_reconstruction_loss(layer: DenoisingAutoencoderLayer, x: np.ndarray, rng: RngStream) -> float:
    loss, _ = da_loss(layer, x, rng)
    return loss


# ---------------------------------------------------------------------------
# Stacked model
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SdaModel:
    """Three equal-width sigmoid layers under a softmax classifier."""

    layers: list[DenoisingAutoencoderLayer]
    W_top: np.ndarray
    b_top: np.ndarray

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def n_classes(self) -> int:
        return self.W_top.shape[0]

    def _hidden_states(self, x: np.ndarray) -> list[np.ndarray]:
        states = [_as_batch(x)]
        for layer in self.layers:
            states.append(_sigmoid(states[-1] @ layer.W.T + layer.b))
        return states

    def forward_probs(self, x: np.ndarray) -> np.ndarray:
        h = self._hidden_states(x)[-1]
        return _softmax(h @ self.W_top.T + self.b_top)

    def loss_and_grads(self, x: np.ndarray, y: np.ndarray):
        states = self._hidden_states(x)
        n = states[0].shape[0]
        probs = _softmax(states[-1] @ self.W_top.T + self.b_top)
        nll = -np.log(np.maximum(probs[np.arange(n), y], 1e-300)).mean()
        dlogits = probs
        dlogits[np.arange(n), y] -= 1.0
        dlogits /= n
        grads = {"W_top": dlogits.T @ states[-1], "b_top": dlogits.sum(axis=0)}
        dh = dlogits @ self.W_top
        for k in range(len(self.layers) - 1, -1, -1):
            h = states[k + 1]
            da = dh * h * (1.0 - h)
            grads[f"W{k}"] = da.T @ states[k]
            grads[f"b{k}"] = da.sum(axis=0)
            dh = da @ self.layers[k].W
        return nll, grads

    def sgd_step(self, grads: dict, lr: float) -> None:
        self.W_top -= lr * grads["W_top"]
        self.b_top -= lr * grads["b_top"]
        for k, layer in enumerate(self.layers):
            layer.W -= lr * grads[f"W{k}"]
            layer.b -= lr * grads[f"b{k}"]

    def get_params(self) -> list[np.ndarray]:
        out = []
        for layer in self.layers:
            out += [layer.W.copy(), layer.b.copy(), layer.b_rec.copy()]
        out += [self.W_top.copy(), self.b_top.copy()]
        return out

    def set_params(self, params: list[np.ndarray]) -> None:
        it = iter(params)
        for layer in self.layers:
            layer.W = next(it).copy()
            layer.b = next(it).copy()
            layer.b_rec = next(it).copy()
        self.W_top = next(it).copy()
        self.b_top = next(it).copy()


def init_sda(rng: RngStream, input_dim: int = INPUT_DIM, width: int = 64,
             classes: int = N_CLASSES, corruption_fraction: float = 0.2,
             n_layers: int = SDA_N_LAYERS) -> SdaModel:
    dims = [input_dim] + [width] * n_layers
    layers = [
        init_da_layer(rng, dims[k], dims[k + 1], corruption_fraction)
        for k in range(n_layers)
    ]
    return SdaModel(layers=layers, W_top=_glorot(rng, classes, width), b_top=np.zeros(classes))


# ---------------------------------------------------------------------------
# Training loops
# ---------------------------------------------------------------------------

def _minibatches(n: int, batch: int, order: np.ndarray):
    for start in range(0, n - n % batch, batch):
        yield order[start : start + batch]


def pretrain(sda: SdaModel, images: np.ndarray, cfg: TrainConfig) -> SdaModel:
    """Greedy layer-wise denoising pretraining on unlabeled images.

    Layer k trains by SGD on its reconstruction loss; its training inputs
    are the previous layer's deterministic (uncorrupted) codes.
    """
    data = np.asarray(images, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError("pretrain expects a (n, dim) image matrix")
    rng = RngStream(cfg.seed, spawn_key=(0xDA,))
    n = data.shape[0]
    for k, layer in enumerate(sda.layers):
        shuffle_rng = rng.substream(2 * k)
        mask_rng = rng.substream(2 * k + 1)
        for _ in range(cfg.pretrain_epochs):
            order = shuffle_rng.permutation(n)
            for idx in _minibatches(n, cfg.minibatch, order):
                loss, grads = da_loss(layer, data[idx], mask_rng)
                layer.W -= cfg.pretrain_learning_rate * grads["W"]
                layer.b -= cfg.pretrain_learning_rate * grads["b"]
                layer.b_rec -= cfg.pretrain_learning_rate * grads["b_rec"]
        data = layer.encode(data)
    return sda


def finetune(model, train: LabeledDataset, valid: LabeledDataset, cfg: TrainConfig):
    """Minibatch SGD on the softmax negative log-likelihood.

    Returns the model holding the parameter snapshot with the lowest
    validation error observed across epochs (not the final epoch).
    """
    x = train.matrix()
    y = train.labels
    rng = RngStream(cfg.seed, spawn_key=(0xF7,))
    best_err = np.inf
    best_params = model.get_params()
    n = len(train)
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        for idx in _minibatches(n, cfg.minibatch, order):
            loss, grads = model.loss_and_grads(x[idx], y[idx])
            if not np.isfinite(loss):
                raise DivergenceError("training loss is not finite")
            model.sgd_step(grads, cfg.learning_rate)
        err = evaluate(model, valid)
        if err < best_err:
            best_err = err
            best_params = model.get_params()
    model.set_params(best_params)
    return model


def evaluate(model, ds: LabeledDataset, class_subset=None) -> float:
    """Fraction misclassified; ties break toward the lowest class index.

    With class_subset, the argmax runs over those outputs only (the
    multi-task evaluation rule), so predictions always land in the
    subset.
    """
    if len(ds) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    probs = model.forward_probs(ds.matrix())
    if class_subset is not None:
        subset = np.asarray(sorted(class_subset), dtype=np.int64)
        preds = subset[np.argmax(probs[:, subset], axis=1)]
    else:
        preds = np.argmax(probs, axis=1)
    return float(np.mean(preds != ds.labels))


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------

CHECKPOINT_MAGIC = b"CNM1"
CHECKPOINT_VERSION = 1
_KIND_MLP = 1
_KIND_SDA = 2
_CKPT_HEADER = struct.Struct("<4sHHI")


def save_model(model, path) -> None:
    if isinstance(model, MlpModel):
        kind = _KIND_MLP
        desc = f"kind=mlp;input={model.input_dim};hidden={model.hidden_units};classes={model.n_classes}"
        blobs = [model.W1, model.b1, model.W2, model.b2]
    elif isinstance(model, SdaModel):
        kind = _KIND_SDA
        width = model.layers[0].code_dim
        corr = model.layers[0].corruption_fraction
        desc = (
            f"kind=sda;input={model.input_dim};width={width};layers={len(model.layers)};"
            f"classes={model.n_classes};corruption={corr:g}"
        )
        blobs = []
        for layer in model.layers:
            blobs += [layer.W, layer.b, layer.b_rec]
        blobs += [model.W_top, model.b_top]
    else:
        raise TypeError(f"cannot checkpoint {type(model).__name__}")
    raw = desc.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_CKPT_HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, kind, len(raw)))
        fh.write(raw)
        for blob in blobs:
            fh.write(np.ascontiguousarray(blob, dtype="<f4").tobytes())


def load_model(path):
    with open(path, "rb") as fh:
        head = fh.read(_CKPT_HEADER.size)
        if len(head) < _CKPT_HEADER.size:
            raise ValueError("truncated checkpoint header")
        magic, version, kind, desc_len = _CKPT_HEADER.unpack(head)
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"bad checkpoint magic {magic!r}")
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        desc = dict(kv.split("=", 1) for kv in fh.read(desc_len).decode("utf-8").split(";"))
        data = np.frombuffer(fh.read(), dtype="<f4").astype(np.float64)

    def take(shape):
        nonlocal data
        size = int(np.prod(shape))
        if data.size < size:
            raise ValueError("truncated checkpoint blob")
        out, data = data[:size].reshape(shape), data[size:]
        return out

    if kind == _KIND_MLP:
        d, h, c = int(desc["input"]), int(desc["hidden"]), int(desc["classes"])
        return MlpModel(W1=take((h, d)), b1=take((h,)), W2=take((c, h)), b2=take((c,)))
    if kind == _KIND_SDA:
        d, w = int(desc["input"]), int(desc["width"])
        n_layers, c = int(desc["layers"]), int(desc["classes"])
        corr = float(desc["corruption"])
        dims = [d] + [w] * n_layers
        layers = [
            DenoisingAutoencoderLayer(
                W=take((dims[k + 1], dims[k])), b=take((dims[k + 1],)),
                b_rec=take((dims[k],)), corruption_fraction=corr,
            )
            for k in range(n_layers)
        ]
        return SdaModel(layers=layers, W_top=take((c, w)), b_top=take((c,)))
    raise ValueError(f"unknown model kind {kind}")
