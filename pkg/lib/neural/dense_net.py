"""
Dense feed-forward network with exact reverse-mode gradients.
All arrays are float64. Inputs may be a single vector or a batch of row vectors.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np


class Activation(Enum):
    RELU = "relu"
    IDENTITY = "identity"

    def apply(self, z: np.ndarray) -> np.ndarray:
        match self:
            case Activation.RELU:
                return np.maximum(z, 0.0)
            case _:
                return z

    def derivative(self, z: np.ndarray) -> np.ndarray:
        match self:
            case Activation.RELU:
                return (z > 0.0).astype(np.float64)
            case _:
                return np.ones_like(z)


@dataclass
class DenseLayer:
    weights: np.ndarray  # [out, in]
    biases: np.ndarray  # [out]
    activation: Activation = Activation.IDENTITY

    @property
    def in_features(self) -> int:
        return self.weights.shape[1]

    @property
    def out_features(self) -> int:
        return self.weights.shape[0]


@dataclass
class ForwardCache:
    """Inputs and pre-activations of every layer, enough for exact backprop."""

    inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)
    batched: bool = True


@dataclass
class Gradients:
    """Gradients shaped like the parameters of a DenseNet, plus the input gradient."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    inputs: np.ndarray | None = None

    @classmethod
    def zeros_like(cls, net: DenseNet) -> Gradients:
        return cls(
            weights=[np.zeros_like(layer.weights) for layer in net.layers],
            biases=[np.zeros_like(layer.biases) for layer in net.layers],
        )

    def is_finite(self) -> bool:
        return all(np.isfinite(g).all() for g in (*self.weights, *self.biases))


def _init_limit(activation: Activation, fan_in: int, fan_out: int) -> float:
    # He-uniform for relu layers, Glorot-uniform for linear heads
    if activation == Activation.RELU:
        return float(np.sqrt(6.0 / fan_in))
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


class DenseNet:
    """Stack of affine layers, each followed by its activation."""

    layers: list[DenseLayer]
    seed: int | None

    def __init__(self, layers: list[DenseLayer], seed: int | None = None):
        for prev, nxt in zip(layers, layers[1:]):
            if prev.out_features != nxt.in_features:
                raise ValueError(
                    f"Error: Layer shapes do not compose: {prev.out_features} outputs "
                    f"feed a layer with {nxt.in_features} inputs"
                )
        for layer in layers:
            if layer.biases.shape != (layer.out_features,):
                raise ValueError(f"Error: Bias shape {layer.biases.shape} does not match {layer.out_features} outputs")

        self.layers = layers
        self.seed = seed

    @classmethod
    def create(
        cls,
        sizes: Sequence[int],
        seed: int = 0,
        output_activation: Activation = Activation.IDENTITY,
    ) -> DenseNet:
        """
        Creates a network with relu hidden layers and zero biases.

        Args:
            sizes: Layer widths from input to output, e.g. [210, 128, 64, 3]
            seed: Seed of the initialization, equal seeds give identical parameters
            output_activation: Activation of the last layer (Default: identity)
        """
        if len(sizes) < 2:
            raise ValueError(f"Error: A network needs at least an input and an output size, got {list(sizes)}")

        rng = np.random.default_rng(seed)
        layers = []
        for idx, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
            is_last = idx == len(sizes) - 2
            activation = output_activation if is_last else Activation.RELU
            limit = _init_limit(activation, fan_in, fan_out)

            layers.append(
                DenseLayer(
                    weights=rng.uniform(-limit, limit, size=(fan_out, fan_in)),
                    biases=np.zeros(fan_out),
                    activation=activation,
                )
            )

        return cls(layers, seed=seed)

    @property
    def input_size(self) -> int:
        return self.layers[0].in_features

    @property
    def output_size(self) -> int:
        return self.layers[-1].out_features

    @property
    def parameter_count(self) -> int:
        return sum(layer.weights.size + layer.biases.size for layer in self.layers)

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
        """
        Evaluates the network.

        Args:
            x: Input vector [in] or batch [batch, in]

        Returns:
            Output with the same batching as x, and the cache for backward()
        """
        x = np.asarray(x, dtype=np.float64)
        batched = x.ndim == 2
        if not batched:
            x = x[None, :]

        if x.ndim != 2 or x.shape[1] != self.input_size:
            raise ValueError(f"Error: Expected input width {self.input_size}, got shape {x.shape}")

        cache = ForwardCache(batched=batched)
        out = x
        for layer in self.layers:
            cache.inputs.append(out)
            z = out @ layer.weights.T + layer.biases
            cache.pre_activations.append(z)
            out = layer.activation.apply(z)

        return (out if batched else out[0]), cache

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, cache: ForwardCache, grad_output: np.ndarray) -> Gradients:
        """
        Backpropagates the gradient of a scalar objective.
        Batch gradients are summed over the batch.

        Args:
            cache: Cache of the matching forward() call
            grad_output: d(objective)/d(output), shaped like the forward output

        Returns:
            Gradients for every parameter and for the input
        """
        g = np.asarray(grad_output, dtype=np.float64)
        if not cache.batched:
            g = g[None, :]

        expected = cache.pre_activations[-1].shape if cache.pre_activations else None
        if len(cache.inputs) != len(self.layers) or g.shape != expected:
            raise ValueError(f"Error: Output gradient of shape {g.shape} does not match the cache ({expected})")

        grads = Gradients.zeros_like(self)
        for idx in reversed(range(len(self.layers))):
            layer = self.layers[idx]
            g_pre = g * layer.activation.derivative(cache.pre_activations[idx])
            grads.weights[idx] = g_pre.T @ cache.inputs[idx]
            grads.biases[idx] = g_pre.sum(axis=0)
            g = g_pre @ layer.weights

        grads.inputs = g if cache.batched else g[0]
        return grads

    def is_finite(self) -> bool:
        return all(
            np.isfinite(layer.weights).all() and np.isfinite(layer.biases).all()
            for layer in self.layers
        )

    def copy(self) -> DenseNet:
        return copy.deepcopy(self)

    def __eq__(self, other):
        if not isinstance(other, DenseNet):
            return NotImplemented
        return len(self.layers) == len(other.layers) and all(
            a.activation == b.activation
            and np.array_equal(a.weights, b.weights)
            and np.array_equal(a.biases, b.biases)
            for a, b in zip(self.layers, other.layers)
        )
