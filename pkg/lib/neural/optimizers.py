from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from lib.neural.dense_net import DenseNet, Gradients


def sgd_step(net: DenseNet, grads: Gradients, lr: float) -> DenseNet:
    """Plain gradient descent, applied in place."""
    for layer, dw, db in zip(net.layers, grads.weights, grads.biases):
        layer.weights -= lr * dw
        layer.biases -= lr * db
    return net


@dataclass
class AdamState:
    """First and second moment estimates and the step counter."""

    m_weights: list[np.ndarray]
    v_weights: list[np.ndarray]
    m_biases: list[np.ndarray]
    v_biases: list[np.ndarray]
    t: int = 0

    @classmethod
    def zeros_like(cls, net: DenseNet) -> AdamState:
        return cls(
            m_weights=[np.zeros_like(layer.weights) for layer in net.layers],
            v_weights=[np.zeros_like(layer.weights) for layer in net.layers],
            m_biases=[np.zeros_like(layer.biases) for layer in net.layers],
            v_biases=[np.zeros_like(layer.biases) for layer in net.layers],
        )


def adam_step(
    net: DenseNet,
    grads: Gradients,
    state: AdamState,
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> tuple[DenseNet, AdamState]:
    """Adam with bias correction, applied in place to the network and the state."""
    state.t += 1
    correction1 = 1 - beta1 ** state.t
    correction2 = 1 - beta2 ** state.t

    params = [(layer.weights, layer.biases) for layer in net.layers]
    for idx, ((w, b), dw, db) in enumerate(zip(params, grads.weights, grads.biases)):
        for param, grad, m, v in (
            (w, dw, state.m_weights[idx], state.v_weights[idx]),
            (b, db, state.m_biases[idx], state.v_biases[idx]),
        ):
            m *= beta1
            m += (1 - beta1) * grad
            v *= beta2
            v += (1 - beta2) * grad ** 2
            param -= lr * (m / correction1) / (np.sqrt(v / correction2) + eps)

    return net, state


class Optimizer(ABC):
    """Updates one network, keeps whatever state the update rule needs."""

    lr: float

    @abstractmethod
    def step(self, net: DenseNet, grads: Gradients) -> DenseNet:
        """Applies one update to the network in place."""


class SGD(Optimizer):
    def __init__(self, lr: float = 1e-3):
        self.lr = lr

    def step(self, net: DenseNet, grads: Gradients) -> DenseNet:
        return sgd_step(net, grads, self.lr)


class Adam(Optimizer):
    state: AdamState | None

    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.state = None

    def step(self, net: DenseNet, grads: Gradients) -> DenseNet:
        if self.state is None:
            self.state = AdamState.zeros_like(net)

        net, self.state = adam_step(net, grads, self.state, self.lr, self.beta1, self.beta2, self.eps)
        return net
