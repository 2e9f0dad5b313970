"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError

LEAKY_SLOPE = 0.01


def leaky_relu(z: np.ndarray, slope: float = LEAKY_SLOPE) -> np.ndarray:
    return np.where(z > 0.0, z, slope * z)


def leaky_relu_grad(z: np.ndarray, slope: float = LEAKY_SLOPE) -> np.ndarray:
    return np.where(z > 0.0, 1.0, slope)


@dataclass(eq=False)
class DenseLayer:
    """
    Fully connected layer computing ``x @ weight.T + bias``.
    """

    weight: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise KStatusError.from_code_message(
                KCode.INVALID_ARGUMENT,
                f"Inconsistent layer shapes weight={self.weight.shape} bias={self.bias.shape}",
            )

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]


@dataclass(eq=False)
class GradientTape:
    """
    Activations cached by one forward pass, consumed by the matching backward pass.
    ``gradients`` holds one slot per parameter tensor once backward has run.
    """

    layers: List[DenseLayer]
    slope: float
    inputs: List[np.ndarray] = field(default_factory=list)
    pre_activations: List[np.ndarray] = field(default_factory=list)
    gradients: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def batch_size(self) -> int:
        return self.inputs[0].shape[0] if self.inputs else 0

    def clear(self) -> None:
        self.inputs.clear()
        self.pre_activations.clear()
        self.gradients.clear()


class FeatureNet:
    """
    Dense feature network phi_theta: every layer is followed by a leaky rectifier,
    so the output is the feature vector fed to the discriminator head.
    """

    def __init__(self, layers: Sequence[DenseLayer], slope: float = LEAKY_SLOPE):
        if not layers:
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "FeatureNet needs at least one layer")
        for k in range(len(layers) - 1):
            if layers[k].out_dim != layers[k + 1].in_dim:
                raise KStatusError.from_code_message(
                    KCode.INVALID_ARGUMENT,
                    f"Layer {k} output dim {layers[k].out_dim} != layer {k + 1} input dim {layers[k + 1].in_dim}",
                )
        for layer in layers:
            if not (np.all(np.isfinite(layer.weight)) and np.all(np.isfinite(layer.bias))):
                raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "FeatureNet parameters must be finite")
        self.layers = list(layers)
        self.slope = slope

    @property
    def input_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].out_dim

    def parameters(self) -> Dict[str, np.ndarray]:
        """
        Live references to every parameter tensor, keyed the same way as the
        gradients returned by :meth:`backward`.
        """
        params = {}
        for k, layer in enumerate(self.layers):
            params[f"layer{k}.weight"] = layer.weight
            params[f"layer{k}.bias"] = layer.bias
        return params

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, GradientTape]:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise KStatusError.from_code_message(
                KCode.INVALID_ARGUMENT, f"Expected a batch of dim {self.input_dim}, got shape {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Non-finite values in input batch")

        tape = GradientTape(layers=self.layers, slope=self.slope)
        activation = x
        for layer in self.layers:
            tape.inputs.append(activation)
            z = activation @ layer.weight.T + layer.bias
            tape.pre_activations.append(z)
            activation = leaky_relu(z, self.slope)
        return activation, tape

    @staticmethod
    def backward(tape: GradientTape, grad_features: np.ndarray) -> Dict[str, np.ndarray]:
        """
        Reverse pass through the cached activations.

        :param tape: The tape produced by the forward pass over the same batch.
        :param grad_features: dLoss/dphi, shape (batch, output_dim).
        :return: Gradients keyed like :meth:`parameters`.
        """
        if not tape.inputs:
            raise KStatusError.from_code_message(KCode.FAILED_PRECONDITION, "Tape holds no forward activations")
        grad = np.asarray(grad_features, dtype=np.float64)
        expected = tape.pre_activations[-1].shape
        if grad.shape != expected:
            raise KStatusError.from_code_message(
                KCode.FAILED_PRECONDITION, f"Seed gradient shape {grad.shape} does not match features {expected}"
            )

        tape.gradients.clear()
        for k in reversed(range(len(tape.layers))):
            layer = tape.layers[k]
            grad_z = grad * leaky_relu_grad(tape.pre_activations[k], tape.slope)
            tape.gradients[f"layer{k}.weight"] = grad_z.T @ tape.inputs[k]
            tape.gradients[f"layer{k}.bias"] = grad_z.sum(axis=0)
            grad = grad_z @ layer.weight
        return dict(tape.gradients)


def init_feature_net(n: int, hidden: int, p: int, seed: int, slope: float = LEAKY_SLOPE) -> FeatureNet:
    """
    Two-layer feature network n -> hidden -> p. Weights are uniform in
    [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
    """
    for name, value in (("n", n), ("hidden", hidden), ("p", p)):
        if int(value) < 1:
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"{name} must be >= 1, got {value}")
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in ((n, hidden), (hidden, p)):
        limit = 1.0 / np.sqrt(fan_in)
        layers.append(DenseLayer(rng.uniform(-limit, limit, size=(fan_out, fan_in)), np.zeros(fan_out)))
    return FeatureNet(layers, slope)


def forward(net: FeatureNet, x: np.ndarray) -> Tuple[np.ndarray, GradientTape]:
    return net.forward(x)


def backward(tape: GradientTape, grad_features: np.ndarray) -> Dict[str, np.ndarray]:
    return FeatureNet.backward(tape, grad_features)
