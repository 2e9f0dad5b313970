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
from typing import Dict

import numpy as np

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


@dataclass(eq=False)
class OptimizerState:
    """
    Adaptive-moment accumulators, one pair per named parameter tensor.
    """

    lr: float = 5e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    first_moment: Dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: Dict[str, np.ndarray] = field(default_factory=dict)


def optimizer_step(state: OptimizerState, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
    """
    Apply one bias-corrected adaptive-moment update to ``params`` in place.

    Gradients are checked before anything is mutated, so a rejected step leaves
    both the parameters and the state untouched.
    """
    for name, param in params.items():
        grad = grads.get(name)
        if grad is None or np.shape(grad) != param.shape:
            raise KStatusError.from_code_message(
                KCode.FAILED_PRECONDITION, f"Gradient for '{name}' missing or mis-shaped"
            )
        if not np.all(np.isfinite(grad)):
            raise KStatusError.from_code_message(KCode.DATA_LOSS, f"Non-finite gradient for '{name}'")

    state.step += 1
    bias_correction1 = 1.0 - state.beta1**state.step
    bias_correction2 = 1.0 - state.beta2**state.step
    step_size = state.lr / bias_correction1

    for name, param in params.items():
        grad = grads[name]
        if name not in state.first_moment:
            state.first_moment[name] = np.zeros_like(param)
            state.second_moment[name] = np.zeros_like(param)
        m = state.first_moment[name]
        v = state.second_moment[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * (grad * grad)
        param -= step_size * m / (np.sqrt(v / bias_correction2) + state.epsilon)


class AdamOptimizer:
    def __init__(self, lr: float = 5e-3, beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8):
        if lr <= 0.0:
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"Learning rate must be > 0, got {lr}")
        self.state = OptimizerState(lr=lr, beta1=beta1, beta2=beta2, epsilon=epsilon)

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        optimizer_step(self.state, params, grads)
