"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError

W_BAR = "head.w_bar"
CHOL = "head.chol"


@dataclass(eq=False)
class StochasticHead:
    """
    Gaussian last layer w ~ N(w_bar, L L^T). Averaging the linear readout over
    draws of w keeps the discriminator inside the RKHS of
    K(x, t) = phi(x)^T (w_bar w_bar^T + L L^T) phi(t).
    """

    w_bar: np.ndarray
    chol: np.ndarray

    def __post_init__(self):
        self.w_bar = np.asarray(self.w_bar, dtype=np.float64)
        self.chol = np.asarray(self.chol, dtype=np.float64)
        p = self.w_bar.shape[0]
        if self.w_bar.ndim != 1 or self.chol.shape != (p, p):
            raise KStatusError.from_code_message(
                KCode.INVALID_ARGUMENT, f"Head shapes w_bar={self.w_bar.shape} L={self.chol.shape} disagree"
            )
        if np.any(np.triu(self.chol, k=1) != 0.0):
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "L must be lower-triangular")

    @classmethod
    def initial(cls, p: int) -> "StochasticHead":
        """w_bar = 0 and L L^T = I."""
        return cls(np.zeros(p), np.eye(p))

    @property
    def feature_dim(self) -> int:
        return self.w_bar.shape[0]

    def covariance(self) -> np.ndarray:
        return self.chol @ self.chol.T

    def kernel_matrix(self) -> np.ndarray:
        return np.outer(self.w_bar, self.w_bar) + self.covariance()

    def parameters(self) -> Dict[str, np.ndarray]:
        return {W_BAR: self.w_bar, CHOL: self.chol}

    def readout_gradients(
        self, phi: np.ndarray, grad_f: np.ndarray, noise_mean: np.ndarray
    ) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
        """
        Pull dLoss/df back through f = phi @ (w_bar + L eps_mean).

        :return: dLoss/dphi and the head gradients; the L gradient is masked to
                 the lower triangle so L stays triangular under the optimizer.
        """
        w_avg = self.w_bar + self.chol @ noise_mean
        summed = phi.T @ grad_f
        return np.outer(grad_f, w_avg), {W_BAR: summed, CHOL: np.tril(np.outer(summed, noise_mean))}


@dataclass(frozen=True, eq=False)
class WeightSample:
    weights: np.ndarray
    noise: np.ndarray

    @property
    def count(self) -> int:
        return self.weights.shape[0]

    def mean_weight(self) -> np.ndarray:
        return self.weights.mean(axis=0)

    def mean_noise(self) -> np.ndarray:
        return self.noise.mean(axis=0)


def weights_from_noise(head: StochasticHead, noise: np.ndarray) -> WeightSample:
    noise = np.atleast_2d(np.asarray(noise, dtype=np.float64))
    if noise.shape[1] != head.feature_dim:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Noise dim does not match head dim")
    return WeightSample(head.w_bar + noise @ head.chol.T, noise)


def sample_weights(head: StochasticHead, d: int, rng: np.random.Generator) -> WeightSample:
    """
    Draw w_j = w_bar + L eps_j with eps_j ~ N(0, I), j = 1..d.
    """
    if d < 1:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"d must be >= 1, got {d}")
    return weights_from_noise(head, rng.standard_normal((d, head.feature_dim)))


def discriminator_value(phi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    f(x_i) = (1/d) sum_j phi(x_i)^T w_j.
    """
    weights = np.atleast_2d(weights)
    if phi.shape[-1] != weights.shape[1]:
        raise KStatusError.from_code_message(
            KCode.INVALID_ARGUMENT, f"Feature dim {phi.shape[-1]} != head dim {weights.shape[1]}"
        )
    return phi @ weights.mean(axis=0)


def kernel_value(phi_x: np.ndarray, phi_t: np.ndarray, head: StochasticHead) -> float:
    if phi_x.shape != (head.feature_dim,) or phi_t.shape != (head.feature_dim,):
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Feature vectors do not match head dim")
    mean_part = float(phi_x @ head.w_bar) * float(head.w_bar @ phi_t)
    return mean_part + float((head.chol.T @ phi_x) @ (head.chol.T @ phi_t))


def unit_norm_violation(phi: np.ndarray, head: StochasticHead, tolerance: Optional[float] = 1e-9) -> float:
    """
    Largest excess of |phi(x)^T w_bar| over sqrt(K(x, x)) in the batch, zero when
    the deterministic readout respects the unit RKHS norm ball.
    """
    f = phi @ head.w_bar
    diag = f * f + np.sum((phi @ head.chol) ** 2, axis=1)
    excess = np.abs(f) - np.sqrt(diag) - (tolerance or 0.0)
    return float(max(np.max(excess, initial=0.0), 0.0))
