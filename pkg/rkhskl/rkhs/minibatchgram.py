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

from rkhskl.rkhs.stochastichead import CHOL, W_BAR, StochasticHead
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


@dataclass(frozen=True, eq=False)
class MinibatchGram:
    """
    Kernel matrix K_theta over a joint minibatch J = {x-batch, y-batch}. Rows
    [0, split) come from p, rows [split, 2b) from q.
    """

    entries: np.ndarray
    split: int
    features: np.ndarray
    mean_projection: np.ndarray
    chol_projection: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def s_mini(self) -> float:
        return float(self.entries.max())

    def argmax(self) -> Tuple[int, int]:
        """
        Position of S_mini; ties resolve to the lowest (row, col) in row-major order.
        """
        flat = int(np.argmax(self.entries))
        return divmod(flat, self.size)

    def p_block(self) -> np.ndarray:
        return self.entries[: self.split, : self.split]

    def q_block(self) -> np.ndarray:
        return self.entries[self.split :, self.split :]

    def cross_block(self) -> np.ndarray:
        return self.entries[: self.split, self.split :]

    def min_eigen_ratio(self) -> float:
        """
        lambda_min / lambda_max of the Gram; close to zero from below only by roundoff.
        """
        eigenvalues = np.linalg.eigvalsh(self.entries)
        top = float(eigenvalues[-1])
        if top <= 0.0:
            return 0.0 if np.allclose(eigenvalues, 0.0) else float("-inf")
        return float(eigenvalues[0]) / top

    def s_mini_gradients(self, head: StochasticHead) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
        """
        Subgradient of S_mini through its argmax entry K(j_a, j_b).

        :return: dS/dphi over the joint batch and dS/d(w_bar, L).
        """
        i, j = self.argmax()
        a = self.mean_projection
        u = self.chol_projection
        phi = self.features
        grad_phi = np.zeros_like(phi)
        grad_phi[i] += a[j] * head.w_bar + head.chol @ u[j]
        grad_phi[j] += a[i] * head.w_bar + head.chol @ u[i]
        grad_w_bar = a[j] * phi[i] + a[i] * phi[j]
        grad_chol = np.tril(np.outer(phi[i], u[j]) + np.outer(phi[j], u[i]))
        return grad_phi, {W_BAR: grad_w_bar, CHOL: grad_chol}


def minibatch_gram(phi_joint: np.ndarray, head: StochasticHead, split: Optional[int] = None) -> MinibatchGram:
    """
    Build the 2b x 2b Gram as a a^T + U U^T with a = Phi w_bar and U = Phi L.
    """
    phi_joint = np.asarray(phi_joint, dtype=np.float64)
    if phi_joint.ndim != 2 or phi_joint.shape[1] != head.feature_dim:
        raise KStatusError.from_code_message(
            KCode.INVALID_ARGUMENT, f"Joint feature batch {phi_joint.shape} does not match head dim"
        )
    split = phi_joint.shape[0] // 2 if split is None else split
    if not 0 < split < phi_joint.shape[0]:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Joint batch needs points from both sides")
    a = phi_joint @ head.w_bar
    u = phi_joint @ head.chol
    entries = np.outer(a, a) + u @ u.T
    entries = 0.5 * (entries + entries.T)
    return MinibatchGram(entries, split, phi_joint, a, u)


@dataclass(frozen=True)
class EmbeddingStats:
    mean_p: float
    mean_q: float
    diff_norm: float
    sum_norm: float

    @property
    def midpoint_norm(self) -> float:
        """Norm of (mu_p + mu_q) / 2."""
        return 0.5 * self.sum_norm

    @property
    def embedding_ratio(self) -> float:
        return self.diff_norm / self.sum_norm if self.sum_norm > 0.0 else float("nan")


def embedding_stats(f_x: np.ndarray, f_y: np.ndarray, gram: MinibatchGram) -> EmbeddingStats:
    """
    Empirical mean-embedding quantities of one minibatch: <mu_p, f> and <mu_q, f>
    as batch means of f, the norms from Gram block means.
    """
    if len(f_x) != gram.split or len(f_y) != gram.size - gram.split:
        raise KStatusError.from_code_message(
            KCode.FAILED_PRECONDITION, "Gram partition does not match the batch sizes"
        )
    pp = gram.p_block().mean()
    qq = gram.q_block().mean()
    pq = gram.cross_block().mean()
    return EmbeddingStats(
        mean_p=float(np.mean(f_x)),
        mean_q=float(np.mean(f_y)),
        diff_norm=float(np.sqrt(max(pp + qq - 2.0 * pq, 0.0))),
        sum_norm=float(np.sqrt(max(pp + qq + 2.0 * pq, 0.0))),
    )
