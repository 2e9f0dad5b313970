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
from typing import Iterator

import numpy as np

from rkhskl.data.gaussianspec import GaussianSpec, SampleSet, sample
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


@dataclass(frozen=True, eq=False)
class JointBatch:
    """
    Aligned b-batches from p and q forming the joint minibatch J.
    """

    x: np.ndarray
    y: np.ndarray

    @property
    def size(self) -> int:
        return self.x.shape[0]

    def joint(self) -> np.ndarray:
        return np.concatenate([self.x, self.y], axis=0)


def batches_per_epoch(m: int, b: int) -> int:
    if b < 1 or b > m:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"Minibatch size {b} must be in [1, {m}]")
    return m // b


def minibatches(pool_p: SampleSet, pool_q: SampleSet, b: int, rng: np.random.Generator) -> Iterator[JointBatch]:
    """
    One epoch over fixed pools: both pools are shuffled independently and cut
    into floor(m / b) aligned batches; a short tail is dropped.
    """
    if pool_p.count != pool_q.count:
        raise KStatusError.from_code_message(
            KCode.INVALID_ARGUMENT, f"Pools differ in size ({pool_p.count} vs {pool_q.count})"
        )
    n_batch = batches_per_epoch(pool_p.count, b)
    order_p = rng.permutation(pool_p.count)
    order_q = rng.permutation(pool_q.count)
    for k in range(n_batch):
        window = slice(k * b, (k + 1) * b)
        yield JointBatch(pool_p.points[order_p[window]], pool_q.points[order_q[window]])


def fresh_minibatches(
    p: GaussianSpec, q: GaussianSpec, b: int, n_batch: int, rng: np.random.Generator
) -> Iterator[JointBatch]:
    """
    Infinite-sample epoch: every batch is a new draw from the distributions.
    """
    for _ in range(n_batch):
        yield JointBatch(sample(p, b, rng, "p").points, sample(q, b, rng, "q").points)
