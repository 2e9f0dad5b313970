"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import expit

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError

logger = logging.getLogger(__name__)

SOFTPLUS_THRESHOLD = 30.0
S_MINI_FLOOR = 1e-12
MEBUB_TOLERANCE = 1e-9


def softplus(z) -> np.ndarray:
    """
    log(1 + e^z) with branches at |z| = 30, where the dropped term is below 1e-13.
    """
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    hi = z > SOFTPLUS_THRESHOLD
    lo = z < -SOFTPLUS_THRESHOLD
    mid = ~(hi | lo)
    out[hi] = z[hi]
    out[lo] = np.exp(z[lo])
    out[mid] = np.log1p(np.exp(z[mid]))
    return out


def log_sigmoid(z) -> np.ndarray:
    return -softplus(-np.asarray(z, dtype=np.float64))


def _require_batches(f_x: np.ndarray, f_y: np.ndarray) -> None:
    if np.size(f_x) == 0 or np.size(f_y) == 0:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Objective needs non-empty batches")


def logistic_objective(f_x: np.ndarray, f_y: np.ndarray) -> float:
    """
    loss_d = -mean log sigma(f(x)) - mean log sigma(-f(y)); minimizing it
    maximizes the finite-sample GAN objective.
    """
    _require_batches(f_x, f_y)
    return float(np.mean(softplus(-np.asarray(f_x))) + np.mean(softplus(np.asarray(f_y))))


def logistic_gradients(f_x: np.ndarray, f_y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    d loss_d / d f on each side.
    """
    _require_batches(f_x, f_y)
    return -expit(-np.asarray(f_x)) / len(f_x), expit(np.asarray(f_y)) / len(f_y)


def penalty_term(s_mini: float, lam: float, gamma: float) -> Tuple[float, float, bool]:
    """
    lambda * S_mini^gamma with S_mini floored at 1e-12.

    :return: (penalty, d penalty / d S_mini, whether the floor was applied)
    """
    if lam == 0.0:
        return 0.0, 0.0, False
    clamped = s_mini <= S_MINI_FLOOR
    if clamped:
        logger.debug("S_mini=%g clamped to %g before the fractional power", s_mini, S_MINI_FLOOR)
        return lam * S_MINI_FLOOR**gamma, 0.0, True
    return lam * s_mini**gamma, lam * gamma * s_mini ** (gamma - 1.0), False


def penalized_objective(loss_d: float, s_mini: float, lam: float, gamma: float) -> float:
    penalty, _, _ = penalty_term(s_mini, lam, gamma)
    return loss_d + penalty


def kl_readout(f_x: np.ndarray) -> float:
    """
    KL_m(f) = mean of f over the p-samples.
    """
    if np.size(f_x) == 0:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "KL readout needs a non-empty batch")
    return float(np.mean(f_x))


def alg1_kl_readout(f_x: np.ndarray) -> float:
    """
    The accumulator as literally written in the training pseudo-code: mean log sigma(f(x)).
    """
    if np.size(f_x) == 0:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "KL readout needs a non-empty batch")
    return float(np.mean(log_sigmoid(f_x)))


@dataclass(frozen=True)
class MebubCheck:
    lhs: float
    rhs: float
    satisfied: bool


def mebub_check(loss_d: float, f_x: np.ndarray, f_y: np.ndarray) -> MebubCheck:
    """
    Mean-embedding upper bound: -loss_d <= log sigma(mean f(x) - mean f(y)).
    """
    _require_batches(f_x, f_y)
    lhs = -loss_d
    rhs = float(log_sigmoid(np.mean(f_x) - np.mean(f_y)))
    return MebubCheck(lhs, rhs, bool(lhs <= rhs + MEBUB_TOLERANCE))
