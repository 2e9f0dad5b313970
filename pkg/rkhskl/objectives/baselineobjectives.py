"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


@dataclass(frozen=True)
class BaselineValue:
    """
    Value of a variational lower bound on KL. Overflow is reported through
    ``stable`` instead of an exception, the run that produced it is then
    marked unstable by the trainer.
    """

    value: float
    stable: bool

    @staticmethod
    def of(value: float) -> "BaselineValue":
        return BaselineValue(float(value), math.isfinite(value))


def _require_batches(f_x: np.ndarray, f_y: np.ndarray) -> None:
    if np.size(f_x) == 0 or np.size(f_y) == 0:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Objective needs non-empty batches")


def dv_objective(f_x: np.ndarray, f_y: np.ndarray) -> BaselineValue:
    """
    Donsker-Varadhan bound mean f(x) - log mean exp f(y), the log-mean-exp taken
    through log-sum-exp.
    """
    _require_batches(f_x, f_y)
    with np.errstate(over="ignore", invalid="ignore"):
        value = np.mean(f_x) - (logsumexp(f_y) - np.log(len(f_y)))
    return BaselineValue.of(value)


def dv_gradients(f_x: np.ndarray, f_y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gradients of the loss -dv_objective with respect to f on each side.
    """
    _require_batches(f_x, f_y)
    return -np.full(len(f_x), 1.0 / len(f_x)), softmax(np.asarray(f_y, dtype=np.float64))


def fgan_kl_objective(f_x: np.ndarray, f_y: np.ndarray) -> BaselineValue:
    """
    Fenchel-dual KL bound mean f(x) - mean exp(f(y) - 1).
    """
    _require_batches(f_x, f_y)
    with np.errstate(over="ignore", invalid="ignore"):
        value = np.mean(f_x) - np.mean(np.exp(np.asarray(f_y, dtype=np.float64) - 1.0))
    return BaselineValue.of(value)


def fgan_kl_gradients(f_x: np.ndarray, f_y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    _require_batches(f_x, f_y)
    with np.errstate(over="ignore"):
        grad_y = np.exp(np.asarray(f_y, dtype=np.float64) - 1.0) / len(f_y)
    return -np.full(len(f_x), 1.0 / len(f_x)), grad_y
