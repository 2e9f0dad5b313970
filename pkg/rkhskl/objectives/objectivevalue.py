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
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ObjectiveValue:
    """
    One minibatch evaluation of the training loss loss_d + lambda * S_mini^gamma.
    """

    loss_d: float
    penalty: float = field(default=0.0)
    kl_batch: float = field(default=float("nan"))
    s_mini_clamped: bool = field(default=False)

    @property
    def total(self) -> float:
        return self.loss_d + self.penalty

    def is_finite(self) -> bool:
        return math.isfinite(self.loss_d) and math.isfinite(self.penalty)
