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
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from rkhskl.trainer.trainconfig import TrainConfig


@dataclass(frozen=True)
class EpochTrace:
    """
    Per-epoch record of the training loop. Embedding and Gram fields refer to
    the last minibatch of the epoch and are None for discriminators without a
    kernel head.
    """

    epoch: int
    loss: float
    kl_epoch: float
    s_mini_max: Optional[float] = None
    s_mini_last: Optional[float] = None
    mu_sum_norm: Optional[float] = None
    mu_diff_norm: Optional[float] = None
    mebub_satisfied: Optional[bool] = None
    mebub_violations: int = 0
    norm_violations: int = 0
    psd_min_ratio: Optional[float] = None

    @property
    def midpoint_norm(self) -> Optional[float]:
        return None if self.mu_sum_norm is None else 0.5 * self.mu_sum_norm

    @property
    def embedding_ratio(self) -> Optional[float]:
        if self.mu_sum_norm is None or self.mu_diff_norm is None or self.mu_sum_norm == 0.0:
            return None
        return self.mu_diff_norm / self.mu_sum_norm

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RunReport:
    """
    Outcome of one estimation run: the KL recorded at the best-loss epoch plus
    the epoch traces that led there.
    """

    config: TrainConfig
    kl_estimate: float
    best_loss: float
    best_epoch: int
    traces: Tuple[EpochTrace, ...] = field(default_factory=tuple)
    stable: bool = True
    stop_reason: str = "iter_max"
    max_abs_f: float = 0.0
    s_mini_clamps: int = 0

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def s_mini_final(self) -> Optional[float]:
        return self.traces[-1].s_mini_last if self.traces else None

    @property
    def mebub_violations(self) -> int:
        return sum(trace.mebub_violations for trace in self.traces)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "kl_estimate": self.kl_estimate,
            "best_loss": self.best_loss,
            "best_epoch": self.best_epoch,
            "stable": self.stable,
            "stop_reason": self.stop_reason,
            "max_abs_f": self.max_abs_f,
            "s_mini_clamps": self.s_mini_clamps,
            "traces": [trace.to_dict() for trace in self.traces],
        }


@dataclass(frozen=True)
class AggregateReport:
    """
    Mean and unbiased standard deviation of the stable runs of one experiment
    cell; unstable runs are only counted.
    """

    config: TrainConfig
    runs: Tuple[RunReport, ...]
    scenario_key: Optional[float] = None
    mean: Optional[float] = None
    std: Optional[float] = None

    @classmethod
    def from_runs(
        cls, config: TrainConfig, runs: Sequence[RunReport], scenario_key: Optional[float] = None
    ) -> "AggregateReport":
        runs = tuple(sorted(runs, key=lambda run: run.seed))
        estimates = [run.kl_estimate for run in runs if run.stable and math.isfinite(run.kl_estimate)]
        if not estimates:
            return cls(config, runs, scenario_key)
        std = float(np.std(estimates, ddof=1)) if len(estimates) > 1 else 0.0
        return cls(config, runs, scenario_key, float(np.mean(estimates)), std)

    @property
    def estimates(self) -> Tuple[float, ...]:
        return tuple(run.kl_estimate for run in self.runs)

    @property
    def n(self) -> int:
        return len(self.runs)

    @property
    def count_unstable(self) -> int:
        return sum(1 for run in self.runs if not (run.stable and math.isfinite(run.kl_estimate)))

    @property
    def all_unstable(self) -> bool:
        return self.mean is None

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "scenario_kl": self.scenario_key,
            "mean": self.mean,
            "std": self.std,
            "n": self.n,
            "n_unstable": self.count_unstable,
            "estimates": [None if not math.isfinite(value) else value for value in self.estimates],
        }
