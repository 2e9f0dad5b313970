"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from dataclasses import asdict, dataclass, field, replace
from enum import Enum

from rkhskl.validation.validationresult import ValidationResult


class EstimatorKind(str, Enum):
    RKHS_PENALIZED = "rkhs_penalized"
    RKHS_UNPENALIZED = "rkhs_unpenalized"
    PLAIN_NN = "plain_nn"
    DV_BASELINE = "dv_baseline"
    FGAN_BASELINE = "fgan_baseline"

    @property
    def is_rkhs(self) -> bool:
        return self in (EstimatorKind.RKHS_PENALIZED, EstimatorKind.RKHS_UNPENALIZED)

    @property
    def uses_logistic_loss(self) -> bool:
        return self not in (EstimatorKind.DV_BASELINE, EstimatorKind.FGAN_BASELINE)


class SampleMode(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"


class KlAccumulator(str, Enum):
    EQ5_MEAN_F = "eq5_mean_f"
    ALG1_LITERAL = "alg1_literal"

    @staticmethod
    def from_flag(value: str) -> "KlAccumulator":
        aliases = {"eq5": KlAccumulator.EQ5_MEAN_F, "alg1": KlAccumulator.ALG1_LITERAL}
        return aliases.get(value) or KlAccumulator(value)


class TrainConfigValidator:
    """
    Checks a TrainConfig and reports every problem in one ValidationResult.
    """

    def validate(self, config: "TrainConfig") -> ValidationResult:
        return ValidationResult.combine(
            [
                self.validate_sizes(config),
                self.validate_penalty(config),
                self.validate_schedule(config),
                self.validate_sampling(config),
            ]
        )

    @staticmethod
    def validate_sizes(config: "TrainConfig") -> ValidationResult:
        if config.m < 1 or config.b < 1:
            return ValidationResult.failure("m and b must be >= 1")
        if config.b > config.m:
            return ValidationResult.failure(f"Minibatch size b={config.b} exceeds m={config.m}")
        if config.hidden_dim < 1 or config.input_dim < 1:
            return ValidationResult.failure("hidden_dim and input_dim must be >= 1")
        return ValidationResult.success()

    @staticmethod
    def validate_penalty(config: "TrainConfig") -> ValidationResult:
        if not config.lam >= 0.0:
            return ValidationResult.failure(f"lambda must be >= 0, got {config.lam}")
        if not config.gamma > 0.0:
            return ValidationResult.failure(f"gamma must be > 0, got {config.gamma}")
        return ValidationResult.success()

    @staticmethod
    def validate_schedule(config: "TrainConfig") -> ValidationResult:
        if not config.lr > 0.0:
            return ValidationResult.failure(f"Learning rate must be > 0, got {config.lr}")
        if config.flat_n < 1:
            return ValidationResult.failure(f"flat_n must be >= 1, got {config.flat_n}")
        if config.iter_max < 1:
            return ValidationResult.failure(f"iter_max must be >= 1, got {config.iter_max}")
        return ValidationResult.success()

    @staticmethod
    def validate_sampling(config: "TrainConfig") -> ValidationResult:
        if config.d < 1 or config.d_readout < 1:
            return ValidationResult.failure("d and d_readout must be >= 1")
        if config.psd_checks_per_epoch < 0:
            return ValidationResult.failure("psd_checks_per_epoch must be >= 0")
        return ValidationResult.success()


@dataclass(frozen=True)
class TrainConfig:
    """
    Every hyperparameter of one estimation run. Defaults follow the published
    setup: lr 5e-3, gamma 0.05, m 5000, b 50, flat_n 100.
    """

    DEFAULT = None
    m: int = field(default=5000)
    b: int = field(default=50)
    lr: float = field(default=5e-3)
    lam: float = field(default=5e-4)
    gamma: float = field(default=0.05)
    d: int = field(default=8)
    d_readout: int = field(default=128)
    flat_n: int = field(default=100)
    iter_max: int = field(default=2000)
    seed: int = field(default=0)
    estimator_kind: EstimatorKind = field(default=EstimatorKind.RKHS_PENALIZED)
    sample_mode: SampleMode = field(default=SampleMode.FINITE)
    hidden_dim: int = field(default=25)
    kl_accumulator: KlAccumulator = field(default=KlAccumulator.EQ5_MEAN_F)
    input_dim: int = field(default=2)
    leaky_slope: float = field(default=0.01)
    psd_checks_per_epoch: int = field(default=1)

    def __post_init__(self):
        object.__setattr__(self, "estimator_kind", EstimatorKind(self.estimator_kind))
        object.__setattr__(self, "sample_mode", SampleMode(self.sample_mode))
        object.__setattr__(self, "kl_accumulator", KlAccumulator.from_flag(self.kl_accumulator))
        TrainConfigValidator().validate(self).raise_if_failure()

    @property
    def n_batch(self) -> int:
        return self.m // self.b

    @property
    def truncated_tail(self) -> int:
        """Samples per pool left out of every epoch because b does not divide m."""
        return self.m % self.b

    @property
    def effective_lambda(self) -> float:
        return self.lam if self.estimator_kind == EstimatorKind.RKHS_PENALIZED else 0.0

    def with_changes(self, **changes) -> "TrainConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        echo = asdict(self)
        echo["lambda"] = echo.pop("lam")
        for key in ("estimator_kind", "sample_mode", "kl_accumulator"):
            echo[key] = echo[key].value
        return echo


# Default instance
TrainConfig.DEFAULT = TrainConfig()
