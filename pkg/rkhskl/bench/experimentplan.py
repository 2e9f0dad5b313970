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
from pathlib import Path
from typing import Iterator, List, Sequence, Tuple, Union

from rkhskl.data.scenario import Scenario
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError
from rkhskl.trainer.trainconfig import EstimatorKind, SampleMode, TrainConfig
from rkhskl.validation.validationresult import ValidationResult


@dataclass(frozen=True)
class Variant:
    """
    An estimator kind together with the sampling regime it is trained under.
    """

    kind: EstimatorKind
    mode: SampleMode = field(default=SampleMode.FINITE)

    def __post_init__(self):
        object.__setattr__(self, "kind", EstimatorKind(self.kind))
        object.__setattr__(self, "mode", SampleMode(self.mode))

    @property
    def label(self) -> str:
        if self.mode == SampleMode.INFINITE:
            return f"{self.kind.value}_infinite"
        return self.kind.value


@dataclass(frozen=True)
class PlanCell:
    scenario: Scenario
    variant: Variant
    config: TrainConfig

    @property
    def file_stem(self) -> str:
        return (
            f"aggregate_{self.scenario.key:g}_{self.variant.label}_{self.config.lam:g}_{self.config.hidden_dim}"
        )


@dataclass(frozen=True, eq=False)
class ExperimentPlan:
    """
    Cross product of scenarios, estimator variants, lambda grid and hidden-dim
    grid, each cell repeated ``n_reps`` times from ``base_seed``.

    The lambda grid only applies to the penalized RKHS estimator; every other
    variant runs once per hidden dim with lambda 0.
    """

    scenarios: Tuple[Scenario, ...]
    variants: Tuple[Variant, ...]
    lambdas: Tuple[float, ...] = field(default=(5e-4,))
    hidden_dims: Tuple[int, ...] = field(default=(25,))
    n_reps: int = field(default=30)
    base_seed: int = field(default=0)
    out_dir: Union[str, Path] = field(default="results")
    template: TrainConfig = field(default=TrainConfig.DEFAULT)
    jobs: int = field(default=1)

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(self, "variants", tuple(Variant(*v) if isinstance(v, tuple) else v for v in self.variants))
        object.__setattr__(self, "lambdas", tuple(float(lam) for lam in self.lambdas))
        object.__setattr__(self, "hidden_dims", tuple(int(hidden) for hidden in self.hidden_dims))
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        self.validate().raise_if_failure()

    def validate(self) -> ValidationResult:
        problems: List[ValidationResult] = []
        for name in ("scenarios", "variants", "lambdas", "hidden_dims"):
            if not getattr(self, name):
                problems.append(ValidationResult.failure(f"{name} must not be empty"))
        if any(lam < 0.0 for lam in self.lambdas):
            problems.append(ValidationResult.failure("lambda values must be >= 0"))
        if any(hidden < 1 for hidden in self.hidden_dims):
            problems.append(ValidationResult.failure("hidden dims must be >= 1"))
        if self.n_reps < 1:
            problems.append(ValidationResult.failure(f"n_reps must be >= 1, got {self.n_reps}"))
        if self.jobs < 1:
            problems.append(ValidationResult.failure(f"jobs must be >= 1, got {self.jobs}"))
        if any(scenario.dim != self.template.input_dim for scenario in self.scenarios):
            problems.append(ValidationResult.failure("scenario dimension differs from template input_dim"))
        for name, keys in (
            ("scenario KL keys", [f"{scenario.key:g}" for scenario in self.scenarios]),
            ("variants", [variant.label for variant in self.variants]),
            ("lambda values", [f"{lam:g}" for lam in self.lambdas]),
            ("hidden dims", self.hidden_dims),
        ):
            if len(set(keys)) != len(keys):
                problems.append(ValidationResult.failure(f"duplicate {name} would share one output cell"))
        return ValidationResult.combine(problems)

    def lambdas_for(self, variant: Variant) -> Sequence[float]:
        if variant.kind == EstimatorKind.RKHS_PENALIZED:
            return self.lambdas
        return (0.0,)

    def cells(self) -> Iterator[PlanCell]:
        for scenario in self.scenarios:
            for variant in self.variants:
                for lam in self.lambdas_for(variant):
                    for hidden in self.hidden_dims:
                        config = self.template.with_changes(
                            estimator_kind=variant.kind,
                            sample_mode=variant.mode,
                            lam=lam,
                            hidden_dim=hidden,
                            seed=self.base_seed,
                        )
                        yield PlanCell(scenario, variant, config)

    @property
    def total_runs(self) -> int:
        return sum(1 for _ in self.cells()) * self.n_reps

    def ensure_writable(self) -> Path:
        """
        Create the output directory and prove it accepts files, before any training.
        """
        probe = self.out_dir / ".write_probe"
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            probe.write_text("")
            probe.unlink()
        except OSError as e:
            raise KStatusError.from_code_message(
                KCode.FAILED_PRECONDITION, f"Output directory {self.out_dir} is not writable", e
            )
        return self.out_dir
