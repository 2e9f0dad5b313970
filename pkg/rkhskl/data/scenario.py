"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from rkhskl.data.gaussianspec import GaussianSpec, analytic_gaussian_kl
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError

BENCHMARK_TARGETS = (1.3, 13.8, 61.1)


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    A pair of Gaussians with their analytic KL(p || q).
    """

    p: GaussianSpec
    q: GaussianSpec
    true_kl: float = field(init=False)
    label: Optional[float] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "true_kl", analytic_gaussian_kl(self.p, self.q))

    @property
    def dim(self) -> int:
        return self.p.dim

    @property
    def key(self) -> float:
        """
        Scenario value used in reports: the requested target when there is one,
        the analytic KL otherwise.
        """
        return self.label if self.label is not None else round(self.true_kl, 6)

    def to_dict(self) -> dict:
        return {"p": self.p.to_dict(), "q": self.q.to_dict(), "true_kl": self.true_kl}


def make_scenario(target_kl: float) -> Scenario:
    """
    p = N(0, I_2), q = N((delta, 0), I_2) with delta = sqrt(2 * target_kl), so
    that KL(p || q) = delta^2 / 2 hits the target in closed form.
    """
    if not math.isfinite(target_kl) or target_kl < 0.0:
        raise KStatusError.from_code_message(KCode.OUT_OF_RANGE, f"KL target must be >= 0, got {target_kl}")
    delta = math.sqrt(2.0 * target_kl)
    p = GaussianSpec.isotropic(np.zeros(2))
    q = GaussianSpec.isotropic(np.array([delta, 0.0]))
    return Scenario(p, q, label=float(target_kl))


def scenario_from_dict(payload: dict, label: Optional[float] = None) -> Scenario:
    try:
        p = GaussianSpec(np.asarray(payload["p"]["mean"]), np.asarray(payload["p"]["cov"]))
        q = GaussianSpec(np.asarray(payload["q"]["mean"]), np.asarray(payload["q"]["cov"]))
    except (KeyError, TypeError) as e:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"Malformed scenario definition: {e}", e)
    return Scenario(p, q, label=label)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Read ``{"p": {"mean": [...], "cov": [[...]]}, "q": {...}}`` from a JSON file.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"Cannot read scenario file {path}", e)
    return scenario_from_dict(payload, payload.get("label"))
