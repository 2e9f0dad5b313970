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

from rkhskl.trainer.runreport import EpochTrace, RunReport

NORM_TOLERANCE = 1e-9
PSD_TOLERANCE = 1e-8


@dataclass(frozen=True)
class TraceCheckSummary:
    """
    Pass / fail counts of the per-epoch inequality checks of one run. Epochs
    without the relevant quantity (for example no kernel head) are not counted.
    """

    epochs: int = 0
    mebub_passed: int = field(default=0)
    mebub_failed: int = field(default=0)
    norm_passed: int = field(default=0)
    norm_failed: int = field(default=0)
    psd_passed: int = field(default=0)
    psd_failed: int = field(default=0)

    @property
    def failed(self) -> int:
        return self.mebub_failed + self.norm_failed + self.psd_failed

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "mebub": {"passed": self.mebub_passed, "failed": self.mebub_failed},
            "norm": {"passed": self.norm_passed, "failed": self.norm_failed},
            "psd": {"passed": self.psd_passed, "failed": self.psd_failed},
        }


def _mebub_ok(trace: EpochTrace) -> bool:
    return bool(trace.mebub_satisfied) and trace.mebub_violations == 0


def _norm_ok(trace: EpochTrace) -> bool:
    bound = 2.0 * math.sqrt(max(trace.s_mini_last, 0.0)) + NORM_TOLERANCE
    return trace.norm_violations == 0 and trace.mu_sum_norm <= bound


def training_trace_checks(report: RunReport, psd_tolerance: float = PSD_TOLERANCE) -> TraceCheckSummary:
    """
    Re-check the recorded epoch traces: mean-embedding upper bound, the
    ||mu_p + mu_q|| <= 2 sqrt(S_mini) norm inequality and the Gram PSD spot
    checks. Violations are counted, never raised.
    """
    counts = dict.fromkeys(
        ("mebub_passed", "mebub_failed", "norm_passed", "norm_failed", "psd_passed", "psd_failed"), 0
    )
    for trace in report.traces:
        if trace.mebub_satisfied is not None:
            counts["mebub_passed" if _mebub_ok(trace) else "mebub_failed"] += 1
        if trace.mu_sum_norm is not None and trace.s_mini_last is not None:
            counts["norm_passed" if _norm_ok(trace) else "norm_failed"] += 1
        if trace.psd_min_ratio is not None:
            counts["psd_passed" if trace.psd_min_ratio >= -psd_tolerance else "psd_failed"] += 1
    return TraceCheckSummary(epochs=len(report.traces), **counts)
