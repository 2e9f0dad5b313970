"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import sys
from typing import List, Optional, Sequence, TextIO

from rkhskl.bench.planrunner import estimator_label
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError
from rkhskl.trainer.runreport import AggregateReport


def _estimate_cell(report: AggregateReport) -> str:
    if report.all_unstable:
        return "unstable"
    return f"{report.mean:.3f} ± {report.std:.3f}"


def summary_lines(reports: Sequence[AggregateReport]) -> List[str]:
    """
    Aligned table of the aggregates. The lambda column is dropped when every
    report shares one lambda.
    """
    if not reports:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Nothing to summarize")
    show_lambda = len({report.config.lam for report in reports}) > 1

    header = ["scenario", "estimator"] + (["lambda"] if show_lambda else []) + ["hidden", "kl", "unstable"]
    table = [header]
    for report in reports:
        row = [f"{report.scenario_key:g}" if report.scenario_key is not None else "-", estimator_label(report)]
        if show_lambda:
            row.append(f"{report.config.lam:g}")
        row += [str(report.config.hidden_dim), _estimate_cell(report), f"{report.count_unstable}/{report.n}"]
        table.append(row)

    widths = [max(len(row[k]) for row in table) for k in range(len(header))]
    return ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in table]


def emit_summary(reports: Sequence[AggregateReport], stream: Optional[TextIO] = None) -> str:
    text = "\n".join(summary_lines(reports)) + "\n"
    (stream or sys.stdout).write(text)
    return text
