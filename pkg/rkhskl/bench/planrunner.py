"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import asyncio
import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Sequence, Tuple

from rkhskl.bench.experimentplan import ExperimentPlan, PlanCell, Variant
from rkhskl.diagnostics.tracechecker import training_trace_checks
from rkhskl.trainer.repetitionrunner import run_repetitions_async
from rkhskl.trainer.runreport import AggregateReport, RunReport

logger = logging.getLogger(__name__)

RUNS_CSV = "runs.csv"
CSV_HEADER = (
    "scenario_kl",
    "estimator",
    "lambda",
    "gamma",
    "hidden_dim",
    "d",
    "seed",
    "kl_estimate",
    "best_loss",
    "best_epoch",
    "stable",
    "s_mini_final",
    "mebub_violations",
)


def estimator_label(aggregate_or_run) -> str:
    config = aggregate_or_run.config
    return Variant(config.estimator_kind, config.sample_mode).label


def _cell_sort_key(aggregate: AggregateReport) -> Tuple:
    return (aggregate.scenario_key, estimator_label(aggregate), aggregate.config.lam, aggregate.config.hidden_dim)


def _number(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def csv_rows(aggregates: Sequence[AggregateReport]) -> List[List[str]]:
    """
    One row per run, sorted by scenario, estimator, lambda, hidden dim and seed.
    """
    rows = []
    for aggregate in aggregates:
        for run in aggregate.runs:
            rows.append((_cell_sort_key(aggregate) + (run.seed,), _csv_row(aggregate, run)))
    return [row for _, row in sorted(rows, key=lambda item: item[0])]


def _csv_row(aggregate: AggregateReport, run: RunReport) -> List[str]:
    config = run.config
    return [
        _number(aggregate.scenario_key),
        estimator_label(run),
        _number(config.lam),
        _number(config.gamma),
        str(config.hidden_dim),
        str(config.d),
        str(run.seed),
        _number(run.kl_estimate),
        _number(run.best_loss),
        str(run.best_epoch),
        "true" if run.stable else "false",
        _number(run.s_mini_final),
        str(run.mebub_violations),
    ]


def write_runs_csv(path: Path, aggregates: Sequence[AggregateReport]) -> Path:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(csv_rows(aggregates))
    return path


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def aggregate_payload(plan: ExperimentPlan, cell: PlanCell, aggregate: AggregateReport, created: str) -> dict:
    payload = aggregate.to_dict()
    payload["estimator"] = cell.variant.label
    payload["scenario"] = cell.scenario.to_dict()
    payload["base_seed"] = plan.base_seed
    payload["n_reps"] = plan.n_reps
    payload["checks"] = [
        dict(seed=run.seed, **training_trace_checks(run).to_dict()) for run in aggregate.runs
    ]
    payload["created"] = created
    return _json_safe(payload)


def write_aggregate_json(plan: ExperimentPlan, cell: PlanCell, aggregate: AggregateReport) -> Path:
    created = datetime.now(timezone.utc).isoformat()
    path = plan.out_dir / f"{cell.file_stem}.json"
    path.write_text(json.dumps(aggregate_payload(plan, cell, aggregate, created), indent=2, sort_keys=True))
    return path


async def _run_cell(plan: ExperimentPlan, cell: PlanCell, executor: ThreadPoolExecutor) -> AggregateReport:
    logger.info("Cell scenario=%g estimator=%s lambda=%g hidden=%d reps=%d",
                cell.scenario.key, cell.variant.label, cell.config.lam, cell.config.hidden_dim, plan.n_reps)
    return await run_repetitions_async(
        cell.config,
        plan.n_reps,
        plan.base_seed,
        cell.scenario.p,
        cell.scenario.q,
        scenario_key=cell.scenario.key,
        executor=executor,
    )


async def run_plan(plan: ExperimentPlan) -> List[AggregateReport]:
    """
    Execute every cell of the plan on a pool of ``plan.jobs`` threads, then write
    ``runs.csv`` and one aggregate JSON per cell into ``plan.out_dir``. Unstable
    runs are recorded, never raised.
    """
    out_dir = plan.ensure_writable()
    cells = list(plan.cells())
    logger.info("Plan: %d cells, %d runs, output %s", len(cells), len(cells) * plan.n_reps, out_dir)

    with ThreadPoolExecutor(max_workers=plan.jobs) as executor:
        aggregates = list(await asyncio.gather(*(_run_cell(plan, cell, executor) for cell in cells)))

    write_runs_csv(out_dir / RUNS_CSV, aggregates)
    for cell, aggregate in zip(cells, aggregates):
        write_aggregate_json(plan, cell, aggregate)
    return sorted(aggregates, key=_cell_sort_key)
