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
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError
from rkhskl.trainer.klestimator import Source, train_estimate
from rkhskl.trainer.runreport import AggregateReport, RunReport
from rkhskl.trainer.trainconfig import TrainConfig

logger = logging.getLogger(__name__)


def repetition_configs(config: TrainConfig, n_reps: int, base_seed: int) -> List[TrainConfig]:
    if n_reps < 1:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"n_reps must be >= 1, got {n_reps}")
    return [config.with_changes(seed=base_seed + rep) for rep in range(n_reps)]


async def run_repetitions_async(
    config: TrainConfig,
    n_reps: int,
    base_seed: int,
    p_source: Source,
    q_source: Source,
    jobs: int = 1,
    scenario_key: Optional[float] = None,
    executor: Optional[ThreadPoolExecutor] = None,
) -> AggregateReport:
    """
    Train ``n_reps`` independent runs with seeds base_seed .. base_seed + n_reps - 1
    on a thread pool and aggregate them. Each run owns its parameters and
    generators, so the result does not depend on ``jobs``.

    :param executor: Optional shared pool; when given, ``jobs`` is ignored.
    """
    if jobs < 1:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"jobs must be >= 1, got {jobs}")
    configs = repetition_configs(config, n_reps, base_seed)
    loop = asyncio.get_running_loop()

    own_executor = executor is None
    pool = ThreadPoolExecutor(max_workers=jobs) if own_executor else executor
    try:
        futures = [loop.run_in_executor(pool, train_estimate, rep_config, p_source, q_source) for rep_config in configs]
        runs: List[RunReport] = list(await asyncio.gather(*futures))
    finally:
        if own_executor:
            pool.shutdown(wait=True)

    aggregate = AggregateReport.from_runs(config, runs, scenario_key)
    if aggregate.count_unstable:
        logger.warning("%d of %d runs unstable (kind=%s, lambda=%g)", aggregate.count_unstable, aggregate.n,
                       config.estimator_kind.value, config.effective_lambda)
    return aggregate


def run_repetitions(
    config: TrainConfig,
    n_reps: int,
    base_seed: int,
    p_source: Source,
    q_source: Source,
    jobs: int = 1,
    scenario_key: Optional[float] = None,
) -> AggregateReport:
    return asyncio.run(run_repetitions_async(config, n_reps, base_seed, p_source, q_source, jobs, scenario_key))
