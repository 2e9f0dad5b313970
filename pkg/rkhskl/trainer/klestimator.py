"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import logging
import math
from typing import Iterator, List, Optional, Union

import numpy as np

from rkhskl.data.gaussianspec import GaussianSpec, SampleSet, sample
from rkhskl.data.minibatcher import JointBatch, fresh_minibatches, minibatches
from rkhskl.nn.adamoptimizer import AdamOptimizer
from rkhskl.rkhs.minibatchgram import embedding_stats
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError
from rkhskl.trainer.discriminator import Discriminator, StepResult, build_discriminator
from rkhskl.trainer.runreport import EpochTrace, RunReport
from rkhskl.trainer.trainconfig import SampleMode, TrainConfig

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9

Source = Union[GaussianSpec, SampleSet]


class KlEstimator:
    """
    One run of KL estimation with complexity control: epochs of minibatch
    updates, epoch-level loss and KL accumulation, and best-loss early stopping
    with patience ``flat_n``.

    Randomness comes from three independent streams spawned from ``config.seed``
    (initialization, data pools, training noise) so a run is reproducible on its own.
    """

    def __init__(self, config: TrainConfig, p_source: Source, q_source: Source):
        for source in (p_source, q_source):
            if source.dim != config.input_dim:
                raise KStatusError.from_code_message(
                    KCode.INVALID_ARGUMENT, f"Source dim {source.dim} != configured input_dim {config.input_dim}"
                )
        self.config = config
        init_seq, data_seq, train_seq = np.random.SeedSequence(config.seed).spawn(3)
        self.discriminator: Discriminator = build_discriminator(config, int(init_seq.generate_state(1)[0]))
        self.optimizer = AdamOptimizer(lr=config.lr)
        self.data_rng = np.random.default_rng(data_seq)
        self.rng = np.random.default_rng(train_seq)
        self.p_source = p_source
        self.q_source = q_source
        self.pool_p: Optional[SampleSet] = None
        self.pool_q: Optional[SampleSet] = None
        if config.sample_mode == SampleMode.FINITE:
            self.pool_p = self._pool(p_source, "p")
            self.pool_q = self._pool(q_source, "q")
        self.max_abs_f = 0.0
        self.s_mini_clamps = 0

    def _pool(self, source: Source, tag: str) -> SampleSet:
        if isinstance(source, SampleSet):
            if source.count < self.config.m:
                raise KStatusError.from_code_message(
                    KCode.INVALID_ARGUMENT, f"Sample pool '{tag}' holds {source.count} < m={self.config.m} points"
                )
            return SampleSet(source.points[: self.config.m], tag)
        return sample(source, self.config.m, self.data_rng, tag)

    def _epoch_batches(self) -> Iterator[JointBatch]:
        if self.config.sample_mode == SampleMode.INFINITE:
            if not isinstance(self.p_source, GaussianSpec) or not isinstance(self.q_source, GaussianSpec):
                raise KStatusError.from_code_message(
                    KCode.FAILED_PRECONDITION, "Infinite-sample mode needs distributions, not fixed pools"
                )
            return fresh_minibatches(self.p_source, self.q_source, self.config.b, self.config.n_batch, self.data_rng)
        return minibatches(self.pool_p, self.pool_q, self.config.b, self.data_rng)

    def _step(self, batch: JointBatch) -> StepResult:
        result = self.discriminator.step_values(batch.x, batch.y, self.rng)
        if not result.stable:
            raise KStatusError.from_code_message(KCode.DATA_LOSS, "Non-finite discriminator output or loss")
        self.optimizer.step(self.discriminator.parameters(), result.gradients)
        return result

    def run_epoch(self, epoch: int) -> EpochTrace:
        loss_sum = 0.0
        kl_sum = 0.0
        n_batch = 0
        s_mini_max = None
        mebub_violations = 0
        norm_violations = 0
        psd_min_ratio = None
        mebub_seen = False
        last_stats = None
        last_s_mini = None

        for k, batch in enumerate(self._epoch_batches()):
            result = self._step(batch)
            n_batch += 1
            loss_sum += result.objective.loss_d
            kl_sum += result.kl_batch
            self.max_abs_f = max(self.max_abs_f, float(np.max(np.abs(result.f_x))), float(np.max(np.abs(result.f_y))))
            self.s_mini_clamps += int(result.objective.s_mini_clamped)

            if result.mebub is not None:
                mebub_seen = True
                mebub_violations += int(not result.mebub.satisfied)

            if result.gram is not None:
                gram = result.gram
                last_s_mini = gram.s_mini
                s_mini_max = last_s_mini if s_mini_max is None else max(s_mini_max, last_s_mini)
                last_stats = embedding_stats(result.f_x, result.f_y, gram)
                if last_stats.sum_norm > 2.0 * math.sqrt(max(last_s_mini, 0.0)) + NORM_TOLERANCE:
                    norm_violations += 1
                if k < self.config.psd_checks_per_epoch:
                    ratio = gram.min_eigen_ratio()
                    psd_min_ratio = ratio if psd_min_ratio is None else min(psd_min_ratio, ratio)

        return EpochTrace(
            epoch=epoch,
            loss=loss_sum / n_batch,
            kl_epoch=kl_sum / n_batch,
            s_mini_max=s_mini_max,
            s_mini_last=last_s_mini,
            mu_sum_norm=None if last_stats is None else last_stats.sum_norm,
            mu_diff_norm=None if last_stats is None else last_stats.diff_norm,
            mebub_satisfied=(mebub_violations == 0) if mebub_seen else None,
            mebub_violations=mebub_violations,
            norm_violations=norm_violations,
            psd_min_ratio=psd_min_ratio,
        )

    def run(self) -> RunReport:
        config = self.config
        if config.truncated_tail:
            logger.warning("b=%d does not divide m=%d, %d samples per pool skipped each epoch",
                           config.b, config.m, config.truncated_tail)
        logger.info("Run seed=%d kind=%s mode=%s lambda=%g hidden=%d",
                    config.seed, config.estimator_kind.value, config.sample_mode.value,
                    config.effective_lambda, config.hidden_dim)

        traces: List[EpochTrace] = []
        best_loss = math.inf
        kl = math.nan
        idx = 0
        stable = True
        stop_reason = "iter_max"

        for epoch in range(1, config.iter_max + 1):
            try:
                trace = self.run_epoch(epoch)
            except KStatusError as e:
                if e.get_code() != KCode.DATA_LOSS:
                    raise
                logger.warning("Run seed=%d unstable at epoch %d: %s", config.seed, epoch, e.get_message())
                stable = False
                stop_reason = "unstable"
                break
            traces.append(trace)
            logger.debug("epoch=%d loss=%.6f kl=%.6f s_mini=%s", epoch, trace.loss, trace.kl_epoch, trace.s_mini_last)

            if trace.loss < best_loss:
                best_loss = trace.loss
                kl = trace.kl_epoch
                idx = epoch
            elif epoch > idx + config.flat_n:
                stop_reason = "early_stop"
                logger.debug("No improvement since epoch %d, stopping at %d", idx, epoch)
                break

        report = RunReport(
            config=config,
            kl_estimate=kl,
            best_loss=best_loss,
            best_epoch=idx,
            traces=tuple(traces),
            stable=stable and math.isfinite(kl),
            stop_reason=stop_reason,
            max_abs_f=self.max_abs_f,
            s_mini_clamps=self.s_mini_clamps,
        )
        if self.s_mini_clamps:
            logger.warning("Run seed=%d clamped S_mini %d times", config.seed, self.s_mini_clamps)
        logger.info("Run seed=%d finished: kl=%.4f best_epoch=%d stable=%s (%s)",
                    config.seed, report.kl_estimate, report.best_epoch, report.stable, stop_reason)
        return report


def train_estimate(config: TrainConfig, p_source: Source, q_source: Source) -> RunReport:
    """
    Run the estimator in the sample mode named by the config. In finite mode
    Gaussian sources are sampled once into m-point pools; SampleSet sources are
    used directly as pools.
    """
    return KlEstimator(config, p_source, q_source).run()


def infinite_sample_driver(config: TrainConfig, p_dist: GaussianSpec, q_dist: GaussianSpec) -> RunReport:
    """
    Same loop as :func:`train_estimate`, drawing every minibatch fresh from the distributions.
    """
    if config.sample_mode != SampleMode.INFINITE:
        raise KStatusError.from_code_message(
            KCode.FAILED_PRECONDITION, "infinite_sample_driver requires sample_mode=infinite"
        )
    return KlEstimator(config, p_dist, q_dist).run()
