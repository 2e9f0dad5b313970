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
import os
import unittest

import pytest

from rkhskl.data.scenario import make_scenario
from rkhskl.diagnostics.tracechecker import training_trace_checks
from rkhskl.trainer.klestimator import train_estimate
from rkhskl.trainer.repetitionrunner import run_repetitions
from rkhskl.trainer.trainconfig import EstimatorKind, TrainConfig

RUN_SLOW = os.environ.get("RKHSKL_RUN_SLOW") == "1"
JOBS = max(1, min(4, os.cpu_count() or 1))


class TestTrainingRunDiagnostics(unittest.TestCase):
    """
    A penalized run on the KL 1.3 pair, truncated at 25 epochs, must never break
    the kernel inequalities. The untruncated run is in the slow suite.
    """

    @classmethod
    def setUpClass(cls):
        scenario = make_scenario(1.3)
        config = TrainConfig.DEFAULT.with_changes(iter_max=25, flat_n=25, psd_checks_per_epoch=4, seed=11)
        cls.report = train_estimate(config, scenario.p, scenario.q)
        cls.summary = training_trace_checks(cls.report)

    def test_run_is_stable(self):
        self.assertTrue(self.report.stable)
        self.assertTrue(math.isfinite(self.report.kl_estimate))

    def test_mean_embedding_bound_holds_every_batch(self):
        self.assertEqual(0, self.report.mebub_violations)
        self.assertEqual(0, self.summary.mebub_failed)
        self.assertEqual(len(self.report.traces), self.summary.mebub_passed)

    def test_norm_inequality_holds_every_batch(self):
        self.assertTrue(all(trace.norm_violations == 0 for trace in self.report.traces))
        self.assertEqual(0, self.summary.norm_failed)

    def test_sampled_grams_are_psd(self):
        # 4 checks per epoch over 25 epochs covers 100 Grams
        self.assertEqual(0, self.summary.psd_failed)
        self.assertEqual(len(self.report.traces), self.summary.psd_passed)


@pytest.mark.slow
@unittest.skipUnless(RUN_SLOW, "set RKHSKL_RUN_SLOW=1 to run the reproduction checks")
class TestReproduction(unittest.TestCase):
    def test_full_run_keeps_kernel_inequalities(self):
        scenario = make_scenario(1.3)
        report = train_estimate(TrainConfig.DEFAULT.with_changes(seed=11), scenario.p, scenario.q)
        summary = training_trace_checks(report)
        self.assertIn(report.stop_reason, ("early_stop", "iter_max"))
        self.assertTrue(report.stable)
        self.assertEqual(0, report.mebub_violations)
        self.assertEqual(0, summary.failed)
        self.assertEqual(len(report.traces), summary.mebub_passed)

    def test_penalized_estimate_on_low_kl_pair(self):
        scenario = make_scenario(1.3)
        config = TrainConfig.DEFAULT.with_changes(lam=5e-4, gamma=0.05, hidden_dim=25)
        aggregate = run_repetitions(config, 10, 0, scenario.p, scenario.q, jobs=JOBS, scenario_key=1.3)
        self.assertEqual(0, aggregate.count_unstable)
        self.assertGreaterEqual(aggregate.mean, 1.1)
        self.assertLessEqual(aggregate.mean, 2.0)
        self.assertLessEqual(aggregate.std, 0.5)

    def test_penalty_lowers_variance_against_plain_network(self):
        scenario = make_scenario(1.3)
        penalized = TrainConfig.DEFAULT.with_changes(lam=5e-4)
        plain = penalized.with_changes(estimator_kind=EstimatorKind.PLAIN_NN)
        penalized_aggregate = run_repetitions(penalized, 10, 0, scenario.p, scenario.q, jobs=JOBS)
        plain_aggregate = run_repetitions(plain, 10, 0, scenario.p, scenario.q, jobs=JOBS)
        self.assertLess(penalized_aggregate.std, plain_aggregate.std)

    def test_larger_lambda_lowers_variance(self):
        scenario = make_scenario(13.8)
        stds = {}
        for lam in (5e-5, 5e-4):
            config = TrainConfig.DEFAULT.with_changes(lam=lam, hidden_dim=20)
            stds[lam] = run_repetitions(config, 10, 0, scenario.p, scenario.q, jobs=JOBS).std
        self.assertLess(stds[5e-4], stds[5e-5])

    def test_baselines_survive_high_kl_pair(self):
        scenario = make_scenario(61.1)
        for kind in (EstimatorKind.DV_BASELINE, EstimatorKind.FGAN_BASELINE):
            with self.subTest(kind=kind):
                config = TrainConfig.DEFAULT.with_changes(estimator_kind=kind)
                aggregate = run_repetitions(config, 10, 0, scenario.p, scenario.q, jobs=JOBS)
                self.assertEqual(10, aggregate.n)
                for run in aggregate.runs:
                    if not math.isfinite(run.kl_estimate):
                        self.assertFalse(run.stable)


if __name__ == '__main__':
    unittest.main()
