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
import os
import tempfile
import unittest

import numpy as np

from rkhskl.data.gaussianspec import analytic_gaussian_kl
from rkhskl.data.scenario import BENCHMARK_TARGETS, Scenario, load_scenario, make_scenario, scenario_from_dict
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


class TestScenario(unittest.TestCase):
    def test_benchmark_targets_are_hit_exactly(self):
        for target in BENCHMARK_TARGETS:
            scenario = make_scenario(target)
            self.assertAlmostEqual(target, scenario.true_kl, delta=1e-10)
            self.assertAlmostEqual(analytic_gaussian_kl(scenario.p, scenario.q), scenario.true_kl, delta=1e-10)
            self.assertEqual(target, scenario.key)

    def test_mean_shift(self):
        self.assertAlmostEqual(1.61245, make_scenario(1.3).q.mean[0], places=5)
        self.assertAlmostEqual(11.0544, make_scenario(61.1).q.mean[0], places=4)
        np.testing.assert_array_equal(np.zeros(2), make_scenario(13.8).p.mean)

    def test_zero_target(self):
        scenario = make_scenario(0.0)
        self.assertEqual(0.0, scenario.true_kl)
        np.testing.assert_array_equal(scenario.p.mean, scenario.q.mean)

    def test_negative_target(self):
        with self.assertRaises(KStatusError) as context:
            make_scenario(-1.0)
        self.assertEqual(KCode.OUT_OF_RANGE, context.exception.get_code())

    def test_key_without_label(self):
        scenario = Scenario(make_scenario(2.0).p, make_scenario(2.0).q)
        self.assertAlmostEqual(2.0, scenario.key)
        self.assertEqual(2, scenario.dim)

    def test_dict_round_trip_keeps_kl(self):
        scenario = make_scenario(13.8)
        rebuilt = scenario_from_dict(json.loads(json.dumps(scenario.to_dict())))
        self.assertAlmostEqual(scenario.true_kl, rebuilt.true_kl, delta=1e-10)

    def test_malformed_definition(self):
        with self.assertRaises(KStatusError) as context:
            scenario_from_dict({"p": {"mean": [0.0, 0.0]}})
        self.assertEqual(KCode.INVALID_ARGUMENT, context.exception.get_code())

    def test_load_scenario(self):
        payload = {
            "p": {"mean": [0.0], "cov": [[1.0]]},
            "q": {"mean": [1.0], "cov": [[2.0]]},
            "label": 7.5,
        }
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "scenario.json")
            with open(path, "w") as handle:
                json.dump(payload, handle)
            scenario = load_scenario(path)
        expected = 0.5 * (0.5 + 0.5 - 1.0 + math.log(2.0))
        self.assertAlmostEqual(expected, scenario.true_kl, places=12)
        self.assertEqual(7.5, scenario.key)

    def test_load_missing_file(self):
        with self.assertRaises(KStatusError) as context:
            load_scenario("/nonexistent/scenario.json")
        self.assertEqual(KCode.INVALID_ARGUMENT, context.exception.get_code())


if __name__ == '__main__':
    unittest.main()
