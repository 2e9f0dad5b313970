"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import unittest

import numpy as np

from rkhskl.nn.adamoptimizer import AdamOptimizer, OptimizerState, optimizer_step
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


class TestAdamOptimizer(unittest.TestCase):
    def test_first_step_moves_by_learning_rate(self):
        params = {"w": np.zeros(3)}
        AdamOptimizer(lr=5e-3).step(params, {"w": np.ones(3)})
        np.testing.assert_allclose(params["w"], -5e-3 * np.ones(3), rtol=1e-6)

    def test_first_step_sign_follows_gradient(self):
        params = {"w": np.zeros(2)}
        AdamOptimizer().step(params, {"w": np.array([-4.0, 0.25])})
        np.testing.assert_allclose(params["w"], [5e-3, -5e-3], rtol=1e-6)

    def test_zero_gradient_on_fresh_state_is_noop(self):
        params = {"w": np.array([1.0, -2.0])}
        optimizer = AdamOptimizer()
        optimizer.step(params, {"w": np.zeros(2)})
        np.testing.assert_array_equal(params["w"], [1.0, -2.0])
        self.assertEqual(1, optimizer.state.step)

    def test_non_finite_gradient_leaves_state_untouched(self):
        params = {"w": np.array([1.0, 2.0]), "b": np.zeros(1)}
        state = OptimizerState()
        with self.assertRaises(KStatusError) as context:
            optimizer_step(state, params, {"w": np.array([np.nan, 1.0]), "b": np.ones(1)})
        self.assertEqual(KCode.DATA_LOSS, context.exception.get_code())
        np.testing.assert_array_equal(params["w"], [1.0, 2.0])
        np.testing.assert_array_equal(params["b"], [0.0])
        self.assertEqual(0, state.step)
        self.assertEqual({}, state.first_moment)

    def test_missing_gradient(self):
        with self.assertRaises(KStatusError) as context:
            optimizer_step(OptimizerState(), {"w": np.zeros(2)}, {})
        self.assertEqual(KCode.FAILED_PRECONDITION, context.exception.get_code())

    def test_mis_shaped_gradient(self):
        with self.assertRaises(KStatusError) as context:
            optimizer_step(OptimizerState(), {"w": np.zeros(2)}, {"w": np.zeros(3)})
        self.assertEqual(KCode.FAILED_PRECONDITION, context.exception.get_code())

    def test_rejects_non_positive_learning_rate(self):
        with self.assertRaises(KStatusError) as context:
            AdamOptimizer(lr=0.0)
        self.assertEqual(KCode.INVALID_ARGUMENT, context.exception.get_code())

    def test_minimizes_quadratic(self):
        params = {"w": np.array([1.0, -1.5])}
        optimizer = AdamOptimizer(lr=5e-2)
        for _ in range(500):
            optimizer.step(params, {"w": 2.0 * params["w"]})
        self.assertLess(np.linalg.norm(params["w"]), 0.1)


if __name__ == '__main__':
    unittest.main()
