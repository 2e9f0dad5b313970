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
import unittest

import numpy as np

from rkhskl.objectives.baselineobjectives import (
    BaselineValue,
    dv_gradients,
    dv_objective,
    fgan_kl_gradients,
    fgan_kl_objective,
)
from rkhskl.status.kstatuserror import KStatusError


class TestDonskerVaradhan(unittest.TestCase):
    def test_constant_discriminator(self):
        value = dv_objective(np.full(3, 0.7), np.full(5, 0.7))
        self.assertAlmostEqual(0.0, value.value, places=12)
        self.assertTrue(value.stable)

    def test_simple_values(self):
        self.assertAlmostEqual(1.0, dv_objective(np.ones(2), np.zeros(2)).value, places=12)

    def test_large_values_stay_finite(self):
        value = dv_objective(np.zeros(2), np.array([1e4, 0.0]))
        self.assertTrue(value.stable)
        self.assertAlmostEqual(-(1e4 - math.log(2.0)), value.value, places=6)

    def test_infinite_input_is_flagged(self):
        value = dv_objective(np.zeros(2), np.array([np.inf, 0.0]))
        self.assertFalse(value.stable)

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(1)
        f_x, f_y = rng.normal(size=4), rng.normal(size=3)
        grad_x, grad_y = dv_gradients(f_x, f_y)
        np.testing.assert_allclose(-np.full(4, 0.25), grad_x)
        step = 1e-6
        for i in range(3):
            upper, lower = f_y.copy(), f_y.copy()
            upper[i] += step
            lower[i] -= step
            fd = -(dv_objective(f_x, upper).value - dv_objective(f_x, lower).value) / (2 * step)
            self.assertAlmostEqual(fd, grad_y[i], places=7)

    def test_empty_batch(self):
        with self.assertRaises(KStatusError):
            dv_objective(np.zeros(2), np.array([]))


class TestFenchelDualKl(unittest.TestCase):
    def test_unit_discriminator(self):
        self.assertAlmostEqual(0.0, fgan_kl_objective(np.ones(2), np.ones(2)).value, places=12)

    def test_zero_discriminator(self):
        self.assertAlmostEqual(-math.exp(-1.0), fgan_kl_objective(np.zeros(2), np.zeros(2)).value, places=12)

    def test_moderate_values_stay_finite(self):
        self.assertTrue(fgan_kl_objective(np.zeros(1), np.array([100.0])).stable)

    def test_overflow_is_flagged(self):
        value = fgan_kl_objective(np.zeros(1), np.array([1000.0]))
        self.assertFalse(value.stable)
        self.assertEqual(-math.inf, value.value)

    def test_gradients(self):
        grad_x, grad_y = fgan_kl_gradients(np.zeros(2), np.array([1.0, 2.0]))
        np.testing.assert_allclose([-0.5, -0.5], grad_x)
        np.testing.assert_allclose([0.5, 0.5 * math.e], grad_y)

    def test_baseline_value_of(self):
        self.assertEqual(BaselineValue(1.5, True), BaselineValue.of(1.5))
        self.assertFalse(BaselineValue.of(math.nan).stable)


if __name__ == '__main__':
    unittest.main()
