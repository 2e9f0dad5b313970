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

from rkhskl.data.gaussianspec import GaussianSpec, analytic_gaussian_kl, monte_carlo_kl, sample
from rkhskl.data.scenario import BENCHMARK_TARGETS, make_scenario
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError


class TestGaussianSpec(unittest.TestCase):
    def test_factor_reproduces_covariance(self):
        covariance = np.array([[2.0, 0.6], [0.6, 1.0]])
        spec = GaussianSpec(np.zeros(2), covariance)
        np.testing.assert_allclose(covariance, spec.factor @ spec.factor.T, atol=1e-10)
        self.assertEqual(2, spec.dim)

    def test_rejects_asymmetric(self):
        with self.assertRaises(KStatusError) as context:
            GaussianSpec(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))
        self.assertEqual(KCode.INVALID_ARGUMENT, context.exception.get_code())

    def test_rejects_indefinite(self):
        with self.assertRaises(KStatusError):
            GaussianSpec(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_rejects_shape_mismatch(self):
        with self.assertRaises(KStatusError):
            GaussianSpec(np.zeros(3), np.eye(2))

    def test_singular_covariance_factor(self):
        spec = GaussianSpec(np.zeros(2), np.array([[1.0, 1.0], [1.0, 1.0]]))
        np.testing.assert_allclose(spec.covariance, spec.factor @ spec.factor.T, atol=1e-6)

    def test_zero_covariance_samples_equal_mean(self):
        spec = GaussianSpec(np.array([1.0, -2.0]), np.zeros((2, 2)))
        points = sample(spec, 10, np.random.default_rng(0)).points
        np.testing.assert_array_equal(np.tile([1.0, -2.0], (10, 1)), points)

    def test_sample_moments(self):
        covariance = np.array([[1.5, 0.4], [0.4, 0.8]])
        spec = GaussianSpec(np.array([0.5, -1.0]), covariance)
        points = sample(spec, 100000, np.random.default_rng(1)).points
        band = 3.0 * np.sqrt(np.diag(covariance) / 100000)
        self.assertTrue(np.all(np.abs(points.mean(axis=0) - spec.mean) < band))
        np.testing.assert_allclose(covariance, np.cov(points.T), rtol=0.05)

    def test_sample_mean_band(self):
        points = sample(GaussianSpec.isotropic(np.zeros(2)), 100000, np.random.default_rng(2)).points
        self.assertTrue(np.all(np.abs(points.mean(axis=0)) < 3.0 / math.sqrt(100000)))

    def test_sample_is_deterministic(self):
        spec = GaussianSpec.isotropic(np.zeros(2))
        a = sample(spec, 5, np.random.default_rng(3), "q")
        b = sample(spec, 5, np.random.default_rng(3), "q")
        np.testing.assert_array_equal(a.points, b.points)
        self.assertEqual("q", a.tag)

    def test_sample_rejects_zero_count(self):
        with self.assertRaises(KStatusError):
            sample(GaussianSpec.isotropic(np.zeros(2)), 0, np.random.default_rng(0))

    def test_log_density(self):
        spec = GaussianSpec.isotropic(np.zeros(2))
        self.assertAlmostEqual(-math.log(2.0 * math.pi), float(spec.log_density(np.zeros(2))[0]), places=12)


class TestAnalyticKl(unittest.TestCase):
    def test_identical(self):
        spec = GaussianSpec(np.array([1.0, 2.0]), np.array([[2.0, 0.3], [0.3, 1.0]]))
        self.assertAlmostEqual(0.0, analytic_gaussian_kl(spec, spec), places=12)

    def test_one_dimensional_mean_shift(self):
        p = GaussianSpec.isotropic(np.zeros(1))
        q = GaussianSpec.isotropic(np.array([2.0]))
        self.assertAlmostEqual(2.0, analytic_gaussian_kl(p, q), places=12)

    def test_variance_ratio(self):
        p = GaussianSpec.isotropic(np.zeros(1), 1.0)
        q = GaussianSpec.isotropic(np.zeros(1), 4.0)
        self.assertAlmostEqual(0.5 * (0.25 - 1.0 + math.log(4.0)), analytic_gaussian_kl(p, q), places=12)

    def test_singular_q(self):
        p = GaussianSpec.isotropic(np.zeros(2))
        q = GaussianSpec(np.zeros(2), np.zeros((2, 2)))
        with self.assertRaises(KStatusError) as context:
            analytic_gaussian_kl(p, q)
        self.assertEqual(KCode.OUT_OF_RANGE, context.exception.get_code())

    def test_dimension_mismatch(self):
        with self.assertRaises(KStatusError):
            analytic_gaussian_kl(GaussianSpec.isotropic(np.zeros(2)), GaussianSpec.isotropic(np.zeros(3)))

    def test_monte_carlo_agreement(self):
        rng = np.random.default_rng(4)
        for target in BENCHMARK_TARGETS:
            scenario = make_scenario(target)
            estimate = monte_carlo_kl(scenario.p, scenario.q, 1000000, rng)
            self.assertLess(abs(estimate - scenario.true_kl), 0.01 * scenario.true_kl)

    def test_monte_carlo_agreement_full_covariance(self):
        p = GaussianSpec(np.array([0.0, 1.0]), np.array([[1.0, 0.3], [0.3, 0.5]]))
        q = GaussianSpec(np.array([1.0, 0.0]), np.array([[2.0, -0.2], [-0.2, 1.0]]))
        estimate = monte_carlo_kl(p, q, 1000000, np.random.default_rng(5))
        self.assertLess(abs(estimate - analytic_gaussian_kl(p, q)), 0.01 * analytic_gaussian_kl(p, q))


if __name__ == '__main__':
    unittest.main()
