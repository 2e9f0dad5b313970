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

from rkhskl.objectives.logisticobjective import kl_readout
from rkhskl.rkhs.minibatchgram import embedding_stats, minibatch_gram
from rkhskl.rkhs.stochastichead import CHOL, StochasticHead, discriminator_value, kernel_value, sample_weights
from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError
from tests.test_rkhs.test_stochastichead import random_head


class TestMinibatchGram(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.head = random_head(4, self.rng)
        self.phi = self.rng.normal(size=(8, 4))
        self.gram = minibatch_gram(self.phi, self.head)

    def test_entries_match_kernel(self):
        self.assertEqual(8, self.gram.size)
        self.assertEqual(4, self.gram.split)
        for i in range(8):
            for j in range(8):
                self.assertAlmostEqual(
                    kernel_value(self.phi[i], self.phi[j], self.head), self.gram.entries[i, j], places=10
                )

    def test_symmetric_and_psd(self):
        np.testing.assert_array_equal(self.gram.entries, self.gram.entries.T)
        self.assertGreaterEqual(self.gram.min_eigen_ratio(), -1e-8)

    def test_s_mini_is_max_entry(self):
        self.assertEqual(float(self.gram.entries.max()), self.gram.s_mini)
        i, j = self.gram.argmax()
        self.assertEqual(self.gram.s_mini, self.gram.entries[i, j])

    def test_argmax_ties_take_lowest_index(self):
        gram = minibatch_gram(np.ones((4, 3)), StochasticHead.initial(3))
        self.assertEqual((0, 0), gram.argmax())
        self.assertAlmostEqual(3.0, gram.s_mini)

    def test_degenerate_head_gives_rank_one_gram(self):
        w_bar = self.rng.normal(size=4)
        gram = minibatch_gram(self.phi, StochasticHead(w_bar, np.zeros((4, 4))))
        a = self.phi @ w_bar
        np.testing.assert_allclose(np.outer(a, a), gram.entries, rtol=1e-12, atol=1e-12)
        self.assertEqual(1, np.linalg.matrix_rank(gram.entries))

    def test_sub_batch_s_mini_is_not_larger(self):
        rows = [0, 2, 5, 7]
        sub = minibatch_gram(self.phi[rows], self.head, split=2)
        self.assertLessEqual(sub.s_mini, self.gram.s_mini + 1e-12)
        pairs = minibatch_gram(self.phi[[1, 6]], self.head, split=1)
        self.assertLessEqual(pairs.s_mini, self.gram.s_mini + 1e-12)

    def test_single_point_gram(self):
        head = StochasticHead.initial(2)
        gram = minibatch_gram(np.array([[1.0, 2.0], [0.0, 0.0]]), head, split=1)
        self.assertAlmostEqual(5.0, gram.s_mini)

    def test_rejects_one_sided_split(self):
        with self.assertRaises(KStatusError) as context:
            minibatch_gram(self.phi, self.head, split=8)
        self.assertEqual(KCode.INVALID_ARGUMENT, context.exception.get_code())

    def test_rejects_feature_dim_mismatch(self):
        with self.assertRaises(KStatusError):
            minibatch_gram(np.ones((4, 3)), self.head)

    def test_blocks(self):
        np.testing.assert_array_equal(self.gram.entries[:4, :4], self.gram.p_block())
        np.testing.assert_array_equal(self.gram.entries[4:, 4:], self.gram.q_block())
        np.testing.assert_array_equal(self.gram.entries[:4, 4:], self.gram.cross_block())

    def test_s_mini_gradients_match_finite_differences(self):
        grad_phi, grads = self.gram.s_mini_gradients(self.head)
        step = 1e-6

        def s_of_phi(phi):
            return minibatch_gram(phi, self.head).s_mini

        for idx in np.ndindex(self.phi.shape):
            upper, lower = self.phi.copy(), self.phi.copy()
            upper[idx] += step
            lower[idx] -= step
            fd = (s_of_phi(upper) - s_of_phi(lower)) / (2 * step)
            self.assertAlmostEqual(fd, grad_phi[idx], places=5)

        for name, param in self.head.parameters().items():
            for idx in np.ndindex(param.shape):
                if name == CHOL and idx[1] > idx[0]:
                    continue
                original = param[idx]
                param[idx] = original + step
                upper = s_of_phi(self.phi)
                param[idx] = original - step
                lower = s_of_phi(self.phi)
                param[idx] = original
                self.assertAlmostEqual((upper - lower) / (2 * step), grads[name][idx], places=5)


class TestEmbeddingStats(unittest.TestCase):
    def test_norm_inequality_and_readout_consistency(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            head = random_head(4, rng)
            phi = rng.normal(size=(10, 4))
            f = discriminator_value(phi, sample_weights(head, 8, rng).weights)
            gram = minibatch_gram(phi, head)
            stats = embedding_stats(f[:5], f[5:], gram)
            self.assertLessEqual(stats.sum_norm, 2.0 * math.sqrt(gram.s_mini) + 1e-9)
            self.assertAlmostEqual(kl_readout(f[:5]), stats.mean_p, delta=1e-12)
            self.assertGreaterEqual(stats.diff_norm, 0.0)

    def test_identical_halves_have_zero_difference(self):
        phi = np.tile(np.array([[1.0, 0.5]]), (4, 1))
        gram = minibatch_gram(phi, StochasticHead.initial(2))
        stats = embedding_stats(np.ones(2), np.ones(2), gram)
        self.assertAlmostEqual(0.0, stats.diff_norm, places=6)
        self.assertAlmostEqual(2.0 * math.sqrt(1.25), stats.sum_norm, places=10)
        self.assertAlmostEqual(math.sqrt(1.25), stats.midpoint_norm, places=10)
        self.assertAlmostEqual(0.0, stats.embedding_ratio, places=6)

    def test_partition_mismatch(self):
        gram = minibatch_gram(np.ones((4, 2)), StochasticHead.initial(2))
        with self.assertRaises(KStatusError) as context:
            embedding_stats(np.ones(3), np.ones(1), gram)
        self.assertEqual(KCode.FAILED_PRECONDITION, context.exception.get_code())


if __name__ == '__main__':
    unittest.main()
