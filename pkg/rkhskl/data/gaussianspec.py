"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky
from scipy.stats import multivariate_normal

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError

FACTOR_JITTER = 1e-12


def _lower_factor(covariance: np.ndarray) -> np.ndarray:
    if not np.any(covariance):
        return np.zeros_like(covariance)
    try:
        return cholesky(covariance, lower=True)
    except LinAlgError:
        jittered = covariance + FACTOR_JITTER * np.eye(covariance.shape[0])
        return cholesky(jittered, lower=True)


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    """
    Multivariate normal N(mean, covariance) with a cached lower-triangular
    factor used for sampling.
    """

    mean: np.ndarray
    covariance: np.ndarray
    factor: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        covariance = np.atleast_2d(np.asarray(self.covariance, dtype=np.float64))
        n = mean.shape[0]
        if mean.ndim != 1 or covariance.shape != (n, n):
            raise KStatusError.from_code_message(
                KCode.INVALID_ARGUMENT, f"Mean {mean.shape} and covariance {covariance.shape} disagree"
            )
        if not np.allclose(covariance, covariance.T, rtol=0.0, atol=1e-12):
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Covariance must be symmetric")
        scale = max(1.0, float(np.max(np.abs(covariance))))
        if np.linalg.eigvalsh(covariance)[0] < -1e-10 * scale:
            raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Covariance must be positive semidefinite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", covariance)
        object.__setattr__(self, "factor", _lower_factor(covariance))

    @classmethod
    def isotropic(cls, mean, variance: float = 1.0) -> "GaussianSpec":
        mean = np.atleast_1d(np.asarray(mean, dtype=np.float64))
        return cls(mean, variance * np.eye(mean.shape[0]))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def log_density(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_1d(multivariate_normal(self.mean, self.covariance).logpdf(x))

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "cov": self.covariance.tolist()}


@dataclass(frozen=True, eq=False)
class SampleSet:
    """
    Points drawn from one distribution, tagged "p" or "q".
    """

    points: np.ndarray
    tag: str = "p"

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def sample(spec: GaussianSpec, count: int, rng: np.random.Generator, tag: str = "p") -> SampleSet:
    if count < 1:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, f"count must be >= 1, got {count}")
    normals = rng.standard_normal((count, spec.dim))
    return SampleSet(spec.mean + normals @ spec.factor.T, tag)


def analytic_gaussian_kl(p: GaussianSpec, q: GaussianSpec) -> float:
    """
    KL(p || q) between two normals in closed form.
    """
    if p.dim != q.dim:
        raise KStatusError.from_code_message(KCode.INVALID_ARGUMENT, "Distributions live in different dimensions")
    sign_q, logdet_q = np.linalg.slogdet(q.covariance)
    if sign_q <= 0:
        raise KStatusError.from_code_message(KCode.OUT_OF_RANGE, "Covariance of q is singular")
    try:
        q_chol = cho_factor(q.covariance, lower=True)
    except LinAlgError as e:
        raise KStatusError.from_code_message(KCode.OUT_OF_RANGE, "Covariance of q is singular", e)
    sign_p, logdet_p = np.linalg.slogdet(p.covariance)
    if sign_p <= 0:
        return float("inf")
    delta = q.mean - p.mean
    trace_term = float(np.trace(cho_solve(q_chol, p.covariance)))
    mahalanobis = float(delta @ cho_solve(q_chol, delta))
    return 0.5 * (trace_term + mahalanobis - p.dim + logdet_q - logdet_p)


def monte_carlo_kl(p: GaussianSpec, q: GaussianSpec, count: int, rng: np.random.Generator) -> float:
    """
    mean(log p(x) - log q(x)) over ``count`` draws x ~ p.
    """
    x = sample(p, count, rng).points
    return float(np.mean(p.log_density(x) - q.log_density(x)))
