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
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from rkhskl.status.kcode import KCode
from rkhskl.status.kstatuserror import KStatusError
from rkhskl.trainer.runreport import RunReport


@dataclass(frozen=True)
class BoundInputs:
    """
    Constants of the deviation-from-mean probability bound.

    :param epsilon: accuracy level of the estimate.
    :param m: number of samples per distribution.
    :param M: bound on |f|.
    :param R: radius of the RKHS ball holding f.
    :param s_k: kernel complexity sup K(x, t).
    :param c_s: embedding constant, user supplied.
    :param l_s_norm: Sobolev embedding norm, user supplied.
    :param n: input dimension.
    :param h: smoothness parameter, must exceed n.
    """

    epsilon: float
    m: int
    M: float
    R: float = field(default=1.0)
    s_k: float = field(default=1.0)
    c_s: float = field(default=1.0)
    l_s_norm: float = field(default=1.0)
    n: int = field(default=2)
    h: float = field(default=4.0)

    def __post_init__(self):
        for name in ("epsilon", "m", "M", "R", "s_k", "c_s", "l_s_norm", "n", "h"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise KStatusError.from_code_message(KCode.OUT_OF_RANGE, f"{name} must be positive, got {value}")
        if self.h <= self.n:
            raise KStatusError.from_code_message(
                KCode.OUT_OF_RANGE, f"Smoothness h={self.h} must exceed the input dimension n={self.n}"
            )

    @classmethod
    def from_run_report(
        cls,
        report: RunReport,
        epsilon: float,
        m: Optional[int] = None,
        R: float = 1.0,
        c_s: float = 1.0,
        l_s_norm: float = 1.0,
        h: Optional[float] = None,
    ) -> "BoundInputs":
        """
        Fill M from the largest |f| seen during the run and S_K from its final
        S_mini. h defaults to twice the input dimension.
        """
        if report.s_mini_final is None:
            raise KStatusError.from_code_message(
                KCode.FAILED_PRECONDITION, "Run has no kernel complexity trace (not an RKHS discriminator)"
            )
        n = report.config.input_dim
        return cls(
            epsilon=epsilon,
            m=report.config.m if m is None else m,
            M=report.max_abs_f,
            R=R,
            s_k=report.s_mini_final,
            c_s=c_s,
            l_s_norm=l_s_norm,
            n=n,
            h=2.0 * n if h is None else h,
        )

    @property
    def covering_radius(self) -> float:
        return self.epsilon / (4.0 * math.sqrt(self.s_k))


def log_covering_number(R: float, eta: float, c_s: float, l_s_norm: float, n: int, h: float) -> float:
    """
    Log of the covering number of a radius-R RKHS ball at scale eta,
    (R C_s sqrt(||L_s||) / eta)^(2n/h).
    """
    if h <= n:
        raise KStatusError.from_code_message(KCode.OUT_OF_RANGE, f"Smoothness h={h} must exceed n={n}")
    if eta <= 0.0:
        raise KStatusError.from_code_message(KCode.OUT_OF_RANGE, f"Covering radius must be positive, got {eta}")
    return float((R * c_s * math.sqrt(l_s_norm) / eta) ** (2.0 * n / h))


def lemma1_bound(epsilon: float, m: int, M: float, log_covering: float) -> float:
    """
    1 - 2 exp(log N - m eps^2 / 4M^2). Negative or -inf values mean the bound is vacuous.
    """
    with np.errstate(over="ignore"):
        return float(1.0 - 2.0 * np.exp(log_covering - m * epsilon ** 2 / (4.0 * M ** 2)))


def theorem2_bound(inp: BoundInputs) -> float:
    """
    Lower bound on Prob(|KL_m - KL| <= eps) for a discriminator in the RKHS ball
    of radius R with kernel complexity S_K.
    """
    log_covering = log_covering_number(inp.R, inp.covering_radius, inp.c_s, inp.l_s_norm, inp.n, inp.h)
    return lemma1_bound(inp.epsilon, inp.m, inp.M, log_covering)
