"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from rkhskl.nn.featurenet import DenseLayer, FeatureNet, init_feature_net
from rkhskl.objectives.baselineobjectives import dv_gradients, dv_objective, fgan_kl_gradients, fgan_kl_objective
from rkhskl.objectives.logisticobjective import (
    MebubCheck,
    alg1_kl_readout,
    kl_readout,
    logistic_gradients,
    logistic_objective,
    mebub_check,
    penalty_term,
)
from rkhskl.objectives.objectivevalue import ObjectiveValue
from rkhskl.rkhs.minibatchgram import MinibatchGram, minibatch_gram
from rkhskl.rkhs.stochastichead import (
    StochasticHead,
    WeightSample,
    discriminator_value,
    sample_weights,
    weights_from_noise,
)
from rkhskl.trainer.trainconfig import EstimatorKind, KlAccumulator, TrainConfig

READOUT_WEIGHT = "readout.weight"
READOUT_BIAS = "readout.bias"


@dataclass(frozen=True, eq=False)
class StepResult:
    """
    Everything one minibatch evaluation produces: loss pieces, f on both sides,
    parameter gradients of the total loss, and the Gram when there is a kernel head.
    """

    objective: ObjectiveValue
    f_x: np.ndarray
    f_y: np.ndarray
    gradients: Dict[str, np.ndarray]
    gram: Optional[MinibatchGram] = None
    mebub: Optional[MebubCheck] = None
    stable: bool = True

    @property
    def kl_batch(self) -> float:
        return self.objective.kl_batch


class Discriminator(ABC):
    """
    A trainable discriminator f = head(phi_theta(x)). Implementations differ in
    the head and in the loss they minimize.
    """

    def __init__(self, net: FeatureNet, accumulator: KlAccumulator = KlAccumulator.EQ5_MEAN_F):
        self.net = net
        self.accumulator = accumulator

    def readout(self, f_x: np.ndarray) -> float:
        if self.accumulator == KlAccumulator.ALG1_LITERAL:
            return alg1_kl_readout(f_x)
        return kl_readout(f_x)

    @abstractmethod
    def parameters(self) -> Dict[str, np.ndarray]:
        pass

    @abstractmethod
    def step_values(self, x: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> StepResult:
        """
        Evaluate loss and gradients on one joint minibatch without updating anything.
        """
        pass


class RkhsDiscriminator(Discriminator):
    """
    Feature network followed by the stochastic Gaussian head, trained on the
    logistic loss plus lambda * S_mini^gamma.
    """

    def __init__(
        self,
        net: FeatureNet,
        head: StochasticHead,
        lam: float = 0.0,
        gamma: float = 0.05,
        d: int = 8,
        d_readout: int = 128,
        accumulator: KlAccumulator = KlAccumulator.EQ5_MEAN_F,
    ):
        super().__init__(net, accumulator)
        self.head = head
        self.lam = lam
        self.gamma = gamma
        self.d = d
        self.d_readout = d_readout

    def parameters(self) -> Dict[str, np.ndarray]:
        params = self.net.parameters()
        params.update(self.head.parameters())
        return params

    def step_values(self, x: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> StepResult:
        sample = sample_weights(self.head, self.d, rng)
        readout_sample = sample_weights(self.head, self.d_readout, rng)
        return self.evaluate(x, y, sample, readout_sample)

    def evaluate_with_noise(self, x: np.ndarray, y: np.ndarray, noise: np.ndarray) -> StepResult:
        """
        Deterministic evaluation for a fixed set of standard-normal draws.
        """
        return self.evaluate(x, y, weights_from_noise(self.head, noise))

    def evaluate(
        self, x: np.ndarray, y: np.ndarray, sample: WeightSample, readout_sample: Optional[WeightSample] = None
    ) -> StepResult:
        b = len(x)
        phi, tape = self.net.forward(np.concatenate([x, y], axis=0))
        f = discriminator_value(phi, sample.weights)
        f_x, f_y = f[:b], f[b:]

        loss_d = logistic_objective(f_x, f_y)
        gram = minibatch_gram(phi, self.head, split=b)
        penalty, penalty_slope, clamped = penalty_term(gram.s_mini, self.lam, self.gamma)

        grad_x, grad_y = logistic_gradients(f_x, f_y)
        grad_phi, head_grads = self.head.readout_gradients(
            phi, np.concatenate([grad_x, grad_y]), sample.mean_noise()
        )
        if penalty_slope != 0.0:
            s_grad_phi, s_head_grads = gram.s_mini_gradients(self.head)
            grad_phi += penalty_slope * s_grad_phi
            for name, grad in s_head_grads.items():
                head_grads[name] += penalty_slope * grad

        gradients = self.net.backward(tape, grad_phi)
        gradients.update(head_grads)

        f_readout = f_x if readout_sample is None else discriminator_value(phi[:b], readout_sample.weights)
        objective = ObjectiveValue(loss_d, penalty, self.readout(f_readout), clamped)
        return StepResult(
            objective=objective,
            f_x=f_x,
            f_y=f_y,
            gradients=gradients,
            gram=gram,
            mebub=mebub_check(loss_d, f_x, f_y),
            stable=objective.is_finite() and bool(np.all(np.isfinite(f))),
        )


class PlainDiscriminator(Discriminator):
    """
    Feature network followed by a deterministic linear readout. Trained on the
    logistic loss (plain neural-net discriminator) or on the negated
    Donsker-Varadhan / Fenchel-dual bounds (baselines).
    """

    def __init__(
        self,
        net: FeatureNet,
        readout_layer: DenseLayer,
        kind: EstimatorKind = EstimatorKind.PLAIN_NN,
        accumulator: KlAccumulator = KlAccumulator.EQ5_MEAN_F,
    ):
        super().__init__(net, accumulator)
        self.readout_layer = readout_layer
        self.kind = kind

    def parameters(self) -> Dict[str, np.ndarray]:
        params = self.net.parameters()
        params[READOUT_WEIGHT] = self.readout_layer.weight
        params[READOUT_BIAS] = self.readout_layer.bias
        return params

    def step_values(self, x: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> StepResult:
        return self.evaluate(x, y)

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> StepResult:
        b = len(x)
        phi, tape = self.net.forward(np.concatenate([x, y], axis=0))
        f = (phi @ self.readout_layer.weight.T + self.readout_layer.bias)[:, 0]
        f_x, f_y = f[:b], f[b:]

        mebub = None
        if self.kind.uses_logistic_loss:
            loss_d = logistic_objective(f_x, f_y)
            grad_x, grad_y = logistic_gradients(f_x, f_y)
            objective = ObjectiveValue(loss_d, kl_batch=self.readout(f_x))
            mebub = mebub_check(loss_d, f_x, f_y)
        elif self.kind == EstimatorKind.DV_BASELINE:
            bound = dv_objective(f_x, f_y)
            grad_x, grad_y = dv_gradients(f_x, f_y)
            objective = ObjectiveValue(-bound.value, kl_batch=bound.value)
        else:
            bound = fgan_kl_objective(f_x, f_y)
            grad_x, grad_y = fgan_kl_gradients(f_x, f_y)
            objective = ObjectiveValue(-bound.value, kl_batch=bound.value)

        grad_f = np.concatenate([grad_x, grad_y])
        gradients = self.net.backward(tape, np.outer(grad_f, self.readout_layer.weight[0]))
        gradients[READOUT_WEIGHT] = (grad_f @ phi)[None, :]
        gradients[READOUT_BIAS] = np.array([grad_f.sum()])
        return StepResult(
            objective=objective,
            f_x=f_x,
            f_y=f_y,
            gradients=gradients,
            mebub=mebub,
            stable=objective.is_finite() and bool(np.all(np.isfinite(f))),
        )


def build_discriminator(config: TrainConfig, init_seed: int) -> Discriminator:
    """
    Construct the discriminator named by ``config.estimator_kind``; all kinds
    share the same feature network shape so their capacities match.
    """
    net = init_feature_net(
        config.input_dim, config.hidden_dim, config.hidden_dim, seed=init_seed, slope=config.leaky_slope
    )
    kind = config.estimator_kind
    if kind.is_rkhs:
        return RkhsDiscriminator(
            net,
            StochasticHead.initial(config.hidden_dim),
            lam=config.effective_lambda,
            gamma=config.gamma,
            d=config.d,
            d_readout=config.d_readout,
            accumulator=config.kl_accumulator,
        )
    rng = np.random.default_rng(init_seed + 1)
    limit = 1.0 / np.sqrt(config.hidden_dim)
    readout_layer = DenseLayer(rng.uniform(-limit, limit, size=(1, config.hidden_dim)), np.zeros(1))
    return PlainDiscriminator(net, readout_layer, kind, config.kl_accumulator)
