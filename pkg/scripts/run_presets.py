"""
SPDX-FileCopyrightText: 2024 Contributors to the rkhs-kl project

See the NOTICE file(s) distributed with this work for additional
information regarding copyright ownership.

This program and the accompanying materials are made available under the
terms of the Apache License Version 2.0 which is available at

    http://www.apache.org/licenses/LICENSE-2.0

SPDX-License-Identifier: Apache-2.0
"""

import argparse
import asyncio
import logging
from dataclasses import replace

from rkhskl.bench.experimentplan import ExperimentPlan, Variant
from rkhskl.bench.planrunner import run_plan
from rkhskl.bench.summary import emit_summary
from rkhskl.data.scenario import BENCHMARK_TARGETS, make_scenario
from rkhskl.trainer.trainconfig import EstimatorKind, SampleMode, TrainConfig

LAMBDA_GRID = (5e-5, 1e-4, 5e-4)
SWEEP_HIDDEN_DIMS = (10, 15, 20, 25)
N_REPS = 30


def _scenarios():
    return tuple(make_scenario(target) for target in BENCHMARK_TARGETS)


def estimator_comparison(out_dir="results/estimator_comparison", n_reps=N_REPS, include_baselines=False, template=TrainConfig.DEFAULT):
    """
    Infinite-sample NN, finite-sample NN and complexity-controlled RKHS
    discriminators at hidden dim 25, optionally with the DV and f-GAN baselines.
    """
    variants = [
        Variant(EstimatorKind.PLAIN_NN, SampleMode.INFINITE),
        Variant(EstimatorKind.PLAIN_NN, SampleMode.FINITE),
        Variant(EstimatorKind.RKHS_PENALIZED, SampleMode.FINITE),
    ]
    if include_baselines:
        variants += [Variant(EstimatorKind.DV_BASELINE), Variant(EstimatorKind.FGAN_BASELINE)]
    return ExperimentPlan(
        scenarios=_scenarios(),
        variants=tuple(variants),
        lambdas=(5e-4,),
        hidden_dims=(25,),
        n_reps=n_reps,
        out_dir=out_dir,
        template=template,
    )


def lambda_comparison(out_dir="results/lambda_comparison", n_reps=N_REPS, template=TrainConfig.DEFAULT):
    return ExperimentPlan(
        scenarios=_scenarios(),
        variants=(Variant(EstimatorKind.RKHS_PENALIZED),),
        lambdas=LAMBDA_GRID,
        hidden_dims=(20,),
        n_reps=n_reps,
        out_dir=out_dir,
        template=template,
    )


def lambda_hidden_sweep(out_dir="results/lambda_hidden_sweep", n_reps=N_REPS, template=TrainConfig.DEFAULT):
    return ExperimentPlan(
        scenarios=_scenarios(),
        variants=(Variant(EstimatorKind.RKHS_PENALIZED), Variant(EstimatorKind.RKHS_UNPENALIZED)),
        lambdas=LAMBDA_GRID,
        hidden_dims=SWEEP_HIDDEN_DIMS,
        n_reps=n_reps,
        out_dir=out_dir,
        template=template,
    )


PRESETS = {
    "estimator_comparison": estimator_comparison,
    "lambda_comparison": lambda_comparison,
    "lambda_hidden_sweep": lambda_hidden_sweep,
}


def main():
    parser = argparse.ArgumentParser(description="Run a preset experiment plan.")
    parser.add_argument("preset", choices=sorted(PRESETS))
    parser.add_argument("--out", default=None)
    parser.add_argument("--reps", type=int, default=N_REPS)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    kwargs = {"n_reps": args.reps}
    if args.out:
        kwargs["out_dir"] = args.out
    plan = PRESETS[args.preset](**kwargs)
    if args.jobs != 1:
        plan = replace(plan, jobs=args.jobs)
    print(f"{args.preset}: {plan.total_runs} runs into {plan.out_dir}")
    emit_summary(asyncio.run(run_plan(plan)))


if __name__ == "__main__":
    main()
