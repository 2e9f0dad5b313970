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
import sys
from typing import List, Optional, Sequence

from rkhskl.bench.experimentplan import ExperimentPlan, Variant
from rkhskl.bench.planrunner import run_plan
from rkhskl.bench.summary import emit_summary
from rkhskl.data.scenario import Scenario, load_scenario, make_scenario
from rkhskl.status.kstatuserror import KStatusError
from rkhskl.trainer.trainconfig import EstimatorKind, KlAccumulator, SampleMode, TrainConfig

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    defaults = TrainConfig.DEFAULT
    parser = argparse.ArgumentParser(
        prog="rkhs-kl",
        description="Estimate KL divergence between Gaussian scenarios with complexity-controlled discriminators.",
    )
    parser.add_argument("--scenario", type=float, nargs="+", default=None,
                        help="KL targets of mean-shifted 2-D Gaussian pairs (default: 1.3)")
    parser.add_argument("--scenario-file", nargs="+", default=(), help="JSON scenario definitions")
    parser.add_argument("--estimator", nargs="+", default=[EstimatorKind.RKHS_PENALIZED.value],
                        choices=[kind.value for kind in EstimatorKind])
    parser.add_argument("--lambda", dest="lambdas", type=float, nargs="+", default=[defaults.lam])
    parser.add_argument("--gamma", type=float, default=defaults.gamma)
    parser.add_argument("--hidden", type=int, nargs="+", default=[defaults.hidden_dim])
    parser.add_argument("--reps", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0, help="base seed; repetition r uses seed + r")
    parser.add_argument("--mode", default=defaults.sample_mode.value, choices=[mode.value for mode in SampleMode])
    parser.add_argument("--out", default="results")
    parser.add_argument("--d", type=int, default=defaults.d)
    parser.add_argument("--iter-max", type=int, default=defaults.iter_max)
    parser.add_argument("--kl-accumulator", default="eq5", choices=["eq5", "alg1"])
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--m", type=int, default=defaults.m)
    parser.add_argument("--b", type=int, default=defaults.b)
    parser.add_argument("--flat-n", type=int, default=defaults.flat_n)
    parser.add_argument("--lr", type=float, default=defaults.lr)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true")
    verbosity.add_argument("--quiet", action="store_true")
    return parser


def scenarios_from_args(args: argparse.Namespace) -> List[Scenario]:
    scenarios = [load_scenario(path) for path in args.scenario_file]
    targets = args.scenario if args.scenario is not None else ([] if scenarios else [1.3])
    return [make_scenario(target) for target in targets] + scenarios


def plan_from_args(args: argparse.Namespace) -> ExperimentPlan:
    template = TrainConfig.DEFAULT.with_changes(
        gamma=args.gamma,
        d=args.d,
        iter_max=args.iter_max,
        kl_accumulator=KlAccumulator.from_flag(args.kl_accumulator),
        m=args.m,
        b=args.b,
        flat_n=args.flat_n,
        lr=args.lr,
        sample_mode=SampleMode(args.mode),
    )
    return ExperimentPlan(
        scenarios=tuple(scenarios_from_args(args)),
        variants=tuple(Variant(kind, args.mode) for kind in args.estimator),
        lambdas=tuple(args.lambdas),
        hidden_dims=tuple(args.hidden),
        n_reps=args.reps,
        base_seed=args.seed,
        out_dir=args.out,
        template=template,
        jobs=args.jobs,
    )


def configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args)
    try:
        plan = plan_from_args(args)
        reports = asyncio.run(run_plan(plan))
    except KStatusError as e:
        logger.error("%s", e)
        return 2
    emit_summary(reports)
    return 0


if __name__ == "__main__":
    sys.exit(main())
