# -*- coding: utf-8 -*-

"""
Command-line entry point.

.. code-block:: bash

    spline-qi bounds --qi q2star --m 4 --partitions random:200:seed=7
    spline-qi section11 --h 1000 --h 10000
    spline-qi coeffs --qi q3 --partition uniform:10
    spline-qi run --config experiments/configs/exactness.json

Exit codes: 0 when every report row passes, 1 when some row fails, 2 on
usage or data errors.
"""

import argparse
import json
import logging
import sys

from .errors import QIError
from .harness import (HarnessConfig, OperatorSpec, PartitionSpec,
                      build_operator, generate, run_experiment)
from .norms import lebesgue_sample
from .utils import FLOAT_FORMAT, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _common(parser):
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="Repeat for more logging")
    parser.add_argument("--out", default=None,
                        help="Output folder (reports) or file (lebesgue, "
                             "coeffs)")


def _sweep_flags(parser, qi_default):
    parser.add_argument("--qi", action="append", default=None,
                        help=f"Operator spec, repeatable (default "
                             f"{qi_default})")
    parser.add_argument("--m", action="append", type=int, default=None,
                        help="Spline degree, repeatable")
    parser.add_argument("--partitions", "--partition", action="append",
                        default=None, help="Partition spec kind:params, "
                                           "repeatable")
    parser.add_argument("--grid-points", type=int, default=64,
                        help="Lebesgue samples per knot interval")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spline-qi",
        description="Spline quasi-interpolants: exactness, norm bounds, "
                    "near-best certificates and convergence studies.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    exactness = subparsers.add_parser(
        "exactness", help="Polynomial reproduction of operators")
    _sweep_flags(exactness, "q2star")
    exactness.add_argument("--points", type=int, default=200,
                           help="Samples of the exactness check")

    bounds = subparsers.add_parser(
        "bounds", help="nu_1 and sampled Lebesgue maxima against their bounds")
    _sweep_flags(bounds, "q2star")

    nearbest = subparsers.add_parser(
        "nearbest", help="l1-minimality of the Qp* and Gp* coefficients")
    _sweep_flags(nearbest, "qpstar and gpstar")
    nearbest.add_argument("--p", action="append", type=int, default=None,
                          help="Stencil reach, repeatable (default m..m+3)")

    converge = subparsers.add_parser(
        "converge", help="Empirical order of convergence")
    _sweep_flags(converge, "q2star")
    converge.add_argument("--f", action="append", default=None,
                          help="Test function: sin, exp, runge, e0..e3")
    converge.add_argument("--levels", type=int, default=5)

    lebesgue = subparsers.add_parser(
        "lebesgue", help="Sampled Lebesgue function of one operator, as CSV")
    lebesgue.add_argument("--qi", required=True)
    lebesgue.add_argument("--m", type=int, default=3)
    lebesgue.add_argument("--partition", default="uniform:10")
    lebesgue.add_argument("--points", type=int, default=64)

    section11 = subparsers.add_parser(
        "section11", help="Lebesgue function growth of the cubic operator Q3")
    section11.add_argument("--h", action="append", type=float, default=None,
                           help="Stretched step, repeatable")
    section11.add_argument("--points", type=int, default=64)

    coeffs = subparsers.add_parser(
        "coeffs", help="Coefficient stencils of one operator, as CSV")
    coeffs.add_argument("--qi", required=True)
    coeffs.add_argument("--m", type=int, default=3)
    coeffs.add_argument("--partition", default="uniform:10")

    oracle = subparsers.add_parser(
        "oracle", help="Enumeration solver against the LP oracle")
    oracle.add_argument("--instances", type=int, default=100)
    oracle.add_argument("--seed", type=int, default=0)

    run = subparsers.add_parser("run", help="Run a JSON configuration")
    run.add_argument("--config", required=True)

    for sub in subparsers.choices.values():
        _common(sub)
    return parser


def _config(args, experiment, operators) -> HarnessConfig:
    data = {"experiment": experiment, "seed": args.seed,
            "grid": {"points_per_interval": args.grid_points}}
    if args.qi:
        data["operators"] = args.qi
    elif operators:
        data["operators"] = operators
    if args.m:
        data["degrees"] = args.m
    if args.partitions:
        data["partitions"] = args.partitions
    return HarnessConfig.from_dict(data)


def _finish(report, args) -> int:
    folder = report.save(args.out or report.results_folder())
    summary = report.summary()
    summary["folder"] = folder
    print(json.dumps(summary, indent=2, default=str))
    return EXIT_OK if report.passed else EXIT_FAILED


def _single_operator(args):
    op = OperatorSpec.parse(args.qi)
    window = generate(PartitionSpec.parse(args.partition), args.m)
    params = op.instances(args.m)[0]
    return build_operator(op.name, window, **params)


def dispatch(args) -> int:
    command = args.command
    if command == "run":
        return _finish(run_experiment(HarnessConfig.from_json(args.config)),
                       args)
    if command == "exactness":
        config = _config(args, "exactness", None)
        config.grid["exactness_points"] = args.points
        return _finish(run_experiment(config), args)
    if command == "bounds":
        return _finish(run_experiment(_config(args, "bounds", None)), args)
    if command == "nearbest":
        config = _config(args, "nearbest", ["qpstar", "gpstar"])
        config.p_values = args.p or []
        return _finish(run_experiment(config), args)
    if command == "converge":
        config = _config(args, "convergence", None)
        config.functions = args.f or ["sin"]
        config.levels = args.levels
        return _finish(run_experiment(config), args)
    if command == "section11":
        config = HarnessConfig(experiment="section11",
                               grid={"points_per_interval": args.points})
        if args.h:
            config.h_values = args.h
        report = run_experiment(config)
        lambdas = [row["measured"] for row in report.rows
                   if row["quantity"] == "lambda_s"]
        code = _finish(report, args)
        if len(lambdas) > 1:
            print(f"lambda_s ratio (last / first): "
                  f"{FLOAT_FORMAT % (lambdas[-1] / lambdas[0])}")
        return code
    if command == "oracle":
        config = HarnessConfig(experiment="oracle", instances=args.instances,
                               seed=args.seed)
        return _finish(run_experiment(config), args)
    if command == "lebesgue":
        profile = lebesgue_sample(_single_operator(args), args.points)
        profile.to_csv(args.out or sys.stdout)
        logger.info(f"max {profile.max_value!r} at x = {profile.argmax!r} "
                    f"({profile.label})")
        return EXIT_OK
    if command == "coeffs":
        frame = _single_operator(args).coefficient_frame()
        frame.to_csv(args.out or sys.stdout, index=False,
                     float_format=FLOAT_FORMAT)
        return EXIT_OK
    raise NotImplementedError(f"The command {command} is not implemented")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return EXIT_OK if error.code in (0, None) else EXIT_USAGE
    setup_logging(args.verbose)
    try:
        return dispatch(args)
    except (QIError, OSError, json.JSONDecodeError, NotImplementedError) as error:
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_USAGE
