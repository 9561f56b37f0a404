import argparse
import sys

import numpy as np
from loguru import logger
from pydantic import ValidationError

from analysis import (
    classification_frequencies_mc,
    estimate_direct_mc,
    estimate_fidelity_mc,
    excess_noise_mc,
    fidelity_direct,
    fidelity_encoded_ideal,
    fidelity_encoded_semianalytic,
    fidelity_erasure_direct,
    fidelity_qubit_repetition,
    misclassification_probs,
    sweep,
)
from channels import branch_table, erasure_channel, x_displacement_channel
from config.config_loader import load_config
from logging_config import setup_logging
from models import SWEEP_COLUMNS, CodeParams, Policy, SweepSpec
from phase_space import coherent
from repetition import SIGN_TABLE, feedforward_gain, residual_variance, thresholds
from utils.csv_writer import render_csv, write_csv
from utils.errors import (
    ConditioningError,
    DimensionMismatchError,
    DomainError,
    NumericalFailureError,
    UnphysicalStateError,
)
from utils.report_renderer import render_report

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

INVALID_INPUT_ERRORS = (ValidationError, DomainError, DimensionMismatchError, UnphysicalStateError)
NUMERICAL_ERRORS = (ConditioningError, NumericalFailureError, np.linalg.LinAlgError, FloatingPointError)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from e


def _add_code_flags(parser: argparse.ArgumentParser, with_r: bool = True):
    parser.add_argument("--gamma", type=float, help="per-channel error probability")
    if with_r:
        parser.add_argument("--r", type=float, help="ancilla squeezing parameter")
    parser.add_argument("--xbar2", type=float, help="channel x-displacement")


def _add_signal_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--signal-x", type=float, help="x-mean of the coherent input")
    parser.add_argument("--signal-p", type=float, help="p-mean of the coherent input")


def _add_policy_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--policy", choices=[p.value for p in Policy], help="syndrome classification policy")
    parser.add_argument("--assumed-xbar2", type=float, help="displacement the classifier assumes")


def build_parser() -> argparse.ArgumentParser:
    """Command-line interface; unset flags fall back to the `defaults` section of the configuration."""
    parser = argparse.ArgumentParser(
        prog="cv-repetition-code",
        description="Simulate the three-mode continuous-variable repetition code.",
    )
    parser.add_argument("--config", help="path to an alternative config.yaml")
    parser.add_argument("--log-level", help="loguru level for messages on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Monte Carlo estimate of the encoded fidelity")
    _add_code_flags(run)
    _add_signal_flags(run)
    _add_policy_flags(run)
    run.add_argument("--runs", type=int, help="number of Monte Carlo runs")
    run.add_argument("--seed", type=int, required=True, help="root seed")
    run.add_argument("--prune", action="store_true", help="drop negligible mixture components")

    sweep_cmd = commands.add_parser("sweep", help="fidelities over a one-parameter grid, as CSV")
    sweep_cmd.add_argument("--param", choices=["gamma", "r", "xbar2"], required=True, help="varied parameter")
    sweep_cmd.add_argument("--values", type=_float_list, required=True, help="comma-separated grid values")
    _add_code_flags(sweep_cmd)
    _add_signal_flags(sweep_cmd)
    _add_policy_flags(sweep_cmd)
    sweep_cmd.add_argument("--runs", type=int, help="Monte Carlo runs per grid point")
    sweep_cmd.add_argument("--seed", type=int, required=True, help="root seed")
    sweep_cmd.add_argument("--workers", type=int, help="worker processes")
    sweep_cmd.add_argument("--out", help="CSV file; standard output when omitted")

    branches = commands.add_parser("branches", help="error branches after decoding")
    _add_code_flags(branches, with_r=False)

    table = commands.add_parser("syndrome-table", help="syndrome sign table and feedforward gains")
    table.add_argument("--xbar2", type=float, help="channel x-displacement")

    misclass = commands.add_parser("misclass", help="classification probabilities per error pattern")
    _add_code_flags(misclass)
    _add_policy_flags(misclass)
    misclass.add_argument("--samples", type=int, help="estimate by Monte Carlo with this many samples per pattern")
    misclass.add_argument("--seed", type=int, help="root seed, required with --samples")

    direct = commands.add_parser("direct", help="Monte Carlo of unencoded transmission")
    _add_code_flags(direct, with_r=False)
    _add_signal_flags(direct)
    direct.add_argument("--channel", choices=["displacement", "erasure"], default="displacement")
    direct.add_argument("--runs", type=int, help="number of Monte Carlo runs")
    direct.add_argument("--seed", type=int, required=True, help="root seed")

    noise = commands.add_parser("excess-noise", help="recovered x-variance per corrected pattern")
    _add_code_flags(noise)
    _add_signal_flags(noise)
    _add_policy_flags(noise)
    noise.add_argument("--runs", type=int, help="rounds per error pattern")
    noise.add_argument("--seed", type=int, required=True, help="root seed")
    return parser


def merged_settings(args: argparse.Namespace, defaults: dict) -> dict:
    """Configuration defaults overridden by every flag given on the command line."""
    given = {k: v for k, v in vars(args).items() if v is not None}
    return {**defaults, **given}


def _code_params(settings: dict) -> CodeParams:
    return CodeParams(
        r=settings["r"],
        xbar2=settings["xbar2"],
        gamma=settings["gamma"],
        assumed_xbar2=settings.get("assumed_xbar2"),
    )


def _signal(settings: dict):
    return coherent(settings["signal_x"], settings["signal_p"])


def _run(settings: dict, config: dict) -> str:
    params = _code_params(settings)
    policy = Policy(settings["policy"])
    prune_epsilon = config["mixture"]["prune_epsilon"] if settings.get("prune") else None
    estimate = estimate_fidelity_mc(
        params,
        policy,
        n_runs=settings["runs"],
        seed=settings["seed"],
        signal=_signal(settings),
        prune_epsilon=prune_epsilon,
    )
    return render_report(
        config["template_dir"],
        "run.txt.j2",
        params=params,
        policy=policy.value,
        estimate=estimate,
        semianalytic=fidelity_encoded_semianalytic(params.gamma, params.r, params.xbar2),
        ideal=fidelity_encoded_ideal(params.gamma, params.xbar2),
        direct=fidelity_direct(params.gamma, params.xbar2),
        qubit=fidelity_qubit_repetition(params.gamma),
    )


def _sweep(settings: dict, config: dict) -> str:
    spec = SweepSpec(
        param=settings["param"],
        values=settings["values"],
        base=_code_params(settings),
        signal_x=settings["signal_x"],
        signal_p=settings["signal_p"],
        runs=settings["runs"],
        seed=settings["seed"],
        policy=settings["policy"],
        workers=settings["workers"],
    )
    rows = [tuple(getattr(row, c) for c in SWEEP_COLUMNS) for row in sweep(spec)]
    if settings.get("out"):
        write_csv(settings["out"], SWEEP_COLUMNS, rows)
        return ""
    return render_csv(SWEEP_COLUMNS, rows)


def _branches(settings: dict, config: dict) -> str:
    params = CodeParams(r=0.0, xbar2=settings["xbar2"], gamma=settings["gamma"])
    return render_report(
        config["template_dir"],
        "branches.txt.j2",
        gamma=params.gamma,
        xbar2=params.xbar2,
        branches=branch_table(params.gamma, params.xbar2),
    )


def _syndrome_table(settings: dict, config: dict) -> str:
    params = CodeParams(r=0.0, xbar2=settings["xbar2"], gamma=0.0)
    t2, t3 = thresholds(params)
    rows = []
    for (s2, s3), cls in SIGN_TABLE.items():
        axis, gain = feedforward_gain(cls)
        feedforward = "none" if axis is None else f"x1 += {gain:+.6f} * x{axis}"
        rows.append({"s2": s2.value, "s3": s3.value, "cls": cls.value, "feedforward": feedforward})
    return render_report(config["template_dir"], "syndrome_table.txt.j2", t2=t2, t3=t3, rows=rows)


def _misclass(settings: dict, config: dict) -> str:
    params = _code_params(settings)
    policy = Policy(settings["policy"])
    if settings.get("samples") is not None:
        if settings.get("seed") is None:
            raise DomainError("--seed is required with --samples")
        matrix = classification_frequencies_mc(params, policy, settings["samples"], settings["seed"])
    else:
        matrix = misclassification_probs(params, policy)
    names = ["".join(str(i + 1) for i in pattern) or "none" for pattern in matrix.patterns]
    return render_report(
        config["template_dir"], "misclass.txt.j2", params=params, policy=policy.value, matrix=matrix, names=names
    )


def _direct(settings: dict, config: dict) -> str:
    signal = _signal(settings)
    if settings["channel"] == "erasure":
        channel = erasure_channel(settings["gamma"])
        exact = fidelity_erasure_direct(settings["gamma"], signal)
    else:
        channel = x_displacement_channel(settings["gamma"], settings["xbar2"])
        exact = fidelity_direct(settings["gamma"], settings["xbar2"])
    estimate = estimate_direct_mc(signal, channel, settings["runs"], settings["seed"])
    return render_report(
        config["template_dir"], "direct.txt.j2", estimate=estimate, exact=exact, channel=settings["channel"]
    )


def _excess_noise(settings: dict, config: dict) -> str:
    params = _code_params(settings)
    estimates = excess_noise_mc(
        params, Policy(settings["policy"]), settings["runs"], settings["seed"], signal=_signal(settings)
    )
    rows = [
        {"cls": cls.value, "estimate": est, "expected": residual_variance(cls, params.r)}
        for cls, est in estimates.items()
    ]
    return render_report(
        config["template_dir"], "excess_noise.txt.j2", rows=rows, n_per_branch=settings["runs"], seed=settings["seed"]
    )


COMMANDS = {
    "run": _run,
    "sweep": _sweep,
    "branches": _branches,
    "syndrome-table": _syndrome_table,
    "misclass": _misclass,
    "direct": _direct,
    "excess-noise": _excess_noise,
}


def main(argv=None) -> int:
    """
    Entry point of the command-line tool.

    Parses the arguments, merges them over the configuration defaults, runs the chosen
    subcommand and writes its table or CSV to standard output. Log messages go to stderr.

    Args:
        argv (list[str], optional): Arguments without the program name; `sys.argv[1:]` when omitted.

    Returns:
        int: 0 on success, 2 for invalid parameters, 3 for a numerical failure and 1 for
            any other error. Malformed command lines make argparse exit with status 2.

    Example:
        >>> main(["branches", "--gamma", "0.2", "--xbar2", "-1"])
        2
    """
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else load_config()
        setup_logging(args.log_level or config.get("logging", {}).get("level", "INFO"))
        settings = merged_settings(args, config["defaults"])
        output = COMMANDS[args.command](settings, config)
        if output:
            sys.stdout.write(output)
        logger.info(f"Command '{args.command}' completed successfully.")
        return EXIT_OK
    except INVALID_INPUT_ERRORS as e:
        logger.error(f"Invalid parameters for '{args.command}': {e}")
        return EXIT_INVALID
    except NUMERICAL_ERRORS as e:
        logger.error(f"Numerical failure in '{args.command}': {e}")
        return EXIT_NUMERICAL
    except Exception as e:
        logger.error(f"Error occurred in main: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
