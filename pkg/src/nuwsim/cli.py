"""Command-line front end.

    a2i <experiment> --config cfg.json [--seed N] [--out PREFIX] [--threads T]

Exit codes: 0 on success, 2 for configuration problems (bad JSON, unknown
fields, inconsistent parameters), 3 when the requested design is genuinely
infeasible (comb overlap, atom degeneracy, impossible plan). Errors print
as a single line on stderr so batch drivers can log them verbatim.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .harness import EXPERIMENTS, ConfigError, config_from_dict, run
from .pipeline import CombOverlapError
from .sensing import PlanInfeasibleError
from .wavelets import DegenerateAtomError

__all__ = ["main"]


def _fail(code: int, message: str) -> int:
    sys.stderr.write(" ".join(str(message).split()) + "\n")
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="a2i",
        description="Run a wavelet-sampling experiment described by a JSON config.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="experiment to run")
    parser.add_argument("--config", required=True, help="path to the JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override the config's master_seed")
    parser.add_argument("--out", default=None, help="override the config's output path prefix")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads for grid experiments (default: $A2I_THREADS, else 1)",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.threads is not None:
        workers = args.threads
    else:
        raw = os.environ.get("A2I_THREADS", "1")
        try:
            workers = int(raw)
        except ValueError:
            return _fail(2, f"config error: A2I_THREADS must be an integer, got '{raw}'")
    if workers < 1:
        return _fail(2, "config error: thread count must be at least 1")

    try:
        with open(args.config, encoding="utf-8") as fh:
            raw_config = json.load(fh)
    except OSError as exc:
        return _fail(2, f"config error: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(2, f"config error: {args.config} is not valid JSON ({exc})")

    try:
        config = config_from_dict(raw_config)
        if config.experiment != args.experiment:
            raise ConfigError(
                f"config names experiment '{config.experiment}' "
                f"but the command line asked for '{args.experiment}'"
            )
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.out is not None:
            overrides["out_prefix"] = args.out
        if overrides:
            config = replace(config, **overrides)
        bundle = run(config, workers=workers)
    except ConfigError as exc:
        return _fail(2, f"config error: {exc}")
    except (PlanInfeasibleError, CombOverlapError, DegenerateAtomError) as exc:
        return _fail(3, f"infeasible: {exc}")

    for path in bundle.csv_paths:
        print(path)
    print(bundle.meta_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
