"""Command-line front end.

    groupwalk analyze|convolve|spectrum|sample CONFIG [--out PATH] [--steps N]
              [--walk-length N] [--samples N] [--seed S]

Exit codes: 0 converges (or success), 3 diverges, 4 spectrum indeterminate,
1 input error, 2 internal or cap error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import load_config
from .errors import (
    ConfigError,
    InvalidDistribution,
    InvalidGroup,
    SamplerUnavailable,
    ToleranceCollision,
    UnknownPreset,
)
from .report import (
    EXIT_INPUT,
    EXIT_INTERNAL,
    analyze_report,
    convolve_table,
    dump_json,
    sample_report,
    spectrum_report,
)

log = logging.getLogger("groupwalk")

_INPUT_ERRORS = (ConfigError, InvalidGroup, InvalidDistribution, UnknownPreset,
                 SamplerUnavailable, ToleranceCollision)


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors, not the internal-error code argparse uses
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groupwalk", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=["analyze", "convolve", "spectrum", "sample"])
    parser.add_argument("config", help="JSON analysis config")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--steps", type=int, help="walk lengths 1..N for convolve")
    parser.add_argument("--walk-length", type=int, help="walk length for sample")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count for sample")
    parser.add_argument("--seed", type=int, help="seed for all randomness")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"steps": args.steps, "walk_length": args.walk_length,
                 "samples": args.samples, "seed": args.seed}
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "analyze":
            report, code = analyze_report(cfg)
            text = dump_json(report)
        elif args.command == "convolve":
            text, code = convolve_table(cfg, cfg.options.steps)
        elif args.command == "spectrum":
            report, code = spectrum_report(cfg)
            text = dump_json(report)
        else:
            report, code = sample_report(cfg)
            text = dump_json(report)
    except _INPUT_ERRORS as exc:
        print(f"groupwalk: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # caps, eigensolver failures, bugs
        print(f"groupwalk: {type(exc).__name__}: {exc}", file=sys.stderr)
        log.debug("internal error", exc_info=True)
        return EXIT_INTERNAL
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
