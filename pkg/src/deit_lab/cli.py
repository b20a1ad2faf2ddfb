"""``deit-lab`` command line entry point."""

from __future__ import annotations

import argparse
import sys
import warnings

from .errors import ConfigError, NumericalError, ValidationError
from .jobs import JOBS, load_config, run_job

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_HELP = {
    "fig3a": "Duan witness S(gamma) for several purities c",
    "fig3b": "Duan witness S(gamma) for several detection efficiencies",
    "fig5a": "doubly excited spectrum vs g_b, one atom",
    "fig5b": "doubly excited spectrum vs g_b, N atoms with detuning delta",
    "fig7": "pumped five-level populations vs time",
    "constants": "sigma0, group velocity and cross-Kerr rate for the medium",
    "spectrum": "eigenvalues of one excitation manifold",
    "duan": "Duan witness at a single point",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deit-lab", description="Double-EIT cross-Kerr and photon blockade calculations.")
    sub = parser.add_subparsers(dest="job", required=True, metavar="subcommand")
    for job in JOBS:
        p = sub.add_parser(job, help=_HELP[job])
        p.add_argument("--config", help="INI file with [medium], [cavity], [cat], [run], [grid] sections")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                       help="override one config value; repeatable")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.job, args.config, args.overrides, args.out)
    except ConfigError as exc:
        print(f"deit-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"deit-lab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            series = run_job(cfg)
    except ConfigError as exc:
        print(f"deit-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"deit-lab: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"deit-lab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"deit-lab: {exc}", file=sys.stderr)
        return EXIT_IO
    if not cfg.out:
        sys.stdout.write(series.to_csv_text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
