"""Command line entry point for the experiment harness."""

import argparse
import sys

import numpy as np

from . import experiments
from .experiments import ConfigError

COMMANDS = {
    "solve": "multi-seed gap traces per block count",
    "design": "compare and optimize path distributions",
    "compare": "full-gradient and center-free baselines vs the pairwise method",
    "feasibility": "projection onto an intersection, with recovery certificates",
    "export-sdp": "write the probability-design program in sparse SDPA format",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sumzero",
        description="experiment harness for zero-sum coupled block descent",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="TOML configuration file")
        p.add_argument("--out-dir", default=".", help="directory for emitted files")
        p.add_argument("--seeds", type=int, default=None,
                       help="override: use seeds 0..S-1")
        p.add_argument("--tau", default=None,
                       help="override: comma-separated block counts")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def _parse_tau(text):
    if text is None:
        return None
    try:
        taus = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"--tau: expected comma-separated integers, got {text!r}")
    if not taus or any(t < 2 for t in taus):
        raise ConfigError(f"--tau: block counts must be integers >= 2, got {text!r}")
    return taus


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = experiments.load_config(args.config)
        taus = _parse_tau(args.tau)
        if args.command == "solve":
            written = experiments.run_solve(cfg, args.out_dir, quiet=args.quiet,
                                            tau_override=taus,
                                            seeds_override=args.seeds)
        elif args.command == "design":
            written = experiments.run_design(cfg, args.out_dir, quiet=args.quiet)
        elif args.command == "compare":
            written = experiments.run_compare(cfg, args.out_dir, quiet=args.quiet,
                                              seeds_override=args.seeds)
        elif args.command == "feasibility":
            written = experiments.run_feasibility(cfg, args.out_dir, quiet=args.quiet,
                                                  seeds_override=args.seeds)
        else:
            written = experiments.run_export_sdp(cfg, args.out_dir, quiet=args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if not args.quiet:
        for path in written:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
