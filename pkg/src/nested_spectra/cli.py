"""Command-line entry point.

    nested-spectra <experiment> [--config FILE] [--preset NAME] [--trials N]
                   [--seed S] [--out DIR] [--bins B] [--eta E] [--emit-plots]

Exit codes: 0 success, 2 bad configuration, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .experiments import EXPERIMENTS, PRESETS, ConfigError, load_config

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nested-spectra",
        description="Spectral experiments for the spiked nested matrix-tensor "
                    "model: empirical spectra vs asymptotic laws, spike and "
                    "alignment checks, and the multi-view clustering benchmark.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    descriptions = {
        "esd2": "mode-2 centered-scaled spectrum vs the cubic law",
        "esd3": "mode-3 centered-scaled spectrum vs the semicircle law",
        "alignment-map": "alignment surface and phase curve over (rho_T, beta_M)",
        "benchmark": "multi-view clustering accuracy: theory vs simulation",
        "phase": "phase-transition curve rho_T*(beta_M)",
    }
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=descriptions[name])
        p.add_argument("--config", metavar="PATH",
                       help="INI config file with a [%s] section" % name)
        p.add_argument("--preset", choices=sorted(PRESETS),
                       help="named parameter set")
        p.add_argument("--trials", type=int, metavar="N",
                       help="Monte Carlo trials per parameter point")
        p.add_argument("--seed", type=int, metavar="S", dest="master_seed",
                       help="master seed (default 42)")
        p.add_argument("--out", metavar="DIR", dest="out_dir",
                       help="output directory (default 'results')")
        p.add_argument("--bins", type=int, metavar="B",
                       help="histogram bin count (default 60)")
        p.add_argument("--eta", type=float, metavar="E",
                       help="spectral-density smoothing parameter (default 1e-6)")
        p.add_argument("--emit-plots", action="store_true", default=None,
                       dest="emit_plots", help="also render PNG plots")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.experiment, config_path=args.config,
                          preset=args.preset, trials=args.trials,
                          master_seed=args.master_seed, out_dir=args.out_dir,
                          bins=args.bins, eta=args.eta,
                          emit_plots=args.emit_plots)
    except ConfigError as exc:
        print(f"nested-spectra: config error: {exc}", file=sys.stderr)
        return 2
    try:
        paths = EXPERIMENTS[args.experiment](cfg)
    except OSError as exc:
        print(f"nested-spectra: I/O error: {exc}", file=sys.stderr)
        return 4
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"nested-spectra: numerical failure: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
