"""Command-line entry point: ``forge <subcommand> --config FILE``.

Exit codes: 0 on success, 2 on configuration errors, 1 on runtime failures.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from ..errors import ConfigError, ForgeError
from .config import BASELINES, KINDS, load_config
from .runner import run_experiment

_COMMON_FIELDS = """\
common config fields:
  seed      master seed; replica r runs with mix64(seed, r)   (default 0)
  runs      number of independent replicas                    (default 1)
  workers   parallel replica processes                        (default 1)
  out_dir   output root; results land in <out_dir>/<kind>/    (default results)
"""

_KIND_FIELDS = {
    "dimension": """\
  scenario  {target_extent_m, margin_m, min_range_m} - emits bandwidth,
            pulse-length bound and subcarrier cap as dimensions.json
""",
    "synthesize": """\
  pulse     {n_subcarriers, n_symbols, subcarrier_spacing_hz, oversampling}
  baseline  noncoded | random | newman                        (default random)
  alphabet  M-ary PSK lattice for random phases (e.g. 4)      (default continuous)
  sparsity  fraction of active subcarriers                    (default 1.0)
            writes pulse.csv (t_s, re, im) and spectrum.csv (f_hz, magnitude)
""",
    "evaluate": """\
  pulse, baseline, alphabet, sparsity - as for synthesize; writes report.json
  {pmepr, pslr_db, islr_db, oversampling}
""",
    "baseline": """\
  pulse, baseline, alphabet, sparsity - Monte-Carlo over `runs` replicas
  (fresh mask/codes per run); aggregate PMEPR stats in summary.json
""",
    "optimize-pmepr": """\
  pulse, sparsity  - one random mask per replica when sparsity < 1
  bits_per_var     phase quantization bits (2 = QPSK, 18 = quasi-continuous)
  ga               {population_size, generations, elitism_fraction,
                    mutation_every, mutation_per_offspring}
            writes trace.csv, genome.json, summary.json per run
""",
    "optimize-moo": """\
  pulse, ga        NSGA-II on (PMEPR, PSLR); a population of 40 works well
  snapshot_every   archive snapshot period in generations     (default 100)
  n_random         size of the random comparison cloud        (default pop)
            writes front.csv (pmepr, pslr_db, islr_db, run_id, generation),
            genome.json sidecar, pareto.csv plot data
""",
    "optimize-constrained": """\
  pulse, ga        NSGA-II on (PSLR, ISLR) with a PMEPR cap
  pmepr_max        cap; null -> derived from the random-code PMEPR
                   distribution (threshold_samples draws, default 1000)
            writes front.csv per run and constrained.csv with per-run
            compliance flags
""",
    "illuminate": """\
  pulse, carrier_hz  case-study dimensions (e.g. N=100, df=20 MHz, f_c=9 GHz)
  target             {n_scatterers, center_range_m, extent_m, reflectivity,
                      seed, scatterers} - explicit scatterers [[refl, range], ...]
                      win over the random box; a fixed target.seed pins the draw
  weight_bounds      [v_l, v_u] raw gene bounds               (default [0.01, 10])
  weight_ga          continuous GA for spectral weights (e.g. 20 x 5000, 0.2)
  phase_ga           binary GA for PMEPR phases (e.g. 12 x 600)
  bits_per_var       phase encoding bits                      (default 18)
            writes illumination.json {gain_db, pmepr_initial, pmepr_final},
            spectra.csv (n, reflectivity_norm_abs, w_opt), trace.csv
""",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Design pulsed-OFDM radar waveforms by evolutionary optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(
            kind,
            help=_KIND_FIELDS[kind].splitlines()[0].strip(),
            description=f"Run the '{kind}' experiment.",
            epilog=_COMMON_FIELDS + "kind-specific fields:\n" + _KIND_FIELDS[kind],
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=None, help="override config out_dir")
        p.add_argument("--runs", type=int, default=None, help="override config runs")
        p.add_argument("--workers", type=int, default=None, help="override config workers")
        if kind in ("synthesize", "evaluate", "baseline"):
            p.add_argument(
                "--baseline",
                choices=BASELINES,
                default=None,
                help="override the baseline phasing kind",
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, kind_override=args.command)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.out is not None:
            overrides["out_dir"] = args.out
        if args.runs is not None:
            if args.runs < 1:
                raise ConfigError("--runs must be >= 1")
            overrides["runs"] = args.runs
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("--workers must be >= 1")
            overrides["workers"] = args.workers
        if getattr(args, "baseline", None) is not None:
            overrides["baseline"] = args.baseline
        if overrides:
            config = dataclasses.replace(config, **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        results = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1

    brief = {
        "kind": config.kind,
        "runs": len(results),
        "out": str(config.out_path()),
        "objectives": {
            str(r.run_id): r.final_objectives for r in results[: min(len(results), 5)]
        },
    }
    print(json.dumps(brief, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
