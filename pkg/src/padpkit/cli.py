"""Command-line surface: simulate, estimate, crlb, montecarlo, offset-study.

Commands are pure pipelines (read inputs, write outputs, no hidden state);
progress for long runs goes to stderr only.  Powers are dB at this
boundary, angles degrees, delays nanoseconds.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import io
from .antenna import AntennaPattern, load_pattern_csv
from .crlb import crlb_from_fim, fim
from .estimation import (
    Method,
    PeakConfig,
    estimate_haed,
    estimate_o1,
    estimate_o2,
    haed_plus_refine,
)
from .experiments import MonteCarloConfig, run_sweep, uniform_offset_study
from .synthesis import simulate_padp


def _parse_values(spec):
    """Parse a sweep grid: 'start:stop:num' (inclusive linspace) or 'v1,v2,...'."""
    spec = spec.strip()
    if not spec:
        raise ValueError("empty sweep grid")
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad grid {spec!r}, expected start:stop:num")
        start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        if num < 1:
            raise ValueError("grid needs at least one point")
        return tuple(np.linspace(start, stop, num))
    return tuple(float(v) for v in spec.split(","))


def _cmd_simulate(args):
    scenario = io.load_scenario(args.scenario)
    padp = simulate_padp(
        scenario.mpcs, scenario.array, scenario.pattern, scenario.sounding, seed=args.seed
    )
    manifest = io.build_manifest(
        seed=args.seed, inputs={"scenario_sha256": scenario.sha256}
    )
    io.write_padp(args.out, padp, manifest=manifest)
    if args.cfr_out:
        np.save(args.cfr_out, padp.cfr)
    print(f"wrote {args.out} ({padp.values.shape[0]}x{padp.values.shape[1]})", file=sys.stderr)
    return 0


def _load_pattern_for_estimate(args):
    if args.scenario:
        return io.load_scenario(args.scenario).pattern
    if args.pattern_csv:
        return load_pattern_csv(args.pattern_csv)
    if args.gmax_db is not None and args.hpbw_deg is not None:
        return AntennaPattern.gaussian(10.0 ** (args.gmax_db / 10.0), np.radians(args.hpbw_deg))
    raise ValueError("give --scenario, --pattern-csv, or both --gmax-db and --hpbw-deg")


def _cmd_estimate(args):
    padp, header = io.read_padp(args.padp)
    if args.cfr:
        cfr = np.load(args.cfr)
        padp = replace(padp, cfr=np.asarray(cfr, dtype=np.complex128))
    pattern = _load_pattern_for_estimate(args)
    methods = io.parse_methods(args.methods)
    pk = PeakConfig(noise_floor_db_offset=args.threshold_db)
    estimates = []
    for method in methods:
        if method is Method.O1:
            estimates += estimate_o1(padp, pattern, pk)
        elif method is Method.O2:
            estimates += estimate_o2(padp, pattern, pk)
        elif method is Method.HAED:
            estimates += estimate_haed(padp, pattern, pk)
        elif method is Method.HAED_PLUS:
            if padp.cfr is None:
                raise ValueError(
                    "haed+ needs complex spectra: pass --cfr (power-only PADP files "
                    "cannot support band-limited delay interpolation)"
                )
            estimates += haed_plus_refine(padp, estimate_haed(padp, pattern, pk), args.upsample)
    io.write_estimates_csv(args.out, estimates)
    manifest = io.build_manifest(
        inputs={"padp_manifest": header.get("manifest", {})},
        config={"methods": [m.value for m in methods], "threshold_db": args.threshold_db},
    )
    io.write_manifest_sidecar(args.out, manifest)
    print(f"wrote {args.out} ({len(estimates)} estimates)", file=sys.stderr)
    return 0


def _cmd_crlb(args):
    scenario = io.load_scenario(args.scenario)
    values = _parse_values(args.values)
    entries = []
    for value in values:
        mpcs = list(scenario.mpcs)
        if args.sweep == "separation":
            if len(mpcs) != 2:
                raise ValueError("separation sweep needs a two-arrival scenario")
            mpcs[1] = replace(mpcs[1], phi=mpcs[0].phi + np.radians(value))
        elif args.sweep == "true-angle":
            mpcs[0] = replace(mpcs[0], phi=np.radians(value))
        else:
            raise ValueError(f"unknown sweep {args.sweep!r}")
        report = crlb_from_fim(
            fim(mpcs, scenario.array, scenario.pattern, scenario.sounding)
        )
        entries.append((value, report))
    io.write_crlb_csv(args.out, args.sweep, entries)
    manifest = io.build_manifest(
        inputs={"scenario_sha256": scenario.sha256},
        config={"sweep": args.sweep, "values": list(values)},
    )
    io.write_manifest_sidecar(args.out, manifest)
    print(f"wrote {args.out} ({len(entries)} sweep points)", file=sys.stderr)
    return 0


_SWEEP_NAMES = {
    "output-snr": "output_snr_db",
    "separation": "angular_separation_deg",
    "true-angle": "true_angle_deg",
}


def _cmd_montecarlo(args):
    scenario = io.load_scenario(args.scenario)
    values = _parse_values(args.values)
    methods = io.parse_methods(args.methods)
    mc = MonteCarloConfig(
        trials=args.trials,
        sweep_variable=_SWEEP_NAMES[args.sweep],
        sweep_values=values,
        mpcs=scenario.mpcs,
        randomize_angle=args.randomize_angle,
        off_grid_delay=args.off_grid_delay,
        methods=tuple(methods),
        base_seed=args.seed,
        upsample=args.upsample,
        peak=PeakConfig(noise_floor_db_offset=args.threshold_db),
    )

    def progress(done, total):
        print(f"sweep point {done}/{total} done", file=sys.stderr)

    rows = run_sweep(mc, scenario.sounding, scenario.array, scenario.pattern, progress=progress)
    io.write_sweep_csv(args.out, rows)
    manifest = io.build_manifest(
        seed=args.seed,
        inputs={"scenario_sha256": scenario.sha256},
        config={
            "trials": args.trials,
            "sweep": args.sweep,
            "values": list(values),
            "methods": [m.value for m in methods],
            "randomize_angle": args.randomize_angle,
            "off_grid_delay": args.off_grid_delay,
            "upsample": args.upsample,
            "threshold_db": args.threshold_db,
        },
    )
    io.write_manifest_sidecar(args.out, manifest)
    print(f"wrote {args.out} ({len(rows)} rows)", file=sys.stderr)
    return 0


def _cmd_offset_study(args):
    scenario = io.load_scenario(args.scenario)
    study = uniform_offset_study(
        args.n,
        args.seed,
        scenario.sounding,
        scenario.array,
        scenario.pattern,
        methods=tuple(io.parse_methods(args.methods)),
    )
    io.write_offset_csv(args.out, study)
    manifest = io.build_manifest(
        seed=args.seed,
        inputs={"scenario_sha256": scenario.sha256},
        config={"n": args.n, "methods": args.methods},
    )
    io.write_manifest_sidecar(args.out, manifest)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="padpkit",
        description="Directional-scan channel simulation and multipath estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize a PADP from a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cfr-out", help="also save complex spectra as .npy (enables haed+)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="extract multipath components from a PADP file")
    p.add_argument("--padp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scenario", help="scenario supplying the antenna pattern")
    p.add_argument("--pattern-csv", help="tabulated pattern CSV (offset_deg,gain)")
    p.add_argument("--gmax-db", type=float, help="Gaussian pattern max power gain, dB")
    p.add_argument("--hpbw-deg", type=float, help="Gaussian pattern HPBW, degrees")
    p.add_argument("--methods", default="o1,o2,haed")
    p.add_argument("--cfr", help=".npy complex spectra for haed+")
    p.add_argument("--threshold-db", type=float, default=6.0)
    p.add_argument("--upsample", type=int, default=16)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("crlb", help="lower-bound sweep from a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--sweep", choices=("true-angle", "separation"), required=True)
    p.add_argument("--values", required=True, help="'start:stop:num' or 'v1,v2,...'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_crlb)

    p = sub.add_parser("montecarlo", help="Monte Carlo RMSEE sweep")
    p.add_argument("--scenario", required=True)
    p.add_argument("--sweep", choices=tuple(_SWEEP_NAMES), required=True)
    p.add_argument("--values", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--methods", default="o1,o2,haed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--randomize-angle", action="store_true")
    p.add_argument("--off-grid-delay", action="store_true")
    p.add_argument("--upsample", type=int, default=16)
    p.add_argument("--threshold-db", type=float, default=6.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_montecarlo)

    p = sub.add_parser("offset-study", help="noise-free uniform-angle error statistics")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="o1,o2,haed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_offset_study)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"padpkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
