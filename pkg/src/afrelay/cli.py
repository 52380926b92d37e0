"""Command-line front end.

    afrelay run CONFIG [--out CSV] [--seed N] [--trials N] [--workers N] [--analysis-only]
    afrelay gains CONFIG
    afrelay presets list

CONFIG is a JSON file or the name of a bundled preset. Exit status is 0 on
success, 1 on config or IO errors and 2 if any Monte-Carlo estimate falls
outside its 3-sigma band around the closed-form outage bounds.
"""

import argparse
import math
import sys
from importlib import resources
from pathlib import Path

from . import analysis
from .experiment import ConfigError, emit_csv, load_experiment, run
from .montecarlo import McConfig

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


def preset_dir():
    return resources.files("afrelay") / "presets"


def preset_names():
    return sorted(p.name[:-5] for p in preset_dir().iterdir() if p.name.endswith(".json"))


def resolve_config(name):
    path = Path(name)
    if path.exists() or name not in preset_names():
        return path
    return Path(str(preset_dir() / f"{name}.json"))


def _db(x):
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def print_gains(experiment, out=None):
    out = out or sys.stdout
    print(f"experiment: {experiment.name}", file=out)
    for spec in experiment.series:
        cfg = experiment.system(spec)
        g = analysis.config_gains(cfg)
        note = "" if spec.is_symmetric else "  (worst-hop approximation)"
        print(
            f"  {spec.label}: K={cfg.n_hops} G_d={g.diversity:.6g} "
            f"G_c={g.coding:.6g} ({_db(g.coding):.3f} dB at 0 dB desired SNR){note}",
            file=out,
        )
        if spec.is_symmetric:
            hop = cfg.hops[0]
            if hop.alpha == 1:
                s = analysis.gains_rayleigh_desired(hop.snr_desired, hop.inr, cfg.power,
                                                    cfg.n_hops, cfg.mod_const)
                print(f"    Rayleigh desired links: G_c = 2lP*snr/(K*inr) = {s.coding:.6g}", file=out)
            if hop.beta == 1:
                s = analysis.gains_rayleigh_interference(hop.alpha, hop.snr_desired, hop.inr,
                                                         cfg.power, cfg.n_hops, cfg.mod_const)
                print(f"    Rayleigh interferers: G_c = {s.coding:.6g}", file=out)


def cmd_run(args):
    exp = load_experiment(resolve_config(args.config))
    mc = None
    if not args.analysis_only and (exp.mc is not None or args.trials is not None):
        base = exp.mc or McConfig.with_default_chunk(args.trials)
        trials = args.trials if args.trials is not None else base.trials
        seed = args.seed if args.seed is not None else base.seed
        try:
            mc = McConfig(trials, seed, min(base.chunk, trials), args.workers)
        except ValueError as exc:
            raise ConfigError("mc", str(exc)) from None
    out = args.out or exp.output or f"{exp.name}.csv"
    report = run(exp, mc)
    emit_csv(report, out)
    print_gains(exp)
    n = len(exp.sweep_db)
    for i, s in enumerate(report.series):
        print(f"  rows {i * n + 1}-{(i + 1) * n}: {s.label}")
    print(f"wrote {out}")
    for label, snr in report.violations:
        print(f"bound violation: {label} at {snr} dB", file=sys.stderr)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_gains(args):
    print_gains(load_experiment(resolve_config(args.config)))
    return EXIT_OK


def cmd_presets(args):
    for name in preset_names():
        print(name)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="afrelay", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="sweep SNR, write outage CSV")
    r.add_argument("config", help="JSON config path or preset name")
    r.add_argument("--out", help="CSV path (default: output.path from the config)")
    r.add_argument("--seed", type=int, help="override the Monte Carlo seed")
    r.add_argument("--trials", type=int, help="override the Monte Carlo trial count")
    r.add_argument("--workers", type=int, default=1, help="worker threads (results do not depend on it)")
    r.add_argument("--analysis-only", action="store_true", help="skip Monte Carlo, closed forms only")
    r.set_defaults(func=cmd_run)

    g = sub.add_parser("gains", help="print diversity and coding gains")
    g.add_argument("config", help="JSON config path or preset name")
    g.set_defaults(func=cmd_gains)

    ps = sub.add_parser("presets", help="bundled experiment configs")
    ps.add_argument("action", choices=["list"])
    ps.set_defaults(func=cmd_presets)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
