"""Command-line front end.

Exit status: 0 on success, 2 for usage errors, 3 for numerical failures.
"""

import argparse
import sys
from pathlib import Path

from .coupler import classify_regime, classify_regime_spectral
from .errors import InvalidInputError, NumericalFailure
from .phaseopt import detect_onset, optimize_over_z, tail_stats
from .sweep import FIGURES, SweepSpec, figure_table, parse_config, plot_script, render_csv, run_sweep

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_PHASE_KEYS = ("phi_l", "phi_a", "phi_b")


def _add_common(p, grid=True, phases=True, optimizer=False):
    p.add_argument("--config", help="key = value file; flags override its values")
    p.add_argument("--gl-mag", type=float, help="linear coupling magnitude |g_L|")
    p.add_argument("--ga-mag", type=float, help="down-conversion strength |g_A|")
    p.add_argument("--gb-mag", type=float, help="down-conversion strength |g_B|")
    if phases:
        p.add_argument("--phi-l", type=float)
        p.add_argument("--phi-a", type=float)
        p.add_argument("--phi-b", type=float)
        p.add_argument("--dphi", type=float, help="effective phase difference (exclusive with --phi-*)")
    if grid:
        p.add_argument("--z-min", type=float)
        p.add_argument("--z-max", type=float)
        p.add_argument("--z-points", type=int)
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--emit-plot", action="store_true", help="write a gnuplot script next to the CSV")
    if optimizer:
        p.add_argument("--coarse-n", type=int)
        p.add_argument("--refine-tol", type=float)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pdcoupler",
        description="Squeezing and entanglement in a pair of coupled down-converting waveguides.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="tabulate quantities along the coupler length")
    _add_common(p, optimizer=True)
    p.add_argument("--quantities", help="comma separated subset of lambda,en,regime,dphi_opt")

    p = sub.add_parser("figure", help="reproduce one of the standard parameter studies")
    p.add_argument("preset", choices=sorted(FIGURES))
    p.add_argument("--z-min", type=float)
    p.add_argument("--z-max", type=float)
    p.add_argument("--z-points", type=int)
    p.add_argument("--out")
    p.add_argument("--emit-plot", action="store_true")
    p.add_argument("--coarse-n", type=int)
    p.add_argument("--refine-tol", type=float)

    p = sub.add_parser("optimize-phase", help="optimal effective phase difference versus length")
    _add_common(p, phases=False, optimizer=True)

    p = sub.add_parser("classify", help="operating regime and drift-matrix eigenvalues")
    _add_common(p, grid=False)
    return parser


def _spec_from_args(args, parser):
    values = {}
    if getattr(args, "config", None):
        try:
            values.update(parse_config(Path(args.config).read_text()))
        except OSError as exc:
            parser.error(f"cannot read config: {exc}")
    flag_values = {}
    for key in ("gl_mag", "ga_mag", "gb_mag", "phi_l", "phi_a", "phi_b", "dphi", "z_min", "z_max",
                "z_points", "out", "coarse_n", "refine_tol", "quantities"):
        value = getattr(args, key, None)
        if value is not None:
            flag_values[key] = value
    if "dphi" in flag_values and any(k in flag_values for k in _PHASE_KEYS):
        parser.error("--dphi cannot be combined with --phi-l/--phi-a/--phi-b")
    # a flag on one side of the dphi/phases choice replaces the config's choice
    if "dphi" in flag_values:
        for k in _PHASE_KEYS:
            values.pop(k, None)
    elif any(k in flag_values for k in _PHASE_KEYS):
        values.pop("dphi", None)
    values.update(flag_values)
    if "dphi" in values and any(k in values for k in _PHASE_KEYS):
        parser.error("dphi cannot be combined with phi_l/phi_a/phi_b")
    return SweepSpec(**values)


def _emit(text, out, header=None, emit_plot=False, title=""):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.write_text(text)
    if emit_plot and header is not None:
        path.with_suffix(".gp").write_text(plot_script(path.name, header, title))


def _cmd_sweep(args, parser):
    spec = _spec_from_args(args, parser)
    if args.emit_plot and spec.out is None:
        parser.error("--emit-plot requires --out")
    text = run_sweep(spec)
    header = [h for h in text.split("\n", 1)[0].split(",") if h != "regime"]
    _emit(text, spec.out, header, args.emit_plot, "sweep")


def _cmd_figure(args, parser):
    if args.emit_plot and args.out is None:
        parser.error("--emit-plot requires --out")
    grid = {k: getattr(args, k) for k in ("z_min", "z_max", "z_points", "coarse_n", "refine_tol")
            if getattr(args, k) is not None}
    header, rows = figure_table(args.preset, **grid)
    _emit(render_csv(header, rows), args.out, header, args.emit_plot, args.preset)


def _cmd_optimize(args, parser):
    spec = _spec_from_args(args, parser)
    if args.emit_plot and spec.out is None:
        parser.error("--emit-plot requires --out")
    optima = optimize_over_z(spec.magnitudes, spec.grid(), spec.coarse_n, spec.refine_tol)
    header = ["z", "dphi_opt", "en_max", "evaluations"]
    rows = [[o.z, o.dphi_opt, o.en_max, str(o.evaluations)] for o in optima]
    _emit(render_csv(header, rows), spec.out, header[:3], args.emit_plot, "optimal phase")
    onset = detect_onset(optima, spec.refine_tol)
    mean, std = tail_stats(optima)
    onset_text = "none" if onset is None else f"{onset:.6g}"
    print(f"onset z0 = {onset_text}; tail dphi_opt mean = {mean:.6g}, std = {std:.6g}", file=sys.stderr)


def _cmd_classify(args, parser):
    params = _spec_from_args(args, parser).params()
    result = classify_regime(params)
    spectral, eigenvalues = classify_regime_spectral(params)
    print(f"regime: {result.regime}")
    print(f"margin: {result.margin:.12g}")
    print(f"spectral regime: {spectral}")
    for ev in eigenvalues:
        print(f"eigenvalue: {ev.real:+.12e} {ev.imag:+.12e}i")


_COMMANDS = {
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "optimize-phase": _cmd_optimize,
    "classify": _cmd_classify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args, parser)
    except InvalidInputError as exc:
        print(f"pdcoupler: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"pdcoupler: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
