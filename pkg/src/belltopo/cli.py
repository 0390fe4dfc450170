"""Command-line surface: Bell values of state files, coupling sweeps,
critical-point estimation, and the exact small-lattice oracles.

Exit codes are disjoint: 0 success, 1 usage error (including lattice-size
limits), 2 numeric failure, 3 invalid input state.  All numbers are printed
with 12 significant digits so identical invocations are byte-stable.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import kcc_model, oracles, sweep
from .chsh import horodecki_bfv, maximize_chsh
from .kcc_model import PairKind
from .oracles import IndexOutOfRange, LatticeTooLarge
from .qubit_state import StateValidationError, TwoQubitState, ensure_valid, random_state
from .quadrature import MaxDepthExceeded, NonFiniteSample
from .sweep import DerivativeMethod, NoInteriorPeak, SweepConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_BAD_STATE = 3


class StateFileError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems by default; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x):
    if x != x:
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


def _json_num(x):
    # Round-trip through the 12-digit text form so --json and CSV carry
    # identical numeric values.
    if not math.isfinite(x):
        return fmt(x)
    return float(fmt(x))


def load_state_file(path):
    """Parse a state file: {"matrix": 4x4 array of [re, im] pairs}, row-major
    in the |00>,|01>,|10>,|11> basis."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from exc
    matrix = payload.get("matrix") if isinstance(payload, dict) else None
    if matrix is None:
        raise StateFileError(f'{path}: expected an object with a "matrix" key')
    try:
        arr = np.asarray(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: matrix entries must be [re, im] pairs") from exc
    if arr.shape != (4, 4, 2):
        raise StateFileError(f"{path}: matrix must be 4x4x2, got shape {arr.shape}")
    state = TwoQubitState(arr[..., 0] + 1j * arr[..., 1])
    ensure_valid(state)
    return state


def write_series_csv(stream, series):
    stream.write("beta,bfv,dbfv\n")
    for beta, value, deriv in zip(series.betas, series.bfv, series.dbfv):
        stream.write(f"{fmt(beta)},{fmt(value)},{fmt(deriv)}\n")


def series_json(series):
    return {
        "betas": [_json_num(b) for b in series.betas],
        "bfv": [_json_num(v) for v in series.bfv],
        "dbfv": [_json_num(d) for d in series.dbfv],
        "flags": list(series.flags),
        "delta_beta": _json_num(series.config.delta_beta),
        "pair": series.config.kind.value,
        "method": series.config.method.value,
    }


def write_svg_line_chart(path, xs, ys, xlabel, ylabel):
    """Minimal single-series SVG line plot; non-finite points leave gaps."""
    width, height = 640, 420
    ml, mr, mt, mb = 70, 20, 20, 50
    pts = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y)]
    if pts:
        x_lo, x_hi = min(p[0] for p in pts), max(p[0] for p in pts)
        y_lo, y_hi = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr)

    def sy(y):
        return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb)

    polyline = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>',
        f'<text x="{(ml + width - mr) / 2:.0f}" y="{height - 12}" text-anchor="middle" font-size="14">{xlabel}</text>',
        f'<text x="16" y="{(mt + height - mb) / 2:.0f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 16 {(mt + height - mb) / 2:.0f})">{ylabel}</text>',
        f'<text x="{ml - 6}" y="{height - mb + 14}" text-anchor="end" font-size="11">{fmt(x_lo)}</text>',
        f'<text x="{width - mr}" y="{height - mb + 14}" text-anchor="end" font-size="11">{fmt(x_hi)}</text>',
        f'<text x="{ml - 6}" y="{height - mb}" text-anchor="end" font-size="11">{fmt(y_lo)}</text>',
        f'<text x="{ml - 6}" y="{mt + 8}" text-anchor="end" font-size="11">{fmt(y_hi)}</text>',
        f'<polyline points="{polyline}" fill="none" stroke="steelblue" stroke-width="1.5"/>',
        "</svg>",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _pair_kind(name):
    return PairKind.NEAREST if name == "nearest" else PairKind.NEXT_TO_NEAREST


def _method(name):
    return DerivativeMethod.FINITE_DIFFERENCE if name == "fd" else DerivativeMethod.ANALYTIC


def cmd_bfv(args, out):
    if args.path is None and args.random is None:
        raise StateFileError("provide a state file or --random N")
    if args.random is not None:
        if args.random < 1:
            print("belltopo: --random needs N >= 1", file=sys.stderr)
            return EXIT_USAGE
        worst = 0.0
        max_value = 0.0
        for k in range(args.random):
            state = random_state(args.seed + k)
            res = horodecki_bfv(state)
            max_value = max(max_value, res.value)
            if args.verify:
                opt = maximize_chsh(state)
                worst = max(worst, abs(opt.value - res.value))
        out.write(f"states = {args.random}\n")
        out.write(f"max bfv = {fmt(max_value)}\n")
        if args.verify:
            out.write(f"max |maximize - horodecki| = {fmt(worst)}\n")
        return EXIT_OK

    state = load_state_file(args.path)
    res = horodecki_bfv(state)
    if args.json:
        payload = {
            "bfv": _json_num(res.value),
            "upsilon1": _json_num(res.upsilon1),
            "upsilon2": _json_num(res.upsilon2),
        }
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(f"bfv = {fmt(res.value)}\n")
        out.write(f"upsilon1 = {fmt(res.upsilon1)}\n")
        out.write(f"upsilon2 = {fmt(res.upsilon2)}\n")
    if args.settings or args.verify:
        opt = maximize_chsh(state)
        if args.settings:
            for name, vec in zip(("a1", "a2", "b1", "b2"), opt.settings.vectors()):
                out.write(f"{name} = [{fmt(vec[0])}, {fmt(vec[1])}, {fmt(vec[2])}]\n")
        if args.verify:
            out.write(f"|maximize - horodecki| = {fmt(abs(opt.value - res.value))}\n")
    return EXIT_OK


def cmd_kcc(args, out):
    if args.kcc_command == "correlators":
        point = kcc_model.kcc_point(args.beta)
        params = kcc_model.dual_params(args.beta)
        values = {
            "beta": args.beta,
            "m": point.m,
            "c_nn": point.c_nn,
            "c_nnn": point.c_nnn,
            "chi": params.chi,
            "beta_star": params.beta_star,
            "gamma": params.gamma,
            "xi": params.xi,
        }
        if args.json:
            out.write(json.dumps({k: _json_num(v) for k, v in values.items()}) + "\n")
        else:
            for key, value in values.items():
                out.write(f"{key} = {fmt(value)}\n")
        return EXIT_OK

    config = SweepConfig(
        beta_min=args.beta_min,
        beta_max=args.beta_max,
        steps=args.steps,
        delta_beta=args.delta,
        kind=_pair_kind(args.pair),
        method=_method(args.method),
    )
    if args.kcc_command == "critical":
        est = sweep.estimate_critical(config)
        deviation = abs(est.beta_hat - kcc_model.critical_beta())
        if args.json:
            out.write(
                json.dumps(
                    {
                        "beta_hat": _json_num(est.beta_hat),
                        "deviation_from_exact": _json_num(deviation),
                        "peak_value": _json_num(est.peak_value),
                    }
                )
                + "\n"
            )
        else:
            out.write(f"beta_hat = {fmt(est.beta_hat)}\n")
            out.write(f"|beta_hat - ln(1+sqrt(2))/2| = {fmt(deviation)}\n")
            out.write(f"peak dbfv = {fmt(est.peak_value)}\n")
        return EXIT_OK

    series = sweep.bfv_curve(config)
    if args.csv:
        with open(args.csv, "w") as fh:
            write_series_csv(fh, series)
    else:
        write_series_csv(out, series)
    if args.svg:
        write_svg_line_chart(args.svg, series.betas, series.dbfv, "beta", "dbfv")
    if args.json:
        out.write(json.dumps(series_json(series)) + "\n")
    return EXIT_OK


def cmd_oracle(args, out):
    if args.oracle_command == "ising":
        torus = oracles.IsingTorus(side=args.side, beta=args.beta)
        if args.pair_displacement:
            dx, dy = args.pair_displacement
            value = oracles.ising_expectation(
                torus, [(0, 0), (dx, dy)], threads=args.threads
            )
            out.write(f"corr({dx},{dy}) = {fmt(value)}\n")
        else:
            for label, vertices in oracles.DISPLACEMENTS.items():
                value = oracles.ising_expectation(torus, vertices, threads=args.threads)
                out.write(f"corr{label} = {fmt(value)}\n")
        return EXIT_OK

    if args.oracle_command == "kcc":
        torus = oracles.KccTorus(side=args.side)
        state = oracles.kcc_ground_state(torus, args.beta)
        i, j = args.pair
        rho = oracles.reduce_pair(state, i, j)
        for row in rho.entries:
            out.write("  ".join(fmt(x.real) for x in row) + "\n")
        out.write(f"bfv = {fmt(horodecki_bfv(rho).value)}\n")
        return EXIT_OK

    report = oracles.compare_formulas(args.beta, args.sides, threads=args.threads)
    out.write("side,formula,formula_value,displacement,enumerated,deviation,best\n")
    for row in report.sides:
        for match in row.matches:
            for label, enum_value in row.enumerated.items():
                out.write(
                    f"{row.side},{match.formula},{fmt(match.value)},{label},"
                    f"{fmt(enum_value)},{fmt(match.deviations[label])},"
                    f"{int(label == match.best_displacement)}\n"
                )
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="belltopo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bfv = sub.add_parser("bfv", help="Bell function value of a two-qubit state")
    p_bfv.add_argument("path", nargs="?", help="state file (JSON)")
    p_bfv.add_argument("--random", type=int, metavar="N", help="evaluate N seeded random states")
    p_bfv.add_argument("--seed", type=int, default=0)
    p_bfv.add_argument("--settings", action="store_true", help="print optimal directions")
    p_bfv.add_argument("--verify", action="store_true", help="cross-check with the optimizer")
    p_bfv.add_argument("--json", action="store_true")

    p_kcc = sub.add_parser("kcc", help="coupling sweeps and the critical point")
    kcc_sub = p_kcc.add_subparsers(dest="kcc_command", required=True)
    for name in ("sweep", "critical"):
        p = kcc_sub.add_parser(name)
        p.add_argument("--beta-min", type=float, default=0.40)
        p.add_argument("--beta-max", type=float, default=0.50)
        p.add_argument("--steps", type=int, default=100 if name == "sweep" else 2000)
        p.add_argument("--delta", type=float, default=1e-3, help="finite-difference step")
        p.add_argument("--pair", choices=("nearest", "next"), default="nearest")
        p.add_argument("--method", choices=("fd", "analytic"), default="fd")
        p.add_argument("--json", action="store_true")
        if name == "sweep":
            p.add_argument("--csv", metavar="PATH")
            p.add_argument("--svg", metavar="PATH")
    p_corr = kcc_sub.add_parser("correlators")
    p_corr.add_argument("--beta", type=float, required=True)
    p_corr.add_argument("--json", action="store_true")

    p_oracle = sub.add_parser("oracle", help="exact small-lattice checks")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_command", required=True)
    p_ising = oracle_sub.add_parser("ising")
    p_ising.add_argument("--side", type=int, required=True)
    p_ising.add_argument("--beta", type=float, required=True)
    p_ising.add_argument("--pair-displacement", type=_int_pair, metavar="DX,DY")
    p_ising.add_argument("--threads", type=int, default=1)
    p_kccq = oracle_sub.add_parser("kcc")
    p_kccq.add_argument("--side", type=int, required=True)
    p_kccq.add_argument("--beta", type=float, required=True)
    p_kccq.add_argument("--pair", type=_int_pair, required=True, metavar="I,J")
    p_kccq.add_argument("--threads", type=int, default=1)
    p_cmp = oracle_sub.add_parser("compare")
    p_cmp.add_argument("--beta", type=float, required=True)
    p_cmp.add_argument("--sides", type=_int_list, required=True, metavar="L1,L2,...")
    p_cmp.add_argument("--threads", type=int, default=1)

    return parser


def _int_pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected I,J, got {text!r}")
    return int(parts[0]), int(parts[1])


def _int_list(text):
    return [int(p) for p in text.split(",")]


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK

    try:
        if args.command == "bfv":
            return cmd_bfv(args, out)
        if args.command == "kcc":
            return cmd_kcc(args, out)
        return cmd_oracle(args, out)
    except StateFileError as exc:
        print(f"belltopo: invalid state: {exc}", file=sys.stderr)
        return EXIT_BAD_STATE
    except StateValidationError as exc:
        if args.command == "bfv":
            print(f"belltopo: invalid state: {exc}", file=sys.stderr)
            return EXIT_BAD_STATE
        print(f"belltopo: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (MaxDepthExceeded, NonFiniteSample, NoInteriorPeak, kcc_model.DivergentAtCritical) as exc:
        print(f"belltopo: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (LatticeTooLarge, IndexOutOfRange, ValueError) as exc:
        print(f"belltopo: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
