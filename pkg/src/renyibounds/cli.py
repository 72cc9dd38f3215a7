"""Command-line front end.

One subcommand per capability: entropies, class gaps, aggregation ranges,
guessing-moment bounds, coding cumulants, the dictionary-code rate bound,
figure data, and the worked example.  Errors surface as a JSON line on
stderr with a stable category and a category-specific exit code.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .aggregate import aggregation_entropy_range, huffman_aggregation
from .campbell import (
    build_prefix_code,
    campbell_bounds,
    campbell_lengths,
    clustering_cumulant_bounds,
    expected_length,
    scaled_cumulant,
    tunstall_rate_bound,
)
from .errors import DomainError, RenyiBoundsError
from .extremal import max_entropy_gap, max_entropy_gap_limit
from .figures import FigureRequest, emit_figure, run_example1
from .guess import clustering_gain_bounds
from .pmf import Pmf, parse_pmf
from .renyi import as_order, renyi_entropy

_EXIT_CODES = {
    "domain": 2,
    "instance-too-large": 3,
    "degenerate-bound": 4,
}
_LARGE_N_WARNING = 10**5


def _fmt(x: float) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _parse_sweep(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"sweep must be lo:hi:steps, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError as exc:
        raise DomainError(f"bad sweep {text!r}: {exc}") from None
    if steps < 2:
        raise DomainError("sweep needs at least 2 steps")
    if not hi > lo:
        raise DomainError("sweep needs hi > lo")
    return [lo + j * (hi - lo) / (steps - 1) for j in range(steps)]


def _write_csv(path, header, rows):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    finally:
        if path:
            out.close()


def _cmd_entropy(args) -> int:
    p = parse_pmf(args.pmf)
    if args.sweep:
        rows = [
            (a, renyi_entropy(p, a, base=args.base))
            for a in _parse_sweep(args.sweep)
        ]
        if args.json:
            print(json.dumps([{"alpha": a, "H_alpha": h} for a, h in rows]))
        else:
            _write_csv(None, ("alpha", "H_alpha"), rows)
        return 0
    order = as_order(args.alpha)
    h = renyi_entropy(p, order, base=args.base)
    if args.json:
        print(json.dumps({"alpha": str(order), "base": args.base, "entropy": h}))
    else:
        print(_fmt(h))
    return 0


def _cgap_cell(n, rho, alpha, base):
    if n is None:
        gap = max_entropy_gap_limit(rho, alpha, base=base)
        return gap, ""
    profile = max_entropy_gap(n, rho, alpha, base=base)
    return profile.gap, profile.beta_star


def _cmd_cgap(args) -> int:
    if args.n.strip().lower() == "inf":
        n = None
    else:
        n = int(args.n)
        if n > _LARGE_N_WARNING:
            print(
                f"warning: n={n} is large; the asymptotic gap (--n inf) "
                "is usually indistinguishable and immediate",
                file=sys.stderr,
            )
    if args.sweep_alpha:
        alphas = _parse_sweep(args.sweep_alpha)
    elif args.alpha is not None:
        alphas = [args.alpha]
    else:
        raise DomainError("provide --alpha or --sweep-alpha")
    if args.sweep_rho:
        rhos = _parse_sweep(args.sweep_rho)
    elif args.rho is not None:
        rhos = [args.rho]
    else:
        raise DomainError("provide --rho or --sweep-rho")
    rows = []
    for alpha in alphas:
        order = as_order(alpha)
        for rho in rhos:
            gap, beta = _cgap_cell(n, rho, order, args.base)
            rows.append((str(order), rho, "inf" if n is None else n, gap, beta))
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "alpha": a,
                        "rho": r,
                        "n": nn,
                        "gap": g,
                        "beta_star": None if b == "" else b,
                    }
                    for a, r, nn, g, b in rows
                ]
            )
        )
    else:
        _write_csv(
            args.csv, ("alpha", "rho", "n", "gap", "beta_star"), rows
        )
    return 0


def _cmd_aggregate(args) -> int:
    p = parse_pmf(args.pmf)
    if args.alpha_sweep:
        alphas = _parse_sweep(args.alpha_sweep)
    else:
        alphas = [args.alpha]
    agg, _ = huffman_aggregation(p, args.m)
    induced = agg.induced(p)
    rows = []
    for alpha in alphas:
        order = as_order(alpha)
        rng = aggregation_entropy_range(p, args.m, order, base=args.base)
        rows.append(
            (
                str(order),
                rng.lower,
                rng.upper,
                rng.min_value,
                renyi_entropy(induced, order, base=args.base),
            )
        )
    if args.emit_map:
        with open(args.emit_map, "w") as fh:
            json.dump({"f": list(agg.mapping)}, fh)
            fh.write("\n")
    if args.json:
        print(
            json.dumps(
                {
                    "f": list(agg.mapping),
                    "rows": [
                        {
                            "alpha": a,
                            "lower": lo,
                            "upper": up,
                            "min_value": mn,
                            "huffman": h,
                        }
                        for a, lo, up, mn, h in rows
                    ],
                }
            )
        )
    else:
        _write_csv(
            None, ("alpha", "lower", "upper", "min_value", "huffman"), rows
        )
    return 0


def _cmd_guess_bounds(args) -> int:
    p = parse_pmf(args.pmf)
    rows = []
    for rho_g in _parse_sweep(args.rho_sweep):
        rep = clustering_gain_bounds(p, args.m, rho_g, args.k, base=args.base)
        rows.append((rho_g, rep.lower, rep.upper))
    if args.json:
        print(
            json.dumps(
                [
                    {"rho_g": r, "lower_bits": lo, "upper_bits": up}
                    for r, lo, up in rows
                ]
            )
        )
    else:
        _write_csv(args.csv, ("rho_g", "lower_bits", "upper_bits"), rows)
    return 0


def _cmd_campbell(args) -> int:
    p = parse_pmf(args.pmf)
    spec = campbell_lengths(p, args.rho, args.k, args.D)
    lam = scaled_cumulant(spec, p)
    converse, achievability = campbell_bounds(p, args.rho, args.D, args.k)
    result = {
        "rho_c": args.rho,
        "k": args.k,
        "D": args.D,
        "lambda": lam,
        "lambda_over_rho": lam / args.rho,
        "converse": converse,
        "achievability": achievability,
        "mean_length_per_symbol": expected_length(spec, p) / args.k,
    }
    if args.m is not None:
        clustered = huffman_aggregation(p, args.m)[0].induced(p)
        spec_y = campbell_lengths(clustered, args.rho, args.k, args.D)
        lam_y = scaled_cumulant(spec_y, clustered)
        lower, upper = clustering_cumulant_bounds(
            p, args.m, args.rho, args.D, args.k
        )
        result.update(
            {
                "m": args.m,
                "lambda_clustered": lam_y,
                "difference": lam - lam_y,
                "difference_lower": lower,
                "difference_upper": upper,
            }
        )
    if args.emit_code:
        table = build_prefix_code(spec, p)
        with open(args.emit_code, "w") as fh:
            json.dump(
                [
                    {"symbols": list(symbols), "codeword": word}
                    for symbols, word in table
                ],
                fh,
            )
            fh.write("\n")
    if args.json:
        print(json.dumps(result))
    elif args.csv:
        _write_csv(args.csv, tuple(result), [tuple(result.values())])
    else:
        for key, value in result.items():
            print(f"{key}: {_fmt(value) if isinstance(value, float) else value}")
    return 0


def _cmd_tunstall(args) -> int:
    p = parse_pmf(args.pmf)
    bound = tunstall_rate_bound(p, args.codewords)
    if args.json:
        print(
            json.dumps(
                {"bound": bound.bound, "loose_bound": bound.loose_bound}
            )
        )
    else:
        print(f"bound: {_fmt(bound.bound)}")
        loose = "inf" if math.isinf(bound.loose_bound) else _fmt(bound.loose_bound)
        print(f"loose_bound: {loose}")
    return 0


def _cmd_figure(args) -> int:
    req = FigureRequest(args.id, args.out, args.resolution)
    path = emit_figure(req, base=args.base, threads=args.threads)
    print(f"wrote {path}")
    return 0


def _cmd_example1(args) -> int:
    report = run_example1(base=args.base, verbose=not args.json)
    if args.json:
        print(json.dumps(report))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyibounds",
        description=(
            "Majorization-tight bounds on Renyi entropies of clustered "
            "sources, with guessing and coding applications"
        ),
    )
    parser.add_argument(
        "--base", type=float, default=2.0, help="logarithm base (default 2)"
    )
    parser.add_argument(
        "--json", action="store_true", help="machine-readable stdout"
    )
    parser.add_argument(
        "--threads", type=int, default=1, help="worker threads for figure grids"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("entropy", help="Renyi entropy of a pmf")
    sp.add_argument("--pmf", required=True)
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--sweep", help="alpha sweep lo:hi:steps")
    sp.set_defaults(handler=_cmd_entropy)

    sp = sub.add_parser("cgap", help="maximal entropy gap of a ratio class")
    sp.add_argument("--n", required=True, help="class size or 'inf'")
    sp.add_argument("--rho", type=float)
    sp.add_argument("--alpha")
    sp.add_argument("--sweep-rho", dest="sweep_rho")
    sp.add_argument("--sweep-alpha", dest="sweep_alpha")
    sp.add_argument("--csv", help="output file (default stdout)")
    sp.set_defaults(handler=_cmd_cgap)

    sp = sub.add_parser("aggregate", help="entropy range over aggregations")
    sp.add_argument("--pmf", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--alpha-sweep", dest="alpha_sweep")
    sp.add_argument("--emit-map", dest="emit_map")
    sp.set_defaults(handler=_cmd_aggregate)

    sp = sub.add_parser(
        "guess-bounds", help="clustering bounds on guessing moments"
    )
    sp.add_argument("--pmf", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--rho-sweep", dest="rho_sweep", required=True)
    sp.add_argument("--csv", help="output file (default stdout)")
    sp.set_defaults(handler=_cmd_guess_bounds)

    sp = sub.add_parser("campbell", help="cumulant coding bounds")
    sp.add_argument("--pmf", required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--D", type=int, default=2)
    sp.add_argument("--m", type=int)
    sp.add_argument("--emit-code", dest="emit_code")
    sp.add_argument("--csv")
    sp.set_defaults(handler=_cmd_campbell)

    sp = sub.add_parser(
        "tunstall-bound", help="dictionary-code rate bound"
    )
    sp.add_argument("--pmf", required=True)
    sp.add_argument("--codewords", type=int, required=True)
    sp.set_defaults(handler=_cmd_tunstall)

    sp = sub.add_parser("figure", help="emit figure data as CSV")
    sp.add_argument("--id", required=True, choices=["1", "2", "3", "4L", "4R"])
    sp.add_argument("--out", required=True)
    sp.add_argument("--resolution", type=int, default=100)
    sp.set_defaults(handler=_cmd_figure)

    sp = sub.add_parser("example1", help="worked guessing example")
    sp.set_defaults(handler=_cmd_example1)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except RenyiBoundsError as exc:
        print(
            json.dumps({"error": exc.category, "message": str(exc)}),
            file=sys.stderr,
        )
        return _EXIT_CODES.get(exc.category, 1)


if __name__ == "__main__":
    sys.exit(main())
