"""Command line: exact tables, samples, the critical sequence and figure data as CSV.

Exit codes: 0 success, 1 numeric failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from typing import Iterable, Sequence

from clustergraph.bellcore import CapacityError, EdgeBias, build_bell_table
from clustergraph.critical import ConvergenceError, critical_bounds, solve_critical
from clustergraph.exactdist import (
    clique_count_pmf,
    clique_size_pmf,
    degree_pmf,
    edge_count_pmf,
    expected_clique_counts,
)
from clustergraph.oracle import MAX_ENUMERATION_N, bell_polynomial
from clustergraph.sampler import RngStream, sample_block_sizes, size_statistics


def fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


@contextlib.contextmanager
def _open_output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with _open_output(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


def _bias(args: argparse.Namespace) -> EdgeBias:
    if args.p is not None:
        return EdgeBias.from_p(args.p)
    if args.t is not None:
        return EdgeBias.from_t(args.t)
    return EdgeBias.from_w(args.w)


def _add_bias(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, help="edge probability in [0, 1)")
    group.add_argument("--t", type=float, help="log odds log(p/(1-p))")
    group.add_argument("--w", type=float, help="odds p/(1-p)")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_bell(args: argparse.Namespace) -> None:
    bias = _bias(args)
    table = build_bell_table(args.n, bias)
    with _open_output(args.output) as fh:
        fh.write(f"log_bell={fmt(table.log_b[args.n])}\n")
        if args.n == 0:
            fh.write("coefficients=1\n")
        elif args.n <= MAX_ENUMERATION_N:
            coeffs = bell_polynomial(args.n).coefficient_list()
            fh.write("coefficients=" + ",".join(str(c) for c in coeffs) + "\n")


def cmd_dist(args: argparse.Namespace) -> None:
    table = build_bell_table(args.n, _bias(args))
    pick = {
        "degree": degree_pmf,
        "size": clique_size_pmf,
        "cliques": clique_count_pmf,
        "edges": edge_count_pmf,
    }[args.stat]
    pmf = pick(table, args.n)
    _write_csv(args.output, ("value", "prob"), zip(pmf.support.tolist(), pmf.probs))


def cmd_sample(args: argparse.Namespace) -> None:
    table = build_bell_table(args.n, _bias(args))
    rows = sample_block_sizes(table, args.n, RngStream(args.seed), args.samples)
    stats = size_statistics(rows)
    _write_csv(
        args.output,
        ("sample_id", "c", "m", "max_block"),
        ((i, int(c), int(m), int(b)) for i, (c, m, b) in enumerate(stats)),
    )


def _critical_rows(ns: Iterable[int], q: float):
    for n in ns:
        res = solve_critical(n, q)
        lo, hi = critical_bounds(n)
        yield n, res.p_star, lo, hi, res.residual


def cmd_critical(args: argparse.Namespace) -> None:
    ns = range(args.n_min, args.n_max + 1, args.n_step)
    _write_csv(args.output, ("n", "p_star", "p_L", "p_U", "residual"), _critical_rows(ns, args.q))


def cmd_figure(args: argparse.Namespace) -> None:
    fig = args.fig
    if fig == 2:
        ns = args.n_values or list(range(100, 501, 10))
        _write_csv(args.output, ("n", "p_star", "p_L", "p_U", "residual"), _critical_rows(ns, 0.5))
    elif fig == 3:
        ns = args.n_values or [30, 300]
        rows = []
        for n in ns:
            pmf = clique_size_pmf(build_bell_table(n, EdgeBias.from_p(1 / n)), n)
            rows += [(n, int(s), pr) for s, pr in zip(pmf.support, pmf.probs)]
        _write_csv(args.output, ("n", "s", "prob"), rows)
    elif fig == 4:
        from clustergraph.community import SweepConfig, figure4_sweep

        if args.config:
            config = SweepConfig.from_file(args.config)
        else:
            config = SweepConfig(seed=args.seed)
        rows = figure4_sweep(config)
        _write_csv(
            args.output,
            ("p", "mean_detected_edges", "mean_correlation", "stderr_correlation"),
            ((r.p, r.mean_detected_edges, r.mean_correlation, r.stderr_correlation) for r in rows),
        )
    elif fig == 5:
        ns = args.n_values or [100]
        rows = []
        for n in ns:
            res = solve_critical(n, 0.5)
            counts = expected_clique_counts(build_bell_table(n, EdgeBias(res.t_star)), n)
            rows += [(n, res.p_star, s, c) for s, c in enumerate(counts, start=1)]
        _write_csv(args.output, ("n", "p", "s", "expected_cliques"), rows)
    elif fig == 6:
        ns = args.n_values or [200, 500, 1000, 2000]
        rows = []
        for n in ns:
            p = n ** (-2 / 9)
            pmf = clique_size_pmf(build_bell_table(n, EdgeBias.from_p(p)), n)
            rows += [(n, p, int(s), pr) for s, pr in zip(pmf.support, pmf.probs) if s <= 12]
        _write_csv(args.output, ("n", "p", "s", "prob"), rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clustergraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bell", help="log B_n(w) and, for n <= 13, its exact coefficients")
    p.add_argument("--n", type=int, required=True)
    _add_bias(p)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("dist", help="exact law of a statistic as CSV value,prob")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stat", choices=("degree", "size", "cliques", "edges"), default="degree")
    _add_bias(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("sample", help="exact samples as CSV sample_id,c,m,max_block")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_bias(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("critical", help="critical sequence p_n(q) with its bounds")
    p.add_argument("--n-min", type=int, default=100)
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--n-step", type=int, default=100)
    p.add_argument("--q", type=float, default=0.5)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("figure", help="data behind figures 2 to 6")
    p.add_argument("--fig", type=int, choices=(2, 3, 4, 5, 6), required=True)
    p.add_argument("--n-values", type=_int_list, default=None, help="comma separated n")
    p.add_argument("--config", help="JSON sweep config (figure 4)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_figure)

    for action in sub.choices.values():
        action.add_argument("--output", default="-", help="file path, or - for stdout")
    return parser


def _validate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    n = getattr(args, "n", None)
    if n is not None and n < (0 if args.command == "bell" else 1):
        parser.error(f"--n must be at least {0 if args.command == 'bell' else 1}")
    if args.command == "sample" and args.samples < 1:
        parser.error("--samples must be positive")
    if args.command == "critical":
        if args.n_min < 2 or args.n_max < args.n_min or args.n_step < 1:
            parser.error("need 2 <= n-min <= n-max and n-step >= 1")
        if not (0 < args.q < 1):
            parser.error("--q must lie in (0, 1)")
    if getattr(args, "n_values", None) and min(args.n_values) < 3:
        parser.error("--n-values entries must be at least 3")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        args.func(args)
    except ValueError as exc:  # bad bias values and the like
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, CapacityError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
