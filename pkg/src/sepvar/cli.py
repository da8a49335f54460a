"""Command line entry point: ``sepvar {poset,components,counts,bounds,verify}``.

Exit codes: 0 when everything passes, 1 when a check fails, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from typing import Sequence, TextIO

from . import verify
from .combinatorics import (
    BRUTE_FORCE_LIMIT,
    ParameterError,
    brute_force_hertzsprung,
    brute_force_t_count,
    hertzsprung,
    t_count,
    t_count_closed_form,
)
from .matrixlab import DEFAULT_TOL
from .poset import (
    Regime,
    build_poset,
    component_report,
    hasse_dot,
    maximal_elements,
    poset_to_dict,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@contextmanager
def _open_out(path: str, out: TextIO):
    if path == "-":
        yield out
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _regime(n: int) -> Regime:
    if n < 2:
        raise UsageError(f"--n must be >= 2, got {n}")
    return Regime.for_n(n)


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return v


def cmd_poset(args, out: TextIO) -> int:
    poset = build_poset(args.p, _regime(args.n))
    if args.dot:
        with _open_out(args.dot, out) as fh:
            fh.write(hasse_dot(poset, args.n))
    if args.json:
        with _open_out(args.json, out) as fh:
            fh.write(json.dumps(poset_to_dict(poset, args.n), indent=2, ensure_ascii=False) + "\n")
    if not (args.dot or args.json):
        sizes = " ".join(str(s) for s in poset.rank_sizes())
        out.write(f"P_{{{args.p},{args.n}}} ({poset.regime.value})\n")
        out.write(f"elements={len(poset)} edges={len(poset.edges())} maximal={len(maximal_elements(poset))}\n")
        out.write(f"rank sizes: {sizes}\n")
    return 0


def _bound_lines(report) -> list[str]:
    semi = report.semi_invariant_lower_bound
    return [
        f"dim={report.total_dim}",
        f"invariant ring dim={report.invariant_ring_dim}",
        f"semi-invariant dim={report.semi_invariant_dim}",
        f"semi-invariant lower bound={'n/a' if semi is None else semi}",
        f"sdim={report.sdim}, separating lower bound={report.separating_lower_bound}",
    ]


def cmd_components(args, out: TextIO) -> int:
    _regime(args.n)
    report = component_report(args.p, args.n)
    if args.json:
        with _open_out(args.json, out) as fh:
            fh.write(report.to_json())
        if args.json == "-":
            return 0
    out.write(f"components of the separating variety, p={args.p}, n={args.n}\n")
    out.write(f"{'codim':>5} {'count':>5} {'dim':>6}\n")
    for codim, count in report.counts_by_codim.items():
        dim = (args.n + 1) * args.p**2 - 1 - codim
        out.write(f"{codim:>5} {count:>5} {dim:>6}\n")
    if args.list:
        for c in report.components:
            out.write(f"  {c.element.label():<24} dim={c.dim} codim={c.codim}\n")
    for line in _bound_lines(report):
        out.write(line + "\n")
    return 0


def cmd_counts(args, out: TextIO) -> int:
    if args.tk is not None:
        upto = args.tk
        values = [t_count(k) for k in range(1, upto + 1)]
        ok = all(t_count_closed_form(k) == v for k, v in enumerate(values, 1))
        ok &= all(brute_force_t_count(k) == values[k - 1] for k in range(1, min(upto, BRUTE_FORCE_LIMIT) + 1))
    else:
        upto = args.hertzsprung
        values = [hertzsprung(p) for p in range(1, upto + 1)]
        ok = all(brute_force_hertzsprung(p) == values[p - 1] for p in range(1, min(upto, BRUTE_FORCE_LIMIT) + 1))
    out.write(" ".join(str(v) for v in values) + (" OK" if ok else " MISMATCH") + "\n")
    return 0 if ok else 1


def cmd_bounds(args, out: TextIO) -> int:
    _regime(args.n)
    report = component_report(args.p, args.n)
    out.write(f"p={args.p} n={args.n} regime={report.regime.value}\n")
    for line in _bound_lines(report):
        out.write(line + "\n")
    return 0


def _report(records, args, out: TextIO) -> int:
    for r in records:
        res = "-" if r.max_residual is None else f"{verify.round_sig(r.max_residual):.12g}"
        status = "PASS" if r.passed else "FAIL"
        out.write(f"{status} {r.check:<34} trials={r.trials:<4} failures={r.failures:<3} max_residual={res}\n")
    if args.json:
        with _open_out(args.json, out) as fh:
            fh.write(verify.records_to_json(records))
    return 0 if all(r.passed for r in records) else 1


def cmd_verify_poset(args, out: TextIO) -> int:
    return _report(verify.poset_suite(args.max_p, seed=args.seed), args, out)


def cmd_verify_numeric(args, out: TextIO) -> int:
    if args.p < 2 or args.n < 2:
        raise UsageError("verify numeric needs --p >= 2 and --n >= 2")
    records = verify.numeric_suite(
        p=args.p,
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        max_word_len=args.max_word_len,
    )
    return _report(records, args, out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepvar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pp = sub.add_parser("poset", help="build the poset and export it")
    pp.add_argument("--p", type=_positive, required=True)
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--dot", metavar="FILE", help="write the Hasse diagram as DOT ('-' for stdout)")
    pp.add_argument("--json", metavar="FILE", help="write nodes and edges as JSON ('-' for stdout)")
    pp.set_defaults(func=cmd_poset)

    pc = sub.add_parser("components", help="irreducible components and bounds")
    pc.add_argument("--p", type=_positive, required=True)
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--json", metavar="FILE", nargs="?", const="-", help="JSON report ('-' for stdout)")
    pc.add_argument("--list", action="store_true", help="also list every component")
    pc.set_defaults(func=cmd_components)

    pn = sub.add_parser("counts", help="counting sequences checked against brute force")
    g = pn.add_mutually_exclusive_group(required=True)
    g.add_argument("--tk", type=_positive, metavar="K", help="T_1..T_K (no partial reversal)")
    g.add_argument("--hertzsprung", type=_positive, metavar="P", help="u_1..u_P")
    pn.set_defaults(func=cmd_counts)

    pb = sub.add_parser("bounds", help="dimension and separating-set bounds")
    pb.add_argument("--p", type=_positive, required=True)
    pb.add_argument("--n", type=int, required=True)
    pb.set_defaults(func=cmd_bounds)

    pv = sub.add_parser("verify", help="run property suites")
    vs = pv.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    vp = vs.add_parser("poset", help="poset properties and figure fixtures")
    vp.add_argument("--max-p", type=_positive, default=6)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--json", metavar="FILE")
    vp.set_defaults(func=cmd_verify_poset)
    vn = vs.add_parser("numeric", help="seeded matrix certificates")
    vn.add_argument("--p", type=int, default=4)
    vn.add_argument("--n", type=int, default=3)
    vn.add_argument("--trials", type=_positive, default=100)
    vn.add_argument("--seed", type=int, default=0)
    vn.add_argument("--tol", type=float, default=DEFAULT_TOL)
    vn.add_argument("--max-word-len", type=_positive, default=6)
    vn.add_argument("--json", metavar="FILE")
    vn.set_defaults(func=cmd_verify_numeric)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 2
    except ParameterError as exc:
        err.write(f"sepvar: error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
