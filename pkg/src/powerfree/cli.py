"""Command-line front end.

    powerfree constants --poly x^2+1 --k 2 --trunc 100000
    powerfree identity-check --poly x^3+2 --k 2 --x 1000
    powerfree exponents --dmax 30 --format csv

Every subcommand emits one table (text, csv or jsonl). Exit status is 0 on
success, 1 on a domain or usage error and 2 on a capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import counting, density, detmethod, exponents, lattice, roots
from .errors import CapacityError, DomainError, PowerfreeError
from .poly import Binomial, ProblemInstance


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Table:
    header: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)  # text mode only


def _fmt(v, digits: int) -> str:
    if isinstance(v, Fraction):
        return density.to_decimal(v, digits)
    if isinstance(v, float):
        return f"{v:.{digits}g}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def render(table: Table, fmt: str, digits: int) -> str:
    cells = [[_fmt(v, digits) for v in row] for row in table.rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.header)
        w.writerows(cells)
        return buf.getvalue()
    if fmt == "jsonl":
        # ints and booleans stay native; rationals go out as fixed-point strings
        recs = [
            [v if isinstance(v, (bool, int)) or v is None else c for v, c in zip(row, crow)]
            for row, crow in zip(table.rows, cells)
        ]
        return "".join(json.dumps(dict(zip(table.header, r))) + "\n" for r in recs)
    widths = [len(h) for h in table.header]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(table.header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines += table.notes
    return "\n".join(lines) + "\n"


# --- subcommands ------------------------------------------------------------


def _instance(args) -> ProblemInstance:
    return ProblemInstance(Binomial.parse(args.poly), args.k)


def cmd_constants(args) -> Table:
    f = Binomial.parse(args.poly)
    t = Table(["constant", "poly", "k", "P", "lo", "hi", "midpoint", "tail_bound", "vanishing_prime"])
    for name, fn in (("C", density.constant_C), ("Cprime", density.constant_Cprime)):
        iv = fn(f, args.k, args.trunc)
        t.rows.append([name, str(f), args.k, args.trunc, iv.lo, iv.hi, iv.midpoint, iv.tail_bound, iv.vanishing_prime])
    return t


def cmd_rho(args) -> Table:
    f = Binomial.parse(args.poly)
    moduli = args.m if args.m else range(1, args.mmax + 1)
    t = Table(["m", "rho", "rho_prime"])
    for m in moduli:
        r = roots.rho(f, m)
        t.rows.append([m, r.count, r.coprime_count])
    return t


def _timed_header(base: list[str], timing: bool) -> list[str]:
    return base + (["elapsed_s"] if timing else [])


def cmd_count(args) -> Table:
    f = Binomial.parse(args.poly)
    t = Table(_timed_header(["x", "count", "main_term", "residual", "density"], args.timing))
    for x in args.x:
        rep = counting.count_kfree_values(f, args.k, x, args.trunc, args.threads)
        row = [x, rep.count, rep.main_term, rep.residual, rep.density]
        t.rows.append(row + ([round(rep.elapsed, 3)] if args.timing else []))
    return t


def cmd_count_primes(args) -> Table:
    f = Binomial.parse(args.poly)
    t = Table(_timed_header(["x", "pi_x", "count", "main_term", "residual", "density"], args.timing))
    for x in args.x:
        rep = counting.count_kfree_prime_args(f, args.k, x, args.trunc, args.threads)
        row = [x, rep.prime_count, rep.count, rep.main_term, rep.residual, rep.density]
        t.rows.append(row + ([round(rep.elapsed, 3)] if args.timing else []))
    return t


def cmd_identity_check(args) -> Table:
    f = Binomial.parse(args.poly)
    t = Table(["x", "mobius_sum", "direct_count", "match"])
    for x in args.x:
        rep = counting.sieve_identity_check(f, args.k, x)
        t.rows.append([x, rep.exact_total, rep.direct_count, rep.matches])
        word = "EXACT MATCH" if rep.matches else "MISMATCH"
        t.notes.append(f"{word}: x={x} sum mu(b)N(b,x)={rep.exact_total} direct={rep.direct_count}")
    return t


def cmd_decompose(args) -> Table:
    f = Binomial.parse(args.poly)
    t = Table([
        "x", "xi", "eta", "range1_sum", "main_term", "range1_residual", "residual_ratio",
        "range2_sum", "range2_bound", "middle_ratio", "range3_sum", "range3_count",
        "exact_total", "direct_count",
    ])
    for x in args.x:
        r = counting.decomposition_report(f, args.k, x, args.xi, args.eta, args.trunc)
        t.rows.append([
            x, r.xi, r.eta, r.range1_sum, r.main_term, r.range1_residual, r.residual_ratio,
            r.range2_sum, r.range2_bound, r.middle_ratio, r.range3_sum, r.range3_count,
            r.exact_total, r.direct_count,
        ])
    return t


def _box(args, inst) -> detmethod.DyadicBox:
    if args.B is None:
        raise DomainError("--B is required")
    if args.A is None:
        return detmethod.DyadicBox.centred(inst, args.N, args.B)
    return detmethod.DyadicBox(args.N, args.A, args.B)


def cmd_detmethod(args) -> Table:
    inst = _instance(args)
    box = _box(args, inst)
    rep = detmethod.rank_deficiency_survey(inst, box, args.D, args.eta, args.K)
    led = detmethod.scaling_ledger(inst, box, args.D, eta=args.eta)
    t = Table(["m0", "R", "H", "rank", "deficient", "verified", "aux_terms"])
    for s in rep.slices:
        t.rows.append([s.m0, s.R, s.H, s.rank, s.deficient, s.verified, len(s.poly.terms()) if s.poly else 0])
    t.notes += [
        f"box N={box.N} A={box.A} B={box.B}; solutions={len(rep.solutions)}; occupied slices={len(rep.slices)}",
        f"beta={density.to_decimal(rep.beta, 6)} kappa={density.to_decimal(rep.kappa, 6)} K={rep.K}",
        f"rank_term={density.to_decimal(led.rank_term, 6)} delta_sign={led.delta_sign}",
        f"all deficient: {rep.all_deficient}; all C_I verified: {rep.all_verified}",
    ]
    return t


def cmd_lattice(args) -> Table:
    inst = _instance(args)
    box = _box(args, inst)
    K = args.K
    if K is None:
        beta = Fraction(math.log(box.B) / math.log(box.N)).limit_denominator(10**9)
        K = detmethod.slice_count_parameter(box.N, detmethod.choose_kappa(inst.d, inst.k, beta, args.eta))
    m0_values = None
    if args.occupied:
        sols = detmethod.enumerate_solutions(inst, box)
        m0_values = sorted(detmethod.partition_into_slices(sols, K, box.N, box.B))
    rep = lattice.census_by_L1(K, box.N, box.B, m0_values, args.sample, args.seed)
    t = Table(["L_bucket", "m0_count", "comparison_quantity", "ratio"])
    t.rows = [list(r) for r in rep.rows()]
    t.notes += [
        f"K={K} N={box.N} B={box.B}; m0 values={len(rep.m0_values)}",
        f"min L1^2 / (NB/16K) = {density.to_decimal(rep.min_lc_ratio, 6)}; LC holds: {rep.lc_ok}",
        f"BK/N = {density.to_decimal(rep.bk_over_n, 6)} (> 1: {rep.bk_over_n > 1});"
        f" x2=0 excluded: {rep.x2_exclusion_applies};"
        f" x2=0 shortest vectors seen: {len(rep.x2_zero_hits)}",
    ]
    return t


def cmd_exponents(args) -> Table:
    if args.table == "admissibility":
        t = Table(["d", "k", "admissible", "sup_rho", "sup_Q", "consistent"])
        for d in range(3, args.dmax + 1):
            for k in range(d // 2 + 1, d):
                a = exponents.admissible(d, k)
                t.rows.append([d, k, a.admissible, a.sup_rho, a.sup_Q, a.certificate_consistent])
        return t
    hist = exponents.history_table(args.dmax)
    names = list(exponents.RESULTS)
    t = Table(["d"] + names)
    t.rows = [[row["d"]] + [row[n] for n in names] for row in hist.rows]
    firsts = ", ".join(f"{n}={hist.first_d_minus_2[n]}" for n in names)
    t.notes.append(f"first d with k=d-2 admissible: {firsts}")
    return t


COMMANDS = {
    "constants": cmd_constants,
    "rho": cmd_rho,
    "count": cmd_count,
    "count-primes": cmd_count_primes,
    "identity-check": cmd_identity_check,
    "decompose": cmd_decompose,
    "detmethod": cmd_detmethod,
    "lattice": cmd_lattice,
    "exponents": cmd_exponents,
}


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "jsonl"], default="text")
    common.add_argument("--digits", type=int, default=12, help="decimals for rational output")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--config", help="JSON file with flag values (flags win)")
    common.add_argument("--timing", action="store_true", help="add wall-clock columns")

    poly = _Parser(add_help=False)
    poly.add_argument("--poly", default="x^2+1", help="x^d+c")
    poly.add_argument("--k", type=int, default=2)

    parser = _Parser(prog="powerfree", description="k-free values of x^d + c")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common, poly], help="C(f,k), C'(f,k) enclosures")
    p.add_argument("--trunc", type=int, default=10**5)

    p = sub.add_parser("rho", parents=[common, poly], help="rho_f(m), rho'_f(m)")
    p.add_argument("--m", type=int, nargs="+")
    p.add_argument("--mmax", type=int, default=30)

    for name, text in (("count", "N_{f,k}(x)"), ("count-primes", "N'_{f,k}(x)")):
        p = sub.add_parser(name, parents=[common, poly], help=text)
        p.add_argument("--x", type=int, nargs="+", default=[10**4])
        p.add_argument("--trunc", type=int, default=10**5)

    p = sub.add_parser("identity-check", parents=[common, poly], help="sum mu(b)N(b,x) vs direct count")
    p.add_argument("--x", type=int, nargs="+", default=[10**3])

    p = sub.add_parser("decompose", parents=[common, poly], help="three-range split of the Mobius sum")
    p.add_argument("--x", type=int, nargs="+", default=[10**4])
    p.add_argument("--xi", type=_fraction, default=None, help="default floor(sqrt(x))")
    p.add_argument("--eta", type=_fraction, default=Fraction(1, 10))
    p.add_argument("--trunc", type=int, default=10**4)

    box = _Parser(add_help=False)
    box.add_argument("--N", type=int, default=10**4)
    box.add_argument("--B", type=int, default=None)
    box.add_argument("--A", type=int, default=None, help="default floor(N^d / B^k)")
    box.add_argument("--eta", type=_fraction, default=Fraction(1, 20))
    box.add_argument("--K", type=int, default=None, help="default floor(N^kappa)")

    p = sub.add_parser("detmethod", parents=[common, poly, box], help="rank-deficiency survey")
    p.add_argument("--D", type=int, default=4)

    p = sub.add_parser("lattice", parents=[common, poly, box], help="census of slices by L1")
    p.add_argument("--occupied", action="store_true", help="only slices holding solutions")
    p.add_argument("--sample", type=int, default=None)

    p = sub.add_parser("exponents", parents=[common], help="admissibility and history tables")
    p.add_argument("--dmax", type=int, default=30)
    p.add_argument("--table", choices=["history", "admissibility"], default="history")
    return parser


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = set(cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key in ("x", "m"):
            if key in cfg and not isinstance(cfg[key], list):
                cfg[key] = [cfg[key]]
        for key in ("eta", "xi"):
            if key in cfg and cfg[key] is not None:
                cfg[key] = Fraction(str(cfg[key]))
        subparser.set_defaults(**cfg)
        args = parser.parse_args(argv)
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    random.seed(args.seed)
    return args


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = parse_args(list(sys.argv[1:] if argv is None else argv))
        table = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, PowerfreeError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    out.write(render(table, args.format, args.digits))
    if args.command == "identity-check" and not all(r[-1] for r in table.rows):
        return 1
    return 0


def main() -> None:
    sys.exit(run())
