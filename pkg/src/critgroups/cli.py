"""Command-line front end.

Subcommands:
  group         sandpile / sand-dune groups of one DB or Kautz instance
  sweep         cross-verification sweeps over a parameter grid
  circulant     unit groups of circulant matrices vs the closed forms
  normal-count  normal elements of F_{p^n} over F_p
  snf           Smith Normal Form of a matrix read from a file

Exit codes: 0 success / all checks match, 1 verification mismatch,
2 usage or input error.  --json switches stdout to machine-readable
output; big integers are always serialized as decimal strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from sympy import isprime

from .abelian import AbelianGroup
from .circulant import (
    DEFAULT_BRUTE_CAP,
    ResourceLimitError,
    bruteforce_count_normal,
    bruteforce_unit_group,
    circulant_group,
    circulant_group_fixing_ones,
    count_normal_elements,
    quotient_by_shift,
)
from .closed_form import (
    epsilon_relation_matrix,
    order_of_ev,
    sand_dune_group,
    sandpile_group_db,
    sandpile_group_kautz,
)
from .exact_linalg import (
    cokernel_element_order,
    finite_part,
    read_matrix_file,
    smith_normal_form,
)
from .graphs import (
    Family,
    GraphSpec,
    build,
    sandpile_group_snf,
    spanning_tree_count,
)

BRUTE_CAP_ENV = "CRITGROUPS_BRUTE_CAP"

# caps inherited from the element-order lemma's verified range
ORDERS_CHECK_MAX_N = 32
ORDERS_CHECK_MAX_D = 5

SWEEP_CHECKS = ("db", "kautz", "dune", "orders", "circulant", "normal", "units")
DEFAULT_CHECKS = ("db", "kautz", "dune", "orders", "circulant", "normal")


def _default_cap() -> int:
    raw = os.environ.get(BRUTE_CAP_ENV)
    if raw is None:
        return DEFAULT_BRUTE_CAP
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{BRUTE_CAP_ENV}={raw!r} is not an integer")


def _fmt(value) -> str:
    if isinstance(value, AbelianGroup):
        return str(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, AbelianGroup):
        return value.to_json()
    if isinstance(value, int):
        return str(value)
    return value


@dataclass
class CheckResult:
    name: str
    expected: object
    actual: object
    passed: bool
    runtime_ms: float

    def to_json(self) -> dict:
        return {"name": self.name,
                "expected": _jsonable(self.expected),
                "actual": _jsonable(self.actual),
                "pass": self.passed,
                "runtime_ms": round(self.runtime_ms, 3)}


@dataclass
class VerificationReport:
    family: str
    n: int
    d: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"instance": {"family": self.family, "n": self.n, "d": self.d},
                "checks": [c.to_json() for c in self.checks],
                "pass": self.passed}


def _timed(report: VerificationReport, name: str, expected_fn, actual_fn):
    t0 = time.perf_counter()
    expected = expected_fn()
    actual = actual_fn()
    ms = (time.perf_counter() - t0) * 1000
    report.checks.append(CheckResult(name, expected, actual,
                                     expected == actual, ms))


def run_instance_checks(family: str, n: int, d: int, checks, cap: int
                        ) -> VerificationReport:
    """All selected cross-checks for one (family, n, d) grid point.

    Checks without a Kautz analogue (dune, orders, circulant, normal,
    units) run on the de Bruijn pass only, so a both-family sweep does
    not duplicate them.
    """
    report = VerificationReport(family, n, d)
    fam = Family(family)
    is_db = fam is Family.DE_BRUIJN

    if ("db" in checks and is_db) or ("kautz" in checks and not is_db):
        closed = sandpile_group_db if is_db else sandpile_group_kautz
        graph = build(GraphSpec(fam, n, d))
        _timed(report, "closed-vs-snf",
               lambda: closed(n, d),
               lambda: sandpile_group_snf(graph, 0))
        _timed(report, "trees-vs-order",
               lambda: spanning_tree_count(graph, 0),
               lambda: sandpile_group_snf(graph, 0).order())

    if is_db and "dune" in checks:
        _timed(report, "dune-vs-epsilon-snf",
               lambda: sand_dune_group(n, d),
               lambda: finite_part(epsilon_relation_matrix(n, d)))
        _timed(report, "dune-index-n",
               lambda: sand_dune_group(n, d).order(),
               lambda: n * sandpile_group_db(n, d).order())

    if (is_db and "orders" in checks
            and n <= ORDERS_CHECK_MAX_N and d <= ORDERS_CHECK_MAX_D):
        def all_ev_orders():
            return [order_of_ev(v, n, d) for v in range(1, n)]

        def all_cokernel_orders():
            mat = epsilon_relation_matrix(n, d)
            return [cokernel_element_order(
                mat, [1 if w == v else 0 for w in range(1, n)])
                for v in range(1, n)]

        _timed(report, "ev-orders", all_ev_orders, all_cokernel_orders)

    if is_db and isprime(d):
        if "circulant" in checks:
            _timed(report, "circulant-fixing-ones-vs-dune",
                   lambda: sand_dune_group(n, d),
                   lambda: circulant_group_fixing_ones(n, d))
        if "normal" in checks:
            _timed(report, "normal-count-identity",
                   lambda: count_normal_elements(d, n),
                   lambda: (d - 1) * n * sandpile_group_db(n, d).order())
        if "units" in checks and d**n <= cap:
            _timed(report, "unit-group-vs-bruteforce",
                   lambda: circulant_group(n, d).group,
                   lambda: bruteforce_unit_group(n, d, cap))
            _timed(report, "quotient-by-shift-vs-sandpile",
                   lambda: sandpile_group_db(n, d),
                   lambda: quotient_by_shift(n, d, cap))
    return report


def _sweep_worker(task):
    return run_instance_checks(*task)


def cmd_group(args) -> int:
    if args.n < 2:
        print("error: --n must be at least 2", file=sys.stderr)
        return 2
    if args.d < 1 or (args.method != "snf" and args.d < 2):
        print("error: --d must be at least 2 (1 is allowed with --method snf)",
              file=sys.stderr)
        return 2
    fam = Family(args.family)
    is_db = fam is Family.DE_BRUIJN
    out: dict = {"family": fam.value, "n": args.n, "d": args.d,
                 "method": args.method}

    closed = snf = None
    if args.method in ("closed", "both"):
        closed = (sandpile_group_db if is_db else sandpile_group_kautz)(
            args.n, args.d)
        out["sandpile_closed"] = _jsonable(closed)
        if is_db:
            out["sand_dune"] = _jsonable(sand_dune_group(args.n, args.d))
    if args.method in ("snf", "both"):
        graph = build(GraphSpec(fam, args.n, args.d))
        snf = sandpile_group_snf(graph, 0)
        out["sandpile_snf"] = _jsonable(snf)
        out["spanning_trees"] = str(spanning_tree_count(graph, 0))
    else:
        out["spanning_trees"] = str(closed.order())

    match = None
    if args.method == "both":
        match = closed == snf
        out["match"] = match

    if args.json:
        print(json.dumps(out))
    else:
        name = "DB" if is_db else "Kautz"
        print(f"{name}({args.n},{args.d})")
        if closed is not None:
            print(f"  sandpile group (closed form): {closed}")
        if snf is not None:
            print(f"  sandpile group (SNF):         {snf}")
        if is_db and args.method != "snf":
            print(f"  sand dune group:              "
                  f"{sand_dune_group(args.n, args.d)}")
        print(f"  spanning trees:               {out['spanning_trees']}")
        if match is not None:
            print(f"  verdict: {'MATCH' if match else 'MISMATCH'}")
    return 0 if match is None or match else 1


def cmd_sweep(args) -> int:
    if args.n_max < 2 or args.d_max < 2:
        print("error: --n-max and --d-max must be at least 2", file=sys.stderr)
        return 2
    checks = (tuple(SWEEP_CHECKS) if args.checks == "all"
              else tuple(c.strip() for c in args.checks.split(",") if c.strip()))
    unknown = set(checks) - set(SWEEP_CHECKS)
    if unknown:
        print(f"error: unknown checks {sorted(unknown)}; "
              f"available: {','.join(SWEEP_CHECKS)}", file=sys.stderr)
        return 2
    families = (["db", "kautz"] if args.family == "both" else [args.family])
    cap = args.brute_cap

    tasks = [(fam, n, d, checks, cap)
             for fam in families
             for n in range(2, args.n_max + 1)
             for d in range(2, args.d_max + 1)]
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            reports = list(pool.map(_sweep_worker, tasks, chunksize=8))
    else:
        reports = [_sweep_worker(t) for t in tasks]

    failures = [r for r in reports if not r.passed]
    total_checks = sum(len(r.checks) for r in reports)
    if args.json:
        print(json.dumps([r.to_json() for r in reports]))
    else:
        print(f"sweep: {len(reports)} instances, {total_checks} checks, "
              f"{len(failures)} failing instance(s)")
        for r in failures[:10]:
            for c in r.checks:
                if not c.passed:
                    print(f"  FAIL {r.family}({r.n},{r.d}) {c.name}: "
                          f"expected {_fmt(c.expected)}, got {_fmt(c.actual)}")
        if len(failures) > 10:
            print(f"  ... and {len(failures) - 10} more failing instances")
    return 1 if failures else 0


def cmd_circulant(args) -> int:
    if not isprime(args.p):
        print(f"error: --p {args.p} is not prime", file=sys.stderr)
        return 2
    if args.n < 1:
        print("error: --n must be at least 1", file=sys.stderr)
        return 2
    n, p = args.n, args.p
    structure = circulant_group(n, p)
    fixing = circulant_group_fixing_ones(n, p)
    dune = sand_dune_group(n, p)
    sandpile = sandpile_group_db(n, p)
    quotient = None
    if p**n <= args.brute_cap:
        quotient = quotient_by_shift(n, p, args.brute_cap)
    normal = structure.group.order()

    ok = fixing == dune and (quotient is None or quotient == sandpile)
    if args.json:
        print(json.dumps({
            "n": n, "p": p,
            "C": structure.group.to_json(),
            "C_prime": fixing.to_json(),
            "quotient_by_shift": None if quotient is None else quotient.to_json(),
            "normal_elements": str(normal),
        }))
    else:
        print(f"circulants over F_{p}, size {n}")
        print(f"  C({n},{p})  = {structure.group}   (order {normal})")
        for f in structure.factors:
            print(f"    coset {list(f.coset)}: degree {f.degree}, "
                  f"Z_{f.teichmuller_order} x ({f.one_unit_part})")
        print(f"  C'({n},{p}) = {fixing}")
        print(f"    sand dune group Sigma({n},{p}) = {dune}  "
              f"[{'match' if fixing == dune else 'MISMATCH'}]")
        if quotient is not None:
            print(f"  C'/<shift>  = {quotient}")
            print(f"    sandpile group S({n},{p}) = {sandpile}  "
                  f"[{'match' if quotient == sandpile else 'MISMATCH'}]")
        else:
            print(f"  C'/<shift>  skipped: {p}^{n} exceeds the brute-force cap "
                  f"{args.brute_cap}")
        print(f"  normal elements of F_{p}^{n}: {normal}")
    return 0 if ok else 1


def cmd_normal_count(args) -> int:
    if not isprime(args.p):
        print(f"error: --p {args.p} is not prime", file=sys.stderr)
        return 2
    if args.n < 1:
        print("error: --n must be at least 1", file=sys.stderr)
        return 2
    count = count_normal_elements(args.p, args.n)
    verified = None
    if args.brute:
        try:
            verified = bruteforce_count_normal(args.p, args.n, args.brute_cap)
        except ResourceLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    if args.json:
        out = {"p": args.p, "n": args.n, "normal_elements": str(count)}
        if verified is not None:
            out["bruteforce"] = str(verified)
            out["match"] = verified == count
        print(json.dumps(out))
    else:
        suffix = ""
        if verified is not None:
            suffix = (" (verified by brute force)" if verified == count
                      else f" (BRUTE FORCE DISAGREES: {verified})")
        print(f"normal elements of F_{args.p}^{args.n} over F_{args.p}: "
              f"{count}{suffix}")
    return 0 if verified in (None, count) else 1


def cmd_snf(args) -> int:
    try:
        matrix = read_matrix_file(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 2
    result = smith_normal_form(matrix)
    diag = result.S.diagonal()
    factors = [x for x in diag if x]
    group = finite_part(matrix)
    if args.json:
        print(json.dumps({
            "rows": matrix.rows, "cols": matrix.cols,
            "diagonal": [str(x) for x in diag],
            "invariant_factors": [str(x) for x in factors],
            "finite_part": group.to_json(),
        }))
    else:
        print(" ".join(str(x) for x in diag))
        print(f"invariant factors: {' '.join(map(str, factors)) or '(none)'}")
        print(f"finite part: {group}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critgroups",
        description="Critical groups of generalized de Bruijn and Kautz "
                    "digraphs, checked two ways: closed formulas vs exact "
                    "Smith Normal Form.")
    sub = parser.add_subparsers(dest="command", required=True)
    cap = _default_cap()

    g = sub.add_parser("group", help="compute the groups of one instance")
    g.add_argument("--family", choices=["db", "kautz"], required=True)
    g.add_argument("--n", type=int, required=True, help="number of vertices")
    g.add_argument("--d", type=int, required=True, help="out-degree")
    g.add_argument("--method", choices=["closed", "snf", "both"],
                   default="both")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_group)

    s = sub.add_parser("sweep", help="run cross-checks over a grid")
    s.add_argument("--family", choices=["db", "kautz", "both"], default="both")
    s.add_argument("--n-max", type=int, default=64)
    s.add_argument("--d-max", type=int, default=9)
    s.add_argument("--checks", default=",".join(DEFAULT_CHECKS),
                   help=f"comma list from {{{','.join(SWEEP_CHECKS)}}} or 'all' "
                        "(default: everything except the brute-force 'units')")
    s.add_argument("--parallel", type=int, default=1, metavar="WORKERS")
    s.add_argument("--brute-cap", type=int, default=cap,
                   help=f"ring size limit for 'units' (default {cap}, "
                        f"env {BRUTE_CAP_ENV})")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("circulant",
                       help="invertible circulants over F_p vs closed forms")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--brute-cap", type=int, default=cap)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_circulant)

    nc = sub.add_parser("normal-count",
                        help="count normal elements of F_{p^n} over F_p")
    nc.add_argument("--p", type=int, required=True)
    nc.add_argument("--n", type=int, required=True)
    nc.add_argument("--brute", action="store_true",
                    help="verify by enumerating the field")
    nc.add_argument("--brute-cap", type=int, default=cap)
    nc.add_argument("--json", action="store_true")
    nc.set_defaults(func=cmd_normal_count)

    m = sub.add_parser("snf", help="Smith Normal Form of a matrix file")
    m.add_argument("--input", required=True,
                   help="text file: 'rows cols' line, then the rows")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_snf)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
