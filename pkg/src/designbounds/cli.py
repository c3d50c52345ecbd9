"""Command-line front end: bounds, quadratures, test-function tables, code
energies, and parameter sweeps with JSON/CSV output.

Exit codes: 0 ok, 1 usage, 2 range error, 3 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor

from . import bounds, codes, innerprod, jsonio, levenshtein
from .errors import InfeasibleRange, InternalConsistencyError, RangeError
from .potentials import parse_potential

EXIT_OK, EXIT_USAGE, EXIT_RANGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _potential_or_usage(spec: str):
    try:
        return parse_potential(spec)
    except (RangeError, KeyError, ValueError) as e:
        print(f"invalid potential spec {spec!r}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _lower_reports(n, N, tau, h, l_override=None):
    out = []
    out.append(bounds.ulb(n, N, tau, h))
    if tau == 2:
        try:
            out.append(bounds.lower_2design(n, N, h))
        except RangeError:
            pass
    if tau % 2 == 0 and tau >= 2:
        try:
            out.append(bounds.improved_even_lower(n, N, tau // 2, h, ell=l_override))
        except (RangeError, InfeasibleRange):
            pass
    return out


def _upper_reports(n, N, tau, h, u_override=None):
    out = []
    if tau == 2:
        try:
            out.append(bounds.upper_2design(n, N, h))
        except RangeError:
            pass
    if tau in (3, 4):
        try:
            out.append(bounds.upper_cubic(n, N, tau, h, u_override=u_override))
        except RangeError:
            pass
    if tau % 2 == 1 and u_override is not None:
        try:
            out.append(bounds.strip_odd(n, N, tau, h, u_override))
        except RangeError:
            pass
    return out


def _side_json(reports, pick):
    accepted = [r for r in reports if r.accepted]
    best = pick(accepted, key=lambda r: r.value) if accepted else None
    return {
        "best_value": best.value if best else None,
        "best_method": best.method if best else None,
        "methods": [r.to_json() for r in reports],
    }


def cmd_bound(args) -> int:
    h = _potential_or_usage(args.potential)
    result = {}
    lowers, uppers = [], []
    if args.side in ("lower", "strip"):
        lowers = _lower_reports(args.n, args.N, args.tau, h, args.l)
        result["lower"] = _side_json(lowers, max)
    if args.side in ("upper", "strip"):
        uppers = _upper_reports(args.n, args.N, args.tau, h, args.u)
        if not uppers and args.side == "upper":
            raise RangeError(
                f"no upper-bound method applies to (n={args.n}, N={args.N}, tau={args.tau});"
                " odd strengths need --u"
            )
        result["upper"] = _side_json(uppers, min)
    if args.verify:
        for r in lowers + uppers:
            if r.accepted and not r.verify():
                raise InternalConsistencyError(
                    f"certificate re-verification failed for method {r.method}"
                )
    print(jsonio.dumps(result))
    return EXIT_OK


def cmd_quadrature(args) -> int:
    rule = levenshtein.quadrature_rule(args.n, args.tau, args.N)
    print(jsonio.dumps(rule.to_json()))
    return EXIT_OK


def cmd_testfn(args) -> int:
    table = bounds.test_table(args.n, args.tau, args.N, args.jmax)
    print(jsonio.dumps(table.to_json()))
    return EXIT_OK


_BUILDERS = {
    "simplex": lambda a: codes.simplex(a.n),
    "orthogonal-simplices": lambda a: codes.orthogonal_simplices(a.a, a.b),
    "cross-polytope": lambda a: codes.cross_polytope(a.n),
    "kerdock": lambda a: codes.kerdock(a.l),
}


def cmd_code(args) -> int:
    if args.builder not in _BUILDERS:
        print(f"unknown builder {args.builder!r}", file=sys.stderr)
        return EXIT_USAGE
    dist = _BUILDERS[args.builder](args)
    h = _potential_or_usage(args.potential)
    out = dist.to_json()
    out["energy"] = codes.energy(dist, h)
    out["strength"] = codes.strength(dist, args.max_tau)
    out["potential"] = h.spec_string()
    print(jsonio.dumps(out))
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _sweep_points(args):
    pts = []
    for n in _int_list(args.n):
        for tau in _int_list(args.tau):
            lo = levenshtein.dgs_bound(n, tau)
            hi = levenshtein.dgs_bound(n, tau + 1)
            if args.N == "auto":
                Ns = sorted({lo, (lo + hi) // 2, hi})
            else:
                Ns = [int(x) for x in args.N.split(",") if lo <= int(x) <= hi]
            for N in Ns:
                pts.append((n, N, tau))
    return pts


def _sweep_one(point, h, u):
    n, N, tau = point
    row = {"n": n, "N": N, "tau": tau}
    try:
        rule = levenshtein.quadrature_rule(n, tau, N)
        row["s"] = rule.s
        lowers = [r for r in _lower_reports(n, N, tau, h) if r.accepted]
        uppers = [r for r in _upper_reports(n, N, tau, h, u) if r.accepted]
        if lowers:
            best = max(lowers, key=lambda r: r.value)
            row["lower_best"] = best.value
            row["lower_method"] = best.method
            row["lower_margin"] = best.margins.get("sign_margin")
        if uppers:
            best = min(uppers, key=lambda r: r.value)
            row["upper_best"] = best.value
            row["upper_method"] = best.method
            row["upper_margin"] = best.margins.get("sign_margin")
        row["reports"] = lowers + uppers
    except (RangeError, InfeasibleRange) as e:
        row["error"] = str(e)
    return row


def cmd_sweep(args) -> int:
    h = _potential_or_usage(args.potential)
    points = _sweep_points(args)
    if not points:
        print("empty sweep grid", file=sys.stderr)
        return EXIT_USAGE
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(lambda p: _sweep_one(p, h, args.u), points))
    if args.verify:
        for row in rows:
            for r in row.get("reports", []):
                if r.accepted and not r.verify():
                    raise InternalConsistencyError(
                        f"re-verification failed at (n={row['n']}, N={row['N']}, tau={row['tau']})"
                    )
    for row in rows:
        row.pop("reports", None)
    if args.format == "json":
        print(jsonio.dumps(rows))
        return EXIT_OK
    cols = [
        "n", "N", "tau", "s",
        "lower_best", "lower_method", "lower_margin",
        "upper_best", "upper_method", "upper_margin", "error",
    ]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in cols})
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="designbounds", description="LP energy bounds for spherical designs")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="energy bounds for (n, N, tau)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--N", type=float, required=True)
    b.add_argument("--tau", type=int, required=True)
    b.add_argument("--potential", required=True)
    b.add_argument("--side", choices=["lower", "upper", "strip"], default="strip")
    b.add_argument("--u", type=float, default=None, help="largest admissible inner product")
    b.add_argument("--l", type=float, default=None, help="smallest admissible inner product")
    b.add_argument("--verify", action="store_true", help="re-check certificates before output")
    b.set_defaults(func=cmd_bound)

    q = sub.add_parser("quadrature", help="Levenshtein quadrature rule")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--tau", type=int, required=True)
    q.add_argument("--N", type=float, required=True)
    q.set_defaults(func=cmd_quadrature)

    t = sub.add_parser("testfn", help="test-function table Q_1..Q_jmax")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--tau", type=int, required=True)
    t.add_argument("--N", type=float, required=True)
    t.add_argument("--jmax", type=int, required=True)
    t.set_defaults(func=cmd_testfn)

    c = sub.add_parser("code", help="explicit configuration energy and strength")
    c.add_argument("--builder", required=True, choices=sorted(_BUILDERS))
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--a", type=int, default=None)
    c.add_argument("--b", type=int, default=None)
    c.add_argument("--l", type=int, default=None)
    c.add_argument("--potential", required=True)
    c.add_argument("--max-tau", type=int, default=6, dest="max_tau")
    c.set_defaults(func=cmd_code)

    s = sub.add_parser("sweep", help="grid sweep over (n, N, tau)")
    s.add_argument("--n", required=True, help="comma-separated dimensions")
    s.add_argument("--tau", required=True, help="comma-separated strengths")
    s.add_argument("--N", default="auto", help="'auto' (endpoints+midpoint) or comma list")
    s.add_argument("--potential", required=True)
    s.add_argument("--u", type=float, default=None)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--jobs", type=int, default=4)
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        return int(e.code or 0)
    except (RangeError, InfeasibleRange) as e:
        print(f"range error: {e}", file=sys.stderr)
        return EXIT_RANGE
    except InternalConsistencyError as e:
        print(f"internal consistency failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
