"""Command line entry point: ``radmax <command> ...``.

Exit status: 0 on success, 1 on usage errors, 2 when an invariant fails.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Sequence

from . import conditions, dyadic, experiments, spherical
from .parsing import DescriptorError, parse_delta_grid, parse_profile, parse_r_grid, parse_range, parse_set
from .quadrature import QuadratureError, QuadratureSpec
from .reports import fmt, jsonable

# numeric aliases accepted by ``check --cond``
COND_ALIASES = {
    "1.1": "weak-subcritical",
    "1.2": "strong-subcritical",
    "1.3": "critical-weak",
    "1.4": "critical-strong",
    "1.6": "carleson",
}
CONDITIONS = ("weak-subcritical", "strong-subcritical", "critical-weak", "critical-strong", "carleson",
              "tent-norm")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(experiments.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit_rows(rows: Sequence[Sequence], out=None):
    w = csv.writer(out or sys.stdout, lineterminator="\n")
    for row in rows:
        w.writerow([fmt(x) for x in row])


def _emit_report(rep, as_json: bool):
    if as_json:
        print(rep.to_json(indent=2))
    else:
        sys.stdout.write(rep.to_csv())
        print(f"# sup={fmt(rep.sup)} slope={fmt(rep.slope)} verdict={rep.verdict}")


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_kernel_validate(args) -> int:
    quad = QuadratureSpec(tol=min(args.tol * 0.1, 1e-9))
    rows = [["d", "r", "t", "abs_error"]]
    worst = 0.0
    for d in args.d:
        for r, t, e in experiments.kernel_validation(d, args.n, (0.1, 10.0), args.seed, quad):
            rows.append([d, r, t, e])
            worst = max(worst, e)
    _emit_rows(rows)
    ok = worst <= args.tol
    print(f"# max |A_t 1 - 1| = {worst:.3e} ({'ok' if ok else 'FAILED'} at tol {args.tol:g})")
    return experiments.EXIT_OK if ok else experiments.EXIT_INVARIANT


def cmd_entropy(args) -> int:
    E = parse_set(args.set)
    est = dyadic.kappa_estimate(E, parse_delta_grid(args.delta))
    if args.json:
        print(json.dumps(jsonable({"set": args.set, "rows": list(est.rows()), "kappa_hat": est.kappa_hat,
                                   "truncation": est.truncation}), indent=2))
    else:
        _emit_rows([["delta", "value", "below_resolution"], *est.rows()])
        print(f"# kappa_hat={est.kappa_hat:.6f} truncation={est.truncation}")
    return experiments.EXIT_OK


def cmd_check(args) -> int:
    cond = COND_ALIASES.get(args.cond, args.cond)
    if cond not in CONDITIONS:
        raise UsageError(f"unknown condition {args.cond!r}")
    E = parse_set(args.set)
    deltas = parse_delta_grid(args.delta)
    p, q, d = args.p, args.q, args.d
    if cond == "weak-subcritical":
        rep = conditions.check_weak_type_subcritical(E, p, d, deltas)
    elif cond == "strong-subcritical":
        rep = conditions.check_strong_type_subcritical(E, p, q if q is not None else p, d, n_max=args.n_max)
    elif cond == "critical-weak":
        rep = conditions.check_critical_weak(E, d, deltas)
    elif cond == "critical-strong":
        rep = conditions.check_critical_strong_q(E, d, q if q is not None else 2 * d / (d - 1), deltas)
    elif cond == "carleson":
        rep = conditions.carleson_sup(E, d, args.max_len)
    else:
        rep = conditions.corollary26_sup(E, p, q if q is not None else math.inf, d, args.max_len)
    _emit_report(rep, args.json)
    return experiments.EXIT_OK


def cmd_carleson(args) -> int:
    E = parse_set(args.set)
    window = parse_range(args.range) if args.range else None
    rep = conditions.carleson_sup(E, args.d, args.max_len, window)
    _emit_report(rep, args.json)
    return experiments.EXIT_OK


def cmd_maximal(args) -> int:
    E = parse_set(args.set)
    f = parse_profile(args.f)
    rows = [["r", "value", "err_bound", "n_samples", "argmax_t"]]
    for r in parse_r_grid(args.grid):
        res = spherical.maximal_function_result(f, E, float(r), args.d, t_levels=args.t_levels)
        rows.append([float(r), res.value, res.err_bound, res.n_samples, "" if res.argmax is None else res.argmax])
    _emit_rows(rows)
    return experiments.EXIT_OK


def cmd_experiment(args) -> int:
    sc = experiments.Scenario.from_file(args.config)
    if args.kind != sc.kind:
        raise UsageError(f"config describes a {sc.kind!r} experiment, not {args.kind!r}")
    if args.out:
        sc.output = args.out
    res = experiments.run(sc)
    if not sc.output:
        for name in res.tables:
            sys.stdout.write(res.csv_text(name))
    sys.stdout.write(res.summary_json() if args.json or not sc.output else "")
    for msg in res.failures:
        print(f"FAILED: {msg}", file=sys.stderr)
    return res.status


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="radmax", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel-validate", help="check A_t 1 = 1 on random (r, t)")
    p.add_argument("--d", type=int, nargs="+", default=[2, 3])
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kernel_validate)

    p = sub.add_parser("entropy", help="entropy exponent estimate over a delta grid")
    p.add_argument("--set", required=True)
    p.add_argument("--delta", default="2^-2..2^-16")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("check", help="evaluate one boundedness condition")
    p.add_argument("--cond", required=True, help=f"one of {', '.join(CONDITIONS)} (numeric aliases accepted)")
    p.add_argument("--set", required=True)
    p.add_argument("--p", type=float, default=1.1)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--delta", default="2^-2..2^-12")
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--max-len", type=int, default=32)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("carleson", help="tent averages over the interval lattice")
    p.add_argument("--set", required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--range", default=None, help="block window a..b (default: the set's blocks)")
    p.add_argument("--max-len", type=int, default=32)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_carleson)

    p = sub.add_parser("maximal", help="sampled maximal function on an r-grid")
    p.add_argument("--set", required=True)
    p.add_argument("--f", required=True, help="profile descriptor")
    p.add_argument("--grid", default="geo:0.5..4:64")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--t-levels", type=int, default=6)
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("experiment", help="run a scenario file")
    p.add_argument("kind", choices=experiments.KINDS)
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_experiment)
    return ap


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """``--range -20..20`` as ``--range=-20..20`` so argparse does not read the value as an option."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1 and tok[0] == "-" \
                and (tok[1].isdigit() or tok[1] == "."):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_attach_negative_values(argv))
    try:
        return args.func(args)
    except (UsageError, DescriptorError, experiments.ScenarioError) as exc:
        print(f"radmax: error: {exc}", file=sys.stderr)
        return experiments.EXIT_USAGE
    except (AssertionError, QuadratureError) as exc:
        print(f"radmax: invariant violated: {exc}", file=sys.stderr)
        return experiments.EXIT_INVARIANT
    except ValueError as exc:
        print(f"radmax: error: {exc}", file=sys.stderr)
        return experiments.EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
