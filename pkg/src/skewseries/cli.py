"""Command-line surface.

One job per invocation.  Algebraic objects travel as strict JSON (see
`serialize`); rank-growth tables are also written as CSV.  Exit codes:

* 0 — success
* 1 — mathematical error (non-unit input, unpreparable series, ...)
* 2 — precision error (the answer is not determined at the stored K)
* 3 — I/O, schema, or configuration error

Outputs are written atomically and are byte-identical for identical
configurations, including the seed, which is recorded in every output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    ContextMismatch,
    InvalidAction,
    MathematicalError,
    PrecisionError,
    SchemaError,
)
from .iwasawa import descend_ideal, omega, rank_growth, xi
from .precision import PrecisionContext
from .selfcheck import run_selfcheck
from .serialize import (
    JSON_TO_MODE,
    canonical_json,
    dump_coeff,
    dump_distinguished,
    dump_series,
    load_object,
    read_json,
    write_json_atomic,
    write_text_atomic,
)
from .skew import build_skew, validate_axioms
from .weierstrass import divide, prepare

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors: exit 3, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(3)


def _add_context_flags(sp, epsilon: bool) -> None:
    sp.add_argument("--p", type=int, required=True, help="prime p")
    sp.add_argument("--K", type=int, required=True, help="precision level K")
    sp.add_argument(
        "--mode",
        choices=sorted(JSON_TO_MODE),
        default="zp",
        help="coefficient ring: zp = p-adic integers, fp = mod-p reduction",
    )
    if epsilon:
        sp.add_argument(
            "--epsilon",
            type=int,
            required=True,
            help="twist exponent residue (must be 1 mod p)",
        )


def _ctx_from_flags(args) -> PrecisionContext:
    try:
        return PrecisionContext(args.p, args.K, JSON_TO_MODE[args.mode])
    except ValueError as exc:
        raise SchemaError(f"invalid context: {exc}") from exc


def _skew_from_flags(args):
    ctx = _ctx_from_flags(args)
    try:
        return build_skew(ctx, args.epsilon)
    except (ValueError, InvalidAction) as exc:
        raise SchemaError(f"invalid twist configuration: {exc}") from exc


def _load_kind(args, kind: str):
    obj = read_json(args.infile)
    if obj.get("kind") != kind:
        raise SchemaError(
            f"{args.subcommand} expects a {kind!r} object, "
            f"got kind {obj.get('kind')!r}"
        )
    return load_object(obj, normalize=args.normalize)


def _emit(args, obj) -> None:
    if args.out:
        write_json_atomic(args.out, obj)
    else:
        sys.stdout.write(canonical_json(obj))


# -- subcommand handlers -------------------------------------------------


def cmd_selfcheck(args) -> int:
    result = run_selfcheck(args.seed, emit=print)
    if args.out:
        write_json_atomic(args.out, result)
    return 0 if result["passed"] else 1


def cmd_prepare(args) -> int:
    f = _load_kind(args, "skew_series")
    eps, F = prepare(f)
    _emit(
        args,
        {
            "kind": "result",
            "subcommand": "prepare",
            "seed": args.seed,
            "eps": dump_series(eps),
            "F": dump_distinguished(F),
        },
    )
    return 0


def cmd_divide(args) -> int:
    g, f = _load_kind(args, "division_problem")
    q, rem = divide(g, f)
    _emit(
        args,
        {
            "kind": "result",
            "subcommand": "divide",
            "seed": args.seed,
            "q": dump_series(q),
            "rem": dump_series(rem),
        },
    )
    return 0


def cmd_invert(args) -> int:
    f = _load_kind(args, "skew_series")
    inv = f.inverse()
    out = dump_series(inv)
    out["seed"] = args.seed
    out["subcommand"] = "invert"
    _emit(args, out)
    return 0


def _cmd_cyclotomic(args, fn, name: str) -> int:
    ctx = _ctx_from_flags(args)
    try:
        c = fn(ctx, args.n)
    except ValueError as exc:
        raise SchemaError(f"invalid index: {exc}") from exc
    out = dump_coeff(c)
    out["seed"] = args.seed
    out["subcommand"] = name
    out["n"] = args.n
    _emit(args, out)
    return 0


def cmd_omega(args) -> int:
    return _cmd_cyclotomic(args, omega, "omega")


def cmd_xi(args) -> int:
    return _cmd_cyclotomic(args, xi, "xi")


def cmd_descend(args) -> int:
    sd, coeffs = _load_kind(args, "z_poly")
    r, steps = descend_ideal(sd, coeffs)
    _emit(
        args,
        {
            "kind": "result",
            "subcommand": "descend",
            "seed": args.seed,
            "r": dump_coeff(r, epsilon=sd.epsilon_raw),
            "steps": steps,
        },
    )
    return 0


def cmd_rankgrowth(args) -> int:
    if not args.out:
        raise SchemaError("rankgrowth requires --out (the CSV is written alongside)")
    spec = _load_kind(args, "module_spec")
    try:
        growth = rank_growth(spec, args.n_max, args.K, guard=args.guard)
    except ValueError as exc:
        raise SchemaError(f"invalid rank-growth parameters: {exc}") from exc
    summary = {"kind": "result", "subcommand": "rankgrowth", "seed": args.seed}
    summary.update(growth.to_dict())
    csv_text = "n,lambda_n,flag\n" + "".join(
        f"{n},{lam},{int(flag)}\n" for n, lam, flag in growth.table
    )
    write_json_atomic(args.out, summary)
    write_text_atomic(str(Path(args.out).with_suffix(".csv")), csv_text)
    return 0


def cmd_axioms(args) -> int:
    sd = _skew_from_flags(args)
    report = validate_axioms(sd, samples=100, seed=args.seed)
    for check in report.checks:
        status = "ok" if not check.failures else f"FAILED ({check.failures}x)"
        print(f"{check.name}: {status}")
    if args.out:
        write_json_atomic(
            args.out,
            {
                "kind": "result",
                "subcommand": "axioms",
                "seed": args.seed,
                "report": report.to_dict(),
            },
        )
    return 0 if report.passed else 1


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="skewseries",
        description="Exact arithmetic in skew power series rings at finite precision.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def job(name: str, handler, help_text: str):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--seed", type=int, default=0, help="recorded in outputs")
        sp.add_argument("--out", metavar="FILE", help="output path (default stdout)")
        sp.set_defaults(func=handler)
        return sp

    def file_job(name: str, handler, help_text: str):
        sp = job(name, handler, help_text)
        sp.add_argument(
            "--in", dest="infile", metavar="FILE", required=True, help="input JSON"
        )
        sp.add_argument(
            "--normalize",
            action="store_true",
            help="reduce out-of-range residues instead of rejecting them",
        )
        return sp

    job("selfcheck", cmd_selfcheck, "run every invariant suite")

    file_job("prepare", cmd_prepare, "factor a series as unit * distinguished poly")
    file_job("divide", cmd_divide, "divide with remainder by a unit-order series")
    file_job("invert", cmd_invert, "two-sided inverse of a unit")

    for name, handler, help_text in (
        ("omega", cmd_omega, "cyclotomic element (1+X)^(p^n) - 1"),
        ("xi", cmd_xi, "cyclotomic layer quotient omega_n / omega_(n-1)"),
    ):
        sp = job(name, handler, help_text)
        _add_context_flags(sp, epsilon=False)
        sp.add_argument("--n", type=int, required=True, help="tower level")

    file_job("descend", cmd_descend, "descend a Z-polynomial to a scalar generator")

    sp = file_job("rankgrowth", cmd_rankgrowth, "coinvariant rank growth table")
    sp.add_argument("--n-max", type=int, required=True, help="largest tower level")
    sp.add_argument("--K", type=int, required=True,
                    help="scalar precision: ranks are computed mod p^K")
    sp.add_argument("--guard", type=int, default=2, help="precision guard band")

    sp = job("axioms", cmd_axioms, "check the twist axioms on random samples")
    _add_context_flags(sp, epsilon=True)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ContextMismatch) as exc:
        print(f"skewseries: schema error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"skewseries: i/o error: {exc}", file=sys.stderr)
        return 3
    except PrecisionError as exc:
        print(f"skewseries: precision error: {exc}", file=sys.stderr)
        return 2
    except MathematicalError as exc:
        print(f"skewseries: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
