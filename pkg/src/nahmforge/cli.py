"""Command-line driver: ``nahmforge verify | verify-all | list | eval | coeff``.

Reports go to standard output (a text table or one JSON object per line);
progress goes to standard error.  Exit codes: 0 when every checked identity
matches, 1 when any identity mismatches or cannot be checked to the requested
order, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .catalog import Catalog, CatalogError, IdentityRecord, VerificationReport, default_catalog, verify_record
from .expr import ExprError, evaluate, from_json
from .series import format_rational


class UsageError(Exception):
    pass


def _order(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"order must be a rational such as 25 or 49/2, got {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("order must be positive")
    return value


def _jobs(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("jobs must be an integer") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("jobs must be at least 1")
    return value


def _filters(items: Optional[Sequence[str]]) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"filter must look like key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nahmforge", description="Exact q-series identity verification.")
    p.add_argument("--catalog", help="overlay catalog JSON (default: $NAHMFORGE_CATALOG)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_order=True):
        if with_order:
            sp.add_argument("--order", type=_order, help="truncation order (rational); default per identity")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--catalog", default=argparse.SUPPRESS, help="overlay catalog JSON")

    v = sub.add_parser("verify", help="verify the named identities")
    v.add_argument("ids", nargs="+")
    common(v)
    v.add_argument("--jobs", type=_jobs, default=1)

    va = sub.add_parser("verify-all", help="verify every catalog identity matching the filters")
    va.add_argument("--filter", action="append", metavar="KEY=VALUE")
    common(va)
    va.add_argument("--jobs", type=_jobs, default=1)

    ls = sub.add_parser("list", help="list catalog entries")
    ls.add_argument("--filter", action="append", metavar="KEY=VALUE")
    common(ls, with_order=False)

    ev = sub.add_parser("eval", help="print the coefficients of an expression")
    src = ev.add_mutually_exclusive_group(required=True)
    src.add_argument("--id")
    src.add_argument("--expr", help="expression as JSON")
    ev.add_argument("--side", choices=("lhs", "rhs"), default="lhs")
    ev.add_argument("--order", type=_order, required=True)
    ev.add_argument("--format", choices=("text", "json"), default="text")
    ev.add_argument("--catalog", default=argparse.SUPPRESS)

    co = sub.add_parser("coeff", help="print one coefficient of an expression")
    src = co.add_mutually_exclusive_group(required=True)
    src.add_argument("--id")
    src.add_argument("--expr", help="expression as JSON")
    co.add_argument("--side", choices=("lhs", "rhs"), default="lhs")
    co.add_argument("--exponent", type=Fraction, required=True)
    co.add_argument("--format", choices=("text", "json"), default="text")
    co.add_argument("--catalog", default=argparse.SUPPRESS)
    return p


# ----------------------------------------------------------------------
# verification


def _verify_one(args) -> VerificationReport:
    rec, order = args
    return verify_record(rec, order)


def _run_reports(records: list[IdentityRecord], order, jobs: int, progress: bool) -> list[VerificationReport]:
    tasks = [(r, order) for r in records]
    reports: list[VerificationReport] = []
    if jobs > 1 and len(tasks) > 1:
        import multiprocessing

        with multiprocessing.get_context().Pool(jobs) as pool:
            for rep in pool.imap_unordered(_verify_one, tasks):
                reports.append(rep)
                if progress:
                    print(f"[{len(reports)}/{len(tasks)}] {rep.id}: {rep.label}", file=sys.stderr, flush=True)
        reports.sort(key=lambda r: r.id)
    else:
        for n, task in enumerate(tasks, 1):
            rep = _verify_one(task)
            reports.append(rep)
            if progress:
                print(f"[{n}/{len(tasks)}] {rep.id}: {rep.label}", file=sys.stderr, flush=True)
    return reports


def _emit_reports(reports: list[VerificationReport], fmt: str, out) -> None:
    if fmt == "json":
        for rep in reports:
            out.write(json.dumps(rep.to_json(), sort_keys=False) + "\n")
        return
    width = max([len(r.id) for r in reports] + [2])
    out.write(f"{'id':<{width}}  {'status':<15}  {'order':>7}  result\n")
    for rep in reports:
        line = f"{rep.id:<{width}}  {rep.status:<15}  {format_rational(rep.order_checked):>7}  {rep.label}"
        if rep.mismatch_detail is not None:
            e, a, b = rep.mismatch_detail
            line += f" (q^{format_rational(e)}: lhs {format_rational(a)}, rhs {format_rational(b)})"
        out.write(line + "\n")


def _exit_code(reports: list[VerificationReport]) -> int:
    return 0 if all(r.ok for r in reports) else 1


# ----------------------------------------------------------------------
# eval / coeff


def _expression(cat: Catalog, ns):
    if ns.expr is not None:
        try:
            return from_json(ns.expr)
        except (ExprError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"malformed expression: {exc}") from exc
    rec = cat.get(ns.id)
    if rec.metadata_only:
        raise UsageError(f"{rec.id} is a metadata row without sides")
    return rec.lhs if ns.side == "lhs" else rec.rhs


def _cmd_eval(cat, ns, out) -> int:
    s = evaluate(_expression(cat, ns), ns.order)
    terms = [(e, c) for e, c in s.items() if e < ns.order]
    if ns.format == "json":
        doc = {
            "accuracy": format_rational(min(s.accuracy, ns.order)),
            "terms": [[format_rational(e), format_rational(c)] for e, c in terms],
        }
        out.write(json.dumps(doc) + "\n")
    else:
        for e, c in terms:
            out.write(f"{format_rational(e)} {format_rational(c)}\n")
    return 0


def _cmd_coeff(cat, ns, out) -> int:
    e = ns.exponent
    s = evaluate(_expression(cat, ns), e + 1)
    if s.accuracy <= e:
        print(f"error: coefficient of q^{format_rational(e)} is beyond the feasible accuracy", file=sys.stderr)
        return 1
    c = s.coefficient(e)
    if ns.format == "json":
        out.write(json.dumps({"exponent": format_rational(e), "coefficient": format_rational(c)}) + "\n")
    else:
        out.write(format_rational(c) + "\n")
    return 0


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cat = default_catalog(getattr(ns, "catalog", None))
        if ns.command == "verify":
            records = [cat.get(i) for i in ns.ids]
            for rec in records:
                if rec.metadata_only:
                    raise UsageError(f"{rec.id} is a metadata row and has nothing to verify")
            reports = _run_reports(records, ns.order, ns.jobs, progress=False)
            _emit_reports(reports, ns.format, out)
            return _exit_code(reports)
        if ns.command == "verify-all":
            records = [r for r in cat.list(_filters(ns.filter)) if not r.metadata_only]
            reports = _run_reports(records, ns.order, ns.jobs, progress=True)
            _emit_reports(reports, ns.format, out)
            return _exit_code(reports)
        if ns.command == "list":
            records = cat.list(_filters(ns.filter))
            if ns.format == "json":
                for rec in records:
                    out.write(json.dumps(rec.summary()) + "\n")
            else:
                for rec in records:
                    extra = ""
                    if rec.metadata:
                        extra = "  " + " ".join(f"{k}={v}" for k, v in rec.metadata if k != "series")
                    out.write(f"{rec.id}  [{rec.status}]  {rec.paper_label}{extra}\n")
            return 0
        if ns.command == "eval":
            return _cmd_eval(cat, ns, out)
        if ns.command == "coeff":
            return _cmd_coeff(cat, ns, out)
    except (CatalogError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
