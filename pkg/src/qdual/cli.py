"""``qdual`` command line: exact tables, the dual transform, identity checks.

Exit codes: 0 success, 1 an identity failed, 2 usage error, 3 a pole or
other domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from qdual.errors import DomainError
from qdual.exact import as_ratfunc
from qdual.harness import CATALOG, IDENTITY_IDS, SuiteConfig, SuiteEntry, iter_suite, summarize
from qdual.qfunctions import gauss_binomial
from qdual.render import json_value, latex_value, text_value
from qdual.sequences import (
    SequenceSpec,
    builtin_sequence,
    dual,
    dual_inverse,
    q_bernoulli,
    q_bernoulli_poly,
    q_stirling2,
    sym,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

TABLES = ("gauss-binomial", "q-stirling2", "q-bernoulli", "q-bernoulli-poly")


class UsageError(Exception):
    pass


def _nonneg(name: str, v):
    if v is not None and v < 0:
        raise UsageError(f"--{name} must be >= 0")
    return v


def _parse_q(text: str):
    if text == "symbolic":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--q must be 'symbolic' or an exact rational, got {text!r}") from None


def _table_rows(args) -> tuple[list[str], list[tuple]]:
    """(index column names, [(index tuple, value), ...])."""
    n = _nonneg("n", args.n)
    k = _nonneg("k", args.k)
    m = _nonneg("m", args.m)
    t = args.table
    if t == "gauss-binomial":
        if n is None:
            raise UsageError("gauss-binomial needs --n")
        ks = [k] if k is not None else range(n + 1)
        ns = [n] if k is not None else range(n + 1)
        rows = [((a, b), gauss_binomial(a, b)) for a in ns for b in ks if b <= a or k is not None]
        return ["n", "k"], rows
    if t == "q-stirling2":
        if m is None:
            raise UsageError("q-stirling2 needs --m")
        if n is not None:
            return ["m", "n"], [((m, n), q_stirling2(m, n))]
        return ["m", "n"], [((a, b), q_stirling2(a, b)) for a in range(m + 1) for b in range(a + 1)]
    if n is None:
        raise UsageError(f"{t} needs --n")
    if t == "q-bernoulli":
        return ["n"], [((i,), q_bernoulli(i)) for i in range(n + 1)]
    x = sym("x")
    return ["n"], [((i,), q_bernoulli_poly(i, x)) for i in range(n + 1)]


def _specialize(v, qv):
    """Set q to ``qv`` after reducing, so removable 0/0 forms cannot fire."""
    if qv is None:
        return v
    try:
        return as_ratfunc(v).reduced().substitute({"q": qv}).reduced()
    except ZeroDivisionError:
        raise DomainError(f"q = {qv} is a pole of a table entry") from None


def _emit_table(args, out) -> None:
    qv = _parse_q(args.q)
    names, rows = _table_rows(args)
    rows = [(idx, _specialize(v, qv)) for idx, v in rows]
    if args.format == "json":
        doc = {"table": args.table, "q": "symbolic" if qv is None else str(qv),
               "entries": [{**dict(zip(names, idx)), "value": json_value(v)} for idx, v in rows]}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names + ["value"])
        for idx, v in rows:
            w.writerow(list(idx) + [text_value(v)])
        out.write(buf.getvalue())
    else:
        cols = "r" * len(names) + "l"
        lines = [rf"\begin{{tabular}}{{{cols}}}",
                 " & ".join(f"${n}$" for n in names) + r" & value \\", r"\hline"]
        for idx, v in rows:
            lines.append(" & ".join(str(i) for i in idx) + f" & ${latex_value(v)}$ \\\\")
        lines.append(r"\end{tabular}")
        out.write("\n".join(lines) + "\n")


def _load_json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        with open(text) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {text!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {text!r}: {exc}") from None


def _input_sequence(args):
    if (args.spec is None) == (args.values is None):
        raise UsageError("give exactly one of --spec or --values")
    if args.values is not None:
        items = [s.strip() for s in args.values.split(",") if s.strip()]
        spec = SequenceSpec("explicit-list", {"values": items})
    else:
        try:
            spec = SequenceSpec.from_json(_load_json_arg(args.spec))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"malformed sequence spec: {exc}") from None
    try:
        seq = builtin_sequence(spec)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed sequence spec: {exc}") from None
    n_max = args.n_max
    if n_max is None:
        if seq.length is None:
            raise UsageError("--n-max is required for unbounded sequences")
        n_max = seq.length - 1
    if n_max < 0 or (seq.length is not None and n_max >= seq.length):
        raise UsageError(f"--n-max must lie in 0..{'' if seq.length is None else seq.length - 1}")
    return seq, n_max


def _emit_dual(args, out) -> None:
    seq, n_max = _input_sequence(args)
    step = dual if args.direction == "forward" else dual_inverse
    values = [json_value(step(seq, n)) for n in range(n_max + 1)]
    doc = {"kind": "explicit-list", "params": {"values": values}}
    out.write(json.dumps(doc, sort_keys=True) + "\n")


def _parse_range(text: str):
    try:
        name, span = text.split("=", 1)
        lo, _, hi = span.partition(":")
        lo_i = int(lo)
        hi_i = int(hi) if hi else lo_i
    except ValueError:
        raise UsageError(f"--range wants NAME=LO:HI, got {text!r}") from None
    return name.strip(), (lo_i, hi_i)


def _verify_config(args) -> SuiteConfig:
    if args.config is not None:
        if args.ids:
            raise UsageError("--config and --id are exclusive")
        try:
            cfg = SuiteConfig.from_json(_load_json_arg(args.config))
        except ValueError as exc:
            raise UsageError(f"malformed suite config: {exc}") from None
    elif args.ids:
        ranges = dict(_parse_range(r) for r in args.ranges)
        entries = []
        for iid in args.ids:
            if iid not in CATALOG:
                raise UsageError(f"unknown identity {iid!r}")
            params = CATALOG[iid].params
            bad = set(ranges) - set(params)
            if bad and len(args.ids) == 1:
                raise UsageError(f"{iid} has no parameters {sorted(bad)}")
            r = {n: v for n, v in ranges.items() if n in params}
            entries.append(SuiteEntry(iid, r, args.mode, (args.variant,) if args.variant else None))
        cfg = SuiteConfig(entries)
    else:
        cfg = SuiteConfig.default(args.mode)
    for spec in args.mutate:
        iid, _, kind = spec.partition(":")
        if iid not in CATALOG:
            raise UsageError(f"unknown identity {iid!r} in --mutate")
        hits = [e for e in cfg.entries if e.id == iid]
        if not hits:
            hits = [SuiteEntry(iid, mode=args.mode)]
            cfg.entries.extend(hits)
        for e in hits:
            e.mutation = kind or "auto"
    return cfg


def _run_verify(args, out) -> int:
    cfg = _verify_config(args)
    try:
        cfg.instances()
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    reports = []
    for r in iter_suite(cfg, args.jobs):
        reports.append(r)
        out.write(json.dumps(r.to_json(timing=args.timing), sort_keys=True) + "\n")
        out.flush()
    summary = summarize(reports)
    out.write(json.dumps(summary, sort_keys=True) + "\n")
    return EXIT_OK if summary["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdual", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="tabulate Gaussian binomials, q-Stirling or q-Bernoulli data")
    t.add_argument("table", choices=TABLES)
    t.add_argument("--n", type=int)
    t.add_argument("--k", type=int)
    t.add_argument("--m", type=int)
    t.add_argument("--q", default="symbolic", help="'symbolic' (default) or an exact rational")
    t.add_argument("--format", choices=("json", "csv", "latex"), default="json")

    d = sub.add_parser("dual", help="apply the q-dual transform or its inverse")
    d.add_argument("--spec", help="sequence spec as inline JSON or a file path")
    d.add_argument("--values", help="comma-separated exact values (an explicit list)")
    d.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    d.add_argument("--n-max", type=int)
    d.add_argument("--format", choices=("json",), default="json")

    v = sub.add_parser("verify", help="check catalog identities; JSON lines, summary last")
    v.add_argument("--config", help="suite config as inline JSON or a file path")
    v.add_argument("--id", dest="ids", action="append", default=[], choices=IDENTITY_IDS,
                   metavar="ID")
    v.add_argument("--range", dest="ranges", action="append", default=[], metavar="NAME=LO:HI")
    v.add_argument("--mode", choices=("symbolic", "point"), default="symbolic")
    v.add_argument("--variant", choices=("as-printed", "corrected"))
    v.add_argument("--mutate", action="append", default=[], metavar="ID[:qpow|sign]",
                   help="test hook: perturb one summand of ID so that it must fail")
    v.add_argument("--jobs", type=int, help="worker processes (default: $QDUAL_JOBS or CPUs)")
    v.add_argument("--timing", action="store_true", help="include elapsed seconds per report")
    v.add_argument("--format", choices=("json",), default="json")
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "table":
            _emit_table(args, out)
            return EXIT_OK
        if args.command == "dual":
            _emit_dual(args, out)
            return EXIT_OK
        return _run_verify(args, out)
    except UsageError as exc:
        print(f"qdual: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ZeroDivisionError) as exc:
        print(f"qdual: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
