"""Command-line interface.

Exit codes: ``check`` and ``oracle`` return 0 for equivalent and 1 for not
equivalent; ``syntactic`` returns 0 / 1 / 3 for proven / refuted / unknown.
Every error (syntax, kinding, contractivity, resource cap, usage) exits 2.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence, TextIO

from .decider import DEFAULT_MAX_PAIRS, Equivalent, ResourceExhausted
from .grammar import ContractivityViolation, build_grammar, dump_grammar, to_gnf
from .kinding import KindError, check_kind, validate_signature
from .lts import format_trace, k_bisimilar, distinguishing_trace, reachable
from .pipeline import Error, type_equiv
from .syntactic import Proven, Refuted, syntactic_check
from .syntax import ParseError, parse_signature, parse_type
from .types import EMPTY_SIGNATURE, DuplicateIdent, KindContext, Signature, TypeExpr, UnboundIdentifier


class _Failure(Exception):
    """Reported on stderr with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 2 with help
        self.print_help(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sessequiv", description="Equivalence of context-free session types.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common(sp: argparse.ArgumentParser, ctx: bool = True) -> None:
        sp.add_argument("--sig", metavar="FILE", help="signature file with one 'X = type' per line")
        if ctx:
            sp.add_argument("--ctx", metavar="KINDS", default="", help="kinds of free indices 0,1,..., e.g. S,T")

    c = sub.add_parser("check", help="decide whether two types are equivalent")
    c.add_argument("left")
    c.add_argument("right")
    common(c)
    c.add_argument("--explain", action="store_true", help="print a distinguishing trace or a summary")
    c.add_argument("--certificate", action="store_true", help="dump the certificate or witness")
    c.add_argument("--dump-grammar", action="store_true", help="print the simple grammar used")
    c.add_argument("--timings", action="store_true", help="print per-stage durations")
    c.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS, metavar="N")

    k = sub.add_parser("kind", help="print the kind (S or T) of a type")
    k.add_argument("type")
    common(k)

    g = sub.add_parser("grammar", help="dump the grammar of a type")
    g.add_argument("type")
    common(g, ctx=False)
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--raw", action="store_true", help="productions before conversion")
    mode.add_argument("--gnf", action="store_true", help="Greibach normal form (default)")
    g.add_argument("--names", action="store_true", help="list the subterm behind each nonterminal")
    g.add_argument("--all", action="store_true", help="include productions unreachable from the start")

    lt = sub.add_parser("lts", help="list type transitions reachable within a depth")
    lt.add_argument("type")
    common(lt, ctx=False)
    lt.add_argument("--depth", type=int, required=True, metavar="K")

    o = sub.add_parser("oracle", help="bounded bisimulation on the type LTS")
    o.add_argument("left")
    o.add_argument("right")
    common(o, ctx=False)
    o.add_argument("--depth", type=int, required=True, metavar="K")

    s = sub.add_parser("syntactic", help="proof search over the equivalence rules")
    s.add_argument("left")
    s.add_argument("right")
    common(s, ctx=False)
    s.add_argument("--fuel", type=int, default=10_000, metavar="N")
    s.add_argument("--explain", "--explain-syntactic", dest="explain", action="store_true", help="print the derivation")
    return p


def _read_types(texts: Sequence[str], stdin: TextIO) -> List[TypeExpr]:
    """Parse type arguments; ``-`` takes the next nonblank line of stdin."""
    lines: Optional[List[str]] = None
    out = []
    for text in texts:
        if text == "-":
            if lines is None:
                lines = [ln for ln in stdin.read().splitlines() if ln.strip()]
            if not lines:
                raise _Failure("expected a type on standard input")
            text = lines.pop(0)
        out.append(parse_type(text))
    return out


def _load_sig(path: Optional[str]) -> Signature:
    if path is None:
        return EMPTY_SIGNATURE
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_signature(fh.read())
    except OSError as e:
        raise _Failure(f"cannot read signature: {e}") from None


def _validated(path: Optional[str]) -> Signature:
    sig = _load_sig(path)
    diags = validate_signature(sig)
    if diags:
        raise _Failure("\n".join(f"{d.code} {d.name}" for d in diags))
    return sig


def _cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    t, u = _read_types([args.left, args.right], sys.stdin)
    sig = _load_sig(args.sig)
    report = type_equiv(t, u, sig, KindContext.parse(args.ctx), max_pairs=args.max_pairs)
    if isinstance(report.verdict, Error):
        raise _Failure("\n".join(report.verdict.diagnostics))
    print(report.answer, file=out)
    v = report.verdict
    if args.explain:
        if isinstance(v, Equivalent):
            print(f"equivalent; {len(v.certificate.pairs)} pair(s) assumed", file=out)
        else:
            print(format_trace(v.witness), file=out)
    if args.certificate:
        if isinstance(v, Equivalent):
            print(v.certificate.format() or "(no pairs needed)", file=out)
        else:
            print(format_trace(v.witness), file=out)
    if args.dump_grammar and report.grammar is not None:
        starts = [w[0] for w in report.starts if w]
        print(dump_grammar(report.grammar, starts=starts), file=out)
    if args.timings:
        for stage, secs in report.timings.items():
            print(f"{stage}: {secs * 1000:.3f} ms", file=out)
    return 0 if report.equivalent else 1


def _cmd_kind(args: argparse.Namespace, out: TextIO) -> int:
    (t,) = _read_types([args.type], sys.stdin)
    sig = _validated(args.sig)
    try:
        k = check_kind(t, KindContext.parse(args.ctx), sig)
    except KindError as e:
        raise _Failure(f"ill-kinded: {e}") from None
    print(k, file=out)
    return 0


def _cmd_grammar(args: argparse.Namespace, out: TextIO) -> int:
    (t,) = _read_types([args.type], sys.stdin)
    sig = _validated(args.sig)
    g = build_grammar(t, sig)
    if not args.raw:
        g = to_gnf(g)
    starts = None if args.all else [g.start]
    print(dump_grammar(g, names=args.names, starts=starts), file=out)
    return 0


def _cmd_lts(args: argparse.Namespace, out: TextIO) -> int:
    (t,) = _read_types([args.type], sys.stdin)
    sig = _validated(args.sig)
    for level, src, label, dst in reachable(t, args.depth, sig):
        print(f"{level}  {src}  --{label}-->  {dst}", file=out)
    return 0


def _cmd_oracle(args: argparse.Namespace, out: TextIO) -> int:
    t, u = _read_types([args.left, args.right], sys.stdin)
    sig = _validated(args.sig)
    ok = k_bisimilar(t, u, args.depth, sig)
    print("true" if ok else "false", file=out)
    if not ok:
        trace = distinguishing_trace(t, u, args.depth, sig)
        if trace is not None:
            print(format_trace(trace), file=out)
    return 0 if ok else 1


def _cmd_syntactic(args: argparse.Namespace, out: TextIO) -> int:
    t, u = _read_types([args.left, args.right], sys.stdin)
    sig = _validated(args.sig)
    v = syntactic_check(t, u, sig, args.fuel)
    if isinstance(v, Proven):
        print("Proven", file=out)
        if args.explain:
            print(v.derivation.format(), file=out)
        return 0
    if isinstance(v, Refuted):
        print("Refuted", file=out)
        if args.explain:
            print(v.format(), file=out)
        return 1
    print(f"Unknown ({v.reason})", file=out)
    return 3


_COMMANDS = {
    "check": _cmd_check,
    "kind": _cmd_kind,
    "grammar": _cmd_grammar,
    "lts": _cmd_lts,
    "oracle": _cmd_oracle,
    "syntactic": _cmd_syntactic,
}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except (_Failure, ParseError, DuplicateIdent, UnboundIdentifier, ContractivityViolation, ResourceExhausted, ValueError) as e:
        for line in str(e).splitlines():
            print(f"error: {line}", file=err)
    return 2


if __name__ == "__main__":
    sys.exit(main())
