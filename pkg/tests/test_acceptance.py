"""Acceptance suite: one pass/fail line per criterion.

Run under pytest (the lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``. Time limits are fixed below; each timed
quantity is the best of ``REPEAT`` runs, each starting from source text.
"""

from __future__ import annotations

import functools
import io
import random
import sys
import time
from pathlib import Path
from typing import Callable, List, Tuple

sys.path.insert(0, str(Path(__file__).parent))

import corpus  # noqa: E402
from sessequiv import (  # noqa: E402
    BOTTOM,
    Arrow,
    Choice,
    Ident,
    Proven,
    Refuted,
    ResourceExhausted,
    Seq,
    Skip,
    View,
    build_grammar,
    distinguishing_trace,
    dump_grammar,
    is_simple,
    k_bisimilar,
    parse_signature,
    parse_type,
    syntactic_check,
    to_gnf,
    type_equiv,
)
from sessequiv.cli import main as cli  # noqa: E402
from sessequiv.grammar import canonical_productions, parse_grammar  # noqa: E402

REPEAT = 5
GOLDEN_MS = 10.0
CHECK_MS = 50.0
MONOID_S = 60.0
CORPUS_SIZE = 1000
K_BISIM = 25
TRACE_DEPTH = 40

STREAM_SIG = "T = !V;W\nU = !(V;V);W\nV = +{go: skip}\nW = +{go: W}"
STREAM_GOLDEN = "XT -> !d XV BOT XW\nXT -> !c XW\nXU -> !d XV XV BOT XW\nXU -> !c XW\nXV -> +go\nXW -> +go XW"
TREE_SIG = "InputTree = +{Node: InputTree;!(?int);InputTree, Leaf: skip}"
TREE_GOLDEN = "X -> +Node X X1 X\nX -> +Leaf\nX1 -> !d X2 BOT\nX1 -> !c\nX2 -> ?d X3 BOT\nX2 -> ?c\nX3 -> int"
SEND = "all[T] 0 -> all[S] !1;0 -> 0"
SEND_PRIME = "all[T] all[S] 1 -> !1;0 -> 0"

LINES: List[str] = []


def _record(n: int, title: str, ok: bool, detail: str) -> bool:
    LINES.append(f"AC{n:<2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    return ok


def _best_ms(fn: Callable[[], object]) -> Tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(REPEAT):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, (time.perf_counter() - t0) * 1000)
    return best, result


def _run_cli(*argv: str) -> Tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    return cli(list(argv), out, err), out.getvalue(), err.getvalue()


# -- shared corpus ------------------------------------------------------------------


class _Tally:
    checks = 0
    exhausted = 0


def _equiv(t, u, sig):
    _Tally.checks += 1
    try:
        return type_equiv(t, u, sig)
    except ResourceExhausted:
        _Tally.exhausted += 1
        raise


@functools.lru_cache(maxsize=None)
def _triples():
    rng = random.Random(2024)
    return [corpus.triple(rng) for _ in range(CORPUS_SIZE)]


@functools.lru_cache(maxsize=None)
def _monoid_run():
    """Laws checked on every triple; returns (failures, YES pairs with their signature, seconds)."""
    t0 = time.perf_counter()
    failures = []
    yes = []
    for i, (t, u, v, sig) in enumerate(_triples()):
        view = View.INTERNAL if i % 2 else View.EXTERNAL
        choice = Choice(view, (("a", t), ("b", u)))
        laws = [
            ("assoc", Seq(Seq(t, u), v), Seq(t, Seq(u, v))),
            ("skipl", Seq(Skip(), t), t),
            ("skipr", Seq(t, Skip()), t),
            ("dist", Seq(choice, v), Choice(view, (("a", Seq(t, v)), ("b", Seq(u, v))))),
        ]
        for name, left, right in laws:
            report = _equiv(left, right, sig)
            if report.equivalent:
                yes.append((left, right, sig, report))
            else:
                failures.append((i, name, str(left), str(right)))
    return failures, yes, time.perf_counter() - t0


@functools.lru_cache(maxsize=None)
def _pair_run():
    """Check and record every well-kinded pair of the oracle corpus."""
    out = []
    for t, u, sig in corpus.oracle_pairs(7, CORPUS_SIZE):
        out.append((t, u, sig, _equiv(t, u, sig)))
    return out


# -- criteria -----------------------------------------------------------------------


def criterion_1() -> bool:
    def run():
        sig = parse_signature(STREAM_SIG)
        g = to_gnf(build_grammar(Ident("T"), sig, also=[Ident("U")]))
        return canonical_productions(g, [g.nonterminal_for(Ident("T")), g.nonterminal_for(Ident("U"))])

    ms, got = _best_ms(run)
    gold, ids = parse_grammar(STREAM_GOLDEN)
    match = got == canonical_productions(gold, [ids["XT"], ids["XU"]])
    ok = match and ms < GOLDEN_MS
    return _record(1, "stream grammar golden", ok, f"{len(got)} productions, match={match}, {ms:.2f} ms < {GOLDEN_MS:g} ms")


def criterion_2() -> bool:
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".sig", delete=False) as fh:
        fh.write(STREAM_SIG)
        path = fh.name
    ms, (code, out, _) = _best_ms(lambda: _run_cli("check", "T", "U", "--sig", path, "--explain"))
    o2 = _run_cli("oracle", "T", "U", "--sig", path, "--depth", "2")
    o3 = _run_cli("oracle", "T", "U", "--sig", path, "--depth", "3")
    Path(path).unlink()
    lines = out.splitlines()
    ok = (
        code == 1
        and lines == ["NO", "!d +go +go"]
        and o2[:2] == (0, "true\n")
        and o3[0] == 1
        and o3[1].startswith("false\n")
        and ms < CHECK_MS
    )
    detail = f"check -> {' / '.join(lines)}; oracle depth 2 -> {o2[1].strip()}, depth 3 -> {o3[1].split()[0]}; {ms:.2f} ms < {CHECK_MS:g} ms"
    return _record(2, "stream refutation", ok, detail)


def criterion_3() -> bool:
    def run():
        g = to_gnf(build_grammar(Ident("InputTree"), parse_signature(TREE_SIG)))
        return canonical_productions(g, [g.start])

    ms, got = _best_ms(run)
    gold, ids = parse_grammar(TREE_GOLDEN)
    match = got == canonical_productions(gold, [ids["X"]])
    bottoms = sum(" BOT" in p for p in got)
    ok = match and bottoms == 2 and ms < GOLDEN_MS
    return _record(3, "InputTree grammar golden", ok, f"{len(got)} productions, match={match}, {ms:.2f} ms < {GOLDEN_MS:g} ms")


def criterion_4() -> bool:
    ms, report = _best_ms(lambda: type_equiv(parse_type(SEND), parse_type(SEND_PRIME)))
    ok = report.answer == "NO" and ms < CHECK_MS
    witness = " ".join(map(str, report.verdict.witness)) if report.answer == "NO" else "-"
    return _record(4, "send vs send'", ok, f"{report.answer} (witness {witness}), {ms:.2f} ms < {CHECK_MS:g} ms")


def criterion_5() -> bool:
    failures, yes, secs = _monoid_run()
    depth = max(max(corpus.depth(x) for x in tr[:3]) for tr in _triples())
    eqs = max(len(tr[3]) for tr in _triples())
    ok = not failures and secs < MONOID_S and depth <= 6 and eqs <= 5
    detail = (
        f"{CORPUS_SIZE} triples x 4 laws, {len(failures)} failures, max depth {depth}, "
        f"max equations {eqs}, {secs:.1f} s < {MONOID_S:g} s"
    )
    return _record(5, "monoid and distribution laws", ok, detail)


def criterion_6() -> bool:
    rng = random.Random(6)
    bad = []
    refl = sym = trans = 0
    for t, u, v, sig in _triples():
        for x in (t, u, v):
            refl += 1
            if not _equiv(x, x, sig).equivalent:
                bad.append(("reflexivity", str(x)))
    _, yes, _ = _monoid_run()
    pairs = [(a, b, sig) for a, b, sig, _ in yes] + [(t, u, sig) for t, u, sig, r in _pair_run() if r.equivalent]
    for a, b, sig in pairs:
        sym += 1
        if not _equiv(b, a, sig).equivalent:
            bad.append(("symmetry", str(a), str(b)))
        c = corpus.equivalent_variant(rng, b, sig, 2)
        if _equiv(b, c, sig).equivalent:
            trans += 1
            if not _equiv(a, c, sig).equivalent:
                bad.append(("transitivity", str(a), str(b), str(c)))
    ok = not bad
    return _record(6, "equivalence relation", ok, f"{refl} reflexive, {sym} symmetric, {trans} transitive checks, {len(bad)} failures")


def criterion_7() -> bool:
    _, yes, _ = _monoid_run()
    reports = [r for *_, r in yes] + [r for *_, r in _pair_run() if r.equivalent]
    rng = random.Random(7)
    # pairs across kinds: a session type against a functional type using it
    for t, _, _, sig in _triples()[:200]:
        w = corpus._functional(rng, 2, list(sig))
        r = _equiv(t, Arrow(w, t), sig)
        if r.equivalent:
            reports.append(r)
    bad = [r for r in reports if r.kinds is None or r.kinds[0] is not r.kinds[1]]
    return _record(7, "kinds agree on YES pairs", not bad, f"{len(reports)} YES pairs, {len(bad)} kind mismatches")


def criterion_8() -> bool:
    contradictions = []
    counts = {"yes": 0, "no": 0, "proven": 0, "refuted": 0, "unknown": 0}
    for t, u, sig, report in _pair_run():
        eq = report.equivalent
        counts["yes" if eq else "no"] += 1
        if eq != k_bisimilar(t, u, K_BISIM, sig):
            contradictions.append(("k-bisim", str(t), str(u)))
        if eq != (distinguishing_trace(t, u, TRACE_DEPTH, sig) is None):
            contradictions.append(("trace", str(t), str(u)))
        s = syntactic_check(t, u, sig)
        key = "proven" if isinstance(s, Proven) else "refuted" if isinstance(s, Refuted) else "unknown"
        counts[key] += 1
        if (key == "proven" and not eq) or (key == "refuted" and eq):
            contradictions.append(("syntactic", str(t), str(u)))
    detail = (
        f"{len(_pair_run())} state-budgeted pairs ({counts['yes']} YES / {counts['no']} NO), k<={K_BISIM}, depth<={TRACE_DEPTH}, "
        f"syntactic {counts['proven']}/{counts['refuted']}/{counts['unknown']} proven/refuted/unknown, "
        f"{len(contradictions)} contradictions"
    )
    return _record(8, "oracle concordance", not contradictions, detail)


def criterion_9() -> bool:
    grammars = bad = 0
    sigs = {}
    for t, u, v, sig in _triples():
        sigs.setdefault(sig, []).extend([t, u, v])
    for t, u, sig in corpus.oracle_pairs(7, CORPUS_SIZE):
        sigs.setdefault(sig, []).extend([t, u])
    for sig, ts in sigs.items():
        roots = list(ts) + [Ident(x) for x in sig]
        g = to_gnf(build_grammar(roots[0], sig, also=roots[1:]))
        grammars += 1
        dump = dump_grammar(g)
        if not is_simple(g) or g.productions_of(BOTTOM) or any(line.startswith("BOT ->") for line in dump.splitlines()):
            bad += 1
    return _record(9, "grammars are simple, BOT productionless", not bad, f"{grammars} signature grammars, {bad} failures")


def criterion_10() -> bool:
    import tempfile

    problems = []
    for t in ("skip;unit", "unit;!unit"):
        code, _, err = _run_cli("kind", t)
        if code != 2 or "ill-kinded" not in err:
            problems.append(t)
    for text, expected in (("X = Y\nY = X", "NotContractive X"), ("X = skip;Y\nY = X;Y", "NotContractive X")):
        with tempfile.NamedTemporaryFile("w", suffix=".sig", delete=False) as fh:
            fh.write(text)
        code, _, err = _run_cli("check", "X", "X", "--sig", fh.name)
        Path(fh.name).unlink()
        if code != 2 or expected not in err or "NotContractive Y" not in err:
            problems.append(text)
    # the cap must never trigger on the corpus runs above
    _monoid_run()
    _pair_run()
    ok = not problems and _Tally.exhausted == 0
    detail = f"{4 - len(problems)}/4 ill-formed inputs rejected, resource cap hit {_Tally.exhausted} times in {_Tally.checks} checks"
    return _record(10, "ill-formed inputs and resource cap", ok, detail)


# -- pytest entry points -------------------------------------------------------------


def test_ac01_stream_grammar_golden():
    assert criterion_1(), LINES[-1]


def test_ac02_stream_refutation():
    assert criterion_2(), LINES[-1]


def test_ac03_input_tree_grammar_golden():
    assert criterion_3(), LINES[-1]


def test_ac04_send_not_equivalent():
    assert criterion_4(), LINES[-1]


def test_ac05_monoid_laws():
    assert criterion_5(), LINES[-1]


def test_ac06_equivalence_relation():
    assert criterion_6(), LINES[-1]


def test_ac07_kind_agreement():
    assert criterion_7(), LINES[-1]


def test_ac08_oracle_concordance():
    assert criterion_8(), LINES[-1]


def test_ac09_simple_grammars():
    assert criterion_9(), LINES[-1]


def test_ac10_ill_formed_and_cap():
    assert criterion_10(), LINES[-1]


if __name__ == "__main__":
    results = [globals()[f"criterion_{n}"]() for n in range(1, 11)]
    print("\n".join(LINES))
    sys.exit(0 if all(results) else 1)
