from concurrent.futures import ThreadPoolExecutor

from sessequiv import (
    Equivalent,
    Error,
    Ident,
    Kind,
    KindContext,
    NotEquivalent,
    decide,
    parse_signature,
    parse_type,
    type_equiv,
)

import corpus


def test_stream_pair(stream_sig):
    report = type_equiv(Ident("T"), Ident("U"), stream_sig)
    assert report.answer == "NO"
    assert [str(a) for a in report.verdict.witness] == ["!d", "+go", "+go"]
    assert report.kinds == (Kind.S, Kind.S)


def test_skip_neutral():
    sig = parse_signature("X = +{go: skip}")
    report = type_equiv(parse_type("skip;X"), Ident("X"), sig)
    assert report.answer == "YES" and report.equivalent


def test_send_pair(send_pair):
    report = type_equiv(*send_pair)
    assert report.answer == "NO"
    assert report.kinds == (Kind.T, Kind.T)


def test_kind_mismatch_is_a_no():
    report = type_equiv(parse_type("unit"), parse_type("skip"))
    assert report.answer == "NO"
    assert report.kinds == (Kind.T, Kind.S)


def test_errors_come_before_the_grammar():
    report = type_equiv(parse_type("skip;unit"), parse_type("unit"))
    assert isinstance(report.verdict, Error) and report.answer == "ERROR"
    assert report.grammar is None and report.kinds is None
    assert report.verdict.diagnostics[0].startswith("ill-kinded left type skip;unit")

    bad = parse_signature("X = Y\nY = X")
    assert type_equiv(Ident("X"), Ident("X"), bad).verdict.diagnostics == ("NotContractive X", "NotContractive Y")

    assert type_equiv(Ident("Q"), Ident("Q")).verdict.diagnostics == ("Unbound Q",)


def test_open_types():
    delta = KindContext.parse("S")
    assert type_equiv(parse_type("0;skip"), parse_type("0"), delta=delta).equivalent
    assert not type_equiv(parse_type("0;!int"), parse_type("0"), delta=delta).equivalent


def test_timings_cover_every_stage(stream_sig):
    report = type_equiv(Ident("T"), Ident("U"), stream_sig)
    assert list(report.timings) == ["validate", "kind", "grammar", "gnf", "decide"]
    assert all(v >= 0 for v in report.timings.values())


def test_concurrent_decisions_on_a_shared_grammar(stream_grammar):
    g, xt, xu = stream_grammar
    jobs = [((xt,), (xu,)), ((xt,), (xt,)), ((xu,), (xu,))] * 20
    with ThreadPoolExecutor(max_workers=6) as pool:
        results = list(pool.map(lambda p: decide(g, *p), jobs))
    for (left, right), v in zip(jobs, results):
        assert isinstance(v, Equivalent if left == right else NotEquivalent)


def test_concurrent_checks_match_sequential():
    pairs = corpus.pairs(41, 60)
    sequential = [type_equiv(t, u, sig).answer for t, u, sig in pairs]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda p: type_equiv(*p).answer, pairs))
    assert parallel == sequential
