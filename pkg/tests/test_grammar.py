import math
import random
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sessequiv import (
    BOTTOM,
    EMPTY_SIGNATURE,
    ContractivityViolation,
    Ident,
    Seq,
    Skip,
    TransitionLabel,
    Unit,
    build_grammar,
    dump_grammar,
    is_simple,
    norms,
    parse_type,
    to_gnf,
    word_step,
)
from sessequiv.grammar import canonical_productions, format_production, parse_grammar

import corpus

STREAM_GOLDEN = """\
XT -> !d XV BOT XW
XT -> !c XW
XU -> !d XV XV BOT XW
XU -> !c XW
XV -> +go
XW -> +go XW
"""

TREE_GOLDEN = """\
X -> +Node X X1 X
X -> +Leaf
X1 -> !d X2 BOT
X1 -> !c
X2 -> ?d X3 BOT
X2 -> ?c
X3 -> int
"""


def _golden(text, *starts):
    g, ids = parse_grammar(text)
    return canonical_productions(g, [ids[s] for s in starts])


def test_stream_grammar_matches_golden(stream_grammar):
    g, xt, xu = stream_grammar
    assert canonical_productions(g, [xt, xu]) == _golden(STREAM_GOLDEN, "XT", "XU")


def test_tree_grammar_matches_golden(tree_sig):
    g = to_gnf(build_grammar(Ident("InputTree"), tree_sig))
    assert canonical_productions(g, [g.start]) == _golden(TREE_GOLDEN, "X")


def test_golden_comparison_is_sensitive():
    # dropping the bottom marker gives a different grammar
    wrong = STREAM_GOLDEN.replace("XV BOT XW", "XV XW", 1)
    assert _golden(wrong, "XT", "XU") != _golden(STREAM_GOLDEN, "XT", "XU")


def test_raw_skip_grammar():
    g = build_grammar(Skip(), EMPTY_SIGNATURE)
    assert dump_grammar(g) == "X1 -> eps"
    assert g.productions_of(BOTTOM) == []


def test_skip_is_erased_by_gnf():
    g = to_gnf(build_grammar(Skip(), EMPTY_SIGNATURE))
    assert g.start in g.erased
    assert g.productions_of(g.start) == []
    assert g.start_word == ()


def test_seq_of_skip_and_unit():
    t = Seq(Skip(), Unit())
    g = to_gnf(build_grammar(t, EMPTY_SIGNATURE))
    assert [format_production(p) for p in g.productions_of(g.start)] == [f"X{g.start} -> unit"]


def test_stream_transitions(stream_grammar):
    g, xt, _ = stream_grammar
    xv, xw = g.nonterminal_for(Ident("V")), g.nonterminal_for(Ident("W"))
    assert word_step(g, (xt,))[TransitionLabel("!d")] == (xv, BOTTOM, xw)
    assert word_step(g, (BOTTOM, xw)) == {}
    assert word_step(g, ()) == {}


def test_stream_norms(stream_grammar):
    g, xt, _ = stream_grammar
    n = norms(g)
    assert n[g.nonterminal_for(Ident("V"))] == 1
    assert n[g.nonterminal_for(Ident("W"))] == math.inf
    assert n[BOTTOM] == math.inf
    assert n[xt] == math.inf


def test_is_simple():
    g, _ = parse_grammar("X -> a\nX -> a Y\nY -> b")
    assert not is_simple(g)
    empty, _ = parse_grammar("")
    assert is_simple(empty)
    nongnf, _ = parse_grammar("X -> Y a\nY -> b")
    assert not is_simple(nongnf)


def test_stream_grammar_is_simple(stream_grammar):
    assert is_simple(stream_grammar[0])


def test_left_recursion_is_rejected():
    g, ids = parse_grammar("X -> Y a\nY -> X b")
    with pytest.raises(ContractivityViolation):
        to_gnf(g)


def test_dump_names_legend(tree_sig):
    g = to_gnf(build_grammar(Ident("InputTree"), tree_sig))
    text = dump_grammar(g, names=True, starts=[g.start])
    assert f"X{g.start} = InputTree" in text
    assert "BOT = BOT" in text


def test_dump_roundtrips_through_parser(stream_grammar):
    g, xt, xu = stream_grammar
    text = dump_grammar(g, starts=[xt, xu])
    again, ids = parse_grammar(text)
    assert canonical_productions(again, [ids[f"X{xt}"], ids[f"X{xu}"]]) == canonical_productions(g, [xt, xu])


def test_payload_separated_by_bottom():
    g = to_gnf(build_grammar(parse_type("!(!int);?bool"), EMPTY_SIGNATURE))
    bodies = [p.body for p in g.productions_of(g.start)]
    data = [b for b in bodies if b[0] == TransitionLabel("!d")]
    assert len(data) == 1 and BOTTOM in data[0]


def _bfs_norm(g, x, cap=5000):
    """Shortest path from word (x,) to the empty word by brute force; None when the cap is hit."""
    seen = {(x,)}
    queue = deque([((x,), 0)])
    while queue:
        w, d = queue.popleft()
        if not w:
            return d
        for w2 in word_step(g, w).values():
            if w2 not in seen:
                if len(seen) >= cap:
                    return None
                seen.add(w2)
                queue.append((w2, d + 1))
    return math.inf


@given(st.integers(0, 100_000))
@settings(max_examples=120, deadline=None)
def test_generated_grammars_are_simple_with_correct_norms(seed):
    c = corpus.case(random.Random(seed))
    g = to_gnf(build_grammar(c.t, c.sig))
    assert is_simple(g)
    assert g.productions_of(BOTTOM) == []
    n = norms(g)
    for x in g.reachable([g.start]):
        if x in g.erased:
            continue
        expected = _bfs_norm(g, x)
        if expected is not None:
            assert n[x] == expected
