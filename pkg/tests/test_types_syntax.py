import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sessequiv import (
    Arrow,
    Base,
    Choice,
    DuplicateIdent,
    Ident,
    Index,
    Kind,
    KindContext,
    Labeled,
    Message,
    ParseError,
    Polarity,
    Quant,
    Quantifier,
    Seq,
    Shape,
    Signature,
    Skip,
    Unit,
    View,
    parse_signature,
    parse_type,
    pretty,
)
from sessequiv.types import free_index_bound, identifiers, seq_of

from conftest import STREAM_SIG

labels = st.sampled_from(["a", "b", "go", "Node", "Leaf"])
leaves = st.one_of(
    st.just(Unit()),
    st.just(Skip()),
    st.sampled_from(["int", "bool", "char"]).map(Base),
    st.sampled_from(["X", "Y", "InputTree"]).map(Ident),
    st.integers(0, 3).map(Index),
)


def _branches(children):
    return st.dictionaries(labels, children, min_size=1, max_size=3).map(lambda d: tuple(d.items()))


types = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(Arrow, kids, kids),
        st.builds(Seq, kids, kids),
        st.builds(Message, st.sampled_from(list(Polarity)), kids),
        st.builds(Choice, st.sampled_from(list(View)), _branches(kids)),
        st.builds(Labeled, st.sampled_from(list(Shape)), _branches(kids)),
        st.builds(Quant, st.sampled_from(list(Quantifier)), st.sampled_from(list(Kind)), kids),
    ),
    max_leaves=12,
)


@given(types)
@settings(max_examples=400, deadline=None)
def test_pretty_parse_roundtrip(t):
    assert parse_type(pretty(t)) == t


@given(types)
@settings(max_examples=200, deadline=None)
def test_equal_nodes_hash_equal(t):
    again = parse_type(pretty(t))
    assert hash(again) == hash(t)


def test_parse_atoms():
    assert parse_type("skip") == Skip()
    assert parse_type("unit") == Unit()
    assert parse_type("int") == Base("int")
    assert parse_type("X") == Ident("X")
    assert parse_type("2") == Index(2)


def test_prefix_binds_tighter_than_seq():
    expected = Seq(Message(Polarity.OUT, Message(Polarity.IN, Base("int"))), Message(Polarity.IN, Base("int")))
    assert parse_type("!?int;?int") == expected
    assert parse_type("!(?int);?int") == expected


def test_send_type_shape():
    t = parse_type("all[T] 0 -> all[S] !1;0 -> 0")
    inner = Quant(Quantifier.FORALL, Kind.S, Arrow(Seq(Message(Polarity.OUT, Index(1)), Index(0)), Index(0)))
    assert t == Quant(Quantifier.FORALL, Kind.T, Arrow(Index(0), inner))


def test_arrow_right_assoc_seq_left_assoc():
    assert parse_type("a -> b -> c") == Arrow(Base("a"), Arrow(Base("b"), Base("c")))
    assert parse_type("A;B;C") == Seq(Seq(Ident("A"), Ident("B")), Ident("C"))


def test_branches_are_canonical():
    a = Choice(View.INTERNAL, (("b", Skip()), ("a", Unit())))
    b = parse_type("+{a: unit, b: skip}")
    assert a == b
    assert [lbl for lbl, _ in a.branches] == ["a", "b"]


@pytest.mark.parametrize("bad", [(), (("a", Skip()), ("a", Unit()))])
def test_bad_branch_maps(bad):
    with pytest.raises(ValueError):
        Choice(View.EXTERNAL, bad)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        Index(-1)


def test_duplicate_label_in_source():
    with pytest.raises(ParseError, match="duplicate label"):
        parse_type("&{a: skip, a: skip}")


@pytest.mark.parametrize("text", ["", "skip;", "+{}", "all[K] unit", "(skip", "unit unit"])
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError) as exc:
        parse_type(text)
    assert exc.value.line == 1 and exc.value.column >= 1


def test_signature_parsing():
    assert parse_signature("X = skip") == Signature({"X": Skip()})
    sig = parse_signature(STREAM_SIG)
    assert list(sig) == ["T", "U", "V", "W"]
    assert sig["U"] == Seq(Message(Polarity.OUT, Seq(Ident("V"), Ident("V"))), Ident("W"))


def test_signature_comments_and_blank_lines():
    sig = parse_signature("# header\n\nX = skip  # trailing\n")
    assert dict(sig) == {"X": Skip()}


def test_duplicate_equation():
    with pytest.raises(DuplicateIdent):
        parse_signature("X = skip\nX = skip")


def test_kind_context():
    ctx = KindContext.parse("S,T")
    assert ctx.lookup(0) is Kind.S and ctx.lookup(1) is Kind.T and ctx.lookup(2) is None
    assert ctx.push(Kind.T).lookup(0) is Kind.T
    assert ctx.push(Kind.T).lookup(1) is Kind.S


def test_helpers():
    t = parse_type("all[S] 0;X;1 -> Y")
    assert identifiers(t) == {"X", "Y"}
    assert free_index_bound(t) == 1
    assert seq_of() == Skip()
    assert seq_of(Unit(), Skip(), Unit()) == Seq(Seq(Unit(), Skip()), Unit())
