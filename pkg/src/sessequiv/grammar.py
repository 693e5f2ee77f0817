"""Translation of types to grammars, Greibach normal form, simple grammars.

Nonterminals are small integers. Index 0 is the bottom symbol, which never
has productions; the others stand for subterms of the translated types and
of the signature's right-hand sides, numbered in first-traversal order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from . import kernel
from .lts import ARROW_D, ARROW_R, MSG_LABELS, UNIT_L, TransitionLabel
from .types import (
    Arrow,
    Base,
    Choice,
    Ident,
    Index,
    Labeled,
    Message,
    Quant,
    Seq,
    Signature,
    Skip,
    TypeExpr,
    Unit,
    iter_nodes,
)

BOTTOM = 0

Symbol = Union[TransitionLabel, int]
Word = Tuple[int, ...]


@dataclass(frozen=True)
class Nonterminal:
    """Origin of a nonterminal: the subterm it stands for, or None for bottom."""

    subterm: Optional[TypeExpr]

    @property
    def is_bottom(self) -> bool:
        return self.subterm is None

    def __str__(self) -> str:
        return "BOT" if self.subterm is None else str(self.subterm)


@dataclass(frozen=True)
class Production:
    head: int
    body: Tuple[Symbol, ...]

    @property
    def terminal(self) -> Optional[TransitionLabel]:
        if self.body and isinstance(self.body[0], TransitionLabel):
            return self.body[0]
        return None

    @property
    def is_gnf(self) -> bool:
        return (
            bool(self.body)
            and isinstance(self.body[0], TransitionLabel)
            and all(isinstance(s, int) for s in self.body[1:])
        )


class ContractivityViolation(ValueError):
    """A chain of leading nonterminals loops back on itself."""


class Grammar:
    """Terminals, nonterminals, a start symbol and productions.

    ``erased`` records nonterminals removed by epsilon elimination; they stand
    for the empty word and never occur in bodies of a converted grammar.
    """

    def __init__(
        self,
        nonterminals: Sequence[Nonterminal],
        start: int,
        productions: Iterable[Production],
        erased: Iterable[int] = (),
    ) -> None:
        self.nonterminals: Tuple[Nonterminal, ...] = tuple(nonterminals)
        if not self.nonterminals or not self.nonterminals[BOTTOM].is_bottom:
            raise ValueError("nonterminal 0 must be bottom")
        self.start = start
        seen: Set[Production] = set()
        prods: List[Production] = []
        for p in productions:
            if p not in seen:
                seen.add(p)
                prods.append(p)
        self.productions: Tuple[Production, ...] = tuple(
            sorted(prods, key=lambda p: (p.head, [str(s) if isinstance(s, TransitionLabel) else f"~{s:09d}" for s in p.body]))
        )
        self.erased = frozenset(erased)
        self._by_head: Optional[Dict[int, List[Production]]] = None
        self._index: Optional[Dict[TypeExpr, int]] = None
        self._table = None
        self._norms = None
        n = len(self.nonterminals)
        for p in self.productions:
            for s in (p.head, *p.body):
                if isinstance(s, int) and not 0 <= s < n:
                    raise ValueError(f"production {p} mentions unknown nonterminal {s}")

    # -- lookup --------------------------------------------------------------

    @property
    def terminals(self) -> Set[TransitionLabel]:
        return {s for p in self.productions for s in p.body if isinstance(s, TransitionLabel)}

    def productions_of(self, nt: int) -> List[Production]:
        if self._by_head is None:
            by: Dict[int, List[Production]] = {}
            for p in self.productions:
                by.setdefault(p.head, []).append(p)
            self._by_head = by
        return self._by_head.get(nt, [])

    def nonterminal_for(self, t: TypeExpr) -> int:
        """The nonterminal standing for subterm ``t``."""
        if self._index is None:
            self._index = {nt.subterm: i for i, nt in enumerate(self.nonterminals) if nt.subterm is not None}
        return self._index[t]

    def word(self, symbols: Iterable[int]) -> Word:
        """Drop erased nonterminals; the result is a state of the word LTS."""
        return tuple(s for s in symbols if s not in self.erased)

    def word_for(self, t: TypeExpr) -> Word:
        return self.word((self.nonterminal_for(t),))

    @property
    def start_word(self) -> Word:
        return self.word((self.start,))

    def table(self) -> Tuple[Tuple[Tuple[TransitionLabel, Word], ...], ...]:
        """Per-nonterminal ``(terminal, tail)`` pairs sorted by terminal.

        Only meaningful for grammars in Greibach normal form.
        """
        if self._table is None:
            rows: List[List[Tuple[TransitionLabel, Word]]] = [[] for _ in self.nonterminals]
            for p in self.productions:
                if not p.is_gnf:
                    raise ValueError(f"production not in Greibach normal form: {format_production(p)}")
                rows[p.head].append((p.body[0], p.body[1:]))  # type: ignore[arg-type]
            self._table = tuple(tuple(sorted(r, key=lambda e: e[0])) for r in rows)
        return self._table

    def is_gnf(self) -> bool:
        return all(p.is_gnf for p in self.productions)

    # -- derived grammars -----------------------------------------------------

    def with_start(self, start: int) -> "Grammar":
        return Grammar(self.nonterminals, start, self.productions, self.erased)

    def reachable(self, starts: Iterable[int]) -> List[int]:
        order: List[int] = []
        seen: Set[int] = set()
        stack = list(reversed(list(starts)))
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            order.append(x)
            for p in self.productions_of(x):
                stack.extend(reversed([s for s in p.body if isinstance(s, int)]))
        return order

    def trim(self, starts: Iterable[int] | None = None) -> "Grammar":
        """Keep only productions of nonterminals reachable from ``starts``."""
        keep = set(self.reachable([self.start] if starts is None else starts))
        return Grammar(self.nonterminals, self.start, [p for p in self.productions if p.head in keep], self.erased)

    def dump(self, names: bool = False, starts: Iterable[int] | None = None) -> str:
        return dump_grammar(self, names=names, starts=starts)

    def __repr__(self) -> str:
        return f"Grammar({len(self.nonterminals)} nonterminals, {len(self.productions)} productions, start=X{self.start})"


# -- raw grammar --------------------------------------------------------------------


def _raw_bodies(u: TypeExpr, nt, sig: Signature) -> List[Tuple[Symbol, ...]]:
    if isinstance(u, Unit):
        return [(UNIT_L,)]
    if isinstance(u, Base):
        return [(TransitionLabel(u.name),)]
    if isinstance(u, Arrow):
        return [(ARROW_D, nt(u.domain)), (ARROW_R, nt(u.range))]
    if isinstance(u, Labeled):
        return [(TransitionLabel.field(u.shape, lbl), nt(b)) for lbl, b in u.branches]
    if isinstance(u, Quant):
        return [(TransitionLabel.quant(u.quantifier, u.kind), nt(u.body))]
    if isinstance(u, Skip):
        return [()]
    if isinstance(u, Message):
        data, cont = MSG_LABELS[u.polarity]
        return [(data, nt(u.payload), BOTTOM), (cont,)]
    if isinstance(u, Choice):
        return [(TransitionLabel(u.view.value + lbl), nt(b)) for lbl, b in u.branches]
    if isinstance(u, Seq):
        return [(nt(u.first), nt(u.second))]
    if isinstance(u, Index):
        return [(TransitionLabel(str(u.n)),)]
    if isinstance(u, Ident):
        return [(nt(sig.lookup(u.name)),)]
    raise TypeError(f"not a type: {u!r}")


def build_grammar(t: TypeExpr, sig: Signature, also: Sequence[TypeExpr] = ()) -> Grammar:
    """The raw grammar of ``t`` (and of every type in ``also``) over ``sig``.

    One nonterminal per subterm of the given types and of every equation's
    right-hand side, plus bottom; the start symbol stands for ``t``.
    """
    index: Dict[TypeExpr, int] = {}
    nts: List[Nonterminal] = [Nonterminal(None)]

    def visit(root: TypeExpr) -> None:
        for node in iter_nodes(root):
            if node not in index:
                index[node] = len(nts)
                nts.append(Nonterminal(node))

    for root in (t, *also):
        visit(root)
    for body in sig.values():
        visit(body)
    for node in list(index):
        if isinstance(node, Ident):
            sig.lookup(node.name)  # unbound identifiers fail here

    nt = index.__getitem__
    prods = [Production(i, body) for node, i in index.items() for body in _raw_bodies(node, nt, sig)]
    return Grammar(nts, index[t], prods)


# -- Greibach normal form ------------------------------------------------------------


def to_gnf(g: Grammar) -> Grammar:
    """Convert a raw grammar to Greibach normal form.

    1. epsilon elimination: nonterminals whose only production derives the
       empty word are removed and erased from every body;
    2. nonterminals standing for a ``;`` subterm are unfolded in place, so a
       body shows the concatenation rather than a fresh symbol;
    3. a production ``X -> Y g`` is replaced by ``X -> s g`` for every
       ``Y -> s``, until every body starts with a terminal.
    """
    by_head: Dict[int, List[Tuple[Symbol, ...]]] = {}
    for p in g.productions:
        by_head.setdefault(p.head, []).append(p.body)

    erasable: Set[int] = set(g.erased)
    changed = True
    while changed:
        changed = False
        for x, bodies in by_head.items():
            if x in erasable:
                continue
            if any(all(isinstance(s, int) and s in erasable for s in b) for b in bodies):
                if len(bodies) != 1:
                    raise ValueError(f"X{x} derives the empty word but has other productions")
                erasable.add(x)
                changed = True

    bodies_of: Dict[int, List[Tuple[Symbol, ...]]] = {
        x: [tuple(s for s in b if not (isinstance(s, int) and s in erasable)) for b in bodies]
        for x, bodies in by_head.items()
        if x not in erasable
    }

    expanded: Dict[int, Tuple[int, ...]] = {}

    def expand(x: int) -> Tuple[int, ...]:
        hit = expanded.get(x)
        if hit is not None:
            return hit
        origin = g.nonterminals[x].subterm
        bodies = bodies_of.get(x, [])
        if isinstance(origin, Seq) and len(bodies) == 1 and all(isinstance(s, int) for s in bodies[0]):
            # components are strictly smaller subterms, so this recursion is finite
            out: Tuple[int, ...] = ()
            for s in bodies[0]:
                out += expand(s)  # type: ignore[arg-type]
        else:
            out = (x,)
        expanded[x] = out
        return out

    def expand_body(b: Tuple[Symbol, ...]) -> Tuple[Symbol, ...]:
        out: List[Symbol] = []
        for s in b:
            if isinstance(s, int):
                out.extend(expand(s))
            else:
                out.append(s)
        return tuple(out)

    bodies_of = {x: [expand_body(b) for b in bodies] for x, bodies in bodies_of.items()}

    done: Dict[int, List[Tuple[Symbol, ...]]] = {}
    in_progress: Set[int] = set()

    def gnf(x: int) -> List[Tuple[Symbol, ...]]:
        hit = done.get(x)
        if hit is not None:
            return hit
        if x in in_progress:
            raise ContractivityViolation(f"X{x} reaches itself through leading nonterminals")
        in_progress.add(x)
        out: List[Tuple[Symbol, ...]] = []
        for b in bodies_of.get(x, []):
            if not b:
                raise ValueError(f"X{x} has an empty production next to others")
            if isinstance(b[0], TransitionLabel):
                out.append(b)
            else:
                for sigma in gnf(b[0]):
                    out.append(sigma + b[1:])
        in_progress.discard(x)
        done[x] = out
        return out

    prods = [Production(x, b) for x in sorted(bodies_of) for b in gnf(x)]
    return Grammar(g.nonterminals, g.start, prods, erasable)


def is_simple(g: Grammar) -> bool:
    """GNF and at most one production per (nonterminal, terminal) pair."""
    seen: Set[Tuple[int, TransitionLabel]] = set()
    for p in g.productions:
        if not p.is_gnf:
            return False
        key = (p.head, p.body[0])
        if key in seen:
            return False
        seen.add(key)  # type: ignore[arg-type]
    return True


def word_step(g: Grammar, w: Sequence[int]) -> Dict[TransitionLabel, Word]:
    """Transitions of word ``w``: ``X d -a-> g d`` for each production ``X -> a g``."""
    if not w:
        return {}
    rest = tuple(w[1:])
    return {a: tail + rest for a, tail in g.table()[w[0]]}


def norms(g: Grammar) -> Dict[int, float]:
    """Length of a shortest terminal word driving each nonterminal to the empty word.

    ``math.inf`` when no such word exists; bottom is always unnormed and
    erased nonterminals have norm 0.
    """
    if g._norms is None:
        g._norms = kernel.norms([[tail for _, tail in row] for row in g.table()])
    result = {i: (math.inf if v < 0 else v) for i, v in enumerate(g._norms)}
    for x in g.erased:
        result[x] = 0
    return result


# -- text formats -----------------------------------------------------------------


def _sym(s: Symbol) -> str:
    if isinstance(s, TransitionLabel):
        return str(s)
    return "BOT" if s == BOTTOM else f"X{s}"


def format_production(p: Production) -> str:
    body = " ".join(_sym(s) for s in p.body) if p.body else "eps"
    return f"{_sym(p.head)} -> {body}"


def dump_grammar(g: Grammar, names: bool = False, starts: Iterable[int] | None = None) -> str:
    """One production per line, sorted by (head index, terminal).

    With ``starts`` only productions reachable from those nonterminals are
    listed. ``names`` appends a legend mapping nonterminals to subterms.
    """
    prods = g.productions
    if starts is not None:
        keep = set(g.reachable(starts))
        prods = tuple(p for p in prods if p.head in keep)
    lines = [format_production(p) for p in prods]
    if names:
        heads = sorted({p.head for p in prods} | {s for p in prods for s in p.body if isinstance(s, int)})
        lines.append("")
        lines.extend(f"{_sym(x)} = {g.nonterminals[x]}" for x in heads)
    return "\n".join(lines)


def parse_grammar(text: str, start: Optional[str] = None) -> Tuple[Grammar, Dict[str, int]]:
    """Read productions written as ``X -> a Y Z`` (``BOT`` is bottom, ``eps`` empty).

    Any whitespace-free token that heads a production is a nonterminal; the
    rest are terminals. Returns the grammar and the name-to-index map.
    """
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise ValueError(f"missing '->' in {line!r}")
        rows.append((lhs.strip(), rhs.split()))
    ids: Dict[str, int] = {"BOT": BOTTOM}
    for head, _ in rows:
        ids.setdefault(head, len(ids))
    for _, body in rows:
        for tok in body:
            if tok not in ids and tok != "eps" and tok[:1].isupper() and tok[1:].replace("_", "").isalnum():
                ids.setdefault(tok, len(ids))
    prods = []
    for head, body in rows:
        syms: List[Symbol] = [ids[tok] if tok in ids else TransitionLabel(tok) for tok in body if tok != "eps"]
        prods.append(Production(ids[head], tuple(syms)))
    nts = [Nonterminal(None)] + [Nonterminal(Ident(name)) for name in list(ids)[1:]]
    s = ids[start] if start is not None else (ids[rows[0][0]] if rows else BOTTOM)
    return Grammar(nts, s, prods), ids


def canonical_productions(g: Grammar, starts: Sequence[int]) -> List[str]:
    """Productions reachable from ``starts`` with nonterminals renamed by discovery order.

    Two simple grammars have equal results exactly when they coincide up to
    a renaming of nonterminals that maps the start symbols in order.
    """
    names: Dict[int, str] = {BOTTOM: "BOT"}
    order: List[int] = []

    def name(x: int) -> str:
        if x not in names:
            names[x] = f"N{len(order)}"
            order.append(x)
        return names[x]

    for s in starts:
        name(s)
    out = []
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for p in sorted(g.productions_of(x), key=lambda p: [str(s) for s in p.body if isinstance(s, TransitionLabel)]):
            body = [str(s) if isinstance(s, TransitionLabel) else name(s) for s in p.body]
            out.append(f"{names[x]} -> {' '.join(body) if body else 'eps'}")
    return out


__all__ = [
    "BOTTOM",
    "ContractivityViolation",
    "Grammar",
    "Nonterminal",
    "Production",
    "build_grammar",
    "canonical_productions",
    "dump_grammar",
    "format_production",
    "is_simple",
    "norms",
    "parse_grammar",
    "to_gnf",
    "word_step",
]
