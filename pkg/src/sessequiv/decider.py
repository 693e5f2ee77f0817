"""Bisimilarity of words in a simple grammar.

Plain word bisimilarity treats every stuck word alike, so the empty word and
a word headed by a productionless symbol are equivalent. That relation is
not a congruence for concatenation, which the search below relies on. We
therefore decide the completion-sensitive relation (where the empty word is
distinguished) on ``left BOT`` against ``right BOT``. A word ending in BOT never
becomes empty, so both relations agree on such words, and they agree with
plain bisimilarity of ``left`` and ``right``.

The search is a Korenjak-Hopcroft style expansion specialised to
deterministic grammars:

* words are cut after their first unnormed symbol (nothing beyond it is
  ever reached);
* common prefixes and common normed suffixes cancel;
* a pair ``X a`` / ``Y b`` with ``norm X <= norm Y`` splits at X's canonical
  terminating trace ``w``: with ``Y -w-> g`` it reduces to ``a`` / ``g b``
  and ``X g`` / ``Y``;
* otherwise the pair is assumed and its successors are compared.

Negative answers are unconditional and memoised; positive answers may rest
on assumptions and are rolled back when a branch fails. The assumed pairs
of a successful run form the certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from . import kernel
from ._stack import run_deep
from .grammar import BOTTOM, Grammar, is_simple
from .lts import TransitionLabel

Word = Tuple[int, ...]
Pair = Tuple[Word, Word]

DEFAULT_MAX_PAIRS = 1_000_000
# canonical terminating traces longer than this are not materialised
MAX_TRACE = 1_000_000


class InputNotSimple(ValueError):
    """The grammar is not simple (not GNF, or a repeated (head, terminal) pair)."""


class ResourceExhausted(RuntimeError):
    """The search exceeded its pair budget; no verdict is claimed."""


@dataclass(frozen=True)
class Certificate:
    """Pairs assumed equivalent by the search, over representative nonterminals.

    Together with the cancellation and splitting rules these pairs close the
    start pair under single steps; :func:`verify_certificate` replays that.
    """

    pairs: Tuple[Pair, ...]
    representatives: Tuple[int, ...]

    def format(self) -> str:
        def word(w: Word) -> str:
            return " ".join("BOT" if x == BOTTOM else f"X{x}" for x in w) or "eps"

        return "\n".join(f"{word(a)}  ~  {word(b)}" for a, b in self.pairs)


@dataclass(frozen=True)
class Equivalent:
    certificate: Certificate


@dataclass(frozen=True)
class NotEquivalent:
    witness: Tuple[TransitionLabel, ...]


BisimVerdict = Union[Equivalent, NotEquivalent]


def _representatives(table: Sequence[Tuple[Tuple[int, Word], ...]]) -> List[int]:
    """Coarsest partition of nonterminals with identical productions up to the partition.

    Members of one block are bisimilar; each maps to its least member.
    """
    n = len(table)
    cls = [0] * n
    count = -1
    while True:
        sigs: Dict[tuple, int] = {}
        new = []
        for x in range(n):
            sig = (cls[x], tuple((a, tuple(cls[y] for y in tail)) for a, tail in table[x]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        count = len(sigs)
        cls = new
    first: Dict[int, int] = {}
    for x in range(n):
        first.setdefault(cls[x], x)
    return [first[cls[x]] for x in range(n)]


class _Machine:
    """Integer-coded view of a simple grammar shared by the search and the verifier."""

    def __init__(self, g: Grammar) -> None:
        if not is_simple(g):
            raise InputNotSimple("grammar is not simple")
        self.labels: List[TransitionLabel] = sorted(g.terminals)
        ids = {a: i for i, a in enumerate(self.labels)}
        raw = tuple(tuple((ids[a], tail) for a, tail in row) for row in g.table())
        self.rep = _representatives(raw)
        rep = self.rep
        self.table = tuple(tuple((a, tuple(rep[y] for y in tail)) for a, tail in raw[x]) for x in range(len(raw)))
        self.norm = [math.inf if v < 0 else v for v in kernel.norms([[t for _, t in row] for row in self.table])]
        self.unnormed = [v == math.inf for v in self.norm]
        self.rows = [dict(row) for row in self.table]
        self._trace: Dict[int, Tuple[int, ...]] = {}

    def word(self, w: Sequence[int]) -> Word:
        return tuple(self.rep[x] for x in w)

    def cut(self, w: Word) -> Word:
        un = self.unnormed
        for i, x in enumerate(w):
            if un[x]:
                return w[: i + 1]
        return w

    def wnorm(self, w: Word) -> float:
        return sum(self.norm[x] for x in w)

    def stuck(self, x: int) -> bool:
        return not self.table[x]

    def canonical_trace(self, x: int) -> Tuple[int, ...]:
        """Lexicographically least among the shortest traces taking ``x`` to the empty word."""
        hit = self._trace.get(x)
        if hit is not None:
            return hit
        if self.norm[x] > MAX_TRACE:
            raise ResourceExhausted(f"terminating trace of X{x} is too long to materialise")
        best = None
        for a, tail in self.table[x]:
            if 1 + self.wnorm(tail) == self.norm[x]:
                best = (a, tail)
                break  # rows are sorted by label
        assert best is not None, "normed nonterminal without a norm-realising production"
        out: Tuple[int, ...] = (best[0],)
        for y in best[1]:
            out += self.canonical_trace(y)
        self._trace[x] = out
        return out

    def residual(self, w: Word, trace: Sequence[int]) -> Optional[Word]:
        for a in trace:
            if not w:
                return None
            tail = self.rows[w[0]].get(a)
            if tail is None:
                return None
            w = tail + w[1:]
        return w

    def moves(self, w: Word) -> Tuple[Tuple[int, Word], ...]:
        if not w:
            return ()
        rest = w[1:]
        return tuple((a, self.cut(tail + rest)) for a, tail in self.table[w[0]])

    def simplify(self, a: Word, b: Word) -> Pair:
        """Cut unreachable tails, then cancel common prefix and common normed suffix."""
        a, b = self.cut(a), self.cut(b)
        i = 0
        while i < len(a) and i < len(b) and a[i] == b[i]:
            i += 1
        a, b = a[i:], b[i:]
        while a and b and a[-1] == b[-1] and not self.unnormed[a[-1]]:
            a, b = a[:-1], b[:-1]
        return a, b


class _Search:
    def __init__(self, m: _Machine, max_pairs: int) -> None:
        self.m = m
        self.max_pairs = max_pairs
        self.steps = 0
        self.assumed: Set[Pair] = set()
        self.log: List[Pair] = []
        self.failed: Set[Pair] = set()
        self.active: Set[Pair] = set()

    def _rollback(self, mark: int) -> None:
        while len(self.log) > mark:
            self.assumed.discard(self.log.pop())

    def _fail(self, a: Word, b: Word) -> bool:
        self.failed.add((a, b))
        self.failed.add((b, a))
        return False

    def eq(self, a: Word, b: Word) -> bool:
        self.steps += 1
        if self.steps > self.max_pairs:
            raise ResourceExhausted(f"more than {self.max_pairs} pairs examined")
        m = self.m
        a, b = m.simplify(a, b)
        if a == b:
            return True
        if (a, b) in self.assumed or (b, a) in self.assumed:
            return True
        if (a, b) in self.failed:
            return False
        if m.wnorm(a) != m.wnorm(b):
            return self._fail(a, b)
        # equal norms and a != b: both words are nonempty
        if m.stuck(a[0]) and m.stuck(b[0]):
            return True
        if m.norm[a[0]] > m.norm[b[0]]:
            a, b = b, a
        if (a, b) in self.active or (b, a) in self.active:
            # splitting came back to this pair without progress; expand it instead
            return self.expand(a, b)
        x, y = a[0], b[0]
        if m.norm[x] == math.inf:
            return self.expand(a, b)
        gamma = m.residual((y,), m.canonical_trace(x))
        if gamma is None:
            return self._fail(a, b)
        alpha, beta = a[1:], b[1:]
        if alpha == gamma and not beta:
            return self.expand(a, b)

        self.active.add((a, b))
        try:
            mark = len(self.log)
            if not self.eq(alpha, gamma + beta):
                self._rollback(mark)
                return self._fail(a, b)
            mark2 = len(self.log)
            if self.eq((x,) + gamma, (y,)):
                return True
            self._rollback(mark2)
            if m.wnorm(beta) != math.inf:
                # b's tail is normed: right cancellation makes the split exact
                self._rollback(mark)
                return self._fail(a, b)
            return self.expand(a, b)
        finally:
            self.active.discard((a, b))

    def expand(self, a: Word, b: Word) -> bool:
        m = self.m
        ma, mb = m.moves(a), m.moves(b)
        if [l for l, _ in ma] != [l for l, _ in mb]:
            return self._fail(a, b)
        mark = len(self.log)
        self.assumed.add((a, b))
        self.log.append((a, b))
        for (_, a2), (_, b2) in zip(ma, mb):
            if not self.eq(a2, b2):
                self._rollback(mark)
                return self._fail(a, b)
        return True


def _witness(m: _Machine, left: Word, right: Word, max_pairs: int) -> Tuple[TransitionLabel, ...]:
    status, trace = kernel.distinguish(m.table, left, right, -1, max_pairs, m.unnormed)
    if status == kernel.EXHAUSTED:
        raise ResourceExhausted("no distinguishing trace found within the pair budget")
    if status != kernel.FOUND:
        raise AssertionError("search refuted a pair whose reachable pairs never disagree")
    return tuple(m.labels[i] for i in trace)


def decide(g: Grammar, left: Sequence[int], right: Sequence[int], max_pairs: int = DEFAULT_MAX_PAIRS) -> BisimVerdict:
    """Decide whether words ``left`` and ``right`` are bisimilar in ``g``.

    Raises :class:`InputNotSimple` for grammars that are not simple and
    :class:`ResourceExhausted` when ``max_pairs`` is exceeded.
    """
    m = _Machine(g)
    a, b = m.word(left), m.word(right)
    cert = Certificate((), tuple(m.rep))
    if a == b:
        return Equivalent(cert)
    if a and b and m.stuck(a[0]) and m.stuck(b[0]):
        return Equivalent(cert)
    la = [l for l, _ in m.moves(a)]
    if la != [l for l, _ in m.moves(b)]:
        return NotEquivalent(_witness(m, a, b, max_pairs))
    search = _Search(m, max_pairs)
    if run_deep(search.eq, a + (m.rep[BOTTOM],), b + (m.rep[BOTTOM],)):
        return Equivalent(Certificate(tuple(search.log), tuple(m.rep)))
    return NotEquivalent(_witness(m, a, b, max_pairs))


def bisimilar(g: Grammar, left: Sequence[int], right: Sequence[int], max_pairs: int = DEFAULT_MAX_PAIRS) -> bool:
    return isinstance(decide(g, left, right, max_pairs), Equivalent)


def verify_certificate(g: Grammar, cert: Certificate, left: Sequence[int], right: Sequence[int]) -> bool:
    """Check that ``cert`` proves ``left`` and ``right`` bisimilar.

    Every certificate pair must enable the same labels with successors that
    follow from the certificate by cancellation and splitting alone.
    """
    m = _Machine(g)
    if tuple(m.rep) != cert.representatives:
        return False
    rel = set(cert.pairs)
    active: Set[Pair] = set()

    def closed(a: Word, b: Word) -> bool:
        a, b = m.simplify(a, b)
        if a == b or (a, b) in rel or (b, a) in rel:
            return True
        if m.wnorm(a) != m.wnorm(b):
            return False
        if m.stuck(a[0]) and m.stuck(b[0]):
            return True
        if m.norm[a[0]] > m.norm[b[0]]:
            a, b = b, a
        if (a, b) in active or (b, a) in active:
            return False
        x, y = a[0], b[0]
        if m.norm[x] == math.inf:
            return False
        gamma = m.residual((y,), m.canonical_trace(x))
        if gamma is None:
            return False
        active.add((a, b))
        try:
            return closed(a[1:], gamma + b[1:]) and closed((x,) + gamma, (y,))
        finally:
            active.discard((a, b))

    def check() -> bool:
        for a, b in cert.pairs:
            ma, mb = m.moves(a), m.moves(b)
            if [l for l, _ in ma] != [l for l, _ in mb]:
                return False
            if not all(closed(a2, b2) for (_, a2), (_, b2) in zip(ma, mb)):
                return False
        a, b = m.word(left), m.word(right)
        if a and b and m.stuck(a[0]) and m.stuck(b[0]):
            return True
        return closed(a + (m.rep[BOTTOM],), b + (m.rep[BOTTOM],))

    return run_deep(check)


def bounded_word_bisim(g: Grammar, left: Sequence[int], right: Sequence[int], k: int) -> bool:
    """k-step approximant of word bisimilarity by direct unrolling of :func:`word_step`."""
    if k < 0:
        raise ValueError("k must be non-negative")
    labels = sorted(g.terminals)
    ids = {a: i for i, a in enumerate(labels)}
    table = tuple(tuple((ids[a], tail) for a, tail in row) for row in g.table())
    return kernel.bounded(table, tuple(left), tuple(right), k, [False] * len(table))


def word_distinguishing_trace(
    g: Grammar, left: Sequence[int], right: Sequence[int], max_depth: int, max_pairs: int = DEFAULT_MAX_PAIRS
) -> Optional[List[TransitionLabel]]:
    """Shortest (then least) trace of length <= max_depth separating two words, or None."""
    labels = sorted(g.terminals)
    ids = {a: i for i, a in enumerate(labels)}
    table = tuple(tuple((ids[a], tail) for a, tail in row) for row in g.table())
    status, trace = kernel.distinguish(table, tuple(left), tuple(right), max_depth, max_pairs, [False] * len(table))
    if status == kernel.EXHAUSTED:
        raise ResourceExhausted("pair budget exceeded")
    return [labels[i] for i in trace] if status == kernel.FOUND else None


__all__ = [
    "BisimVerdict",
    "Certificate",
    "Equivalent",
    "InputNotSimple",
    "NotEquivalent",
    "ResourceExhausted",
    "bisimilar",
    "bounded_word_bisim",
    "decide",
    "verify_certificate",
    "word_distinguishing_trace",
]
