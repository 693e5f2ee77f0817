"""Labelled transition system over types, and bounded bisimulation oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .types import (
    SKIP,
    Arrow,
    Base,
    Choice,
    Ident,
    Index,
    Kind,
    Labeled,
    Message,
    Polarity,
    Quant,
    Quantifier,
    Seq,
    Shape,
    Signature,
    Skip,
    TypeExpr,
    Unit,
    View,
)


@dataclass(frozen=True, order=True)
class TransitionLabel:
    """A transition label, identified by its ASCII rendering.

    The rendering is injective over the label alphabet, so equality and the
    total order used for tie-breaking both go through ``text``.
    """

    text: str

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"TransitionLabel({self.text!r})"

    def math(self) -> str:
        """Render in the mathematical notation (``→d``, ``⊕go``, ``∀S`` ...)."""
        t = self.text
        if t.startswith("->"):
            return "→" + t[2:]
        if t.startswith("+"):
            return "⊕" + t[1:]
        if t.startswith("{}"):
            return "()" + t[2:]
        if t.startswith("all["):
            return "∀" + t[4]
        if t.startswith("ex["):
            return "∃" + t[3]
        return t

    # constructors, one per label form
    @staticmethod
    def unit() -> "TransitionLabel":
        return UNIT_L

    @staticmethod
    def base(name: str) -> "TransitionLabel":
        return TransitionLabel(name)

    @staticmethod
    def arrow_domain() -> "TransitionLabel":
        return ARROW_D

    @staticmethod
    def arrow_range() -> "TransitionLabel":
        return ARROW_R

    @staticmethod
    def field(shape: Shape, label: str) -> "TransitionLabel":
        return TransitionLabel(("{}" if shape is Shape.RECORD else "<>") + label)

    @staticmethod
    def quant(q: Quantifier, kind: Kind) -> "TransitionLabel":
        return TransitionLabel(f"{q.value}[{kind.value}]")

    @staticmethod
    def data(p: Polarity) -> "TransitionLabel":
        return MSG_LABELS[p][0]

    @staticmethod
    def cont(p: Polarity) -> "TransitionLabel":
        return MSG_LABELS[p][1]

    @staticmethod
    def choice(view: View, label: str) -> "TransitionLabel":
        return TransitionLabel(view.value + label)

    @staticmethod
    def index(n: int) -> "TransitionLabel":
        return TransitionLabel(str(n))


UNIT_L = TransitionLabel("unit")
ARROW_D = TransitionLabel("->d")
ARROW_R = TransitionLabel("->r")
MSG_LABELS = {
    Polarity.OUT: (TransitionLabel("!d"), TransitionLabel("!c")),
    Polarity.IN: (TransitionLabel("?d"), TransitionLabel("?c")),
}


def format_trace(trace: Sequence[TransitionLabel]) -> str:
    return " ".join(str(a) for a in trace)


class NonContractiveError(RuntimeError):
    pass


Transitions = Dict[TransitionLabel, TypeExpr]


def step(t: TypeExpr, sig: Signature) -> Transitions:
    """All transitions of ``t``; the system is deterministic so a map suffices.

    Sequential compositions are head-normalised (reassociating ``(T;U);V``
    and unfolding identifiers in head position) before a single dispatch.
    """
    cont: Optional[TypeExpr] = None
    # finite on contractive signatures; terminated identifiers may legitimately
    # unfold many times, so this is only a guard against bad input
    unfolds = 100_000
    while True:
        if isinstance(t, Ident):
            unfolds -= 1
            if unfolds < 0:
                raise NonContractiveError(f"head normalisation of {t.name} does not reach a constructor")
        if cont is None:
            if isinstance(t, Ident):
                t = sig.lookup(t.name)
            elif isinstance(t, Seq):
                t, cont = t.first, t.second
            else:
                return _step_constructor(t)
        else:
            # the state is t;cont, dispatch on t
            if isinstance(t, Skip):
                t, cont = cont, None
            elif isinstance(t, Message):
                data, c = MSG_LABELS[t.polarity]
                return {data: t.payload, c: cont}
            elif isinstance(t, Choice):
                return {TransitionLabel(t.view.value + lbl): Seq(b, cont) for lbl, b in t.branches}
            elif isinstance(t, Seq):
                t, cont = t.first, Seq(t.second, cont)
            elif isinstance(t, Index):
                return {TransitionLabel(str(t.n)): cont}
            elif isinstance(t, Ident):
                t = sig.lookup(t.name)
            else:
                # a functional head under ';' has no rule
                return {}


def _step_constructor(t: TypeExpr) -> Transitions:
    if isinstance(t, Unit):
        return {UNIT_L: SKIP}
    if isinstance(t, Base):
        return {TransitionLabel(t.name): SKIP}
    if isinstance(t, Arrow):
        return {ARROW_D: t.domain, ARROW_R: t.range}
    if isinstance(t, Labeled):
        return {TransitionLabel.field(t.shape, lbl): b for lbl, b in t.branches}
    if isinstance(t, Quant):
        return {TransitionLabel.quant(t.quantifier, t.kind): t.body}
    if isinstance(t, Skip):
        return {}
    if isinstance(t, Message):
        data, c = MSG_LABELS[t.polarity]
        return {data: t.payload, c: SKIP}
    if isinstance(t, Choice):
        return {TransitionLabel(t.view.value + lbl): b for lbl, b in t.branches}
    if isinstance(t, Index):
        return {TransitionLabel(str(t.n)): SKIP}
    raise TypeError(f"not a type: {t!r}")


def _spine(t: TypeExpr, out: List[TypeExpr]) -> None:
    while isinstance(t, Seq):
        _spine(t.first, out)
        t = t.second
    out.append(t)


def canonical_state(t: TypeExpr) -> TypeExpr:
    """A bisimilar representative of ``t`` used to share exploration work.

    Flattens the ``;`` spine to the right and drops every ``skip`` that is
    followed by something. A trailing ``skip`` is kept: ``unit;skip`` and
    ``unit`` behave differently.
    """
    if not isinstance(t, Seq):
        return t
    parts: List[TypeExpr] = []
    _spine(t, parts)
    kept = [p for p in parts[:-1] if not isinstance(p, Skip)]
    kept.append(parts[-1])
    acc = kept[-1]
    for p in reversed(kept[:-1]):
        acc = Seq(p, acc)
    return acc


class _Explorer:
    def __init__(self, sig: Signature) -> None:
        self.sig = sig
        self.cache: Dict[TypeExpr, Tuple[Tuple[TransitionLabel, TypeExpr], ...]] = {}

    def moves(self, t: TypeExpr) -> Tuple[Tuple[TransitionLabel, TypeExpr], ...]:
        hit = self.cache.get(t)
        if hit is None:
            hit = tuple(sorted((a, canonical_state(s)) for a, s in step(t, self.sig).items()))
            self.cache[t] = hit
        return hit


def distinguishing_trace(
    t: TypeExpr, u: TypeExpr, max_depth: int, sig: Signature
) -> Optional[List[TransitionLabel]]:
    """Shortest trace of length <= max_depth that exactly one side can perform.

    Among shortest traces the lexicographically least (by label text) wins.
    Returns None when no such trace exists, i.e. ``t`` and ``u`` are
    ``max_depth``-bisimilar.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    ex = _Explorer(sig)
    frontier: List[Tuple[Tuple[TransitionLabel, ...], TypeExpr, TypeExpr]] = [
        ((), canonical_state(t), canonical_state(u))
    ]
    seen = {(frontier[0][1], frontier[0][2])}
    for _ in range(max_depth):
        nxt = []
        for trace, a, b in frontier:
            ma, mb = ex.moves(a), ex.moves(b)
            la = [x for x, _ in ma]
            lb = [x for x, _ in mb]
            if la != lb:
                return list(trace) + [min(set(la) ^ set(lb))]
            for (lbl, a2), (_, b2) in zip(ma, mb):
                if a2 == b2 or (a2, b2) in seen:
                    continue
                seen.add((a2, b2))
                nxt.append((trace + (lbl,), a2, b2))
        if not nxt:
            return None
        frontier = nxt
    return None


def k_bisimilar(t: TypeExpr, u: TypeExpr, k: int, sig: Signature) -> bool:
    """The k-th approximant of type bisimilarity.

    Everything is 0-bisimilar; ``t`` and ``u`` are (k+1)-bisimilar when they
    enable the same labels and the matching successors are k-bisimilar.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ex = _Explorer(sig)
    proven: Dict[Tuple[TypeExpr, TypeExpr], int] = {}

    def go(a: TypeExpr, b: TypeExpr, k: int) -> bool:
        if k == 0 or a == b:
            return True
        if proven.get((a, b), -1) >= k:
            return True
        ma, mb = ex.moves(a), ex.moves(b)
        if [x for x, _ in ma] != [x for x, _ in mb]:
            return False
        for (_, a2), (_, b2) in zip(ma, mb):
            if not go(a2, b2, k - 1):
                return False
        proven[(a, b)] = k
        return True

    return go(canonical_state(t), canonical_state(u), k)


def reachable(t: TypeExpr, depth: int, sig: Signature) -> Iterator[Tuple[int, TypeExpr, TransitionLabel, TypeExpr]]:
    """Breadth-first transitions reachable from ``t`` within ``depth`` steps.

    Yields ``(level, source, label, target)``; each source state is expanded once.
    """
    ex = _Explorer(sig)
    start = canonical_state(t)
    seen = {start}
    frontier = [start]
    for level in range(depth):
        nxt = []
        for s in frontier:
            for lbl, s2 in ex.moves(s):
                yield level, s, lbl, s2
                if s2 not in seen:
                    seen.add(s2)
                    nxt.append(s2)
        frontier = nxt
        if not frontier:
            return
