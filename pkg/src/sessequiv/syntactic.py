"""Goal-directed proof search for the coinductive type equivalence rules.

Rule choice is syntax directed. Left operands are normalised first
(``skip;``, ``(T;U);V``, choice and identifier heads), then right operands,
then a constructor-consuming rule is tried. Since the only freedom is the
order of those normalisations, which commute, a goal with no applicable rule
refutes every goal above it.

A goal equal to one of its ancestors closes a cycle. The cycle is accepted
only if a constructor-consuming ("productive") rule lies on it.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from ._stack import run_deep
from .kinding import is_contractive, is_terminated
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
)

Goal = Tuple[TypeExpr, TypeExpr]

PRODUCTIVE = frozenset(
    {
        "E-UNIT",
        "E-BASE",
        "E-ARROW",
        "E-RCD",
        "E-QUANT",
        "E-SKIP",
        "E-MSG",
        "E-CHOICE",
        "E-INDEX",
        "E-MSGSEQ1L",
        "E-MSGSEQ1R",
        "E-MSGSEQ2",
        "E-INDEXSEQ1L",
        "E-INDEXSEQ1R",
        "E-INDEXSEQ2",
    }
)


@dataclass(frozen=True, eq=False)
class Derivation:
    """One rule application. ``CYCLE`` leaves point back at an ancestor goal;
    ``REFL`` closes a goal whose two sides are syntactically identical."""

    rule: str
    goal: Goal
    premises: Tuple["Derivation", ...] = ()

    def size(self) -> int:
        seen = set()
        stack: List[Derivation] = [self]
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            stack.extend(d.premises)
        return len(seen)

    def rules(self) -> List[str]:
        """Rule names in pre-order."""
        out: List[str] = []
        stack: List[Derivation] = [self]
        while stack:
            d = stack.pop()
            out.append(d.rule)
            stack.extend(reversed(d.premises))
        return out

    def format(self, indent: str = "  ") -> str:
        lines: List[str] = []
        stack: List[Tuple[Derivation, int]] = [(self, 0)]
        while stack:
            d, depth = stack.pop()
            t, u = d.goal
            lines.append(f"{indent * depth}{d.rule}  {t} == {u}")
            stack.extend((p, depth + 1) for p in reversed(d.premises))
        return "\n".join(lines)


@dataclass(frozen=True)
class Proven:
    derivation: Derivation


@dataclass(frozen=True)
class Refuted:
    goal: Goal

    def format(self) -> str:
        t, u = self.goal
        return f"no rule applies to {t} == {u}"


@dataclass(frozen=True)
class Unknown:
    reason: str


Verdict = Union[Proven, Refuted, Unknown]


class _Stuck(Exception):
    def __init__(self, goal: Goal) -> None:
        self.goal = goal


class _GiveUp(Exception):
    def __init__(self, reason: str) -> None:
        self.reason = reason


def _rule_for(g: Goal, sig: Signature) -> Optional[Tuple[str, Tuple[Goal, ...]]]:
    """The applicable rule and its premises, in the fixed order; None if stuck."""
    t, u = g
    if t == u and not isinstance(t, (Unit, Base, Skip, Index)):
        return "REFL", ()

    # left normalisation
    if isinstance(t, Seq):
        f, rest = t.first, t.second
        if isinstance(f, Skip):
            return "E-SKIPSEQL", ((rest, u),)
        if isinstance(f, Seq):
            return "E-SEQSEQL", ((Seq(f.first, Seq(f.second, rest)), u),)
        if isinstance(f, Choice):
            return "E-CHOICESEQL", ((Choice(f.view, tuple((l, Seq(b, rest)) for l, b in f.branches)), u),)
        if isinstance(f, Ident) and is_contractive(f, sig):
            return "E-IDSEQL", ((Seq(sig.lookup(f.name), rest), u),)
    elif isinstance(t, Ident) and is_contractive(t, sig):
        return "E-IDL", ((sig.lookup(t.name), u),)

    # right normalisation
    if isinstance(u, Seq):
        f, rest = u.first, u.second
        if isinstance(f, Skip):
            return "E-SKIPSEQR", ((t, rest),)
        if isinstance(f, Seq):
            return "E-SEQSEQR", ((t, Seq(f.first, Seq(f.second, rest))),)
        if isinstance(f, Choice):
            return "E-CHOICESEQR", ((t, Choice(f.view, tuple((l, Seq(b, rest)) for l, b in f.branches))),)
        if isinstance(f, Ident) and is_contractive(f, sig):
            return "E-IDSEQR", ((t, Seq(sig.lookup(f.name), rest)),)
    elif isinstance(u, Ident) and is_contractive(u, sig):
        return "E-IDR", ((t, sig.lookup(u.name)),)

    # constructor-consuming rules
    if isinstance(t, Unit) and isinstance(u, Unit):
        return "E-UNIT", ()
    if isinstance(t, Base) and isinstance(u, Base) and t.name == u.name:
        return "E-BASE", ()
    if isinstance(t, Skip) and isinstance(u, Skip):
        return "E-SKIP", ()
    if isinstance(t, Index) and isinstance(u, Index) and t.n == u.n:
        return "E-INDEX", ()
    if isinstance(t, Arrow) and isinstance(u, Arrow):
        return "E-ARROW", ((t.domain, u.domain), (t.range, u.range))
    if isinstance(t, Labeled) and isinstance(u, Labeled) and t.shape is u.shape:
        if [l for l, _ in t.branches] == [l for l, _ in u.branches]:
            return "E-RCD", tuple((a, b) for (_, a), (_, b) in zip(t.branches, u.branches))
        return None
    if isinstance(t, Quant) and isinstance(u, Quant):
        if t.quantifier is u.quantifier and t.kind is u.kind:
            return "E-QUANT", ((t.body, u.body),)
        return None
    if isinstance(t, Message) and isinstance(u, Message) and t.polarity is u.polarity:
        return "E-MSG", ((t.payload, u.payload),)
    if isinstance(t, Choice) and isinstance(u, Choice) and t.view is u.view:
        if [l for l, _ in t.branches] == [l for l, _ in u.branches]:
            return "E-CHOICE", tuple((a, b) for (_, a), (_, b) in zip(t.branches, u.branches))
        return None

    tm = isinstance(t, Seq) and isinstance(t.first, Message)
    um = isinstance(u, Seq) and isinstance(u.first, Message)
    if tm and um and t.first.polarity is u.first.polarity:  # type: ignore[union-attr]
        return "E-MSGSEQ2", ((t.first.payload, u.first.payload), (t.second, u.second))  # type: ignore[union-attr]
    if tm and isinstance(u, Message) and t.first.polarity is u.polarity and is_terminated(t.second, sig):  # type: ignore[union-attr]
        return "E-MSGSEQ1L", ((t.first.payload, u.payload),)  # type: ignore[union-attr]
    if um and isinstance(t, Message) and u.first.polarity is t.polarity and is_terminated(u.second, sig):  # type: ignore[union-attr]
        return "E-MSGSEQ1R", ((t.payload, u.first.payload),)  # type: ignore[union-attr]

    ti = isinstance(t, Seq) and isinstance(t.first, Index)
    ui = isinstance(u, Seq) and isinstance(u.first, Index)
    if ti and ui and t.first.n == u.first.n:  # type: ignore[union-attr]
        return "E-INDEXSEQ2", ((t.second, u.second),)  # type: ignore[union-attr]
    if ti and isinstance(u, Index) and t.first.n == u.n and is_terminated(t.second, sig):  # type: ignore[union-attr]
        return "E-INDEXSEQ1L", ()
    if ui and isinstance(t, Index) and u.first.n == t.n and is_terminated(u.second, sig):  # type: ignore[union-attr]
        return "E-INDEXSEQ1R", ()
    return None


class _Search:
    def __init__(self, sig: Signature, fuel: int) -> None:
        self.sig = sig
        self.fuel = fuel
        self.used = 0
        # goal -> (position on the current path, productive rules above it)
        self.path: Dict[Goal, Tuple[int, int]] = {}
        # derivations that depend on no open ancestor, reusable anywhere
        self.closed: Dict[Goal, Derivation] = {}

    def prove(self, goal: Goal, productive: int) -> Tuple[Derivation, int]:
        """Derive ``goal``; also return the shallowest ancestor position it relies on."""
        chain: List[Tuple[str, Goal, int]] = []
        g = goal
        while True:
            hit = self.closed.get(g)
            if hit is not None:
                leaf, low = hit, sys.maxsize
                break
            at = self.path.get(g)
            if at is not None:
                pos, above = at
                if productive > above:
                    leaf, low = Derivation("CYCLE", g), pos
                    break
                raise _GiveUp("cycle without a productive rule")
            if self.used >= self.fuel:
                raise _GiveUp("fuel exhausted")
            self.used += 1
            found = _rule_for(g, self.sig)
            if found is None:
                raise _Stuck(g)
            rule, premises = found
            pos = len(self.path)
            self.path[g] = (pos, productive)
            chain.append((rule, g, pos))
            if rule in PRODUCTIVE or not premises:
                if rule in PRODUCTIVE:
                    productive += 1
                low = sys.maxsize
                subs = []
                for p in premises:
                    d, l = self.prove(p, productive)
                    subs.append(d)
                    low = min(low, l)
                leaf = Derivation(rule, g, tuple(subs))
                chain.pop()
                if low >= pos:
                    self.closed[g] = leaf
                del self.path[g]
                break
            g = premises[0]

        d = leaf
        for rule, cg, pos in reversed(chain):
            d = Derivation(rule, cg, (d,))
            del self.path[cg]
            if low >= pos:
                self.closed[cg] = d
        return d, low


def syntactic_check(t: TypeExpr, u: TypeExpr, sig: Signature | None = None, fuel: int = 10_000) -> Verdict:
    """Search for a derivation of ``t == u``.

    ``fuel`` bounds the number of rule applications. Returns :class:`Proven`
    with a derivation, :class:`Refuted` with the goal no rule matches, or
    :class:`Unknown` when the search gives up.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    search = _Search(sig if sig is not None else Signature(), fuel)
    try:
        d, _ = run_deep(search.prove, (t, u), 0)
    except _Stuck as e:
        return Refuted(e.goal)
    except _GiveUp as e:
        return Unknown(e.reason)
    return Proven(d)


__all__ = ["Derivation", "Proven", "Refuted", "Unknown", "Verdict", "syntactic_check"]
