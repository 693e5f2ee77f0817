"""Is-terminated, contractivity and kinding.

Termination and contractivity are inductive: an identifier revisited while
its own judgement is in progress fails. Kinding is coinductive: an
identifier goal revisited while in progress is assumed to hold with the
kind its definition's head constructor proposes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .types import (
    EMPTY_CONTEXT,
    Arrow,
    Base,
    Choice,
    Ident,
    Index,
    Kind,
    KindContext,
    Labeled,
    Message,
    Quant,
    Seq,
    Signature,
    Skip,
    TypeExpr,
    UnboundIdentifier,
    Unit,
    free_index_bound,
    identifiers,
    iter_nodes,
)


# -- is-terminated and contractivity -----------------------------------------


def _ident_terminated(name: str, sig: Signature, in_progress: Set[str]) -> bool:
    cache: Dict[str, bool] = sig._cache.setdefault("terminated", {})  # type: ignore[assignment]
    if name in cache:
        return cache[name]
    if name in in_progress:
        return False
    body = sig.lookup(name)
    in_progress.add(name)
    try:
        result = _terminated(body, sig, in_progress)
    finally:
        in_progress.discard(name)
    # conjunctive rules: a cycle can only make the outer call fail, never
    # flip this result, so caching is sound
    cache[name] = result
    return result


def _terminated(t: TypeExpr, sig: Signature, in_progress: Set[str]) -> bool:
    if isinstance(t, Skip):
        return True
    if isinstance(t, Seq):
        return _terminated(t.first, sig, in_progress) and _terminated(t.second, sig, in_progress)
    if isinstance(t, Ident):
        return _ident_terminated(t.name, sig, in_progress)
    return False


def is_terminated(t: TypeExpr, sig: Signature) -> bool:
    """Whether ``t`` is built from skip, ``;`` and identifiers only (inductively)."""
    return _terminated(t, sig, set())


def _ident_contractive(name: str, sig: Signature, in_progress: Set[str]) -> bool:
    cache: Dict[str, bool] = sig._cache.setdefault("contractive", {})  # type: ignore[assignment]
    if name in cache:
        return cache[name]
    if name in in_progress:
        return False
    body = sig.lookup(name)
    in_progress.add(name)
    try:
        result = _contractive(body, sig, in_progress)
    finally:
        in_progress.discard(name)
    cache[name] = result
    return result


def _contractive(t: TypeExpr, sig: Signature, in_progress: Set[str]) -> bool:
    if isinstance(t, Quant):
        return _contractive(t.body, sig, in_progress)
    if isinstance(t, Seq):
        if is_terminated(t.first, sig):
            return _contractive(t.second, sig, in_progress)
        return _contractive(t.first, sig, in_progress)
    if isinstance(t, Ident):
        return _ident_contractive(t.name, sig, in_progress)
    return True


def is_contractive(t: TypeExpr, sig: Signature) -> bool:
    return _contractive(t, sig, set())


@dataclass(frozen=True)
class Diagnostic:
    code: str  # "Unbound" | "NotContractive"
    name: str

    def __str__(self) -> str:
        if self.code == "Unbound":
            return f"unbound type identifier {self.name}"
        return f"equation for {self.name} is not contractive"


def validate_signature(sig: Signature) -> List[Diagnostic]:
    """Unbound identifiers first, then every non-contractive right-hand side."""
    diags: List[Diagnostic] = []
    unbound = sorted({n for body in sig.values() for n in identifiers(body)} - set(sig))
    diags.extend(Diagnostic("Unbound", n) for n in unbound)
    for name, body in sig.items():
        if identifiers(body) & set(unbound):
            continue
        if not is_contractive(Ident(name), sig):
            diags.append(Diagnostic("NotContractive", name))
    return diags


# -- kinding ------------------------------------------------------------------


class KindError(Exception):
    """Raised by :func:`check_kind` when no kind can be derived."""


_FUNCTIONAL_HEADS = (Unit, Base, Arrow, Labeled, Quant)
_SESSION_HEADS = (Skip, Message, Choice, Seq)


def _proposed_kind(t: TypeExpr, delta: KindContext, sig: Signature) -> Optional[Kind]:
    seen: Set[str] = set()
    while isinstance(t, Ident):
        if t.name in seen:
            return None
        seen.add(t.name)
        t = sig.lookup(t.name)
    if isinstance(t, _FUNCTIONAL_HEADS):
        return Kind.T
    if isinstance(t, _SESSION_HEADS):
        return Kind.S
    assert isinstance(t, Index)
    return delta.lookup(t.n)


class _Kinder:
    def __init__(self, sig: Signature) -> None:
        self.sig = sig
        self.done: Dict[Tuple[Tuple[Kind, ...], str], Kind] = {}
        self.assumed: Dict[Tuple[Tuple[Kind, ...], str], Kind] = {}

    def kind(self, t: TypeExpr, delta: KindContext) -> Kind:
        if isinstance(t, (Unit, Base)):
            return Kind.T
        if isinstance(t, Arrow):
            self.kind(t.domain, delta)
            self.kind(t.range, delta)
            return Kind.T
        if isinstance(t, Labeled):
            for _, b in t.branches:
                self.kind(b, delta)
            return Kind.T
        if isinstance(t, Quant):
            self.kind(t.body, delta.push(t.kind))
            return Kind.T
        if isinstance(t, Skip):
            return Kind.S
        if isinstance(t, Message):
            self.kind(t.payload, delta)
            return Kind.S
        if isinstance(t, Choice):
            for lbl, b in t.branches:
                if self.kind(b, delta) is not Kind.S:
                    raise KindError(f"choice branch {lbl} is not a session type: {b}")
            return Kind.S
        if isinstance(t, Seq):
            for part in (t.first, t.second):
                if self.kind(part, delta) is not Kind.S:
                    raise KindError(f"operand of ';' is not a session type: {part}")
            return Kind.S
        if isinstance(t, Index):
            k = delta.lookup(t.n)
            if k is None:
                raise KindError(f"unbound De Bruijn index {t.n} in a context of length {len(delta)}")
            return k
        if isinstance(t, Ident):
            return self.ident(t.name, delta)
        raise TypeError(f"not a type: {t!r}")

    def ident(self, name: str, delta: KindContext) -> Kind:
        body = self.sig.lookup(name)
        if not is_contractive(Ident(name), self.sig):
            raise KindError(f"equation for {name} is not contractive")
        key = (delta.bindings[: free_index_bound(body)], name)
        if key in self.done:
            return self.done[key]
        if key in self.assumed:
            return self.assumed[key]
        proposed = _proposed_kind(body, delta, self.sig)
        if proposed is None:
            raise KindError(f"cannot determine a kind for {name}")
        self.assumed[key] = proposed
        try:
            k = self.kind(body, delta)
        finally:
            del self.assumed[key]
        if k is not proposed:
            raise KindError(f"{name} has no consistent kind")
        # every rule needs all of its premises, so any later failure fails the
        # whole judgement; caching successes inside one call is safe
        self.done[key] = k
        return k


def check_kind(t: TypeExpr, delta: KindContext = EMPTY_CONTEXT, sig: Signature | None = None) -> Kind:
    """Return the kind of ``t`` under ``delta`` or raise :class:`KindError`."""
    return _Kinder(sig if sig is not None else Signature()).kind(t, delta)


def kind_of(t: TypeExpr, delta: KindContext = EMPTY_CONTEXT, sig: Signature | None = None) -> Optional[Kind]:
    """The unique kind of ``t`` under ``delta``, or None when ``t`` is ill-kinded.

    Unbound identifiers raise :class:`UnboundIdentifier`.
    """
    try:
        return check_kind(t, delta, sig)
    except KindError:
        return None


def subterms(t: TypeExpr) -> Set[TypeExpr]:
    """All syntactic subterms of ``t``, ``t`` included; identifiers are leaves."""
    return set(iter_nodes(t))


__all__ = [
    "Diagnostic",
    "KindError",
    "UnboundIdentifier",
    "check_kind",
    "is_contractive",
    "is_terminated",
    "kind_of",
    "subterms",
    "validate_signature",
]
