"""End-to-end equivalence check: validate, kind, translate, decide."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from .decider import DEFAULT_MAX_PAIRS, Equivalent, NotEquivalent, decide
from .grammar import Grammar, build_grammar, to_gnf
from .kinding import KindError, check_kind, validate_signature
from .types import EMPTY_CONTEXT, EMPTY_SIGNATURE, Kind, KindContext, Signature, TypeExpr, UnboundIdentifier


@dataclass(frozen=True)
class Error:
    diagnostics: Tuple[str, ...]


Outcome = Union[Equivalent, NotEquivalent, Error]


@dataclass
class CheckReport:
    kinds: Optional[Tuple[Kind, Kind]]
    verdict: Outcome
    timings: Dict[str, float] = field(default_factory=dict)
    grammar: Optional[Grammar] = None
    starts: Tuple[Tuple[int, ...], Tuple[int, ...]] = ((), ())

    @property
    def answer(self) -> str:
        if isinstance(self.verdict, Equivalent):
            return "YES"
        if isinstance(self.verdict, NotEquivalent):
            return "NO"
        return "ERROR"

    @property
    def equivalent(self) -> bool:
        return isinstance(self.verdict, Equivalent)


class _Clock:
    def __init__(self, timings: Dict[str, float]) -> None:
        self.timings = timings
        self.last = time.perf_counter()

    def lap(self, stage: str) -> None:
        now = time.perf_counter()
        self.timings[stage] = now - self.last
        self.last = now


def type_equiv(
    t: TypeExpr,
    u: TypeExpr,
    sig: Signature = EMPTY_SIGNATURE,
    delta: KindContext = EMPTY_CONTEXT,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> CheckReport:
    """Decide ``t == u`` over ``sig``.

    Both types must be well kinded under ``delta`` before the grammar is
    built: the equivalence itself is unkinded and only agrees with
    bisimilarity on types.
    """
    timings: Dict[str, float] = {}
    clock = _Clock(timings)
    diags = validate_signature(sig)
    clock.lap("validate")
    if diags:
        return CheckReport(None, Error(tuple(f"{d.code} {d.name}" for d in diags)), timings)

    kinds = []
    for side, x in (("left", t), ("right", u)):
        try:
            kinds.append(check_kind(x, delta, sig))
        except KindError as e:
            return CheckReport(None, Error((f"ill-kinded {side} type {x}: {e}",)), timings)
        except UnboundIdentifier as e:
            return CheckReport(None, Error((f"Unbound {e.name}",)), timings)
    clock.lap("kind")

    raw = build_grammar(t, sig, also=(u,))
    clock.lap("grammar")
    g = to_gnf(raw)
    clock.lap("gnf")
    left, right = g.word_for(t), g.word_for(u)
    verdict = decide(g, left, right, max_pairs=max_pairs)
    clock.lap("decide")
    return CheckReport((kinds[0], kinds[1]), verdict, timings, g, (left, right))


__all__ = ["CheckReport", "Error", "type_equiv"]
