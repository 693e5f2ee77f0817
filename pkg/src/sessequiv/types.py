"""Type AST, signatures and kind contexts.

Types are immutable values. Every node caches its structural hash on
construction so that subterm sets, memo tables and LTS state sets stay cheap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Tuple


class Kind(enum.Enum):
    S = "S"
    T = "T"

    def __str__(self) -> str:
        return self.value


class Shape(enum.Enum):
    RECORD = "record"
    VARIANT = "variant"


class Quantifier(enum.Enum):
    FORALL = "all"
    EXISTS = "ex"


class Polarity(enum.Enum):
    OUT = "!"
    IN = "?"


class View(enum.Enum):
    INTERNAL = "+"
    EXTERNAL = "&"


class TypeExpr:
    """Base class of type AST nodes."""

    __slots__ = ()

    def children(self) -> Tuple["TypeExpr", ...]:
        return ()

    def __str__(self) -> str:
        from .syntax import pretty

        return pretty(self)


def _node(cls):
    # eq/hash come from _Hashed; dataclass must not regenerate them
    return dataclass(frozen=True, eq=False)(cls)


@_node
class _Hashed(TypeExpr):
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self) -> tuple:
        raise NotImplementedError

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or other._hash != self._hash:  # type: ignore[attr-defined]
            return False
        return self._key() == other._key()  # type: ignore[attr-defined]


Branches = Tuple[Tuple[str, TypeExpr], ...]


def make_branches(items: Iterable[Tuple[str, TypeExpr]] | Mapping[str, TypeExpr]) -> Branches:
    """Normalise a label map to the canonical sorted tuple form.

    Raises ValueError on an empty map or a repeated label.
    """
    pairs = list(items.items()) if isinstance(items, Mapping) else list(items)
    if not pairs:
        raise ValueError("branch map must be nonempty")
    labels = [lbl for lbl, _ in pairs]
    if len(set(labels)) != len(labels):
        dup = sorted({lbl for lbl in labels if labels.count(lbl) > 1})
        raise ValueError(f"duplicate label(s): {', '.join(dup)}")
    for lbl, _ in pairs:
        if not lbl:
            raise ValueError("labels must be nonempty")
    return tuple(sorted(pairs, key=lambda p: p[0]))


@_node
class Unit(_Hashed):
    def _key(self) -> tuple:
        return ()


@_node
class Base(_Hashed):
    name: str

    def _key(self) -> tuple:
        return (self.name,)


@_node
class Arrow(_Hashed):
    domain: TypeExpr
    range: TypeExpr

    def _key(self) -> tuple:
        return (self.domain, self.range)

    def children(self) -> Tuple[TypeExpr, ...]:
        return (self.domain, self.range)


@_node
class Labeled(_Hashed):
    shape: Shape
    branches: Branches

    def __post_init__(self) -> None:
        object.__setattr__(self, "branches", make_branches(self.branches))
        super().__post_init__()

    def _key(self) -> tuple:
        return (self.shape, self.branches)

    def children(self) -> Tuple[TypeExpr, ...]:
        return tuple(t for _, t in self.branches)


@_node
class Quant(_Hashed):
    quantifier: Quantifier
    kind: Kind
    body: TypeExpr

    def _key(self) -> tuple:
        return (self.quantifier, self.kind, self.body)

    def children(self) -> Tuple[TypeExpr, ...]:
        return (self.body,)


@_node
class Skip(_Hashed):
    def _key(self) -> tuple:
        return ()


@_node
class Message(_Hashed):
    polarity: Polarity
    payload: TypeExpr

    def _key(self) -> tuple:
        return (self.polarity, self.payload)

    def children(self) -> Tuple[TypeExpr, ...]:
        return (self.payload,)


@_node
class Choice(_Hashed):
    view: View
    branches: Branches

    def __post_init__(self) -> None:
        object.__setattr__(self, "branches", make_branches(self.branches))
        super().__post_init__()

    def _key(self) -> tuple:
        return (self.view, self.branches)

    def children(self) -> Tuple[TypeExpr, ...]:
        return tuple(t for _, t in self.branches)


@_node
class Seq(_Hashed):
    first: TypeExpr
    second: TypeExpr

    def _key(self) -> tuple:
        return (self.first, self.second)

    def children(self) -> Tuple[TypeExpr, ...]:
        return (self.first, self.second)


@_node
class Index(_Hashed):
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"De Bruijn index must be a non-negative integer, got {self.n!r}")
        super().__post_init__()

    def _key(self) -> tuple:
        return (self.n,)


@_node
class Ident(_Hashed):
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("type identifiers must be nonempty")
        super().__post_init__()

    def _key(self) -> tuple:
        return (self.name,)


SKIP = Skip()
UNIT = Unit()


def seq_of(*parts: TypeExpr) -> TypeExpr:
    """Left-nested sequential composition of ``parts`` (``skip`` when empty)."""
    if not parts:
        return SKIP
    acc = parts[0]
    for p in parts[1:]:
        acc = Seq(acc, p)
    return acc


def iter_nodes(t: TypeExpr) -> Iterator[TypeExpr]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def identifiers(t: TypeExpr) -> set[str]:
    return {n.name for n in iter_nodes(t) if isinstance(n, Ident)}


def free_index_bound(t: TypeExpr) -> int:
    """Smallest k such that every free De Bruijn index of ``t`` is below k."""
    best = 0
    stack = [(t, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Index):
            if node.n >= depth:
                best = max(best, node.n - depth + 1)
        elif isinstance(node, Quant):
            stack.append((node.body, depth + 1))
        else:
            stack.extend((c, depth) for c in node.children())
    return best


class UnboundIdentifier(LookupError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unbound type identifier {name}")
        self.name = name


class DuplicateIdent(ValueError):
    def __init__(self, name: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"type identifier {name} is defined twice{where}")
        self.name = name
        self.line = line


class Signature(Mapping[str, TypeExpr]):
    """Finite map from type identifiers to their defining types.

    Instances are immutable; derived facts (contractivity, termination) are
    cached on the object by the kinding module.
    """

    def __init__(self, equations: Mapping[str, TypeExpr] | Iterable[Tuple[str, TypeExpr]] = ()) -> None:
        items = list(equations.items()) if isinstance(equations, Mapping) else list(equations)
        eqs: dict[str, TypeExpr] = {}
        for name, body in items:
            if name in eqs:
                raise DuplicateIdent(name)
            eqs[name] = body
        self._eqs = eqs
        self._cache: dict[str, object] = {}

    def __getitem__(self, name: str) -> TypeExpr:
        return self._eqs[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._eqs)

    def __len__(self) -> int:
        return len(self._eqs)

    def __hash__(self) -> int:
        return hash(frozenset(self._eqs.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Signature):
            return self._eqs == other._eqs
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{k} = {v}" for k, v in self._eqs.items())
        return f"Signature({{{body}}})"

    def lookup(self, name: str) -> TypeExpr:
        try:
            return self._eqs[name]
        except KeyError:
            raise UnboundIdentifier(name) from None


EMPTY_SIGNATURE = Signature()


@dataclass(frozen=True)
class KindContext:
    """Kinds of free De Bruijn indices; position ``n`` holds the kind of index ``n``."""

    bindings: Tuple[Kind, ...] = ()

    def lookup(self, n: int) -> Kind | None:
        return self.bindings[n] if 0 <= n < len(self.bindings) else None

    def push(self, kind: Kind) -> "KindContext":
        """The context for a quantifier body: shift every index by one, bind 0."""
        return KindContext((kind,) + self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)

    @classmethod
    def parse(cls, text: str) -> "KindContext":
        """Parse a comma separated kind list such as ``S,T,S``."""
        text = text.strip()
        if not text:
            return cls()
        kinds = []
        for part in text.split(","):
            part = part.strip()
            try:
                kinds.append(Kind(part))
            except ValueError:
                raise ValueError(f"unknown kind {part!r} (expected S or T)") from None
        return cls(tuple(kinds))


EMPTY_CONTEXT = KindContext()
