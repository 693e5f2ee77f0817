"""Pure-Python word kernels for simple grammars.

A grammar is passed as a *table*: ``table[x]`` is a tuple of
``(label_id, tail)`` pairs sorted by ``label_id`` where ``tail`` is a tuple of
nonterminal ids. Label ids must be numbered in label text order so that
comparing ids compares labels. ``unnormed[x]`` marks nonterminals that can
never reach the empty word; any suffix after such a symbol is unreachable and
is dropped before words are compared.

This module and the compiled ``_kernel`` extension implement the same
functions with the same results.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

Word = Tuple[int, ...]
Table = Sequence[Tuple[Tuple[int, Word], ...]]

INF = -1

NOT_FOUND = 0
FOUND = 1
EXHAUSTED = 2


def norms(rows: Sequence[Sequence[Word]]) -> List[int]:
    """Least fixed point of ``n(x) = 1 + min over x -> a g of sum n(g)``; -1 for infinity."""
    n = len(rows)
    big = float("inf")
    val = [big] * n
    changed = True
    while changed:
        changed = False
        for x in range(n):
            best = val[x]
            for tail in rows[x]:
                s = 1.0
                for y in tail:
                    s += val[y]
                    if s >= best:
                        break
                if s < best:
                    best = s
            if best < val[x]:
                val[x] = best
                changed = True
    return [INF if v == big else int(v) for v in val]


def truncate(w: Word, unnormed: Sequence[bool]) -> Word:
    for i, x in enumerate(w):
        if unnormed[x]:
            return w[: i + 1]
    return w


def _moves(table: Table, w: Word, unnormed: Sequence[bool]) -> Tuple[Tuple[int, Word], ...]:
    if not w:
        return ()
    rest = w[1:]
    return tuple((a, truncate(tail + rest, unnormed)) for a, tail in table[w[0]])


def distinguish(
    table: Table,
    left: Word,
    right: Word,
    max_depth: int,
    max_pairs: int,
    unnormed: Sequence[bool],
) -> Tuple[int, List[int]]:
    """Shortest, then lexicographically least, trace one side cannot follow.

    Returns ``(FOUND, trace)`` where the last label is enabled on exactly one
    side, ``(NOT_FOUND, [])`` when the words agree up to ``max_depth`` (or
    forever, when the explored pair space closes), and ``(EXHAUSTED, [])``
    once more than ``max_pairs`` pairs have been queued. A negative
    ``max_depth`` means no depth bound.
    """
    a0, b0 = truncate(left, unnormed), truncate(right, unnormed)
    seen = {(a0, b0)}
    # parent links keep traces implicit until one is needed
    parents: List[Tuple[int, int]] = [(-1, -1)]
    frontier = [(0, a0, b0)]
    depth = 0
    while frontier:
        if 0 <= max_depth <= depth:
            return NOT_FOUND, []
        nxt = []
        for node, a, b in frontier:
            ma = _moves(table, a, unnormed)
            mb = _moves(table, b, unnormed)
            if len(ma) != len(mb) or any(x[0] != y[0] for x, y in zip(ma, mb)):
                la = {x for x, _ in ma}
                lb = {x for x, _ in mb}
                trace = [min(la ^ lb)]
                while node > 0:
                    node, lbl = parents[node]
                    trace.append(lbl)
                trace.reverse()
                return FOUND, trace
            for (lbl, a2), (_, b2) in zip(ma, mb):
                if a2 == b2 or (a2, b2) in seen:
                    continue
                seen.add((a2, b2))
                if len(seen) > max_pairs:
                    return EXHAUSTED, []
                parents.append((node, lbl))
                nxt.append((len(parents) - 1, a2, b2))
        frontier = nxt
        depth += 1
    return NOT_FOUND, []


def bounded(table: Table, left: Word, right: Word, k: int, unnormed: Sequence[bool]) -> bool:
    """The k-step approximant of word bisimilarity, by direct unrolling."""
    proven: Dict[Tuple[Word, Word], int] = {}
    # explicit stack: (a, b, k, child iterator or None)
    a0, b0 = truncate(left, unnormed), truncate(right, unnormed)
    stack: List[list] = [[a0, b0, k, None]]
    while stack:
        frame = stack[-1]
        a, b, kk, it = frame
        if it is None:
            if kk == 0 or a == b or proven.get((a, b), -1) >= kk:
                stack.pop()
                continue
            ma = _moves(table, a, unnormed)
            mb = _moves(table, b, unnormed)
            if len(ma) != len(mb) or any(x[0] != y[0] for x, y in zip(ma, mb)):
                return False
            frame[3] = it = iter([(x[1], y[1]) for x, y in zip(ma, mb)])
        child = next(it, None)
        if child is None:
            proven[(a, b)] = kk
            stack.pop()
            continue
        stack.append([child[0], child[1], kk - 1, None])
    return True


def residual(table: Table, w: Word, trace: Sequence[int]) -> Tuple[bool, Word]:
    """Follow ``trace`` from ``w``; ``(False, ())`` if some label is not enabled."""
    for a in trace:
        if not w:
            return False, ()
        for lbl, tail in table[w[0]]:
            if lbl == a:
                w = tail + w[1:]
                break
        else:
            return False, ()
    return True, w
