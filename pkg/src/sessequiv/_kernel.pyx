# cython: language_level=3, boundscheck=False
"""Compiled word kernels; same contract as ``_kernel_py``."""

INF = -1
NOT_FOUND = 0
FOUND = 1
EXHAUSTED = 2


def norms(rows):
    cdef Py_ssize_t n = len(rows), x, i
    cdef long long s, best, big = 1 << 62
    cdef list val = [big] * n
    cdef bint changed = True
    cdef tuple tail
    cdef list row
    cdef list frozen = [list(r) for r in rows]
    while changed:
        changed = False
        for x in range(n):
            best = val[x]
            row = frozen[x]
            for tail in row:
                s = 1
                for i in range(len(tail)):
                    s += <long long>val[<Py_ssize_t>tail[i]]
                    if s >= best:
                        break
                if s < best:
                    best = s
            if best < <long long>val[x]:
                val[x] = best
                changed = True
    return [INF if v >= big else v for v in val]


cdef tuple _truncate(tuple w, list unnormed):
    cdef Py_ssize_t i, n = len(w)
    for i in range(n):
        if unnormed[<Py_ssize_t>w[i]]:
            return w[: i + 1]
    return w


def truncate(w, unnormed):
    return _truncate(tuple(w), list(unnormed))


cdef tuple _moves(tuple table, tuple w, list unnormed):
    if not w:
        return ()
    cdef tuple rest = w[1:]
    cdef list out = []
    for a, tail in table[<Py_ssize_t>w[0]]:
        out.append((a, _truncate(tail + rest, unnormed)))
    return tuple(out)


cdef bint _same_labels(tuple ma, tuple mb):
    cdef Py_ssize_t i, n = len(ma)
    if n != len(mb):
        return False
    for i in range(n):
        if ma[i][0] != mb[i][0]:
            return False
    return True


def distinguish(table, left, right, long max_depth, long max_pairs, unnormed):
    cdef tuple tab = table if type(table) is tuple else tuple(table)
    cdef list un = unnormed if type(unnormed) is list else list(unnormed)
    cdef tuple a0 = _truncate(tuple(left), un)
    cdef tuple b0 = _truncate(tuple(right), un)
    cdef set seen = {(a0, b0)}
    cdef list parents = [(-1, -1)]
    cdef list frontier = [(0, a0, b0)]
    cdef list nxt
    cdef long depth = 0
    cdef Py_ssize_t node, i
    cdef tuple a, b, ma, mb, key
    while frontier:
        if 0 <= max_depth <= depth:
            return NOT_FOUND, []
        nxt = []
        for node, a, b in frontier:
            ma = _moves(tab, a, un)
            mb = _moves(tab, b, un)
            if not _same_labels(ma, mb):
                la = {x[0] for x in ma}
                lb = {x[0] for x in mb}
                trace = [min(la ^ lb)]
                while node > 0:
                    node, lbl = parents[node]
                    trace.append(lbl)
                trace.reverse()
                return FOUND, trace
            for i in range(len(ma)):
                a2 = ma[i][1]
                b2 = mb[i][1]
                if a2 == b2:
                    continue
                key = (a2, b2)
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > max_pairs:
                    return EXHAUSTED, []
                parents.append((node, ma[i][0]))
                nxt.append((len(parents) - 1, a2, b2))
        frontier = nxt
        depth += 1
    return NOT_FOUND, []


def bounded(table, left, right, long k, unnormed):
    cdef tuple tab = table if type(table) is tuple else tuple(table)
    cdef list un = unnormed if type(unnormed) is list else list(unnormed)
    cdef dict proven = {}
    cdef tuple a0 = _truncate(tuple(left), un)
    cdef tuple b0 = _truncate(tuple(right), un)
    cdef list stack = [[a0, b0, k, None, 0]]
    cdef list frame
    cdef tuple a, b, ma, mb
    cdef long kk
    cdef Py_ssize_t pos
    while stack:
        frame = stack[-1]
        a = frame[0]
        b = frame[1]
        kk = frame[2]
        if frame[3] is None:
            if kk == 0 or a == b or proven.get((a, b), -1) >= kk:
                stack.pop()
                continue
            ma = _moves(tab, a, un)
            mb = _moves(tab, b, un)
            if not _same_labels(ma, mb):
                return False
            frame[3] = [(ma[i][1], mb[i][1]) for i in range(len(ma))]
        pos = frame[4]
        if pos >= len(frame[3]):
            proven[(a, b)] = kk
            stack.pop()
            continue
        frame[4] = pos + 1
        child = frame[3][pos]
        stack.append([child[0], child[1], kk - 1, None, 0])
    return True


def residual(table, w, trace):
    cdef tuple cur = tuple(w)
    for a in trace:
        if not cur:
            return False, ()
        for lbl, tail in table[cur[0]]:
            if lbl == a:
                cur = tail + cur[1:]
                break
        else:
            return False, ()
    return True, cur
