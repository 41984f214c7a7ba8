"""Pure-Python bit-row kernels.

Rows are Python ints: bit ``u`` of ``rows[v]`` is set iff ``u ~ v``.
``_kernels.pyx`` implements the same two functions over fixed-width
machine words and must return identical results.
"""

BACKEND = "python"


def match_pattern(rows, n, pat_adj):
    """Lexicographically smallest induced embedding of a pattern.

    ``pat_adj[i]`` is the bitmask of pattern vertices adjacent to pattern
    vertex ``i``. Returns a tuple ``m`` with ``m[i]`` the host vertex of
    pattern vertex ``i``, or ``None``.
    """
    k = len(pat_adj)
    if k == 0:
        return ()
    if k > n:
        return None
    full = (1 << n) - 1
    non = [full & ~r & ~(1 << v) for v, r in enumerate(rows)]
    mapping = [0] * k

    def extend(i, cands):
        c = cands[0]
        while c:
            low = c & -c
            v = low.bit_length() - 1
            c ^= low
            mapping[i] = v
            if i == k - 1:
                return True
            nxt = []
            row, nrow = rows[v], non[v]
            adj = pat_adj[i]
            dead = False
            for t in range(i + 1, k):
                s = cands[t - i] & ~low
                s &= row if (adj >> t) & 1 else nrow
                if not s:
                    dead = True
                    break
                nxt.append(s)
            if not dead and extend(i + 1, nxt):
                return True
        return False

    if extend(0, [full] * k):
        return tuple(mapping)
    return None


def hev_scan(rows, n, part_masks):
    """Return the first subset mask lacking the extreme vertex property, or -1.

    Subsets are visited in increasing mask order. The partition is assumed
    monotone, so within a part the outside-neighbourhoods form a chain and
    extremes are the vertices of largest and smallest neighbourhood size.
    """
    parts = [p for p in part_masks if p]
    for x in range(1, 1 << n):
        live = [(p & x) for p in parts]
        if _has_extreme_uniform(rows, x, live):
            continue
        return x
    return -1


def _has_extreme_uniform(rows, x, live):
    nonempty = [a for a in live if a]
    if len(nonempty) == 1:
        return True
    for ia, a in enumerate(nonempty):
        outside = x & ~a
        sizes = []
        c = a
        while c:
            low = c & -c
            v = low.bit_length() - 1
            c ^= low
            nb = rows[v] & outside
            sizes.append((nb.bit_count(), nb))
        hi = max(s for s, _ in sizes)
        lo = min(s for s, _ in sizes)
        for s, nb in sizes:
            if s != hi and s != lo:
                continue
            for ib, b in enumerate(nonempty):
                if ib == ia:
                    continue
                t = nb & b
                if t and t != b:
                    break
            else:
                return True
    return False
