"""Brute-force ground truth for the pipeline.

Everything here is exponential and meant for desk-scale graphs: exact
clique-width decisions, exact colouring, colouring through a clique-width
expression, and exhaustive pattern and partition searches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cwterm import Create, CwTerm, Join, Relabel, Union
from .graph import Graph, bits, pattern
from .partition import VertexPartition, is_monotone_partition

CWD_MAX_N = 8
CWD_MAX_C = 4
CHROMATIC_MAX_N = 30
PATTERN_MAX_N = 12
THREE_CLIQUE_MAX_N = 12


class OracleLimitError(ValueError):
    pass


# -- exact clique-width ----------------------------------------------------------

@dataclass(frozen=True)
class CwdDecision:
    graph: Graph
    width: int
    answer: bool
    witness: CwTerm | None = None
    minimum: int | None = None

    def __bool__(self):
        return self.answer


def _classes(g: Graph, s: int) -> dict[int, int]:
    """Group ``s`` by neighbourhood outside ``s``: key -> class mask."""
    out: dict[int, int] = {}
    outside = g.full & ~s
    for v in bits(s):
        key = g.rows[v] & outside
        out[key] = out.get(key, 0) | (1 << v)
    return out


def _complete(g: Graph, x: int, y: int) -> bool:
    return all(g.rows[v] & y == y for v in bits(x))


def _best_merge(g: Graph, s: int, left: list[int], right: list[int], cap: int):
    """Fewest label groups for the union of two coarse-labelled halves.

    Classes of ``left`` and ``right`` may share a label (a matching); each
    group must end inside one class of ``s`` and every cross edge must be
    realisable by joining two whole groups. Returns ``(count, groups)``.
    """
    outside = g.full & ~s

    def key(m):
        return g.rows[(m & -m).bit_length() - 1] & outside

    lkeys = [key(c) for c in left]
    rkeys = [key(d) for d in right]
    best = None

    def check(groups):
        for a, b in groups:
            if a and b and any(g.rows[v] & b for v in bits(a)):
                return False
        for i, (a1, b1) in enumerate(groups):
            p = a1 | b1
            for a2, b2 in groups[i + 1:]:
                crosses = any(g.rows[v] & b2 for v in bits(a1)) or \
                    any(g.rows[v] & a2 for v in bits(b1))
                if crosses and not _complete(g, p, a2 | b2):
                    return False
        return True

    def rec(i, used, pairs):
        nonlocal best
        count = len(left) + len(right) - len(pairs)
        if i == len(left):
            if count > cap or (best is not None and count >= best[0]):
                return
            groups = [(left[a], right[b]) for a, b in pairs]
            matched_l = {a for a, _ in pairs}
            groups += [(c, 0) for a, c in enumerate(left) if a not in matched_l]
            groups += [(0, d) for b, d in enumerate(right) if b not in used]
            if check(groups):
                best = (count, groups)
            return
        for b in range(len(right)):
            if b not in used and lkeys[i] == rkeys[b]:
                rec(i + 1, used | {b}, pairs + [(i, b)])
        rec(i + 1, used, pairs)

    rec(0, frozenset(), [])
    return best


def _cwd_table(g: Graph, cap: int):
    """Minimum labels for every vertex subset, or cap+1 when above ``cap``."""
    n = g.n
    width = {}
    plan = {}
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            s = 0
            for v in combo:
                s |= 1 << v
            if size == 1:
                width[s] = 1
                continue
            best = cap + 1
            low = s & -s
            rest = s ^ low
            sub = rest
            # left half always holds the lowest vertex of s
            while True:
                s1 = low | sub
                s2 = s ^ s1
                if s2:
                    lb = max(width[s1], width[s2])
                    if lb < best:
                        merged = _best_merge(g, s, list(_classes(g, s1).values()),
                                             list(_classes(g, s2).values()), best - 1)
                        if merged is not None:
                            val = max(lb, merged[0])
                            if val < best:
                                best = val
                                plan[s] = (s1, s2, merged[1])
                if not sub:
                    break
                sub = (sub - 1) & rest
            width[s] = best
    return width, plan


def _witness(g: Graph, plan, c: int) -> CwTerm:
    ops = []

    def build(s, labelmap):
        if s & (s - 1) == 0:
            ops.append(Create(s.bit_length() - 1, labelmap[s]))
            return
        s1, s2, groups = plan[s]
        free = [lab for lab in range(c) if lab not in labelmap.values()]
        group_label = []
        owner = {}
        relabels = []
        for a, b in groups:
            m = a | b
            cls = next(mask for mask in labelmap if mask & m)
            if cls not in owner:
                owner[cls] = True
                group_label.append(labelmap[cls])
            else:
                lab = free.pop(0)
                group_label.append(lab)
                relabels.append(Relabel(lab, labelmap[cls]))
        map1 = {a: lab for (a, _), lab in zip(groups, group_label) if a}
        map2 = {b: lab for (_, b), lab in zip(groups, group_label) if b}
        build(s1, map1)
        build(s2, map2)
        ops.append(Union())
        for i, (a1, b1) in enumerate(groups):
            for j in range(i + 1, len(groups)):
                a2, b2 = groups[j]
                if any(g.rows[v] & b2 for v in bits(a1)) or any(g.rows[v] & a2 for v in bits(b1)):
                    ops.append(Join(group_label[i], group_label[j]))
        ops.extend(relabels)

    if g.n:
        build(g.full, {g.full: 0})
    return CwTerm(tuple(ops), c)


def brute_cwd_at_most(g: Graph, c: int) -> CwdDecision:
    """Decide whether ``g`` can be built with at most ``c`` labels."""
    if g.n > CWD_MAX_N or c > CWD_MAX_C:
        raise OracleLimitError(f"clique-width oracle limited to n <= {CWD_MAX_N}, c <= {CWD_MAX_C}")
    if g.n == 0:
        return CwdDecision(g, c, True, CwTerm((), max(c, 0)), 0)
    width, plan = _cwd_table(g, c)
    w = width[g.full]
    if w > c:
        return CwdDecision(g, c, False)
    return CwdDecision(g, c, True, _witness(g, plan, c), w)


def min_cwd(g: Graph, max_width: int = CWD_MAX_C) -> int | None:
    """Exact clique-width if it is at most ``max_width``."""
    d = brute_cwd_at_most(g, max_width)
    return d.minimum if d else None


# -- colouring -------------------------------------------------------------------

@dataclass(frozen=True)
class Colouring:
    assignment: tuple[int, ...]
    count: int

    def is_proper(self, g: Graph) -> bool:
        if len(self.assignment) != g.n:
            return False
        return all(self.assignment[u] != self.assignment[v] for u, v in g.edges())


def _greedy_clique(g: Graph) -> list[int]:
    best = []
    for start in range(g.n):
        clique = [start]
        cand = g.rows[start]
        while cand:
            v = max(bits(cand), key=lambda u: ((g.rows[u] & cand).bit_count(), -u))
            clique.append(v)
            cand &= g.rows[v]
        if len(clique) > len(best):
            best = clique
    return best


def _dsatur(g: Graph) -> list[int]:
    col = [-1] * g.n
    for _ in range(g.n):
        v = max((u for u in range(g.n) if col[u] < 0),
                key=lambda u: (len({col[w] for w in bits(g.rows[u]) if col[w] >= 0}),
                               g.degree(u), -u))
        used = {col[w] for w in bits(g.rows[v])}
        c = 0
        while c in used:
            c += 1
        col[v] = c
    return col


def _k_colour(g: Graph, k: int, seed: list[int]) -> list[int] | None:
    """Backtracking k-colouring; ``seed`` vertices are pre-coloured 0..len-1."""
    n = g.n
    col = [-1] * n
    for i, v in enumerate(seed):
        col[v] = i
    forbid = [0] * n
    for v in range(n):
        for w in bits(g.rows[v]):
            if col[w] >= 0:
                forbid[v] |= 1 << col[w]

    def pick():
        best, key = -1, None
        for u in range(n):
            if col[u] < 0:
                kk = (forbid[u].bit_count(), g.degree(u))
                if key is None or kk > key:
                    best, key = u, kk
        return best

    def rec(used):
        v = pick()
        if v < 0:
            return True
        options = [c for c in range(min(used + 1, k)) if not (forbid[v] >> c) & 1]
        for c in options:
            col[v] = c
            touched = [w for w in bits(g.rows[v]) if col[w] < 0 and not (forbid[w] >> c) & 1]
            for w in touched:
                forbid[w] |= 1 << c
            if rec(max(used, c + 1)):
                return True
            for w in touched:
                forbid[w] &= ~(1 << c)
            col[v] = -1
        return False

    return col if rec(len(seed)) else None


def chromatic_number_exact(g: Graph) -> Colouring:
    if g.n > CHROMATIC_MAX_N:
        raise OracleLimitError(f"exact colouring limited to n <= {CHROMATIC_MAX_N}")
    if g.n == 0:
        return Colouring((), 0)
    clique = _greedy_clique(g)
    upper = _dsatur(g)
    ub = max(upper) + 1
    for k in range(len(clique), ub):
        col = _k_colour(g, k, clique)
        if col is not None:
            return Colouring(tuple(col), max(col) + 1)
    return Colouring(tuple(upper), ub)


@dataclass(frozen=True)
class Elimination:
    residual: Graph
    removed: tuple[tuple[int, int], ...]  # (vertex, |N(x)| + 1) in removal order

    @property
    def bound(self) -> int:
        return max((b for _, b in self.removed), default=0)


def simplicial_eliminate(g: Graph) -> Elimination:
    r = g.full
    removed = []
    progress = True
    while progress:
        progress = False
        for v in bits(r):
            nb = g.rows[v] & r
            if g.is_clique(nb):
                removed.append((v, nb.bit_count() + 1))
                r &= ~(1 << v)
                progress = True
                break
    return Elimination(g.induced(bits(r)), tuple(removed))


def chromatic_via_simplicial(g: Graph) -> Colouring:
    """Colour ``G - simplicial vertices`` exactly, then add them back greedily."""
    elim = simplicial_eliminate(g)
    res = elim.residual
    base = chromatic_number_exact(res)
    col = [-1] * g.n
    for local, v in enumerate(res.origin or ()):
        col[v] = base.assignment[local]
    for v, _ in reversed(elim.removed):
        used = {col[w] for w in bits(g.rows[v]) if col[w] >= 0}
        c = 0
        while c in used:
            c += 1
        col[v] = c
    count = max(base.count, elim.bound)
    assert max(col, default=-1) + 1 <= count
    return Colouring(tuple(col), count)


class StateBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TermColouring:
    feasible: bool
    assignment: dict[int, int] | None = None
    states: int = 0

    def __bool__(self):
        return self.feasible


def _canon(sigs):
    return tuple(sorted(tuple(sorted(s)) for s in sigs))


def _order(sigs):
    keyed = [tuple(sorted(s)) for s in sigs]
    return sorted(range(len(keyed)), key=keyed.__getitem__)


def _relabelled(state, a, b):
    return [(set(s) - {a}) | {b} if a in s else set(s) for s in state]


def _merged(s1, s2, assign):
    comb = [set(s) for s in s1]
    for j, slot in enumerate(assign):
        if slot >= 0:
            comb[slot] |= set(s2[j])
        else:
            comb.append(set(s2[j]))
    return comb


def _injections(m1, m2, q):
    """Assignments of the right-hand colours to left colours (or -1 for fresh)."""
    def rec(j, used, fresh):
        if j == m2:
            yield ()
            return
        for slot in range(m1):
            if slot not in used:
                for rest in rec(j + 1, used | {slot}, fresh):
                    yield (slot,) + rest
        if m1 + fresh + 1 <= q:
            for rest in rec(j + 1, used, fresh + 1):
                yield (-1,) + rest
    yield from rec(0, frozenset(), 0)


def color_via_term(t: CwTerm, q: int, max_states: int = 200_000) -> TermColouring:
    """q-colourability over an expression.

    A state records, per colour, the set of labels whose classes use it;
    states are kept up to renaming of colours. Joins discard states where
    the joined labels share a colour.
    """
    nodes = []   # (op, children)
    tables = []  # state -> provenance
    stack = []
    peak = 0
    for op in t.ops:
        if isinstance(op, Create):
            table = {((op.label,),): None} if q >= 1 else {}
            nodes.append((op, ()))
        elif isinstance(op, Union):
            right, left = stack.pop(), stack.pop()
            table = {}
            for s1 in tables[left]:
                for s2 in tables[right]:
                    for assign in _injections(len(s1), len(s2), q):
                        key = _canon(_merged(s1, s2, assign))
                        if key not in table:
                            table[key] = (s1, s2, assign)
                            if len(table) > max_states:
                                raise StateBudgetExceeded(f"more than {max_states} states")
            nodes.append((op, (left, right)))
        elif isinstance(op, Join):
            child = stack.pop()
            table = {s: s for s in tables[child]
                     if not any(op.a in sig and op.b in sig for sig in s)}
            nodes.append((op, (child,)))
        else:
            child = stack.pop()
            table = {}
            for s in tables[child]:
                table.setdefault(_canon(_relabelled(s, op.src, op.dst)), s)
            nodes.append((op, (child,)))
        tables.append(table)
        stack.append(len(nodes) - 1)
        peak = max(peak, len(table))
    if not stack:
        return TermColouring(True, {}, 0)
    root = stack[-1]
    if not tables[root]:
        return TermColouring(False, None, peak)
    state = min(tables[root])
    assignment: dict[int, int] = {}
    todo = [(root, state, list(range(len(state))))]
    while todo:
        idx, state, colours = todo.pop()
        op, children = nodes[idx]
        prov = tables[idx][state]
        if isinstance(op, Create):
            assignment[op.v] = colours[0]
        elif isinstance(op, Join):
            todo.append((children[0], prov, colours))
        elif isinstance(op, Relabel):
            order = _order(_relabelled(prov, op.src, op.dst))
            child_colours = [0] * len(prov)
            for k, i in enumerate(order):
                child_colours[i] = colours[k]
            todo.append((children[0], prov, child_colours))
        else:
            s1, s2, assign = prov
            order = _order(_merged(s1, s2, assign))
            comb_colour = [0] * len(order)
            for k, i in enumerate(order):
                comb_colour[i] = colours[k]
            c1 = comb_colour[:len(s1)]
            fresh = iter(comb_colour[len(s1):])
            c2 = [comb_colour[slot] if slot >= 0 else next(fresh) for slot in assign]
            todo.append((children[0], s1, c1))
            todo.append((children[1], s2, c2))
    return TermColouring(True, assignment, peak)


def chromatic_via_term(t: CwTerm, lower: int = 1, max_states: int = 200_000) -> Colouring:
    n = len(eval_vertices(t))
    for q in range(max(lower, 1 if n else 0), n + 1):
        res = color_via_term(t, q, max_states)
        if res:
            return Colouring(tuple(res.assignment[v] for v in range(n)), q)
    return Colouring((), 0)


def eval_vertices(t: CwTerm) -> list[int]:
    return sorted(op.v for op in t.ops if isinstance(op, Create))


# -- exhaustive searches ---------------------------------------------------------

@dataclass(frozen=True)
class PartitionSearch:
    found: bool
    partition: VertexPartition | None = None

    def __bool__(self):
        return self.found


def monotone_3clique_partition_exists(g: Graph) -> PartitionSearch:
    """Search all partitions into three (possibly empty) cliques for a monotone one."""
    if g.n > THREE_CLIQUE_MAX_N:
        raise OracleLimitError(f"3-clique search limited to n <= {THREE_CLIQUE_MAX_N}")
    parts = []

    def rec(v):
        if v == g.n:
            masks = parts + [0] * (3 - len(parts))
            P = VertexPartition(tuple(frozenset(bits(m)) for m in masks))
            return P if is_monotone_partition(g, P) else None
        for i in range(len(parts)):
            if parts[i] & g.rows[v] == parts[i]:
                parts[i] |= 1 << v
                hit = rec(v + 1)
                parts[i] &= ~(1 << v)
                if hit:
                    return hit
        if len(parts) < 3:
            parts.append(1 << v)
            hit = rec(v + 1)
            parts.pop()
            if hit:
                return hit
        return None

    found = rec(0)
    return PartitionSearch(found is not None, found)


def naive_pattern_oracle(g: Graph, p) -> tuple[int, ...] | None:
    """First ordered vertex tuple (lexicographic) inducing ``p`` exactly."""
    p = pattern(p)
    if g.n > PATTERN_MAX_N:
        raise OracleLimitError(f"naive pattern search limited to n <= {PATTERN_MAX_N}")
    k = p.order
    pairs = [(i, j, (i, j) in p.edges) for i in range(k) for j in range(i + 1, k)]
    adj = [[bool((g.rows[u] >> v) & 1) for v in range(g.n)] for u in range(g.n)]
    for tup in itertools.permutations(range(g.n), k):
        if all(adj[tup[i]][tup[j]] == e for i, j, e in pairs):
            return tup
    return None


def naive_crossing(g: Graph, X, Y):
    """Literal search for ``x~y, x'~y', x!~y', x'!~y``; returns the quadruple or None."""
    for x, x2 in itertools.permutations(sorted(X), 2):
        for y, y2 in itertools.permutations(sorted(Y), 2):
            if (g.adjacent(x, y) and g.adjacent(x2, y2)
                    and not g.adjacent(x, y2) and not g.adjacent(x2, y)):
                return (x, x2, y, y2)
    return None
