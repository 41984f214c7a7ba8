"""Uniform and monotone relations, monotone partitions, box graphs, hev-property."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import kernels
from .graph import Graph, bits, to_mask

HEV_BRUTE_LIMIT = 18


class NotMonotoneError(ValueError):
    """Raised when a monotonicity precondition fails; carries ``(x, x', y, y')``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _mask(g: Graph, vertices) -> int:
    if isinstance(vertices, int):
        return vertices
    m = to_mask(vertices)
    if m >> g.n:
        raise ValueError(f"vertex set {sorted(vertices)} out of range for n={g.n}")
    return m


def _disjoint(x: int, y: int) -> None:
    if x & y:
        raise ValueError(f"sets overlap on {sorted(bits(x & y))}")


# -- pairwise relations --------------------------------------------------------

@dataclass(frozen=True)
class SetRelation:
    kind: str  # "complete", "anticomplete" or "mixed"
    monotone: bool
    vacuous: bool = False

    @property
    def uniform(self) -> bool:
        return self.kind != "mixed"


def _kind(g: Graph, x: int, y: int) -> str:
    if not x or not y:
        return "anticomplete"
    saw_edge = saw_non = False
    for v in bits(x):
        nb = g.rows[v] & y
        if nb:
            saw_edge = True
        if nb != y:
            saw_non = True
        if saw_edge and saw_non:
            return "mixed"
    return "complete" if saw_edge else "anticomplete"


def is_complete(g: Graph, x: int, y: int) -> bool:
    return all(g.rows[v] & y == y for v in bits(x))


def is_anticomplete(g: Graph, x: int, y: int) -> bool:
    return all(not g.rows[v] & y for v in bits(x))


def is_uniform(g: Graph, x: int, y: int) -> bool:
    return _kind(g, x, y) != "mixed"


def relation_between(g: Graph, X, Y) -> SetRelation:
    x, y = _mask(g, X), _mask(g, Y)
    _disjoint(x, y)
    if not x or not y:
        return SetRelation("anticomplete", True, vacuous=True)
    kind = _kind(g, x, y)
    mono = True if kind != "mixed" else _crossing(g, x, y) is None
    return SetRelation(kind, mono)


def _crossing(g: Graph, x: int, y: int):
    """A crossing ``(x, x', y, y')`` or None, via the nesting chain on ``x``."""
    order = sorted(bits(x), key=lambda v: ((g.rows[v] & y).bit_count(), v))
    for a, b in zip(order, order[1:]):
        na, nb = g.rows[a] & y, g.rows[b] & y
        if na & ~nb:
            ya = (na & ~nb).bit_length() - 1
            yb = (nb & ~na).bit_length() - 1
            return (a, b, ya, yb)
    return None


def is_monotone_between(g: Graph, X, Y) -> bool:
    x, y = _mask(g, X), _mask(g, Y)
    _disjoint(x, y)
    return _crossing(g, x, y) is None


def nested_side(g: Graph, X, Y) -> bool:
    """Neighbourhoods of ``X`` in ``Y`` are linearly ordered by inclusion."""
    x, y = _mask(g, X), _mask(g, Y)
    _disjoint(x, y)
    nbs = sorted({g.rows[v] & y for v in bits(x)}, key=int.bit_count)
    return all(a & ~b == 0 for a, b in zip(nbs, nbs[1:]))


def monotone_order(g: Graph, X, Y) -> list[int]:
    """``X`` sorted by increasing neighbourhood in ``Y``; ties by vertex index."""
    x, y = _mask(g, X), _mask(g, Y)
    _disjoint(x, y)
    w = _crossing(g, x, y)
    if w is not None:
        raise NotMonotoneError(f"{sorted(bits(x))} is not monotone to {sorted(bits(y))}", w)
    return sorted(bits(x), key=lambda v: ((g.rows[v] & y).bit_count(), v))


# -- partitions ----------------------------------------------------------------

@dataclass(frozen=True)
class VertexPartition:
    """Ordered, named parts; empty parts are kept and keep their index."""

    parts: tuple[frozenset[int], ...]
    names: tuple[str, ...] = ()
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"A{i + 1}" for i in range(len(parts))))
        elif len(self.names) != len(parts):
            raise ValueError("one name per part required")
        object.__setattr__(self, "masks", tuple(to_mask(p) for p in parts))

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]], names: Sequence[str] = ()) -> "VertexPartition":
        return cls(tuple(frozenset(p) for p in parts), tuple(names))

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def part_of(self) -> dict[int, int]:
        return {v: i for i, p in enumerate(self.parts) for v in p}

    def restrict(self, vertices) -> "VertexPartition":
        keep = frozenset(vertices)
        return VertexPartition(tuple(p & keep for p in self.parts), self.names)

    def relabel(self, mapping: dict[int, int]) -> "VertexPartition":
        """Rename vertices, dropping those missing from ``mapping``."""
        return VertexPartition(
            tuple(frozenset(mapping[v] for v in p if v in mapping) for p in self.parts),
            self.names)

    def nonempty(self) -> int:
        return sum(1 for p in self.parts if p)

    def validate(self, g: Graph) -> None:
        seen = 0
        for name, m in zip(self.names, self.masks):
            if m >> g.n:
                raise ValueError(f"part {name} has vertices outside 0..{g.n - 1}")
            if seen & m:
                raise ValueError(f"part {name} overlaps an earlier part")
            seen |= m
        if seen != g.full:
            raise ValueError(f"partition misses vertices {sorted(bits(g.full & ~seen))}")

    def cliques(self, g: Graph) -> list[bool]:
        return [g.is_clique(m) for m in self.masks]

    def to_json(self) -> dict:
        return {"parts": [{"name": n, "vertices": sorted(p)}
                          for n, p in zip(self.names, self.parts)]}

    @classmethod
    def from_json(cls, doc) -> "VertexPartition":
        if isinstance(doc, str):
            doc = json.loads(doc)
        parts = doc["parts"]
        return cls(tuple(frozenset(p["vertices"]) for p in parts),
                   tuple(p["name"] for p in parts))


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    part: int | None = None
    witness: tuple[int, int, int, int] | None = None

    def __bool__(self):
        return self.ok


def is_monotone_partition(g: Graph, P: VertexPartition) -> PartitionCheck:
    P.validate(g)
    for i, m in enumerate(P.masks):
        w = _crossing(g, m, g.full & ~m)
        if w is not None:
            return PartitionCheck(False, i, w)
    return PartitionCheck(True)


def extreme_vertices(g: Graph, P: VertexPartition, i: int,
                     within: int | None = None) -> tuple[frozenset[int], frozenset[int]]:
    """(maximal, minimal) vertices of part ``i``, optionally inside ``G[within]``."""
    scope = g.full if within is None else within
    a = P.masks[i] & scope
    if not a:
        raise ValueError(f"part {P.names[i]} is empty")
    outside = scope & ~a
    w = _crossing(g, a, outside)
    if w is not None:
        raise NotMonotoneError(f"part {P.names[i]} is not monotone to its complement", w)
    nbs = {v: g.rows[v] & outside for v in bits(a)}
    hi = max(nb.bit_count() for nb in nbs.values())
    lo = min(nb.bit_count() for nb in nbs.values())
    return (frozenset(v for v, nb in nbs.items() if nb.bit_count() == hi),
            frozenset(v for v, nb in nbs.items() if nb.bit_count() == lo))


def non_uniform_partners(g: Graph, P: VertexPartition, i: int,
                         within: int | None = None) -> list[int]:
    scope = g.full if within is None else within
    a = P.masks[i] & scope
    return [j for j, b in enumerate(P.masks)
            if j != i and not is_uniform(g, a, b & scope)]


# -- box graphs ----------------------------------------------------------------

@dataclass(frozen=True)
class BoxGraph:
    """One node per part; an edge joins two parts that are not uniform."""

    k: int
    edges: frozenset[tuple[int, int]]

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in e)

    def max_degree(self) -> int:
        return max((self.degree(i) for i in range(self.k)), default=0)


def box_graph(g: Graph, P: VertexPartition) -> BoxGraph:
    P.validate(g)
    edges = set()
    for i, a in enumerate(P.masks):
        for j in range(i + 1, len(P)):
            if not is_uniform(g, a, P.masks[j]):
                edges.add((i, j))
    return BoxGraph(len(P), frozenset(edges))


def is_forest(b: BoxGraph) -> bool:
    parent = list(range(b.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in b.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


# -- hev-property --------------------------------------------------------------

@dataclass(frozen=True)
class HevResult:
    ok: bool
    witness: frozenset[int] | None = None

    def __bool__(self):
        return self.ok


def hev_holds_brute(g: Graph, P: VertexPartition) -> HevResult:
    """Exhaustive check of the extreme vertex property on every vertex subset.

    The returned witness, if any, is the subset with the smallest bitmask
    that has no extreme vertex uniform to all other parts.
    """
    if g.n > HEV_BRUTE_LIMIT:
        raise ValueError(f"hev brute force is limited to n <= {HEV_BRUTE_LIMIT}, got {g.n}")
    mono = is_monotone_partition(g, P)
    if not mono:
        raise NotMonotoneError(f"part {P.names[mono.part]} is not monotone", mono.witness)
    x = kernels.hev_scan(g.rows, g.n, list(P.masks))
    if x < 0:
        return HevResult(True)
    return HevResult(False, frozenset(bits(x)))


def near_uniform_check(g: Graph, P: VertexPartition) -> bool:
    """Cliques, box graph of maximum degree one, C4-free non-uniform pairs."""
    from .graph import induced_contains

    P.validate(g)
    if not all(P.cliques(g)):
        return False
    b = box_graph(g, P)
    if b.max_degree() > 1:
        return False
    for i, j in b.edges:
        sub = g.induced(P.parts[i] | P.parts[j])
        if induced_contains(sub, "C4") is not None:
            return False
    return True
