"""Graphs as immutable bit rows, edge-list I/O and induced pattern detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import kernels


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``rows[v]`` is an int whose bit ``u`` is set iff ``u`` and ``v`` are
    adjacent. Instances are immutable; every operation returns a new graph.
    ``origin`` maps local vertices back to a parent graph when the graph was
    produced by :meth:`induced`.
    """

    __slots__ = ("n", "rows", "names", "origin")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 names: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self._init(n, tuple(rows), names, None)

    def _init(self, n, rows, names, origin):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "names", tuple(names) if names else None)
        object.__setattr__(self, "origin", origin)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[int], names=None, origin=None) -> "Graph":
        n = len(rows)
        full = (1 << n) - 1
        for v, r in enumerate(rows):
            if r & ~full or (r >> v) & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            for u in bits(r):
                if not (rows[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
        g = cls.__new__(cls)
        g._init(n, tuple(rows), names, tuple(origin) if origin is not None else None)
        return g

    # -- queries -----------------------------------------------------------
    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    @property
    def m(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list with ``u < v``."""
        out = []
        for u, r in enumerate(self.rows):
            for v in bits(r >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def is_clique(self, mask: int) -> bool:
        for v in bits(mask):
            if (mask & ~(1 << v)) & ~self.rows[v]:
                return False
        return True

    # -- derived graphs ----------------------------------------------------
    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced by ``vertices``, relabelled ``0..k-1`` in sorted order."""
        vs = sorted(set(vertices))
        for v in vs:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} out of range")
        index = {v: i for i, v in enumerate(vs)}
        rows = []
        for v in vs:
            rows.append(to_mask(index[u] for u in bits(self.rows[v]) if u in index))
        names = [self.names[v] for v in vs] if self.names else None
        return Graph.from_rows(rows, names=names, origin=vs)

    def toggled(self, u: int, v: int) -> "Graph":
        """Copy with the adjacency of ``u`` and ``v`` flipped."""
        if u == v:
            raise ValueError("cannot toggle a self-loop")
        rows = list(self.rows)
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        return Graph.from_rows(rows, names=self.names)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    return g.induced(vertices)


# -- named graphs --------------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def empty(n: int) -> Graph:
    return Graph(n)


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


# -- edge-list I/O -------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the ``p edge n m`` / ``e u v`` format (1-indexed in the file)."""
    n = m = None
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        tag = fields[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(fields) != 4 or fields[1] != "edge":
                raise GraphFormatError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphFormatError(f"malformed header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("negative counts in header", lineno)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("edge before header", lineno)
            if len(fields) != 3:
                raise GraphFormatError(f"malformed edge {line!r}", lineno)
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphFormatError(f"malformed edge {line!r}", lineno) from None
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphFormatError(f"vertex index {x} out of range 1..{n}", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            seen.add(key)
            edges.append((u - 1, v - 1))
        else:
            raise GraphFormatError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p edge' header")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    return Graph(n, edges)


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    edges = g.edges()
    lines.append(f"p edge {g.n} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g, comment))


# -- patterns ------------------------------------------------------------------

@dataclass(frozen=True)
class Pattern:
    """A small graph searched for as an induced subgraph.

    Witnesses map pattern vertex ``i`` to host vertex ``witness[i]``; the
    vertex numbering below fixes which embedding is lexicographically first.
    """

    name: str
    order: int
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> list[int]:
        adj = [0] * self.order
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def graph(self) -> Graph:
        return Graph(self.order, self.edges)

    def __str__(self):
        return self.name


def _pat(name, order, edges):
    return Pattern(name, order, frozenset((min(u, v), max(u, v)) for u, v in edges))


def path_pattern(k: int) -> Pattern:
    return _pat(f"P{k}", k, [(i, i + 1) for i in range(k - 1)])


def cycle_pattern(k: int) -> Pattern:
    if k < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return _pat(f"C{k}", k, [(i, (i + 1) % k) for i in range(k)])


PATTERNS: dict[str, Pattern] = {
    "4K1": _pat("4K1", 4, []),
    "K4": _pat("K4", 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    "diamond": _pat("diamond", 4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]),
    "C4": cycle_pattern(4),
    "paw": _pat("paw", 4, [(0, 1), (1, 2), (1, 3), (2, 3)]),
    "claw": _pat("claw", 4, [(0, 1), (0, 2), (0, 3)]),
    "co-diamond": _pat("co-diamond", 4, [(0, 1)]),
    "2K2": _pat("2K2", 4, [(0, 1), (2, 3)]),
    "co-paw": _pat("co-paw", 4, [(0, 1), (1, 2)]),
    "co-claw": _pat("co-claw", 4, [(0, 1), (0, 2), (1, 2)]),
    "P4": path_pattern(4),
    "P6": path_pattern(6),
    "C6": cycle_pattern(6),
}

FOUR_VERTEX = ("P4", "K4", "diamond", "C4", "paw", "claw",
               "4K1", "co-diamond", "2K2", "co-paw", "co-claw")

CLASS_PATTERNS = ("4K1", "C4", "P6")


def pattern(spec: str | Pattern) -> Pattern:
    """Look up a pattern by name; ``Ck`` and ``Pk`` are accepted for any k."""
    if isinstance(spec, Pattern):
        return spec
    if spec in PATTERNS:
        return PATTERNS[spec]
    if len(spec) > 1 and spec[0] in "CP" and spec[1:].isdigit():
        k = int(spec[1:])
        return cycle_pattern(k) if spec[0] == "C" else path_pattern(k)
    raise KeyError(f"unknown pattern {spec!r}")


def induced_contains(g: Graph, p: str | Pattern) -> tuple[int, ...] | None:
    """Lexicographically smallest induced embedding of ``p`` in ``g``, or None."""
    p = pattern(p)
    if p.order > g.n:
        return None
    return kernels.match_pattern(g.rows, g.n, p.adjacency())


@dataclass(frozen=True)
class ClassVerdict:
    """Outcome of the (4K1, C4, P6)-free test; falsy when a pattern was found."""

    pattern: str | None = None
    witness: tuple[int, ...] | None = None

    @property
    def in_class(self) -> bool:
        return self.pattern is None

    def __bool__(self):
        return self.in_class


def is_in_class(g: Graph) -> ClassVerdict:
    for name in CLASS_PATTERNS:
        w = induced_contains(g, name)
        if w is not None:
            return ClassVerdict(name, w)
    return ClassVerdict()


def find_c6(g: Graph) -> tuple[int, ...] | None:
    """Anchor cycle ``(c1, ..., c6)``: the lexicographically smallest induced C6."""
    return induced_contains(g, "C6")


def induces(g: Graph, witness: Sequence[int], p: str | Pattern) -> bool:
    """True iff ``witness[i] -> i`` is an isomorphism onto ``p``."""
    p = pattern(p)
    if len(witness) != p.order or len(set(witness)) != p.order:
        return False
    for i in range(p.order):
        for j in range(i + 1, p.order):
            if g.adjacent(witness[i], witness[j]) != ((i, j) in p.edges):
                return False
    return True
