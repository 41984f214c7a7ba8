"""Instance generators: structured graphs around a C6, 3-rings, random graphs.

All randomness comes from :class:`random.Random` (Mersenne Twister) seeded
explicitly, so every output is a pure function of its arguments.

Structured instances place the anchor on vertices 0..5 and add cliques
``X6``, ``X2``, ``X3[j]`` and ``X4[j]``. Forced relations are installed
directly. Each vertex of an X3 or X4 class gets a random weight, and every
free pair is decided by a rule that is non-decreasing in both weights, so
the outside neighbourhoods of each part are nested in weight order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .graph import Graph, is_in_class
from .partition import BoxGraph, VertexPartition, box_graph, is_monotone_partition

PRESETS = ("sparse", "triangle-config", "x4-split", "x2-x6", "mixed")
CONFIG_MODES = ("triangle", "sparse", "anticomplete", "auto")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceParams:
    """Target class sizes and sampling knobs.

    ``configs`` gives, for the triples (1,3,5) and (2,4,6), one of
    ``"triangle"``, ``"sparse"``, ``"anticomplete"`` (no edges inside the
    triple) or ``"auto"`` (every dashed X3 pair sampled freely). Edges on
    ``X3[k]``-``X3[k+2]`` and on ``X3[k+3]``-``X3[k+5]`` together force a
    C4, so a triangle in one triple leaves the other one without edges.
    ``x4_one`` is the fraction of each X4 class meant for the part that is
    not complete to ``X3[j+5]``. ``density`` moves all staircase thresholds;
    larger means more edges. Sizes are upper bounds: vertices that cannot be
    placed without leaving the class are dropped.
    """

    x2: int = 0
    x2_index: int = 0
    x3: tuple[int, ...] = (0,) * 6
    x4: tuple[int, ...] = (0,) * 6
    x4_one: tuple[float, ...] = (0.5,) * 6
    x6: int = 0
    configs: tuple[str, str] = ("auto", "auto")
    density: float = 0.5
    seed: int = 0
    vertex_tries: int = 8
    require_full: bool = False
    max_tries: int = 50

    def __post_init__(self):
        if self.x2 < 0 or self.x6 < 0 or min(self.x3) < 0 or min(self.x4) < 0:
            raise ValueError("class sizes must be non-negative")
        if len(self.x3) != 6 or len(self.x4) != 6 or len(self.x4_one) != 6:
            raise ValueError("x3, x4 and x4_one need six entries")
        if not 0 <= self.x2_index < 3:
            raise ValueError("x2_index must be 0, 1 or 2")
        for c in self.configs:
            if c not in CONFIG_MODES:
                raise ValueError(f"unknown configuration {c!r}")

    @property
    def n(self) -> int:
        return 6 + self.x2 + self.x6 + sum(self.x3) + sum(self.x4)

    def to_json(self) -> dict:
        return {"x2": self.x2, "x2_index": self.x2_index, "x3": list(self.x3),
                "x4": list(self.x4), "x4_one": list(self.x4_one), "x6": self.x6,
                "configs": list(self.configs), "density": self.density,
                "seed": self.seed, "vertex_tries": self.vertex_tries,
                "require_full": self.require_full, "max_tries": self.max_tries}

    @classmethod
    def from_json(cls, doc: dict) -> "InstanceParams":
        doc = dict(doc)
        for key in ("x3", "x4", "x4_one", "configs"):
            if key in doc:
                doc[key] = tuple(doc[key])
        return cls(**doc)


def preset(name: str, seed: int) -> InstanceParams:
    """Parameters for a named preset; sizes vary with ``seed``, n stays <= 60."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    rng = random.Random(f"preset:{name}:{seed}")

    def sizes(lo, hi):
        return tuple(rng.randint(lo, hi) for _ in range(6))

    def tri_pair():
        pair = ["triangle", "anticomplete"]
        rng.shuffle(pair)
        return tuple(pair)

    if name == "sparse":
        return InstanceParams(x3=sizes(2, 7), x4=sizes(0, 2), configs=("sparse", "sparse"),
                              density=rng.uniform(0.3, 0.7), seed=seed)
    if name == "triangle-config":
        return InstanceParams(x3=sizes(2, 7), x4=sizes(0, 2), configs=tri_pair(),
                              density=rng.uniform(0.3, 0.7), seed=seed)
    if name == "x4-split":
        return InstanceParams(x3=sizes(1, 4), x4=sizes(2, 5),
                              x4_one=tuple(rng.uniform(0.3, 0.7) for _ in range(6)),
                              configs=("sparse", "sparse"),
                              density=rng.uniform(0.3, 0.7), seed=seed)
    if name == "x2-x6":
        return InstanceParams(x2=rng.randint(1, 4), x2_index=rng.randrange(3),
                              x6=rng.randint(1, 4), x3=sizes(0, 3), x4=sizes(0, 2),
                              configs=rng.choice([tri_pair(), ("sparse", "sparse")]),
                              density=rng.uniform(0.3, 0.7), seed=seed)
    return InstanceParams(x2=rng.randint(0, 3), x2_index=rng.randrange(3),
                          x6=rng.randint(0, 3), x3=sizes(0, 4), x4=sizes(0, 3),
                          x4_one=tuple(rng.uniform(0.2, 0.8) for _ in range(6)),
                          configs=(rng.choice(CONFIG_MODES), rng.choice(CONFIG_MODES)),
                          density=rng.uniform(0.2, 0.8), seed=seed)


def preset_for_seed(seed: int) -> tuple[str, InstanceParams]:
    """Round-robin over the presets, so a seed range covers all of them."""
    name = PRESETS[seed % len(PRESETS)]
    return name, preset(name, seed)


@dataclass(frozen=True)
class GeneratedInstance:
    graph: Graph
    partition: VertexPartition
    params: InstanceParams
    tries: int


class _Builder:
    def __init__(self, n):
        self.rows = [0] * n

    def edge(self, u, v):
        self.rows[u] |= 1 << v
        self.rows[v] |= 1 << u

    def complete(self, xs, ys):
        for x in xs:
            for y in ys:
                if x != y:
                    self.edge(x, y)


@dataclass(frozen=True)
class _Vertex:
    kind: str  # "c", "x2", "x3", "x4" or "x6"
    j: int = 0
    w: float = 0.0
    eta: int = 0


class _Rules:
    """Adjacency between vertex descriptors for one sample."""

    def __init__(self, p: InstanceParams, rng: random.Random):
        self.p = p
        spread = lambda: 2 * (1 - p.density) + rng.uniform(-0.3, 0.3)
        self.theta4 = [(spread(), spread()) for _ in range(6)]
        self.theta3 = {(j, (j + 2) % 6): spread() for j in range(6)}
        self.tau = [rng.uniform(0.1, 0.7) for _ in range(6)]
        self.lone = [rng.choice(t) for t in ((0, 2, 4), (1, 3, 5))]

    def adjacent(self, a: _Vertex, b: _Vertex) -> bool:
        order = {"c": 0, "x6": 1, "x2": 2, "x4": 3, "x3": 4}
        if order[a.kind] > order[b.kind]:
            a, b = b, a
        d = (b.j - a.j) % 6
        if a.kind == "c":
            if b.kind == "c":
                return d in (1, 5)
            if b.kind == "x6":
                return True
            if b.kind == "x2":
                return a.j in (b.j, b.j + 3)
            span = 3 if b.kind == "x3" else 4
            return (a.j - b.j) % 6 < span
        if a.kind == "x6" or b.kind == "x6":
            return True
        if a.kind == "x2":
            if b.kind == "x2":
                return True
            return d in ((2, 5) if b.kind == "x3" else (0, 3))
        if a.kind == "x4":
            if b.kind == "x4":
                return d != 2 and d != 4
            if d in (0, 1):
                return True
            if d in (3, 4):
                return False
            if (d == 2) == (a.eta == 1):
                return True
            return a.w + b.w > self.theta4[a.j][a.eta]
        # both in X3
        if d in (0, 1, 5):
            return True
        if d == 3:
            return False
        lo, hi = (a, b) if d == 2 else (b, a)
        mode = self.p.configs[a.j % 2]
        if mode == "triangle":
            return a.w > self.tau[a.j] and b.w > self.tau[b.j]
        if mode == "anticomplete":
            return False
        if mode == "sparse" and self.lone[a.j % 2] in (a.j, b.j):
            return False
        return a.w + b.w > self.theta3[(lo.j, hi.j)]


def _planned(p: InstanceParams) -> list[_Vertex]:
    out = [_Vertex("x6")] * p.x6 + [_Vertex("x2", p.x2_index)] * p.x2
    for j in range(6):
        out += [_Vertex("x3", j)] * p.x3[j] + [_Vertex("x4", j)] * p.x4[j]
    return out


def _sample(p: InstanceParams, rng: random.Random, vertex_tries: int):
    """Insert planned vertices in random order, keeping the graph in the class.

    A vertex whose sampled weight would create an induced 4K1, C4 or P6 is
    re-weighted up to ``vertex_tries`` times and otherwise dropped.
    """
    rules = _Rules(p, rng)
    verts = [_Vertex("c", i) for i in range(6)]
    rows = [(1 << ((i + 1) % 6)) | (1 << ((i + 5) % 6)) for i in range(6)]
    plan = _planned(p)
    # X2 and X6 have no weight to resample, so they go in first; triangle
    # triples come next so that later X4 weights adapt to them
    def rank(v):
        if v.kind in ("x2", "x6"):
            return 0
        return 1 if v.kind == "x3" and p.configs[v.j % 2] == "triangle" else 2

    rng.shuffle(plan)
    plan.sort(key=rank)
    has_top = [False] * 6
    for base in plan:
        for _ in range(vertex_tries):
            w = rng.random()
            tri = base.kind == "x3" and p.configs[base.j % 2] == "triangle"
            if tri and not has_top[base.j]:
                tau = rules.tau[base.j]
                w = tau + (1 - tau) * w
            eta = 0
            if base.kind == "x4":
                eta = 1 if w < p.x4_one[base.j] else 0
            v = _Vertex(base.kind, base.j, w, eta)
            nb = 0
            for u, other in enumerate(verts):
                if rules.adjacent(v, other):
                    nb |= 1 << u
            new = len(verts)
            cand = [r | (1 << new) if nb >> u & 1 else r for u, r in enumerate(rows)]
            cand.append(nb)
            if is_in_class(Graph.from_rows(cand)):
                verts.append(v)
                rows = cand
                if tri and w > rules.tau[base.j]:
                    has_top[base.j] = True
                break
    return Graph.from_rows(rows), verts


def _intended_partition(g: Graph, verts) -> VertexPartition:
    from .decompose import PART_NAMES, PART_INDEX

    parts = [set() for _ in PART_NAMES]
    for v, d in enumerate(verts):
        if d.kind == "c":
            name = f"c{d.j + 1}"
        elif d.kind in ("x2", "x6"):
            name = d.kind.upper()
        elif d.kind == "x3":
            name = f"X3_{d.j + 1}"
        else:
            back = [u for u, e in enumerate(verts) if e.kind == "x3" and e.j == (d.j + 5) % 6]
            eta = 0 if all(g.adjacent(v, u) for u in back) else 1
            name = f"X4_{d.j + 1}^{eta}"
        parts[PART_INDEX[name]].add(v)
    return VertexPartition.of(parts, PART_NAMES)


def gen_instance(p: InstanceParams) -> GeneratedInstance:
    """A (4K1, C4, P6)-free graph on the anchor plus up to the requested classes.

    With ``require_full`` every requested vertex must be placed; whole samples
    are then retried up to ``max_tries`` times.
    """
    rng = random.Random(p.seed)
    for attempt in range(1, p.max_tries + 1):
        g, verts = _sample(p, rng, p.vertex_tries)
        if g.n == p.n or not p.require_full:
            return GeneratedInstance(g, _intended_partition(g, verts), p, attempt)
    raise GenerationError(f"could not place all {p.n} vertices within {p.max_tries} tries")


def gen_preset(name: str, seed: int) -> GeneratedInstance:
    return gen_instance(preset(name, seed))


# -- 3-rings -----------------------------------------------------------------------

@dataclass(frozen=True)
class ThreeRing:
    graph: Graph
    partition: VertexPartition
    box: BoxGraph = field(compare=False)


def gen_3ring(m: int, profiles) -> ThreeRing:
    """Three cliques ``A0, A1, A2`` of size ``m``.

    ``profiles[k][i]`` is the number of leading vertices of ``A(k+1)`` that
    vertex ``i`` of ``Ak`` sees. Profiles must be non-increasing, which keeps
    each clique's outside neighbourhoods nested.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if len(profiles) != 3:
        raise ValueError("three profiles required")
    for k, prof in enumerate(profiles):
        prof = list(prof)
        if len(prof) != m or any(not 0 <= t <= m for t in prof):
            raise ValueError(f"profile {k} must list {m} values in 0..{m}")
        if any(a < b for a, b in zip(prof, prof[1:])):
            raise ValueError(f"profile {k} is not monotone (non-increasing): {prof}")
    b = _Builder(3 * m)
    cliques = [list(range(k * m, (k + 1) * m)) for k in range(3)]
    for cl in cliques:
        b.complete(cl, cl)
    for k, prof in enumerate(profiles):
        nxt = cliques[(k + 1) % 3]
        for i, t in enumerate(prof):
            for y in nxt[:t]:
                b.edge(cliques[k][i], y)
    g = Graph.from_rows(b.rows)
    P = VertexPartition.of(cliques, ("A1", "A2", "A3"))
    mono = is_monotone_partition(g, P)
    if not mono:
        raise AssertionError(f"staircase 3-ring is not monotone: {mono}")
    return ThreeRing(g, P, box_graph(g, P))


def random_profile(m: int, rng: random.Random) -> list[int]:
    return sorted((rng.randint(0, m) for _ in range(m)), reverse=True)


# -- random graphs -----------------------------------------------------------------

def gen_random(n: int, p: float, seed) -> Graph:
    """G(n, p): pairs ``u < v`` in lexicographic order, one ``random()`` each."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return Graph.from_rows(rows)


def with_seed(p: InstanceParams, seed: int) -> InstanceParams:
    return replace(p, seed=seed)
