"""The 26-part monotone clique partition anchored at an induced C6.

Anchor vertices are ``c[0..5]`` with ``c[i] ~ c[i+1]``; all class indices
are taken modulo 6 and are 0-based internally (``X3[j]`` is adjacent to
``c[j], c[j+1], c[j+2]``). Part names and JSON use 1-based indices, so
``X3[0]`` is reported as ``X3_1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import Graph, bits, find_c6, induces, is_in_class, to_mask
from .partition import VertexPartition, _crossing, is_monotone_partition, is_uniform

TRIPLES = ((0, 2, 4), (1, 3, 5))


class StructureError(ValueError):
    """The graph violates a structural fact that holds for the class.

    ``witness`` is ``(pattern name, vertices)`` for an induced 4K1, C4 or P6
    found among the vertices involved, when one exists.
    """

    def __init__(self, observation, message, vertices=(), witness=None):
        self.observation = observation
        self.vertices = tuple(vertices)
        self.witness = witness
        text = f"[{observation}] {message}"
        if witness:
            text += f"; induced {witness[0]} on {list(witness[1])}"
        super().__init__(text)


class NotInClassError(StructureError):
    pass


class NoC6Error(ValueError):
    pass


def forbidden_witness(g: Graph, vertices) -> tuple[str, tuple[int, ...]] | None:
    """An induced 4K1, C4 or P6 inside ``G[vertices]``, in ``g``'s numbering."""
    sub = g.induced(vertices)
    verdict = is_in_class(sub)
    if verdict:
        return None
    mapped = tuple(sub.origin[v] for v in verdict.witness)
    assert induces(g, mapped, verdict.pattern)
    return verdict.pattern, mapped


def _fail(g, observation, message, vertices, anchor):
    w = forbidden_witness(g, set(vertices) | set(anchor))
    if w is None:
        w = forbidden_witness(g, range(g.n))
    return StructureError(observation, message, vertices, w)


# -- classification --------------------------------------------------------------

@dataclass(frozen=True)
class C6Classes:
    anchor: tuple[int, ...]
    x2: frozenset[int]
    x2_index: int | None  # j in 0..2 with X2 adjacent to c[j], c[j+3]
    x3: tuple[frozenset[int], ...]
    x4: tuple[frozenset[int], ...]
    x6: frozenset[int]


def _template(hits: list[int]) -> tuple[int, int] | None:
    """(degree, j) if the anchor neighbourhood matches an X_{deg,j} template."""
    s = set(hits)
    d = len(s)
    if d == 6:
        return 6, 0
    for j in range(6):
        if d == 2 and s == {j, (j + 3) % 6}:
            return 2, j % 3
        if d in (3, 4) and s == {(j + t) % 6 for t in range(d)}:
            return d, j
    return None


def anchor_hits(g: Graph, anchor, v: int) -> list[int]:
    return [i for i, c in enumerate(anchor) if g.adjacent(v, c)]


def classify_by_c6(g: Graph, anchor) -> C6Classes:
    anchor = tuple(anchor)
    if len(anchor) != 6 or not induces(g, anchor, "C6"):
        raise ValueError(f"{anchor} does not induce a C6 in cycle order")
    amask = to_mask(anchor)
    x2, x2_j = set(), {}
    x3 = [set() for _ in range(6)]
    x4 = [set() for _ in range(6)]
    x6 = set()
    for v in bits(g.full & ~amask):
        hits = anchor_hits(g, anchor, v)
        if len(hits) in (0, 1, 5):
            raise _fail(g, "X-empty", f"vertex {v} has {len(hits)} anchor neighbours",
                        [v], anchor)
        tpl = _template(hits)
        if tpl is None:
            obs = {2: "X2", 3: "X3", 4: "X4"}[len(hits)]
            raise _fail(g, obs, f"vertex {v} sees anchor positions {hits}, no template fits",
                        [v], anchor)
        deg, j = tpl
        if deg == 2:
            x2.add(v)
            x2_j[v] = j
        elif deg == 3:
            x3[j].add(v)
        elif deg == 4:
            x4[j].add(v)
        else:
            x6.add(v)
    indices = sorted(set(x2_j.values()))
    if len(indices) > 1:
        u = min(v for v in x2 if x2_j[v] == indices[0])
        w = min(v for v in x2 if x2_j[v] == indices[1])
        raise _fail(g, "X2-uniform", f"X2 meets X2_{indices[0] + 1} and X2_{indices[1] + 1}",
                    [u, w], anchor)
    return C6Classes(anchor, frozenset(x2), indices[0] if indices else None,
                     tuple(frozenset(s) for s in x3), tuple(frozenset(s) for s in x4),
                     frozenset(x6))


def _non_nbr(g, v, group):
    """Smallest vertex of ``group`` not adjacent to ``v``, or None."""
    miss = to_mask(group) & ~g.rows[v]
    return (miss & -miss).bit_length() - 1 if miss else None


def split_x4(g: Graph, j: int, x4j, x3, anchor=()) -> tuple[frozenset[int], frozenset[int]]:
    """``(X4_j^0, X4_j^1)``: complete to ``X3[j+5]`` goes to the first part."""
    back, fwd = x3[(j + 5) % 6], x3[(j + 2) % 6]
    zero, one = set(), set()
    for x in sorted(x4j):
        (zero if _non_nbr(g, x, back) is None else one).add(x)
    for x in sorted(one):
        z = _non_nbr(g, x, fwd)
        if z is not None:
            y = _non_nbr(g, x, back)
            raise _fail(g, "X4partition",
                        f"X4_{j + 1} vertex {x} misses {y} in X3_{(j + 5) % 6 + 1} "
                        f"and {z} in X3_{(j + 2) % 6 + 1}", [x, y, z], anchor)
    return frozenset(zero), frozenset(one)


# -- triangle / sparse configurations -------------------------------------------

@dataclass(frozen=True)
class Configuration:
    triple: tuple[int, int, int]
    kind: str  # "sparse" or "triangle"
    sparse_index: int | None = None
    triangle: tuple[int, int, int] | None = None
    x0: dict = field(default_factory=dict)
    x1: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {"triple": [t + 1 for t in self.triple], "kind": self.kind}
        if self.kind == "sparse":
            doc["sparse_index"] = self.sparse_index + 1
        else:
            doc["triangle"] = list(self.triangle)
            for t in self.triple:
                doc[f"X3_{t + 1}^0"] = sorted(self.x0[t])
                doc[f"X3_{t + 1}^1"] = sorted(self.x1[t])
        return doc

    @classmethod
    def from_json(cls, doc) -> "Configuration":
        triple = tuple(t - 1 for t in doc["triple"])
        if doc["kind"] == "sparse":
            return cls(triple, "sparse", doc["sparse_index"] - 1)
        return cls(triple, "triangle", None, tuple(doc["triangle"]),
                   {t: frozenset(doc[f"X3_{t + 1}^0"]) for t in triple},
                   {t: frozenset(doc[f"X3_{t + 1}^1"]) for t in triple})


def _first_edge(g, xs, ys):
    for x in sorted(xs):
        hit = g.rows[x] & to_mask(ys)
        if hit:
            return x, (hit & -hit).bit_length() - 1
    return None


def _first_non_edge(g, xs, ys):
    for x in sorted(xs):
        y = _non_nbr(g, x, ys)
        if y is not None:
            return x, y
    return None


def triangle_configuration(g: Graph, x3, j: int, anchor=()) -> Configuration:
    """Classify the triple ``(j, j+2, j+4)`` of X3 classes."""
    triple = (j % 6, (j + 2) % 6, (j + 4) % 6)
    for t in triple:
        others = x3[(t + 2) % 6] | x3[(t + 4) % 6]
        if _first_edge(g, x3[t], others) is None:
            return Configuration(triple, "sparse", t)
    a_cls, b_cls, c_cls = (x3[t] for t in triple)
    tri = None
    for a in sorted(a_cls):
        for b in sorted(b_cls):
            if not g.adjacent(a, b):
                continue
            common = g.rows[a] & g.rows[b] & to_mask(c_cls)
            if common:
                tri = (a, b, (common & -common).bit_length() - 1)
                break
        if tri:
            break
    involved = a_cls | b_cls | c_cls
    if tri is None:
        raise _fail(g, "triangular", f"triple {[t + 1 for t in triple]} is neither sparse "
                    "nor has a triangle", sorted(involved), anchor)
    by_class = dict(zip(triple, tri))
    x1, x0 = {}, {}
    for t in triple:
        pivot = by_class[(t + 2) % 6]
        x1[t] = frozenset(v for v in x3[t] if g.adjacent(v, pivot))
        x0[t] = x3[t] - x1[t]
    for t in triple:
        for r in triple:
            if t == r:
                continue
            bad = _first_non_edge(g, x1[t], x1[r]) or _first_edge(g, x0[t], x3[r])
            if bad:
                raise _fail(g, "triangular", f"configuration relation broken at {bad}",
                            list(bad) + list(tri), anchor)
    return Configuration(triple, "triangle", None, tri, x0, x1)


# -- the partition ---------------------------------------------------------------

def part_names() -> list[str]:
    names = [f"c{i + 1}" for i in range(6)] + ["X6", "X2"]
    for j in range(6):
        names += [f"X4_{j + 1}^0", f"X4_{j + 1}^1"]
    names += [f"X3_{j + 1}" for j in range(6)]
    return names


PART_NAMES = tuple(part_names())
PART_INDEX = {name: i for i, name in enumerate(PART_NAMES)}


@dataclass(frozen=True)
class Verdict:
    name: str
    j: int | None
    passed: bool
    witness: tuple[int, ...] | None = None
    part: str | None = None

    def to_json(self) -> dict:
        doc = {"name": self.name, "j": self.j, "pass": self.passed}
        if self.part:
            doc["part"] = self.part
        if self.witness is not None:
            doc["witness"] = list(self.witness)
        return doc


@dataclass(frozen=True)
class DecompositionReport:
    classes: C6Classes
    x4_split: tuple[tuple[frozenset[int], frozenset[int]], ...]
    configurations: tuple[Configuration, ...]
    partition: VertexPartition
    verdicts: tuple[Verdict, ...] = ()

    @property
    def anchor(self):
        return self.classes.anchor

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def to_json(self) -> dict:
        c = self.classes
        classes = {"X2": sorted(c.x2), "X6": sorted(c.x6)}
        for j in range(6):
            classes[f"X3_{j + 1}"] = sorted(c.x3[j])
            classes[f"X4_{j + 1}"] = sorted(c.x4[j])
            classes[f"X4_{j + 1}^0"] = sorted(self.x4_split[j][0])
            classes[f"X4_{j + 1}^1"] = sorted(self.x4_split[j][1])
        return {
            "anchor": list(c.anchor),
            "x2_index": None if c.x2_index is None else c.x2_index + 1,
            "classes": classes,
            "configurations": [cfg.to_json() for cfg in self.configurations],
            "partition": self.partition.to_json(),
            "verdicts": [v.to_json() for v in self.verdicts],
            "ok": self.ok,
        }

    @classmethod
    def from_json(cls, doc) -> "DecompositionReport":
        if isinstance(doc, str):
            doc = json.loads(doc)
        cl = doc["classes"]
        x2i = doc["x2_index"]
        classes = C6Classes(
            tuple(doc["anchor"]), frozenset(cl["X2"]), None if x2i is None else x2i - 1,
            tuple(frozenset(cl[f"X3_{j + 1}"]) for j in range(6)),
            tuple(frozenset(cl[f"X4_{j + 1}"]) for j in range(6)),
            frozenset(cl["X6"]))
        split = tuple((frozenset(cl[f"X4_{j + 1}^0"]), frozenset(cl[f"X4_{j + 1}^1"]))
                      for j in range(6))
        configs = tuple(Configuration.from_json(d) for d in doc["configurations"])
        verdicts = tuple(Verdict(v["name"], v["j"], v["pass"],
                                 tuple(v["witness"]) if "witness" in v else None, v.get("part"))
                         for v in doc.get("verdicts", ()))
        return cls(classes, split, configs, VertexPartition.from_json(doc["partition"]), verdicts)


def assemble_partition(classes: C6Classes, split) -> VertexPartition:
    parts = [frozenset([c]) for c in classes.anchor]
    parts += [classes.x6, classes.x2]
    for j in range(6):
        parts += [split[j][0], split[j][1]]
    parts += list(classes.x3)
    return VertexPartition(tuple(parts), PART_NAMES)


def build_partition(g: Graph, check_class: bool = True) -> DecompositionReport:
    if check_class:
        verdict = is_in_class(g)
        if not verdict:
            raise NotInClassError("class", "graph is not (4K1, C4, P6)-free", verdict.witness,
                                  (verdict.pattern, verdict.witness))
    anchor = find_c6(g)
    if anchor is None:
        raise NoC6Error("graph has no induced C6")
    classes = classify_by_c6(g, anchor)
    split = tuple(split_x4(g, j, classes.x4[j], classes.x3, anchor) for j in range(6))
    configs = tuple(triangle_configuration(g, classes.x3, t[0], anchor) for t in TRIPLES)
    partition = assemble_partition(classes, split)
    report = DecompositionReport(classes, split, configs, partition)
    return DecompositionReport(classes, split, configs, partition,
                               tuple(verify_observations(g, report)))


# -- observation verifier --------------------------------------------------------

def _m(vs) -> int:
    return to_mask(vs)


def _complete_pair(g, xs, ys):
    """First non-adjacent pair between the two sets, or None."""
    return _first_non_edge(g, xs, ys)


def _anti_pair(g, xs, ys):
    return _first_edge(g, xs, ys)


def _non_clique(g, xs):
    for x in sorted(xs):
        y = _non_nbr(g, x, set(xs) - {x})
        if y is not None:
            return x, y
    return None


def verify_observations(g: Graph, r: DecompositionReport) -> list[Verdict]:
    """Re-check every structural fact of the decomposition against ``g``."""
    out: list[Verdict] = []
    c = r.classes
    anchor = c.anchor
    x3, x4 = c.x3, c.x4

    def add(name, j, bad, part=None):
        out.append(Verdict(name, None if j is None else j + 1, bad is None,
                           None if bad is None else tuple(bad), part))

    # the partition covers V(G) exactly
    seen, bad = 0, None
    for p in r.partition.masks:
        if seen & p:
            bad = ((seen & p).bit_length() - 1,)
        seen |= p
    if bad is None and seen != g.full:
        bad = ((g.full & ~seen).bit_length() - 1,)
    if bad is None and len(r.partition) != 26:
        bad = (len(r.partition),)
    add("partition", None, bad)

    anchor_ok = len(anchor) == 6 and induces(g, anchor, "C6")
    add("anchor", None, None if anchor_ok else tuple(anchor))

    amask = _m(anchor)
    bad = None
    for v in bits(g.full & ~amask):
        if len(anchor_hits(g, anchor, v)) in (0, 1, 5):
            bad = (v,)
            break
    add("X-empty", None, bad)

    def template_check(vs, deg, j):
        for v in sorted(vs):
            if _template(anchor_hits(g, anchor, v)) != (deg, j):
                return (v,)
        return _non_clique(g, vs)

    add("X2", None if c.x2_index is None else c.x2_index,
        template_check(c.x2, 2, c.x2_index) if c.x2 else None)
    for j in range(6):
        add("X3", j, template_check(x3[j], 3, j))
    for j in range(6):
        bad = template_check(x4[j], 4, j)
        zero, one = r.x4_split[j]
        if bad is None and (zero & one or (zero | one) != x4[j]):
            bad = tuple(sorted(zero ^ one ^ x4[j]))[:1] or tuple(sorted(zero & one))[:1]
        add("X4", j, bad)

    # X6 is a clique complete to everything else
    bad = None
    for v in sorted(c.x6):
        miss = [a for a in anchor if not g.adjacent(v, a)]
        if miss:
            bad = (min(v, miss[0]), max(v, miss[0]))
            break
    bad = bad or _non_clique(g, c.x6) or _complete_pair(g, c.x6, set(range(g.n)) - c.x6)
    add("AdjX6", None, bad)

    # X2 has one fixed neighbourhood outside itself
    bad = None
    if c.x2:
        j = c.x2_index
        expected = (x3[(j + 2) % 6] | x3[(j + 5) % 6] | x4[j] | x4[(j + 3) % 6] | c.x6
                    | {anchor[j], anchor[(j + 3) % 6]})
        emask = _m(expected)
        for u in sorted(c.x2):
            got = g.rows[u] & ~_m(c.x2)
            if got != emask:
                diff = got ^ emask
                bad = (u, (diff & -diff).bit_length() - 1)
                break
        if bad is None:
            for i, p in enumerate(r.partition.masks):
                if r.partition.names[i] != "X2" and not is_uniform(g, _m(c.x2), p):
                    bad = (min(c.x2), min(bits(p)))
                    break
    add("X2-uniform", None if c.x2_index is None else c.x2_index, bad)

    for j in range(6):
        bad = (_complete_pair(g, x4[j], x4[(j + 1) % 6] | x4[(j + 3) % 6] | x4[(j + 5) % 6])
               or _anti_pair(g, x4[j], x4[(j + 2) % 6] | x4[(j + 4) % 6]))
        add("X4i-X4j", j, bad)
    for j in range(6):
        bad = (_complete_pair(g, x4[j], x3[j] | x3[(j + 1) % 6])
               or _anti_pair(g, x4[j], x3[(j + 3) % 6] | x3[(j + 4) % 6]))
        add("X4-join-X3", j, bad)
    for j in range(6):
        zero, one = r.x4_split[j]
        bad = (_complete_pair(g, zero, x3[(j + 5) % 6])
               or _complete_pair(g, one, x3[(j + 2) % 6]))
        add("X4partition", j, bad)

    P = r.partition
    for j in range(6):
        for eta in (0, 1):
            name = f"X4_{j + 1}^{eta}"
            i = PART_INDEX[name]
            a = P.masks[i]
            nonuni = [k for k, b in enumerate(P.masks) if k != i and not is_uniform(g, a, b)]
            bad = tuple(nonuni) if len(nonuni) > 1 else _crossing(g, a, g.full & ~a)
            add("X4Mon", j, bad, name)

    for j in range(6):
        bad = (_complete_pair(g, x3[j], x3[(j + 1) % 6] | x3[(j + 5) % 6])
               or _anti_pair(g, x3[j], x3[(j + 3) % 6]))
        add("X3-join-X3", j, bad)
    for j in range(6):
        add("X3P4", j, _crossing(g, _m(x3[j]), _m(x3[(j + 2) % 6] | x3[(j + 4) % 6])))
    for j in range(6):
        a = _m(x3[j])
        add("X3Mon", j, _crossing(g, a, g.full & ~a))

    # the free (dashed) X3/X4 pairs are monotone
    for j in range(6):
        zero, one = r.x4_split[j]
        bad = (_crossing(g, _m(zero), _m(x3[(j + 2) % 6]))
               or _crossing(g, _m(one), _m(x3[(j + 5) % 6]))
               or _crossing(g, _m(x3[j]), _m(x3[(j + 2) % 6])))
        add("X34-dashed", j, bad)

    for cfg in r.configurations:
        t0 = cfg.triple[0]
        add("triangular", t0, _check_configuration(g, x3, cfg))
        add("triangle-closure", t0, _closure_violation(g, x3, cfg.triple))
        add("X3-box-degree", t0, _x3_box_degree(g, x3, cfg))

    mono = is_monotone_partition(g, P) if bad_partition(out) is None else None
    add("monotone-partition", None,
        None if mono is None or mono.ok else (mono.part,) + tuple(mono.witness))
    return out


def bad_partition(verdicts):
    for v in verdicts:
        if v.name == "partition" and not v.passed:
            return v
    return None


def _check_configuration(g, x3, cfg: Configuration):
    triple = cfg.triple
    if cfg.kind == "sparse":
        t = cfg.sparse_index
        if t not in triple:
            return (t,)
        return _anti_pair(g, x3[t], x3[(t + 2) % 6] | x3[(t + 4) % 6])
    tri = cfg.triangle
    if len(tri) != 3 or not all(g.adjacent(a, b) for a, b in ((tri[0], tri[1]),
                                                             (tri[0], tri[2]),
                                                             (tri[1], tri[2]))):
        return tuple(tri)
    for t in triple:
        if not cfg.x1[t] or (cfg.x0[t] | cfg.x1[t]) != x3[t] or cfg.x0[t] & cfg.x1[t]:
            return (t,)
    for t in triple:
        for s in triple:
            if t != s:
                bad = _complete_pair(g, cfg.x1[t], cfg.x1[s]) or _anti_pair(g, cfg.x0[t], x3[s])
                if bad:
                    return bad
    return None


def _closure_violation(g, x3, triple):
    """``a ~ b`` and ``a ~ c`` across the triple force ``b ~ c``."""
    for t in triple:
        r, s = (t + 2) % 6, (t + 4) % 6
        for a in sorted(x3[t]):
            nb_r = g.rows[a] & _m(x3[r])
            nb_s = g.rows[a] & _m(x3[s])
            for b in bits(nb_r):
                miss = nb_s & ~g.rows[b]
                if miss:
                    return (a, b, (miss & -miss).bit_length() - 1)
    return None


def _x3_box_degree(g, x3, cfg):
    """Within G[X3], each X3 class of the triple has few non-uniform partners."""
    limit = 2 if cfg.kind == "triangle" else 1
    for t in cfg.triple:
        partners = [s for s in range(6) if s != t and x3[t] and x3[s]
                    and not is_uniform(g, _m(x3[t]), _m(x3[s]))]
        if len(partners) > limit:
            return tuple(partners)
    return None
