"""Clique-width expressions: evaluation, verification and hev-peel construction.

A term is a flat list of stack operations. ``Create`` pushes a one-vertex
labelled graph, ``Union`` pops two and pushes their disjoint union, and
``Join``/``Relabel`` rewrite the graph on top of the stack.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence, Union as _U

from .graph import Graph, bits
from .partition import NotMonotoneError, VertexPartition, is_monotone_partition

SPECIAL_LABEL = 0


@dataclass(frozen=True)
class Create:
    v: int
    label: int


@dataclass(frozen=True)
class Union:
    pass


@dataclass(frozen=True)
class Join:
    a: int
    b: int


@dataclass(frozen=True)
class Relabel:
    src: int
    dst: int


Op = _U[Create, Union, Join, Relabel]


class TermError(ValueError):
    pass


@dataclass(frozen=True)
class CwTerm:
    ops: tuple[Op, ...]
    budget: int

    def labels(self) -> set[int]:
        out = set()
        for op in self.ops:
            if isinstance(op, Create):
                out.add(op.label)
            elif isinstance(op, Join):
                out.update((op.a, op.b))
            elif isinstance(op, Relabel):
                out.update((op.src, op.dst))
        return out

    @property
    def width(self) -> int:
        return len(self.labels())

    def to_json(self) -> dict:
        ops = []
        for op in self.ops:
            if isinstance(op, Create):
                ops.append({"op": "create", "v": op.v, "label": op.label})
            elif isinstance(op, Union):
                ops.append({"op": "union"})
            elif isinstance(op, Join):
                ops.append({"op": "join", "a": op.a, "b": op.b})
            else:
                ops.append({"op": "relabel", "from": op.src, "to": op.dst})
        return {"budget": self.budget, "ops": ops}

    @classmethod
    def from_json(cls, doc) -> "CwTerm":
        if isinstance(doc, str):
            doc = json.loads(doc)
        ops = []
        for item in doc["ops"]:
            kind = item["op"]
            if kind == "create":
                ops.append(Create(item["v"], item["label"]))
            elif kind == "union":
                ops.append(Union())
            elif kind == "join":
                ops.append(Join(item["a"], item["b"]))
            elif kind == "relabel":
                ops.append(Relabel(item["from"], item["to"]))
            else:
                raise TermError(f"unknown op {kind!r}")
        return cls(tuple(ops), doc["budget"])


@dataclass
class LabelledGraph:
    labels: dict[int, int]
    edges: set[tuple[int, int]]

    def vertices(self) -> set[int]:
        return set(self.labels)


def eval_term(t: CwTerm, expect_labels: Mapping[int, int] | None = None) -> LabelledGraph:
    """Evaluate ``t``.

    With ``expect_labels`` (vertex -> label), every completed insertion on a
    single-item stack is checked to carry exactly those labels.
    """
    stack: list[LabelledGraph] = []
    for pos, op in enumerate(t.ops):
        if isinstance(op, Create):
            if not 0 <= op.label < t.budget:
                raise TermError(f"op {pos}: label {op.label} outside budget {t.budget}")
            stack.append(LabelledGraph({op.v: op.label}, set()))
        elif isinstance(op, Union):
            if len(stack) < 2:
                raise TermError(f"op {pos}: union needs two operands")
            right = stack.pop()
            left = stack[-1]
            clash = left.labels.keys() & right.labels.keys()
            if clash:
                raise TermError(f"op {pos}: union of overlapping vertex sets {sorted(clash)}")
            left.labels.update(right.labels)
            left.edges |= right.edges
        elif isinstance(op, Join):
            if op.a == op.b:
                raise TermError(f"op {pos}: join needs two distinct labels")
            for lab in (op.a, op.b):
                if not 0 <= lab < t.budget:
                    raise TermError(f"op {pos}: label {lab} outside budget {t.budget}")
            if not stack:
                raise TermError(f"op {pos}: join on empty stack")
            top = stack[-1]
            side_a = [v for v, lab in top.labels.items() if lab == op.a]
            side_b = [v for v, lab in top.labels.items() if lab == op.b]
            for u in side_a:
                for v in side_b:
                    top.edges.add((u, v) if u < v else (v, u))
        elif isinstance(op, Relabel):
            for lab in (op.src, op.dst):
                if not 0 <= lab < t.budget:
                    raise TermError(f"op {pos}: label {lab} outside budget {t.budget}")
            if not stack:
                raise TermError(f"op {pos}: relabel on empty stack")
            top = stack[-1]
            for v, lab in top.labels.items():
                if lab == op.src:
                    top.labels[v] = op.dst
        else:
            raise TermError(f"op {pos}: unknown operation {op!r}")
        if expect_labels is not None and len(stack) == 1 and (
                isinstance(op, Relabel) or pos == 0):
            bad = [v for v, lab in stack[0].labels.items() if expect_labels.get(v) != lab]
            if bad:
                raise TermError(f"op {pos}: vertices {sorted(bad)} carry unexpected labels")
    if not stack:
        return LabelledGraph({}, set())
    if len(stack) != 1:
        raise TermError(f"term leaves {len(stack)} graphs on the stack")
    return stack[0]


@dataclass(frozen=True)
class TermCheck:
    ok: bool
    width: int
    missing: tuple[tuple[int, int], ...] = ()
    extra: tuple[tuple[int, int], ...] = ()
    vertex_mismatch: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


def verify_term(t: CwTerm, g: Graph) -> TermCheck:
    lg = eval_term(t)
    want_v = set(range(g.n))
    vdiff = tuple(sorted(want_v ^ lg.vertices()))
    want_e = set(g.edges())
    missing = tuple(sorted(want_e - lg.edges))
    extra = tuple(sorted(lg.edges - want_e))
    ok = not (vdiff or missing or extra)
    return TermCheck(ok, t.width, missing, extra, vdiff)


# -- hev peel ------------------------------------------------------------------

@dataclass(frozen=True)
class PeelStep:
    vertex: int
    part: int
    maximal: bool
    minimal: bool
    complete_to: frozenset[int]


@dataclass(frozen=True)
class PeelCertificate:
    """Peel order (first removed first) and the residual set if peeling stalled."""

    steps: tuple[PeelStep, ...]
    residual: frozenset[int] = frozenset()

    @property
    def complete(self) -> bool:
        return not self.residual

    def __bool__(self):
        return self.complete

    @property
    def order(self) -> list[int]:
        return [s.vertex for s in self.steps]


class PeelStuck(ValueError):
    def __init__(self, residual):
        super().__init__(f"no extreme uniform vertex in residual {sorted(residual)}")
        self.residual = residual


def _eligible(g: Graph, masks: Sequence[int], r: int):
    """Lowest-index extreme vertex uniform to every other residual part."""
    live = [(i, m & r) for i, m in enumerate(masks) if m & r]
    best = None
    for i, a in live:
        outside = r & ~a
        nbs = {v: g.rows[v] & outside for v in bits(a)}
        hi = max(nb.bit_count() for nb in nbs.values())
        lo = min(nb.bit_count() for nb in nbs.values())
        for v, nb in nbs.items():
            if best is not None and v >= best[0]:
                break
            size = nb.bit_count()
            if size != hi and size != lo:
                continue
            complete_to = []
            for j, b in live:
                if j == i:
                    continue
                hit = nb & b
                if hit == b:
                    complete_to.append(j)
                elif hit:
                    break
            else:
                own = g.rows[v] & a
                if own == a & ~(1 << v) and own:
                    complete_to.append(i)
                best = (v, i, size == hi, size == lo, frozenset(complete_to))
                break
    return best


def peel(g: Graph, P: VertexPartition) -> PeelCertificate:
    """Greedily remove extreme vertices uniform to all other parts."""
    mono = is_monotone_partition(g, P)
    if not mono:
        raise NotMonotoneError(f"part {P.names[mono.part]} is not monotone", mono.witness)
    r = g.full
    steps = []
    while r:
        pick = _eligible(g, P.masks, r)
        if pick is None:
            return PeelCertificate(tuple(steps), frozenset(bits(r)))
        steps.append(PeelStep(*pick))
        r &= ~(1 << pick[0])
    return PeelCertificate(tuple(steps))


def build_term(g: Graph, P: VertexPartition,
               certificate: PeelCertificate | None = None) -> CwTerm:
    """Expression with ``len(P) + 1`` labels; part ``i`` ends with label ``i + 1``."""
    cert = certificate if certificate is not None else peel(g, P)
    if not cert.complete:
        raise PeelStuck(cert.residual)
    ops: list[Op] = []
    built = 0
    for step in reversed(cert.steps):
        v, i = step.vertex, step.part
        own = P.masks[i] & built
        hit = g.rows[v] & own
        if hit and hit != own:
            raise TermError(f"vertex {v} is mixed on the rest of part {P.names[i]}")
        if not built:
            ops.append(Create(v, i + 1))
        else:
            ops.append(Create(v, SPECIAL_LABEL))
            ops.append(Union())
            for j in sorted(step.complete_to):
                ops.append(Join(SPECIAL_LABEL, j + 1))
            ops.append(Relabel(SPECIAL_LABEL, i + 1))
        built |= 1 << v
    return CwTerm(tuple(ops), len(P) + 1)


def part_labels(P: VertexPartition) -> dict[int, int]:
    """Final label of every vertex in a term from :func:`build_term`."""
    return {v: i + 1 for v, i in P.part_of().items()}
