import json

import pytest
from hypothesis import given, strategies as st

from cwf.decompose import (PART_NAMES, DecompositionReport, NoC6Error, NotInClassError,
                           StructureError, build_partition, classify_by_c6, split_x4,
                           triangle_configuration, verify_observations)
from cwf.generators import InstanceParams, gen_instance, preset_for_seed
from cwf.graph import Graph, complete, cycle, find_c6, induces, is_in_class
from cwf.partition import is_monotone_partition, relation_between

C6_EDGES = [(i, (i + 1) % 6) for i in range(6)]
ANCHOR = tuple(range(6))


def c6_plus(*neighbourhoods, extra=()):
    """C6 on 0..5 plus one vertex per anchor neighbourhood (1-based c indices)."""
    edges = list(C6_EDGES)
    for k, nb in enumerate(neighbourhoods):
        edges += [(c - 1, 6 + k) for c in nb]
    return Graph(6 + len(neighbourhoods), edges + list(extra))


def instance(seed):
    return gen_instance(preset_for_seed(seed)[1]).graph


# -- classification --------------------------------------------------------------

def test_c6_alone_has_empty_classes():
    c = classify_by_c6(cycle(6), ANCHOR)
    assert not c.x2 and not c.x6 and not any(c.x3) and not any(c.x4)


def test_universal_vertex_goes_to_x6():
    assert classify_by_c6(c6_plus(range(1, 7)), ANCHOR).x6 == {6}


def test_single_anchor_neighbour_gives_4k1():
    with pytest.raises(StructureError) as e:
        classify_by_c6(c6_plus([1]), ANCHOR)
    assert e.value.observation == "X-empty"
    name, w = e.value.witness
    assert name == "4K1" and set(w) == {6, 1, 3, 5}  # x, c2, c4, c6


@pytest.mark.parametrize("nb, observation", [
    ([], "X-empty"), ([1, 2, 3, 4, 5], "X-empty"),
    ([1, 3], "X2"), ([1, 2, 4], "X3"), ([1, 2, 3, 5], "X4"),
])
def test_bad_templates_carry_a_forbidden_witness(nb, observation):
    g = c6_plus(nb)
    with pytest.raises(StructureError) as e:
        classify_by_c6(g, ANCHOR)
    assert e.value.observation == observation
    name, w = e.value.witness
    assert induces(g, w, name) and name in ("4K1", "C4", "P6")


def test_x2_must_use_one_index():
    g = c6_plus([1, 4], [2, 5], extra=[(6, 7)])
    with pytest.raises(StructureError) as e:
        classify_by_c6(g, ANCHOR)
    assert e.value.observation == "X2-uniform"
    assert induces(g, e.value.witness[1], e.value.witness[0])


def test_anchor_must_induce_c6():
    with pytest.raises(ValueError):
        classify_by_c6(cycle(6), (0, 2, 1, 3, 4, 5))


# -- X4 split ----------------------------------------------------------------------

def test_split_x4_trivial_cases():
    g = cycle(6)
    empty = (frozenset(),) * 6
    assert split_x4(g, 0, frozenset(), empty) == (frozenset(), frozenset())
    g = c6_plus([1, 2, 3, 4])
    c = classify_by_c6(g, ANCHOR)
    assert split_x4(g, 0, c.x4[0], c.x3) == ({6}, frozenset())


def test_split_x4_sends_vertices_missing_x3_back_to_part_one():
    seen = 0
    for seed in range(1, 80):
        g = instance(seed)
        r = build_partition(g)
        for j in range(6):
            zero, one = r.x4_split[j]
            back = r.classes.x3[(j + 5) % 6]
            for x in one:
                assert relation_between(g, {x}, back).kind != "complete"
                assert relation_between(g, {x}, r.classes.x3[(j + 2) % 6]).uniform
                seen += 1
            for x in zero:
                assert relation_between(g, {x}, back).kind == "complete" or not back
    assert seen > 20


# -- triangle configurations ---------------------------------------------------------

def test_empty_triple_is_sparse():
    cfg = triangle_configuration(cycle(6), (frozenset(),) * 6, 0)
    assert cfg.kind == "sparse"


def test_triangle_of_singletons():
    # x1 in X3_1, x3 in X3_3, x5 in X3_5, pairwise adjacent
    g = c6_plus([1, 2, 3], [3, 4, 5], [5, 6, 1], extra=[(6, 7), (6, 8), (7, 8)])
    c = classify_by_c6(g, ANCHOR)
    assert is_in_class_and_c6(g)
    cfg = triangle_configuration(g, c.x3, 0)
    assert cfg.kind == "triangle" and cfg.triangle == (6, 7, 8)
    assert all(cfg.x1[t] == c.x3[t] and not cfg.x0[t] for t in (0, 2, 4))


def is_in_class_and_c6(g):
    return bool(is_in_class(g)) and find_c6(g) is not None


def test_two_triple_edges_force_the_third():
    found = 0
    for seed in range(1, 200):
        g = instance(seed)
        r = build_partition(g)
        x3 = r.classes.x3
        for t in range(6):
            r_, s_ = (t + 2) % 6, (t + 4) % 6
            for a in x3[t]:
                for b in x3[r_]:
                    for c in x3[s_]:
                        if g.adjacent(a, b) and g.adjacent(a, c):
                            assert g.adjacent(b, c)
                            found += 1
    assert found > 0


def test_triangle_and_sparse_configurations_occur():
    kinds = set()
    for seed in range(1, 60):
        kinds |= {c.kind for c in build_partition(instance(seed)).configurations}
    assert kinds == {"sparse", "triangle"}


# -- full partition -------------------------------------------------------------------

def test_c6_report():
    r = build_partition(cycle(6))
    assert len(r.partition) == 26 and r.partition.nonempty() == 6
    assert r.partition.names == PART_NAMES
    assert r.ok and is_monotone_partition(cycle(6), r.partition)
    assert all(v.passed and not v.witness for v in r.verdicts)


def test_c6_plus_x6():
    g = c6_plus(range(1, 7))
    r = build_partition(g)
    assert r.partition.nonempty() == 7 and r.ok
    assert relation_between(g, {6}, set(range(6))).kind == "complete"


def test_not_in_class_and_no_c6():
    with pytest.raises(NotInClassError) as e:
        build_partition(cycle(4))
    assert e.value.witness[0] == "C4"
    with pytest.raises(NoC6Error):
        build_partition(complete(4))


def test_large_generated_instance():
    p = InstanceParams(x3=(7,) * 6, x4=(2, 0, 2, 0, 2, 0), x6=2,
                       configs=("sparse", "sparse"), seed=3)
    g = gen_instance(p).graph
    assert g.n >= 40
    r = build_partition(g)
    assert len(r.partition) == 26 and r.ok


def test_intended_partition_matches_decomposition():
    for seed in range(1, 40):
        inst = gen_instance(preset_for_seed(seed)[1])
        r = build_partition(inst.graph)
        if r.anchor == ANCHOR:
            assert r.partition == inst.partition


def test_x4_join_x3_on_generated_instance():
    for seed in range(1, 200):
        g = instance(seed)
        r = build_partition(g)
        if r.classes.x4[0] and r.classes.x3[1]:
            assert relation_between(g, r.classes.x4[0], r.classes.x3[1]).kind == "complete"
            assert any(v.name == "X4-join-X3" and v.j == 1 and v.passed for v in r.verdicts)
            return
    pytest.fail("no instance with X4_1 and X3_2 both non-empty")


def test_report_json_round_trip():
    g = instance(4)
    r = build_partition(g)
    doc = json.loads(json.dumps(r.to_json()))
    back = DecompositionReport.from_json(doc)
    assert back.partition == r.partition and back.classes == r.classes
    assert back.configurations == r.configurations
    assert back.to_json() == doc


# -- verifier ------------------------------------------------------------------------

def test_deleting_x6_c1_edge_fails_adjx6():
    g = c6_plus(range(1, 7))
    r = build_partition(g)
    bad = {v.name: v for v in verify_observations(g.toggled(0, 6), r) if not v.passed}
    assert "AdjX6" in bad and set(bad["AdjX6"].witness) == {6, 0}


def forced_pairs(g, r):
    """Pairs whose adjacency the class structure determines."""
    c = r.classes
    where = {}
    for v in c.anchor:
        where[v] = ("c",)
    for v in c.x6:
        where[v] = ("x6",)
    for v in c.x2:
        where[v] = ("x2",)
    for j in range(6):
        for v in c.x3[j]:
            where[v] = ("x3", j)
        for eta in (0, 1):
            for v in r.x4_split[j][eta]:
                where[v] = ("x4", j, eta)
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            a, b = sorted((where[u], where[v]))
            if "c" in (a[0], b[0]) or "x6" in (a[0], b[0]) or "x2" in (a[0], b[0]):
                out.append((u, v))
            elif a[0] == b[0] == "x4":
                out.append((u, v))
            elif a[0] == "x3" and b[0] == "x3":
                if (b[1] - a[1]) % 6 in (0, 1, 3, 5):
                    out.append((u, v))
            else:  # one X3 vertex, one X4 vertex
                x4, x3 = (a, b) if a[0] == "x4" else (b, a)
                d = (x3[1] - x4[1]) % 6
                if d in (0, 1, 3, 4) or (d == 2 and x4[2] == 1) or (d == 5 and x4[2] == 0):
                    out.append((u, v))
    return out


@given(st.integers(1, 200), st.integers(0, 10**6))
def test_toggling_a_forced_pair_is_always_caught(seed, pick):
    g = instance(seed)
    r = build_partition(g)
    pairs = forced_pairs(g, r)
    u, v = pairs[pick % len(pairs)]
    verdicts = verify_observations(g.toggled(u, v), r)
    assert any(not x.passed for x in verdicts)
