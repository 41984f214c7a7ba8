import json
import random

import pytest

from cwf.cwterm import (Create, CwTerm, Join, PeelStuck, Relabel, TermError, Union, build_term,
                        eval_term, part_labels, peel, verify_term)
from cwf.decompose import build_partition
from cwf.generators import gen_3ring, gen_instance, preset_for_seed
from cwf.graph import Graph, complete, cycle, empty, path
from cwf.partition import NotMonotoneError, VertexPartition, hev_holds_brute

K2_TERM = CwTerm((Create(0, 1), Create(1, 2), Union(), Join(1, 2)), 3)


def test_eval_k2():
    lg = eval_term(K2_TERM)
    assert lg.edges == {(0, 1)} and lg.labels == {0: 1, 1: 2}


def test_eval_single_vertex():
    lg = eval_term(CwTerm((Create(0, 1),), 2))
    assert lg.labels == {0: 1} and not lg.edges


def test_eval_p3_with_two_labels():
    # both ends get label 1, the middle vertex label 2
    t = CwTerm((Create(0, 1), Create(2, 1), Union(), Create(1, 2), Union(), Join(1, 2)), 3)
    assert verify_term(t, path(3)) and t.labels() == {1, 2}


def test_relabel_then_join_reaches_every_earlier_vertex():
    # after the relabel both earlier vertices carry label 2, so the last join hits both
    t = CwTerm((Create(0, 1), Create(1, 2), Union(), Join(1, 2), Relabel(1, 2),
                Create(2, 1), Union(), Join(1, 2)), 3)
    assert verify_term(t, complete(3))


def test_verify_mismatch_and_empty():
    check = verify_term(K2_TERM, empty(2))
    assert not check and check.extra == ((0, 1),)
    check = verify_term(CwTerm((), 1), empty(0))
    assert check.ok and check.width == 0


@pytest.mark.parametrize("ops, fragment", [
    ((Union(),), "two operands"),
    ((Create(0, 1), Join(1, 1)), "distinct"),
    ((Create(0, 5),), "outside budget"),
    ((Create(0, 1), Create(0, 2), Union()), "overlapping"),
    ((Create(0, 1), Create(1, 1)), "stack"),
    ((Join(0, 1),), "empty stack"),
])
def test_eval_errors(ops, fragment):
    with pytest.raises(TermError, match=fragment):
        eval_term(CwTerm(ops, 3))


def test_term_json_round_trip():
    t = CwTerm((Create(0, 1), Create(1, 0), Union(), Join(0, 1), Relabel(0, 1)), 2)
    doc = json.loads(json.dumps(t.to_json()))
    assert doc["ops"][4] == {"op": "relabel", "from": 0, "to": 1}
    assert CwTerm.from_json(doc) == t
    with pytest.raises(TermError):
        CwTerm.from_json({"budget": 1, "ops": [{"op": "explode"}]})


# -- peel and construction ---------------------------------------------------------

def test_peel_k2_and_c6():
    P2 = VertexPartition.of([[0], [1]])
    assert len(peel(complete(2), P2).order) == 2
    P6 = VertexPartition.of([[i] for i in range(6)])
    cert = peel(cycle(6), P6)
    assert cert.complete and sorted(cert.order) == list(range(6))


def test_build_term_small():
    P2 = VertexPartition.of([[0], [1]])
    t = build_term(complete(2), P2)
    assert verify_term(t, complete(2)) and t.width <= 3
    one = build_term(Graph(1), VertexPartition.of([[0]]))
    assert one.ops == (Create(0, 1),)


def test_c6_singletons_use_seven_labels():
    t = build_term(cycle(6), VertexPartition.of([[i] for i in range(6)]))
    assert verify_term(t, cycle(6)) and t.width == 7


def test_c6_plus_universal_vertex():
    g = Graph(7, [(i, (i + 1) % 6) for i in range(6)] + [(i, 6) for i in range(6)])
    r = build_partition(g)
    assert r.partition.nonempty() == 7 and len(r.partition) == 26
    t = build_term(g, r.partition)
    assert verify_term(t, g) and t.width <= 27 and t.budget == 27


def test_final_labels_match_parts():
    inst = gen_instance(preset_for_seed(3)[1])
    r = build_partition(inst.graph)
    t = build_term(inst.graph, r.partition)
    lg = eval_term(t, expect_labels=None)
    assert lg.labels == part_labels(r.partition)


def test_peel_stuck_on_cyclic_3ring():
    ring = gen_3ring(2, [[1, 1]] * 3)
    cert = peel(ring.graph, ring.partition)
    assert not cert and cert.residual == frozenset(range(6))
    assert not hev_holds_brute(ring.graph, ring.partition)
    with pytest.raises(PeelStuck):
        build_term(ring.graph, ring.partition)


def test_peel_requires_monotone_partition():
    with pytest.raises(NotMonotoneError):
        peel(cycle(6), VertexPartition.of([[0, 3], [1, 2, 4, 5]]))


def test_hev_partitions_yield_verified_terms():
    rng = random.Random(4)
    done = 0
    while done < 150:
        n = rng.randint(1, 7)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        labels = [rng.randrange(4) for _ in range(n)]
        P = VertexPartition.of([[v for v in range(n) if labels[v] == i] for i in range(4)])
        if not all(P.cliques(g)):
            continue
        try:
            hev = hev_holds_brute(g, P)
        except NotMonotoneError:
            continue
        if hev:
            t = build_term(g, P)
            assert verify_term(t, g) and t.width <= len(P) + 1
            done += 1
