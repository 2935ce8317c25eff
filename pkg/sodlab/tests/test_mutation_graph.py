"""
Tests for mutation graphs of finest SODs, the reduction decomposition, the
component graph and the connectedness criterion.
"""

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import categorical_multiedge_match

from src.core_lattice import type_a, wpl2
from src.errors import CapacityError, InvalidInputError
from src.mutation_graph import (
    build_graph,
    check_braid_relations,
    check_connectedness_criterion,
    component_graph,
    export_dot,
    filtration_graph,
    group_matches_quotient,
    is_connected,
    quotient_category,
    quotient_graph,
    reduction_decomposition,
    tstability_graph,
)
from src.objects import parse_intervals
from src.typea_engine import perp, thick_closure


def subcat(n, text):
    return thick_closure(parse_intervals(n, text), n)


def test_a1_graph_is_empty():
    g = build_graph(type_a(1))
    assert len(g) == 0
    assert g.edges() == []
    assert is_connected(g)


def test_a2_graph_is_a_three_cycle():
    g = build_graph(type_a(2))
    assert len(g) == 3
    assert len(g.edges()) == 3
    assert all(g.out_degree(u) == 1 for u in range(3))
    assert all(label == "rho_1" for _, _, label in g.edges())
    assert nx.is_directed_acyclic_graph(g.graph) is False
    assert is_connected(g)


def test_a3_graph(a3_finest):
    g = build_graph(type_a(3))
    assert len(g) == 16
    assert set(g.labels()) == {"(" + "|".join(row) + ")" for row in a3_finest}
    assert all(g.out_degree(u) == 2 for u in range(16))
    assert is_connected(g)


def test_graph_rejects_wpl2_and_large_rank(monkeypatch):
    with pytest.raises(InvalidInputError):
        build_graph(wpl2())
    monkeypatch.setenv("SODLAB_MAX_GRAPH_RANK", "2")
    with pytest.raises(CapacityError):
        build_graph(type_a(3))


def test_threaded_build_matches_serial(monkeypatch):
    serial = build_graph(type_a(3))
    monkeypatch.setenv("SODLAB_THREADS", "4")
    threaded = build_graph(type_a(3))
    assert threaded.labels() == serial.labels()
    assert threaded.edges() == serial.edges()


def relabelled(g, mapping):
    out = nx.MultiDiGraph()
    out.add_nodes_from(g.graph.nodes)
    for u, v, data in g.graph.edges(data=True):
        out.add_edge(u, v, label=mapping(data["label"]))
    return out


@pytest.mark.parametrize("n", [2, 3])
def test_filtration_and_tstability_graphs_match(n):
    g = build_graph(type_a(n))
    match = categorical_multiedge_match("label", None)

    def sigma_to_rho(label):
        j = int(label.split("_")[1])
        return f"rho_{n - j}"

    f = relabelled(filtration_graph(type_a(n)), sigma_to_rho)
    assert nx.is_isomorphic(f, g.graph, edge_match=match)
    t = tstability_graph(type_a(n))
    assert nx.is_isomorphic(t.graph, g.graph, edge_match=match)


def test_a3_reduction_decomposition():
    g = build_graph(type_a(3))
    decomposition = reduction_decomposition(g)
    assert sorted(decomposition.sizes()) == [2, 2, 3, 3, 3, 3]
    for U, members in decomposition.groups.items():
        assert decomposition.quotients[U] == perp(U, "right")
        assert group_matches_quotient(g, decomposition, U)
        for idx in members:
            assert decomposition.group_of(idx) == U


def test_group_shapes():
    g = build_graph(type_a(3))
    decomposition = reduction_decomposition(g)
    for U in decomposition.groups:
        quotient = quotient_graph(g, U)
        if len(decomposition.groups[U]) == 3:
            # A_2 quotient: a rho_1 three-cycle
            assert len(quotient.edges()) == 3
        else:
            # A_1 x A_1 quotient: rho_1 swaps the two orthogonal blocks
            assert len(quotient) == 2
            assert {(u, v) for u, v, _ in quotient.edges()} == {(0, 1), (1, 0)}


def test_quotient_category():
    assert quotient_category(subcat(3, "S1")) == perp(subcat(3, "S1"), "right")
    assert quotient_category(subcat(2, "S2")).members == subcat(2, "S1").members


def test_quotient_graph_rejects_non_last_block():
    g = build_graph(type_a(3))
    with pytest.raises(InvalidInputError):
        quotient_graph(g, subcat(3, "S1,S2"))


def test_component_graph():
    g = build_graph(type_a(3))
    components = component_graph(g)
    assert len(components.vertices) == 6
    assert all(label.startswith("rho_") for _, _, label in components.edges())
    assert nx.is_weakly_connected(components.graph)


@pytest.mark.parametrize("n, expected", [
    (2, {"braid": 0, "commute": 0, "chi": 3}),
    (3, {"braid": 16, "commute": 0, "chi": 32}),
    (4, {"braid": 250, "commute": 125, "chi": 375}),
])
def test_braid_relations(n, expected):
    assert check_braid_relations(type_a(n)) == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_connectedness_criterion_agrees_with_graph(n):
    result = check_connectedness_criterion(type_a(n))
    assert result.holds == is_connected(build_graph(type_a(n)))
    assert result.holds
    for (u, v), chain in result.witness_chains.items():
        assert chain[0] == u and chain[-1] == v


def test_criterion_capacity(monkeypatch):
    monkeypatch.setenv("SODLAB_MAX_CRITERION_RANK", "2")
    with pytest.raises(CapacityError):
        check_connectedness_criterion(type_a(3))


def test_export_dot():
    g = build_graph(type_a(2))
    dot = export_dot(g, "a2")
    assert dot.startswith("digraph a2 {")
    assert dot.count("->") == 3
    assert 'v0 [label="(S1|S2)"];' in dot
    assert export_dot(g, "a2") == dot
