"""
Tests for the weighted projective line X(2): graded Hom, K0 classes,
exceptional triples, mutations and windowed mutation graphs.
"""

import pytest

from src.core_lattice import K0Class
from src.errors import InvalidInputError, WindowTooSmallError
from src.wpl2 import (
    C,
    LEFT,
    OMEGA,
    RIGHT,
    L2Element,
    Wpl2Object,
    Wpl2Sequence,
    parse_wpl2_object,
    parse_wpl2_sequence,
    twist_sequence,
    wpl2_class,
    wpl2_component_graph,
    wpl2_enumerate_sequences,
    wpl2_euler,
    wpl2_hom_degrees,
    wpl2_hom_dim,
    wpl2_is_full_exceptional,
    wpl2_mutate,
    wpl2_reduction_groups,
    wpl2_windowed_graph,
)

O = Wpl2Object.line_bundle
S = Wpl2Object.simple
SEED = "(O(-2),O,S10)"


def window_objects(bound=4):
    return [O(m) for m in range(-bound, bound + 1)] + [S(0), S(1)]


def test_grading_group():
    assert L2Element.c() == L2Element(C) == L2Element(2)
    assert L2Element.omega() == L2Element(OMEGA) == L2Element(1) - L2Element.c() - L2Element.c()
    assert L2Element(3).name() == "3x1"


def test_object_names_and_parsing():
    assert O(0).name() == "O"
    assert O(-2).name() == "O(-2)"
    assert S(1).name() == "S11"
    assert O(3, shift=-1).name() == "O(3)[-1]"
    for token in ("O", "O(5)", "O(-3)[2]", "S10", "S11[1]", "Sx"):
        assert parse_wpl2_object(token).name() == token
    with pytest.raises(InvalidInputError):
        parse_wpl2_object("S12")


def test_hom_examples():
    assert wpl2_hom_dim(O(0), O(1)) == 1
    assert wpl2_hom_dim(O(0), O(2)) == 2
    assert wpl2_hom_dim(O(0), O(-1)) == 0
    assert wpl2_hom_degrees(S(0), S(0)) == {0: 1}
    assert wpl2_hom_degrees(S(1), S(1)) == {0: 1}
    assert wpl2_hom_degrees(O(-2), O(0)) == {0: 2}
    assert wpl2_hom_degrees(O(0), S(0)) == {0: 1}
    assert wpl2_hom_degrees(O(3), O(0)) == {1: 1}


def test_hom_rejects_ordinary_point_simple():
    with pytest.raises(InvalidInputError):
        wpl2_hom_dim(Wpl2Object.rank_one_simple(), O(0))


def test_hom_with_shifts():
    assert wpl2_hom_dim(O(3), O(0, shift=1), 0) == 1
    assert wpl2_hom_dim(O(0, shift=2), O(2, shift=2), 0) == 2
    assert wpl2_hom_degrees(S(0), S(1)) == {1: 1}


def test_k0_classes():
    assert wpl2_class(O(0)) == K0Class((1, 0, 0))
    assert wpl2_class(O(2)) == K0Class((1, 0, 1))
    assert wpl2_class(O(1)) == K0Class((1, -1, 1))
    assert wpl2_class(S(0)) + wpl2_class(S(1)) == wpl2_class(Wpl2Object.rank_one_simple())
    assert wpl2_class(O(1)) - wpl2_class(O(0)) == wpl2_class(S(1))
    assert O(1, shift=1).k0_class() == -wpl2_class(O(1))


def test_euler_form_matches_hom():
    for x in window_objects():
        for y in window_objects():
            alternating = sum((-1) ** k * d for k, d in wpl2_hom_degrees(x, y).items())
            assert wpl2_euler(x, y) == alternating


def test_serre_duality():
    for m in range(-5, 6):
        for m2 in range(-5, 6):
            assert wpl2_hom_dim(O(m), O(m2), 1) == wpl2_hom_dim(O(m2), O(m + OMEGA), 0)
    for x in window_objects():
        for y in window_objects():
            assert wpl2_hom_dim(x, y, 1) == wpl2_hom_dim(y, x.twist(OMEGA), 0)


@pytest.mark.parametrize("d", [-3, -1, 1, 2, 5])
def test_twist_equivariance(d):
    for x in window_objects():
        for y in window_objects():
            for k in (-1, 0, 1, 2):
                assert wpl2_hom_dim(x.twist(d), y.twist(d), k) == wpl2_hom_dim(x, y, k)


def test_full_exceptional_examples():
    assert wpl2_is_full_exceptional([O(0), O(1), O(2)])
    assert wpl2_is_full_exceptional(parse_wpl2_sequence(SEED))
    assert not wpl2_is_full_exceptional([O(0), O(0), O(0)])
    assert not wpl2_is_full_exceptional([O(0), O(1)])
    assert not wpl2_is_full_exceptional([O(0), O(2), O(4)])


def test_parse_sequence_rejects_non_exceptional():
    with pytest.raises(InvalidInputError):
        parse_wpl2_sequence("(O,O,O)")
    with pytest.raises(InvalidInputError):
        parse_wpl2_sequence("(O,O(1))")


def test_golden_vertices_are_full(wpl2_golden):
    assert len(wpl2_golden) == 17
    for seq in wpl2_golden.values():
        assert wpl2_is_full_exceptional(seq)


def test_golden_arrows(wpl2_golden, wpl2_arrows):
    for source, target, i in wpl2_arrows:
        assert wpl2_mutate(wpl2_golden[source], i, LEFT) == wpl2_golden[target]


def test_seed_arrow():
    assert wpl2_mutate(parse_wpl2_sequence("(O(-2),S10,O(-1))"), 2, LEFT) == parse_wpl2_sequence(SEED)


def test_left_mutation_of_tilting_triple():
    mutated = wpl2_mutate(parse_wpl2_sequence("(O,O(1),O(2))"), 1, LEFT)
    assert mutated == Wpl2Sequence((S(1), O(0), O(2)))


def test_mutations_are_inverse(wpl2_golden):
    for seq in wpl2_golden.values():
        for i in (1, 2):
            assert wpl2_mutate(wpl2_mutate(seq, i, LEFT), i, RIGHT) == seq
            assert wpl2_mutate(wpl2_mutate(seq, i, RIGHT), i, LEFT) == seq


def test_braid_relation(wpl2_golden):
    for seq in wpl2_golden.values():
        lhs = wpl2_mutate(wpl2_mutate(wpl2_mutate(seq, 1), 2), 1)
        rhs = wpl2_mutate(wpl2_mutate(wpl2_mutate(seq, 2), 1), 2)
        assert lhs == rhs


def test_mutation_commutes_with_twist(wpl2_golden):
    for seq in wpl2_golden.values():
        for i in (1, 2):
            for d in (-2, 1, 2):
                assert wpl2_mutate(twist_sequence(seq, d), i) == twist_sequence(wpl2_mutate(seq, i), d)


def test_window_too_small():
    seq = parse_wpl2_sequence("(O,O(2),S10)")
    with pytest.raises(WindowTooSmallError) as e:
        wpl2_mutate(seq, 1, LEFT, window=1)
    assert "enlarge the window" in str(e.value)
    assert wpl2_mutate(seq, 1, LEFT, window=2) == parse_wpl2_sequence(SEED)


def test_mutation_argument_checks():
    seq = parse_wpl2_sequence(SEED)
    with pytest.raises(InvalidInputError):
        wpl2_mutate(seq, 3)
    with pytest.raises(InvalidInputError):
        wpl2_mutate(seq, 1, "up")


def test_enumeration_in_window(wpl2_golden):
    found = set(wpl2_enumerate_sequences(3))
    for name, seq in wpl2_golden.items():
        if all(x.kind != O(0).kind or abs(x.m) <= 3 for x in seq.items):
            assert seq in found, name
    assert all(wpl2_is_full_exceptional(s) for s in found)


def test_windowed_graph_radius_zero():
    g = wpl2_windowed_graph(parse_wpl2_sequence(SEED), 0)
    assert len(g) == 1
    assert g.labels() == [SEED]


def test_windowed_graph_contains_golden_triples(wpl2_golden, wpl2_arrows):
    g = wpl2_windowed_graph(parse_wpl2_sequence(SEED), 4)
    vertices = set(g.vertices)
    assert set(wpl2_golden.values()) <= vertices
    edges = set(g.edges())
    for source, target, i in wpl2_arrows:
        u, v = g.index(wpl2_golden[source]), g.index(wpl2_golden[target])
        assert (u, v, f"rho_{i}") in edges


def test_windowed_graph_is_deterministic(monkeypatch):
    seed = parse_wpl2_sequence(SEED)
    serial = wpl2_windowed_graph(seed, 3)
    monkeypatch.setenv("SODLAB_THREADS", "3")
    threaded = wpl2_windowed_graph(seed, 3)
    assert serial.labels() == threaded.labels()
    assert serial.edges() == threaded.edges()


def test_twist_periodicity():
    seed = parse_wpl2_sequence(SEED)
    g = wpl2_windowed_graph(seed, 3)
    shifted = wpl2_windowed_graph(twist_sequence(seed, C), 3)
    assert [s.twist(C) for s in g.vertices] == shifted.vertices
    assert g.edges() == shifted.edges()


def test_reduction_groups():
    g = wpl2_windowed_graph(parse_wpl2_sequence(SEED), 4)
    groups = wpl2_reduction_groups(g)
    assert sorted(i for members in groups.values() for i in members) == list(range(len(g)))
    for last, members in groups.items():
        assert all(g.vertices[i].items[-1] == last for i in members)
    components = wpl2_component_graph(g)
    assert len(components.vertices) == len(groups)
    assert S(0) in components.vertices
