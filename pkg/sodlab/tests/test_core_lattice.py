"""
Tests for quiver descriptions, K0 classes and the Euler form.
"""

import numpy as np
import pytest

from src.core_lattice import (
    K0Class,
    QuiverKind,
    euler_form,
    euler_pairing,
    parse_quiver,
    require_type_a,
    type_a,
    wpl2,
)
from src.errors import InvalidInputError


def test_quiver_json_round_trip():
    q = parse_quiver('{"kind":"typeA","n":3}')
    assert q == type_a(3)
    assert q.kind == QuiverKind.TYPE_A
    assert parse_quiver(q.to_json()) == q
    assert parse_quiver(wpl2().to_json()) == wpl2()


def test_quiver_rank():
    assert type_a(4).rank == 4
    assert wpl2().rank == 3


@pytest.mark.parametrize("text", [
    '{"kind":"typeA"}',
    '{"kind":"typeA","n":0}',
    '{"kind":"wpl2","n":2}',
    '{"kind":"typeD","n":4}',
    'not json',
])
def test_invalid_quiver_specs(text):
    with pytest.raises(InvalidInputError):
        parse_quiver(text)


def test_type_a_rejects_nonpositive_rank():
    with pytest.raises(InvalidInputError):
        type_a(0)


def test_require_type_a():
    assert require_type_a(type_a(2), "op") == 2
    with pytest.raises(InvalidInputError):
        require_type_a(wpl2(), "op")


def test_k0_arithmetic():
    x, y = K0Class((1, 0, 2)), K0Class((0, 1, -1))
    assert x + y == K0Class((1, 1, 1))
    assert x - y == K0Class((1, -1, 3))
    assert -x == K0Class((-1, 0, -2))
    assert x.scale(2) == K0Class((2, 0, 4))
    assert K0Class.zero(3).is_zero()
    assert np.array_equal(x.as_array(), np.array([1, 0, 2]))
    with pytest.raises(InvalidInputError):
        x + K0Class((1, 1))


def test_type_a_euler_form():
    assert euler_form(type_a(3)).matrix == ((1, -1, 0), (0, 1, -1), (0, 0, 1))
    # <S1, S2> = -dim Ext^1(S1, S2) = -1 for 1 -> 2
    assert euler_pairing(type_a(2), (1, 0), (0, 1)) == -1
    assert euler_pairing(type_a(2), (0, 1), (1, 0)) == 0
    # <P1, P1> = dim End(P1) = 1
    assert euler_pairing(type_a(2), (1, 1), (1, 1)) == 1


def test_wpl2_euler_form():
    form = euler_form(wpl2())
    assert form.matrix == ((1, 1, 1), (0, 1, 0), (-1, 0, 0))
    # <O, O(2)> = dim Hom(O, O(c)) = 2
    assert euler_pairing(wpl2(), (1, 0, 0), (1, 0, 1)) == 2


def test_euler_pairing_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        euler_pairing(type_a(3), (1, 0), (0, 1, 0))
    with pytest.raises(InvalidInputError):
        euler_pairing(wpl2(), (1, 0, 0, 0), (1, 0, 0))
