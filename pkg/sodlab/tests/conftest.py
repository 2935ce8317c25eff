"""
pytest configuration file for the test suite.

Puts the sodlab/ directory on sys.path so tests import 'from src.x import ...',
and provides the golden corpora shared by several test modules.
"""

import sys
from pathlib import Path

import pytest

# Add the parent directory (sodlab/) to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core_lattice import type_a  # noqa: E402
from src.wpl2 import Wpl2Object, Wpl2Sequence  # noqa: E402

# Finest SODs of A_3, one row per SOD, blocks generated by the listed object
A3_FINEST_SODS = [
    ("P1", "I2", "S1"),
    ("I2", "S3", "S1"),
    ("S3", "P1", "S1"),
    ("S3", "P2", "P1"),
    ("P2", "S2", "P1"),
    ("S2", "S3", "P1"),
    ("S1", "S3", "P2"),
    ("S3", "S1", "P2"),
    ("S1", "P2", "S2"),
    ("P1", "S1", "S2"),
    ("P2", "P1", "S2"),
    ("S1", "S2", "S3"),
    ("S2", "I2", "S3"),
    ("I2", "S1", "S3"),
    ("P1", "S2", "I2"),
    ("S2", "P1", "I2"),
]


def _O(m):
    return Wpl2Object.line_bundle(m)


def _S(j):
    return Wpl2Object.simple(j)


def _golden_vertices():
    vertices = {}
    for b in range(4):
        vertices[f"a{b}"] = Wpl2Sequence((_O(b - 2), _O(b), _S(b % 2)))
        vertices[f"b{b}"] = Wpl2Sequence((_O(b - 2), _S(b % 2), _O(b - 1)))
        vertices[f"c{b}"] = Wpl2Sequence((_O(b - 2), _O(b - 1), _O(b)))
        vertices[f"d{b}"] = Wpl2Sequence((_S((b + 1) % 2), _O(b - 2), _O(b)))
    vertices["b4"] = Wpl2Sequence((_O(2), _S(0), _O(3)))
    return vertices


# Labelled X(2) triples and their L-mutation arrows
WPL2_GOLDEN = _golden_vertices()


def _golden_arrows():
    """(source, target, index) with target = L_index(source)."""
    arrows = []
    for b in range(4):
        arrows.append((f"a{b}", f"c{b}", 2))
        arrows.append((f"b{b}", f"a{b}", 2))
        arrows.append((f"c{b}", f"b{b}", 2))
        arrows.append((f"c{b}", f"d{b}", 1))
        arrows.append((f"d{b}", f"b{b + 1}", 1))
        if b >= 1:
            arrows.append((f"b{b}", f"c{b - 1}", 1))
        if b >= 2:
            arrows.append((f"a{b}", f"a{b - 2}", 1))
            arrows.append((f"d{b}", f"d{b - 2}", 2))
    return arrows


WPL2_ARROWS = _golden_arrows()


@pytest.fixture
def a1():
    return type_a(1)


@pytest.fixture
def a2():
    return type_a(2)


@pytest.fixture
def a3():
    return type_a(3)


@pytest.fixture
def a4():
    return type_a(4)


@pytest.fixture
def a3_finest():
    return A3_FINEST_SODS


@pytest.fixture
def wpl2_golden():
    return WPL2_GOLDEN


@pytest.fixture
def wpl2_arrows():
    return WPL2_ARROWS
