"""
Exceptional objects and sequences over A_n: enumeration of full sequences
and the braid group mutations L_i, R_i.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from src.complexes import ChainMap, cone, hom_basis, hstack_maps, present, vstack_maps
from src.config import get_threads
from src.core_lattice import QuiverSpec, require_type_a
from src.errors import ConsistencyError, InvalidInputError
from src.objects import DerivedObject, Interval, parse_intervals
from src.typea_engine import (
    _closure,
    all_indecomposables,
    exceptional_sequences_in,
    graded_hom_vanishes,
    hom_degrees,
    hom_dim,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExceptionalSequence:
    """Ordered exceptional interval modules, all at shift 0."""

    n: int
    items: Tuple[Interval, ...]
    full: bool = True

    def __len__(self) -> int:
        return len(self.items)

    def objects(self) -> List[DerivedObject]:
        return [DerivedObject.module(self.n, x) for x in self.items]

    def names(self) -> List[str]:
        return [x.label(self.n) for x in self.items]

    def name(self) -> str:
        return "(" + ",".join(self.names()) + ")"

    def __str__(self) -> str:
        return self.name()


def is_exceptional(X: DerivedObject) -> bool:
    """A single indecomposable with End = k and no self-extensions in any degree."""
    if not X.is_indecomposable():
        return False
    return hom_dim(X, X, 0) == 1 and all(hom_dim(X, X, k) == 0 for k in (-1, 1))


def is_k0_basis(n: int, items: Sequence[Interval]) -> bool:
    if len(items) != n:
        return False
    det = np.linalg.det(np.array([x.dimvec(n) for x in items], dtype=float))
    return int(round(abs(det))) == 1


def is_exceptional_sequence(n: int, items: Sequence[Interval]) -> bool:
    for x in items:
        if not is_exceptional(DerivedObject.module(n, x)):
            return False
    for j in range(len(items)):
        for i in range(j):
            if not graded_hom_vanishes(n, items[j], items[i]):
                return False
    return True


def make_sequence(n: int, items: Sequence[Interval]) -> ExceptionalSequence:
    """Validate and wrap; full is decided by the closure and cross-checked on K0."""
    items = tuple(x.check_rank(n) for x in items)
    if not is_exceptional_sequence(n, items):
        raise InvalidInputError(f"({','.join(x.label(n) for x in items)}) is not an exceptional sequence")
    full = _closure(n, frozenset(items)) == frozenset(all_indecomposables(n))
    if full != is_k0_basis(n, items):
        raise ConsistencyError(f"Fullness and K0 basis test disagree on {items}")
    return ExceptionalSequence(n, items, full)


def parse_sequence(n: int, text: str) -> ExceptionalSequence:
    """Parse '(P1,S2,I2)'."""
    return make_sequence(n, parse_intervals(n, text))


def _sequences_starting_with(n: int, first: Interval) -> List[Tuple[Interval, ...]]:
    everything = frozenset(all_indecomposables(n))
    return list(exceptional_sequences_in(n, everything, prefix=(first,)))


@lru_cache(maxsize=None)
def _full_sequences(n: int) -> Tuple[ExceptionalSequence, ...]:
    everything = frozenset(all_indecomposables(n))
    threads = get_threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda x: _sequences_starting_with(n, x), all_indecomposables(n)))
        raw = [seq for chunk in chunks for seq in chunk]
    else:
        raw = list(exceptional_sequences_in(n, everything))
    sequences = []
    for items in raw:
        if not is_k0_basis(n, items):
            raise ConsistencyError(f"Full sequence {items} is not a K0 basis")
        sequences.append(ExceptionalSequence(n, items, True))
    logger.info(f"A_{n}: {len(sequences)} full exceptional sequences")
    return tuple(sequences)


def enumerate_full_exceptional_sequences(q: QuiverSpec) -> List[ExceptionalSequence]:
    """All full exceptional sequences of interval modules, lexicographic in the items."""
    n = require_type_a(q, "enumerate_full_exceptional_sequences")
    return list(_full_sequences(n))


def _single_indecomposable(obj: DerivedObject, what: str) -> Interval:
    if not obj.is_indecomposable():
        raise ConsistencyError(f"{what} is {obj.name()}, not an indecomposable")
    result = obj.terms[0][0]
    if not is_exceptional(DerivedObject.module(obj.n, result)):
        raise ConsistencyError(f"{what} is not exceptional")
    return result


@lru_cache(maxsize=None)
def left_mutation_object(n: int, e: Interval, f: Interval) -> Interval:
    """L_E F from the triangle L_E F -> Hom*(E,F) (x) E -> F, shift dropped."""
    E, F = DerivedObject.module(n, e), DerivedObject.module(n, f)
    degrees = hom_degrees(E, F)
    if not degrees:
        return f
    source, target = present(E), present(F)
    maps: List[ChainMap] = []
    for k in degrees:
        maps.extend(hom_basis(source.shift(-k), target, 0))
    return _single_indecomposable(cone(hstack_maps(maps)), f"L_{e.label(n)} {f.label(n)}")


@lru_cache(maxsize=None)
def right_mutation_object(n: int, e: Interval, f: Interval) -> Interval:
    """R_F E from the triangle E -> Hom*(E,F)^* (x) F -> R_F E, shift dropped."""
    E, F = DerivedObject.module(n, e), DerivedObject.module(n, f)
    degrees = hom_degrees(E, F)
    if not degrees:
        return e
    source, target = present(E), present(F)
    maps: List[ChainMap] = []
    for k in degrees:
        maps.extend(hom_basis(source, target, k))
    return _single_indecomposable(cone(vstack_maps(maps)), f"R_{f.label(n)} {e.label(n)}")


def _check_index(s: ExceptionalSequence, i: int):
    if not 1 <= i <= len(s) - 1:
        raise InvalidInputError(f"Mutation index {i} out of range 1..{len(s) - 1}")


def left_mutate(s: ExceptionalSequence, i: int) -> ExceptionalSequence:
    """(E_i, E_{i+1}) -> (L_{E_i} E_{i+1}, E_i)."""
    _check_index(s, i)
    items = list(s.items)
    e, f = items[i - 1], items[i]
    items[i - 1], items[i] = left_mutation_object(s.n, e, f), e
    return ExceptionalSequence(s.n, tuple(items), s.full)


def right_mutate(s: ExceptionalSequence, i: int) -> ExceptionalSequence:
    """(E_i, E_{i+1}) -> (E_{i+1}, R_{E_{i+1}} E_i)."""
    _check_index(s, i)
    items = list(s.items)
    e, f = items[i - 1], items[i]
    items[i - 1], items[i] = f, right_mutation_object(s.n, e, f)
    return ExceptionalSequence(s.n, tuple(items), s.full)
