"""
Exact model of D^b(mod A_n) for the equioriented quiver 1 -> 2 -> ... -> n.

Graded Hom is computed by linear algebra on projective presentations
(src.complexes); thick subcategories are stored as their sets of
indecomposables up to shift, and the Verdier quotient D/U by an admissible U
is modelled by the right perpendicular category of U.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from src.complexes import ChainMap, cone, hom_basis, hstack_maps, present
from src.core_lattice import QuiverSpec, require_type_a
from src.errors import ConsistencyError, InvalidInputError
from src.objects import DerivedObject, Interval

logger = logging.getLogger(__name__)

# Hom between modules over a hereditary algebra lives in degrees 0 and 1 only.
MODULE_DEGREES = (0, 1)


@lru_cache(maxsize=None)
def all_indecomposables(n: int) -> Tuple[Interval, ...]:
    """Interval modules of A_n in (a, b) order, n(n+1)/2 of them."""
    return tuple(Interval(a, b) for a in range(1, n + 1) for b in range(a, n + 1))


@lru_cache(maxsize=None)
def module_hom_basis(n: int, x: Interval, y: Interval, j: int) -> Tuple[ChainMap, ...]:
    """Chain-level basis of Hom(M_x, M_y[j]) between presented interval modules."""
    if j not in MODULE_DEGREES:
        return ()
    X = present(DerivedObject.module(n, x))
    Y = present(DerivedObject.module(n, y))
    return tuple(hom_basis(X, Y, j))


@lru_cache(maxsize=None)
def module_hom_dim(n: int, x: Interval, y: Interval, j: int) -> int:
    return len(module_hom_basis(n, x, y, j))


def _check_same(X: DerivedObject, Y: DerivedObject):
    if X.n != Y.n:
        raise InvalidInputError(f"Objects live over A_{X.n} and A_{Y.n}")


def hom_dim(X: DerivedObject, Y: DerivedObject, k: int = 0) -> int:
    """dim Hom(X, Y[k]), additive over the terms of both objects."""
    _check_same(X, Y)
    total = 0
    for x, s in X.terms:
        for y, t in Y.terms:
            total += module_hom_dim(X.n, x, y, k + t - s)
    return total


def hom_degrees(X: DerivedObject, Y: DerivedObject) -> Dict[int, int]:
    """Nonzero graded pieces {k: dim Hom(X, Y[k])}."""
    _check_same(X, Y)
    dims: Dict[int, int] = {}
    for x, s in X.terms:
        for y, t in Y.terms:
            for j in MODULE_DEGREES:
                d = module_hom_dim(X.n, x, y, j)
                if d:
                    k = j - t + s
                    dims[k] = dims.get(k, 0) + d
    return dict(sorted(dims.items()))


def graded_hom_vanishes(n: int, x: Interval, y: Interval) -> bool:
    """Hom(M_x, M_y[k]) = 0 for every k."""
    return all(module_hom_dim(n, x, y, j) == 0 for j in MODULE_DEGREES)


def tau(n: int, x: Interval) -> Optional[Interval]:
    """Auslander-Reiten translate; None for projectives, which have no module translate."""
    x.check_rank(n)
    if x.is_projective(n):
        return None
    return Interval(x.a + 1, x.b + 1)


def ar_quiver(q: QuiverSpec) -> nx.DiGraph:
    """AR quiver: irreducible maps [a,b] -> [a-1,b] and [a,b] -> [a,b-1]."""
    n = require_type_a(q, "ar_quiver")
    graph = nx.DiGraph()
    for x in all_indecomposables(n):
        translate = tau(n, x)
        graph.add_node(x, label=x.label(n), tau=translate.label(n) if translate else None)
    for x in all_indecomposables(n):
        if x.a > 1:
            graph.add_edge(x, Interval(x.a - 1, x.b))
        if x.b > x.a:
            graph.add_edge(x, Interval(x.a, x.b - 1))
    return graph


@dataclass(frozen=True)
class ThickSubcat:
    """Thick subcategory, stored as its indecomposables up to shift."""

    n: int
    members: FrozenSet[Interval]

    def __contains__(self, item) -> bool:
        if isinstance(item, DerivedObject):
            return item.intervals() <= self.members
        return item in self.members

    def __len__(self) -> int:
        return len(self.members)

    def is_zero(self) -> bool:
        return not self.members

    def sorted_members(self) -> List[Interval]:
        return sorted(self.members)

    def issubset(self, other: "ThickSubcat") -> bool:
        return self.members <= other.members

    def rank(self) -> int:
        return k0_rank(self.n, self.members)

    def member_names(self) -> List[str]:
        return [x.label(self.n) for x in self.sorted_members()]

    def name(self) -> str:
        return "<" + ",".join(self.member_names()) + ">"

    def __str__(self) -> str:
        return self.name()


def whole_category(n: int) -> ThickSubcat:
    return ThickSubcat(n, frozenset(all_indecomposables(n)))


def zero_subcat(n: int) -> ThickSubcat:
    return ThickSubcat(n, frozenset())


def k0_rank(n: int, intervals: Iterable[Interval]) -> int:
    vectors = [x.dimvec(n) for x in intervals]
    if not vectors:
        return 0
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=np.int64)))


@lru_cache(maxsize=None)
def _cone_summands(n: int, x: Interval, y: Interval) -> FrozenSet[Interval]:
    found = set()
    for j in MODULE_DEGREES:
        for f in module_hom_basis(n, x, y, j):
            found |= cone(f).intervals()
    return frozenset(found)


@lru_cache(maxsize=None)
def _closure(n: int, seeds: FrozenSet[Interval]) -> FrozenSet[Interval]:
    members = set(seeds)
    frontier = set(seeds)
    rounds = 0
    while frontier:
        rounds += 1
        found = set()
        for x in members:
            for y in frontier:
                found |= _cone_summands(n, x, y)
                found |= _cone_summands(n, y, x)
        frontier = found - members
        members |= frontier
    logger.debug(f"closure of {len(seeds)} generators: {len(members)} members after {rounds} rounds")
    return frozenset(members)


def _intervals_of(gens: Iterable[Union[DerivedObject, Interval]]) -> Tuple[Optional[int], set]:
    n, seeds = None, set()
    for g in gens:
        if isinstance(g, DerivedObject):
            n = g.n
            seeds |= g.intervals()
        else:
            seeds.add(g)
    return n, seeds


def thick_closure(gens: Iterable[Union[DerivedObject, Interval]], n: Optional[int] = None) -> ThickSubcat:
    """Least thick subcategory containing gens: fixpoint of cones of basis maps between members."""
    found_n, seeds = _intervals_of(list(gens))
    n = n if n is not None else found_n
    if n is None:
        raise InvalidInputError("thick_closure needs generators or an explicit rank")
    for x in seeds:
        x.check_rank(n)
    return ThickSubcat(n, _closure(n, frozenset(seeds)))


def perp(S: ThickSubcat, side: str = "right", within: Optional[ThickSubcat] = None) -> ThickSubcat:
    """
    Right: {X : Hom(G, X[k]) = 0 for all G in S, all k}; left: {X : Hom(X, G[k]) = 0}.
    Taken inside `within` when given.
    """
    if side not in ("right", "left"):
        raise InvalidInputError(f"Unknown perpendicular side {side!r}")
    n = S.n
    candidates = within.members if within is not None else frozenset(all_indecomposables(n))
    if side == "right":
        result = frozenset(x for x in candidates if all(graded_hom_vanishes(n, g, x) for g in S.members))
    else:
        result = frozenset(x for x in candidates if all(graded_hom_vanishes(n, x, g) for g in S.members))
    if _closure(n, result) != result:
        raise ConsistencyError(f"{side} perpendicular of {S.name()} is not thick")
    return ThickSubcat(n, result)


def intersect(A: ThickSubcat, B: ThickSubcat) -> ThickSubcat:
    if A.n != B.n:
        raise InvalidInputError("Subcategories of different categories")
    return ThickSubcat(A.n, A.members & B.members)


def exceptional_sequences_in(
    n: int, members: FrozenSet[Interval], limit: Optional[int] = None, prefix: Tuple[Interval, ...] = ()
) -> Iterator[Tuple[Interval, ...]]:
    """
    Exceptional sequences of members generating the thick subcategory `members`,
    in lexicographic order of the items. Prefixes are pruned by semiorthogonality.
    """
    length = k0_rank(n, members)
    candidates = sorted(x for x in members if is_exceptional_interval(n, x))
    found = 0

    def extend(prefix: Tuple[Interval, ...]):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if len(prefix) == length:
            if _closure(n, frozenset(prefix)) == members:
                found += 1
                yield prefix
            return
        for x in candidates:
            if x in prefix:
                continue
            if all(graded_hom_vanishes(n, x, e) for e in prefix):
                yield from extend(prefix + (x,))

    if length == 0:
        return
    yield from extend(tuple(prefix))


def is_exceptional_interval(n: int, x: Interval) -> bool:
    return module_hom_dim(n, x, x, 0) == 1 and module_hom_dim(n, x, x, 1) == 0


@lru_cache(maxsize=None)
def _generating_sequence(n: int, members: FrozenSet[Interval]) -> Tuple[Interval, ...]:
    for seq in exceptional_sequences_in(n, members, limit=1):
        return seq
    raise ConsistencyError(f"No exceptional sequence generates {ThickSubcat(n, members).name()}")


def generating_sequence(U: ThickSubcat) -> Tuple[Interval, ...]:
    """First exceptional sequence (lexicographic) generating U."""
    if U.is_zero():
        return ()
    return _generating_sequence(U.n, U.members)


def evaluation_cone(X: DerivedObject, e: Interval) -> DerivedObject:
    """Cone of the evaluation Hom*(E, X) (x) E -> X; the result has Hom*(E, -) = 0."""
    E = DerivedObject.module(X.n, e)
    degrees = hom_degrees(E, X)
    if not degrees:
        return X
    target = present(X)
    source = present(E)
    maps: List[ChainMap] = []
    for k in degrees:
        maps.extend(hom_basis(source.shift(-k), target, 0))
    return cone(hstack_maps(maps))


def _in_span(n: int, span: Iterable[Interval], vector: np.ndarray) -> bool:
    basis = [x.dimvec(n) for x in span]
    if not basis:
        return not vector.any()
    mat = np.array(basis, dtype=np.int64)
    return np.linalg.matrix_rank(np.vstack([mat, vector])) == np.linalg.matrix_rank(mat)


def project_quotient(U: ThickSubcat, X: DerivedObject) -> DerivedObject:
    """
    Image of X in D/U, realised inside the right perpendicular of U.

    The generating sequence (E_1, ..., E_m) of U is stripped from E_m down to
    E_1 with evaluation triangles, so the result has no maps from U.
    """
    if U.n != X.n:
        raise InvalidInputError(f"Subcategory of A_{U.n} and object over A_{X.n}")
    result = X
    for e in reversed(generating_sequence(U)):
        result = evaluation_cone(result, e)
    target = perp(U, "right")
    if not result.intervals() <= target.members:
        raise ConsistencyError(f"Projection of {X.name()} left summands outside {target.name()}")
    difference = X.k0_class().as_array() - result.k0_class().as_array()
    if not _in_span(X.n, U.members, difference):
        raise ConsistencyError(f"Projection of {X.name()} changed the class outside the span of U")
    return result
