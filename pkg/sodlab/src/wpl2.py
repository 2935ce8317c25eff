"""
Formula model of D^b(coh X(2)), the weighted projective line with one
weight-2 point.

The grading group L(2) is identified with the integers via m -> m*x1, so
c = 2 and the canonical element is omega = -3. Exceptional objects are the
line bundles O(m) and the two simples S10, S11 of the rank-two tube; the
ordinary-point simple Sx only enters through K0.
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import get_threads, get_wpl2_window
from src.core_lattice import K0Class, euler_pairing, wpl2
from src.errors import ConsistencyError, InvalidInputError, WindowTooSmallError
from src.mutation_graph import ComponentGraph, MutationGraph, ReductionDecomposition, _graph_from, component_graph

logger = logging.getLogger(__name__)

C = 2
OMEGA = -3
LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True, order=True)
class L2Element:
    """m * x1 in L(2)."""

    m: int

    @classmethod
    def c(cls) -> "L2Element":
        return cls(C)

    @classmethod
    def omega(cls) -> "L2Element":
        return cls(OMEGA)

    def __add__(self, other: "L2Element") -> "L2Element":
        return L2Element(self.m + other.m)

    def __sub__(self, other: "L2Element") -> "L2Element":
        return L2Element(self.m - other.m)

    def __neg__(self) -> "L2Element":
        return L2Element(-self.m)

    def name(self) -> str:
        if self.m == 0:
            return "0"
        return f"{self.m}x1"


class Wpl2Kind(str, Enum):
    LINE_BUNDLE = "O"
    SIMPLE = "S"
    RANK_ONE_SIMPLE = "Sx"


@dataclass(frozen=True, order=True)
class Wpl2Object:
    """O(m), S1j or Sx, possibly shifted. m is the degree for O and the tube index j for S."""

    kind: Wpl2Kind
    m: int = 0
    shift: int = 0

    @classmethod
    def line_bundle(cls, m: int, shift: int = 0) -> "Wpl2Object":
        return cls(Wpl2Kind.LINE_BUNDLE, m, shift)

    @classmethod
    def simple(cls, j: int, shift: int = 0) -> "Wpl2Object":
        return cls(Wpl2Kind.SIMPLE, j % 2, shift)

    @classmethod
    def rank_one_simple(cls, shift: int = 0) -> "Wpl2Object":
        return cls(Wpl2Kind.RANK_ONE_SIMPLE, 0, shift)

    def is_exceptional_kind(self) -> bool:
        return self.kind != Wpl2Kind.RANK_ONE_SIMPLE

    def normalized(self) -> "Wpl2Object":
        return Wpl2Object(self.kind, self.m, 0)

    def with_shift(self, s: int) -> "Wpl2Object":
        return Wpl2Object(self.kind, self.m, self.shift + s)

    def twist(self, d: int) -> "Wpl2Object":
        """Tensor with O(d); simples at the weight point move along the tube."""
        if self.kind == Wpl2Kind.LINE_BUNDLE:
            return Wpl2Object(self.kind, self.m + d, self.shift)
        if self.kind == Wpl2Kind.SIMPLE:
            return Wpl2Object(self.kind, (self.m + d) % 2, self.shift)
        return self

    def k0_class(self) -> K0Class:
        sign = -1 if self.shift % 2 else 1
        return wpl2_class(self.normalized()).scale(sign)

    def name(self) -> str:
        if self.kind == Wpl2Kind.LINE_BUNDLE:
            base = "O" if self.m == 0 else f"O({self.m})"
        elif self.kind == Wpl2Kind.SIMPLE:
            base = f"S1{self.m}"
        else:
            base = "Sx"
        return base if self.shift == 0 else f"{base}[{self.shift}]"

    def __str__(self) -> str:
        return self.name()


_TOKEN = re.compile(r"^(?:O(?:\((?P<m>-?\d+)\))?|S1(?P<j>[01])|(?P<sx>Sx))(?:\[(?P<shift>-?\d+)\])?$")


def parse_wpl2_object(token: str) -> Wpl2Object:
    """Parse 'O', 'O(-2)', 'S10', 'S11', 'Sx', each with an optional '[s]' shift."""
    match = _TOKEN.match(token.strip())
    if not match:
        raise InvalidInputError(f"Malformed X(2) object {token!r}")
    shift = int(match.group("shift") or 0)
    if match.group("sx"):
        return Wpl2Object.rank_one_simple(shift)
    if match.group("j") is not None:
        return Wpl2Object.simple(int(match.group("j")), shift)
    return Wpl2Object.line_bundle(int(match.group("m") or 0), shift)


def wpl2_class(x: Wpl2Object) -> K0Class:
    """Class on the basis ([O], [S10], [Sx])."""
    if x.shift:
        return x.k0_class()
    if x.kind == Wpl2Kind.LINE_BUNDLE:
        l, odd = divmod(x.m, 2)
        return K0Class((1, -1, l + 1)) if odd else K0Class((1, 0, l))
    if x.kind == Wpl2Kind.SIMPLE:
        return K0Class((0, 1, 0)) if x.m == 0 else K0Class((0, -1, 1))
    return K0Class((0, 0, 1))


def wpl2_euler(x: Wpl2Object, y: Wpl2Object) -> int:
    return euler_pairing(wpl2(), x.k0_class(), y.k0_class())


def _hom0_line_bundles(m: int, m2: int) -> int:
    # monomials x1^a X^b of degree a + 2b = m2 - m with a in {0, 1}
    return (m2 - m) // 2 + 1 if m2 >= m else 0


def _module_hom(x: Wpl2Object, y: Wpl2Object, j: int) -> int:
    """dim Ext^j between sheaves at shift 0; zero outside j in {0, 1}."""
    LB, S = Wpl2Kind.LINE_BUNDLE, Wpl2Kind.SIMPLE
    if j not in (0, 1):
        return 0
    if x.kind == LB and y.kind == LB:
        if j == 0:
            return _hom0_line_bundles(x.m, y.m)
        return _hom0_line_bundles(y.m, x.m + OMEGA)
    if x.kind == LB and y.kind == S:
        return int(j == 0 and (x.m - y.m) % 2 == 0)
    if x.kind == S and y.kind == LB:
        return int(j == 1 and (y.m - x.m - 1) % 2 == 0)
    if j == 0:
        return int(x.m == y.m)
    return int(y.m == (x.m + 1) % 2)


def wpl2_hom_dim(X: Wpl2Object, Y: Wpl2Object, k: int = 0) -> int:
    """dim Hom(X, Y[k]) for line bundles and tube simples at the weight point."""
    for obj in (X, Y):
        if not obj.is_exceptional_kind():
            raise InvalidInputError(f"{obj.name()} is not exceptional; Hom is only modelled between exceptional kinds")
    return _module_hom(X.normalized(), Y.normalized(), k + Y.shift - X.shift)


def wpl2_hom_degrees(X: Wpl2Object, Y: Wpl2Object) -> Dict[int, int]:
    dims = {}
    for j in (0, 1):
        d = wpl2_hom_dim(X, Y, j - Y.shift + X.shift)
        if d:
            dims[j - Y.shift + X.shift] = d
    return dict(sorted(dims.items()))


def wpl2_is_exceptional(X: Wpl2Object) -> bool:
    if not X.is_exceptional_kind():
        return False
    return wpl2_hom_degrees(X, X) == {0: 1}


@dataclass(frozen=True)
class Wpl2Sequence:
    items: Tuple[Wpl2Object, ...]

    def __len__(self) -> int:
        return len(self.items)

    def names(self) -> List[str]:
        return [x.name() for x in self.items]

    def name(self) -> str:
        return "(" + ",".join(self.names()) + ")"

    def twist(self, d: int) -> "Wpl2Sequence":
        return Wpl2Sequence(tuple(x.twist(d) for x in self.items))

    def __str__(self) -> str:
        return self.name()


def _is_k0_basis(items: Sequence[Wpl2Object]) -> bool:
    if len(items) != 3:
        return False
    det = np.linalg.det(np.array([x.k0_class().coords for x in items], dtype=float))
    return int(round(abs(det))) == 1


def wpl2_is_exceptional_sequence(items: Sequence[Wpl2Object]) -> bool:
    if not all(wpl2_is_exceptional(x) for x in items):
        return False
    for j in range(len(items)):
        for i in range(j):
            if wpl2_hom_degrees(items[j], items[i]):
                return False
    return True


def wpl2_is_full_exceptional(items: Sequence[Wpl2Object]) -> bool:
    """Exceptional, semiorthogonal and a basis of K0."""
    items = list(items.items if isinstance(items, Wpl2Sequence) else items)
    if len(items) != 3:
        return False
    return wpl2_is_exceptional_sequence(items) and _is_k0_basis(items)


def make_wpl2_sequence(items: Sequence[Wpl2Object]) -> Wpl2Sequence:
    items = tuple(x.normalized() for x in items)
    if len(items) != 3:
        raise InvalidInputError(f"X(2) sequences have length 3, got {len(items)}")
    if not wpl2_is_full_exceptional(items):
        raise InvalidInputError(f"({','.join(x.name() for x in items)}) is not a full exceptional sequence")
    return Wpl2Sequence(items)


def parse_wpl2_sequence(text: str) -> Wpl2Sequence:
    """Parse '(O(-2),O,S10)'."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    tokens = [t for t in re.split(r",(?![^()]*\))", body) if t.strip()]
    return make_wpl2_sequence([parse_wpl2_object(t) for t in tokens])


def _candidates(window: int) -> List[Wpl2Object]:
    lines = sorted((Wpl2Object.line_bundle(m) for m in range(-window, window + 1)), key=lambda x: (abs(x.m), x.m))
    return lines + [Wpl2Object.simple(0), Wpl2Object.simple(1)]


def _resolve(target: K0Class, window: int, what: str) -> Wpl2Object:
    for x in _candidates(window):
        cls = wpl2_class(x)
        if cls == target or cls == -target:
            return x
    raise WindowTooSmallError(f"No exceptional object of class {target.coords} for {what}", window)


def wpl2_mutate(seq: Wpl2Sequence, i: int, direction: str = LEFT, window: Optional[int] = None) -> Wpl2Sequence:
    """
    Left: (E, F) -> (L_E F, E) at positions i, i+1. Right: (E, F) -> (F, R_F E).
    The new object is found from its K0 class [F] - chi(E,F)[E] (resp.
    [E] - chi(E,F)[F]) among O(m), |m| <= window, and the two simples.
    """
    if direction not in (LEFT, RIGHT):
        raise InvalidInputError(f"Unknown mutation direction {direction!r}")
    if not 1 <= i <= len(seq) - 1:
        raise InvalidInputError(f"Mutation index {i} out of range 1..{len(seq) - 1}")
    window = get_wpl2_window() if window is None else window
    items = list(seq.items)
    e, f = items[i - 1], items[i]
    if not wpl2_hom_degrees(e, f):
        items[i - 1], items[i] = f, e
        return Wpl2Sequence(tuple(items))
    chi = wpl2_euler(e, f)
    if direction == LEFT:
        what = f"L_{e.name()} {f.name()}"
        items[i - 1], items[i] = _resolve(f.k0_class() - e.k0_class().scale(chi), window, what), e
    else:
        what = f"R_{f.name()} {e.name()}"
        items[i - 1], items[i] = f, _resolve(e.k0_class() - f.k0_class().scale(chi), window, what)
    if not wpl2_is_full_exceptional(items):
        raise ConsistencyError(f"{what} resolved by class, but ({','.join(x.name() for x in items)}) is not exceptional")
    return Wpl2Sequence(tuple(items))


def twist_sequence(seq: Wpl2Sequence, d: int) -> Wpl2Sequence:
    return seq.twist(d)


def wpl2_enumerate_sequences(window: int) -> List[Wpl2Sequence]:
    """Full exceptional triples built from O(m), |m| <= window, and the tube simples."""
    pool = sorted(_candidates(window))
    found = [Wpl2Sequence(t) for t in product(pool, repeat=3) if wpl2_is_full_exceptional(t)]
    logger.info(f"X(2): {len(found)} full exceptional triples inside |m| <= {window}")
    return found


def _neighbours(seq: Wpl2Sequence, window: int) -> List[Wpl2Sequence]:
    return [
        wpl2_mutate(seq, i, direction, window)
        for i in range(1, len(seq))
        for direction in (LEFT, RIGHT)
    ]


def wpl2_windowed_graph(seed: Wpl2Sequence, radius: int, window: Optional[int] = None) -> MutationGraph:
    """
    Breadth-first search from seed through left and right mutations up to
    depth radius; edges u -> L_i(u) labelled rho_i are kept between found vertices.
    """
    if radius < 0:
        raise InvalidInputError(f"Radius must be nonnegative, got {radius}")
    window = get_wpl2_window() if window is None else window
    if not wpl2_is_full_exceptional(seed):
        raise InvalidInputError(f"Seed {seed.name()} is not a full exceptional sequence")

    vertices = [seed]
    seen = {seed}
    frontier = [seed]
    threads = get_threads()
    for depth in range(radius):
        if threads > 1 and len(frontier) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                chunks = list(pool.map(lambda s: _neighbours(s, window), frontier))
        else:
            chunks = [_neighbours(s, window) for s in frontier]
        frontier = []
        for chunk in chunks:
            for s in chunk:
                if s not in seen:
                    seen.add(s)
                    vertices.append(s)
                    frontier.append(s)
        logger.debug(f"depth {depth + 1}: {len(vertices)} vertices")

    position = {v: k for k, v in enumerate(vertices)}
    edges = []
    for u, s in enumerate(vertices):
        for i in range(1, len(s)):
            target = wpl2_mutate(s, i, LEFT, window)
            if target in position:
                edges.append((u, position[target], f"rho_{i}"))
    logger.info(f"X(2) windowed graph from {seed.name()}: {len(vertices)} vertices at radius {radius}")
    return _graph_from(vertices, edges)


def wpl2_reduction_groups(g: MutationGraph) -> Dict[Wpl2Object, List[int]]:
    """Vertex indices grouped by the last object of each triple."""
    groups: Dict[Wpl2Object, List[int]] = {}
    for idx, s in enumerate(g.vertices):
        groups.setdefault(s.items[-1], []).append(idx)
    return groups


def wpl2_component_graph(g: MutationGraph) -> ComponentGraph:
    decomposition = ReductionDecomposition(wpl2_reduction_groups(g), {})
    return component_graph(g, decomposition)
