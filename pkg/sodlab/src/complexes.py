"""
Bounded complexes of projective A_n representations with exact rational differentials.

A complex stores, per degree, the labels i of its projective summands P_i = [i,n]
and the differential d^k: C^k -> C^{k+1} as a sympy matrix. Hom(P_i, P_j) is
one-dimensional exactly when j <= i (the inclusion P_i c P_j), so a matrix entry
from a summand labelled i to a summand labelled j may be nonzero only if j <= i.
At vertex v the representation is spanned by the summands with label <= v, and
the structure map v -> v+1 is the coordinate inclusion.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, eye

from src.errors import ConsistencyError, InvalidInputError
from src.objects import DerivedObject, Interval

logger = logging.getLogger(__name__)


def allowed(src: int, tgt: int) -> bool:
    """True when Hom(P_src, P_tgt) is nonzero."""
    return tgt <= src


@dataclass(frozen=True, eq=False)
class PresentedComplex:
    n: int
    terms: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    differentials: Dict[int, Matrix] = field(default_factory=dict)

    def labels(self, d: int) -> Tuple[int, ...]:
        return self.terms.get(d, ())

    def size(self, d: int) -> int:
        return len(self.terms.get(d, ()))

    def degrees(self) -> List[int]:
        return sorted(d for d, labels in self.terms.items() if labels)

    def is_zero(self) -> bool:
        return not self.degrees()

    def entry(self, d: int, q: int, p: int):
        m = self.differentials.get(d)
        return m[q, p] if m is not None else 0

    def vertex_indices(self, d: int, v: int) -> List[int]:
        return [p for p, label in enumerate(self.labels(d)) if label <= v]

    def shift(self, s: int) -> "PresentedComplex":
        """C[s]: (C[s])^d = C^{d+s}, differential (-1)^s d."""
        if s == 0:
            return self
        sign = -1 if s % 2 else 1
        terms = {d - s: labels for d, labels in self.terms.items()}
        diffs = {d - s: sign * m for d, m in self.differentials.items()}
        return PresentedComplex(self.n, terms, diffs)

    def validate(self) -> "PresentedComplex":
        """Check the label condition on every entry and d^2 = 0."""
        for d in self.degrees():
            for q in range(self.size(d + 1)):
                for p in range(self.size(d)):
                    if self.entry(d, q, p) != 0 and not allowed(self.labels(d)[p], self.labels(d + 1)[q]):
                        raise ConsistencyError(f"Differential entry P{self.labels(d)[p]} -> P{self.labels(d + 1)[q]} in degree {d} is not a map")
            for q in range(self.size(d + 2)):
                for p in range(self.size(d)):
                    total = sum(self.entry(d + 1, q, r) * self.entry(d, r, p) for r in range(self.size(d + 1)))
                    if total != 0:
                        raise ConsistencyError(f"d^2 != 0 in degree {d}")
        return self


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Degree-0 chain map source -> target; a degree k map X -> Y is a map X -> Y[k]."""

    source: PresentedComplex
    target: PresentedComplex
    components: Dict[int, Matrix] = field(default_factory=dict)

    def entry(self, d: int, q: int, p: int):
        m = self.components.get(d)
        return m[q, p] if m is not None else 0

    def is_zero(self) -> bool:
        return all(m.is_zero_matrix for m in self.components.values())

    def shift(self, s: int) -> "ChainMap":
        if s == 0:
            return self
        comps = {d - s: m for d, m in self.components.items()}
        return ChainMap(self.source.shift(s), self.target.shift(s), comps)

    def is_chain_map(self) -> bool:
        X, Y = self.source, self.target
        degrees = sorted(set(X.degrees()) | set(Y.degrees()))
        for d in degrees:
            for q in range(Y.size(d + 1)):
                for p in range(X.size(d)):
                    left = sum(Y.entry(d, q, r) * self.entry(d, r, p) for r in range(Y.size(d)))
                    right = sum(self.entry(d + 1, q, r) * X.entry(d, r, p) for r in range(X.size(d + 1)))
                    if left != right:
                        return False
        return True


def _matrix(rows: int, cols: int, value) -> Optional[Matrix]:
    """Build a rows x cols matrix from value(i, j), or None when a side is empty."""
    if rows == 0 or cols == 0:
        return None
    return Matrix(rows, cols, lambda i, j: value(i, j))


def _store(target: Dict[int, Matrix], d: int, m: Optional[Matrix]):
    if m is not None and not m.is_zero_matrix:
        target[d] = m


@lru_cache(maxsize=None)
def _present_module(n: int, a: int, b: int, shift: int) -> PresentedComplex:
    if b == n:
        base = PresentedComplex(n, {0: (a,)})
    else:
        # 0 -> P_{b+1} -> P_a -> M[a,b] -> 0
        base = PresentedComplex(n, {-1: (b + 1,), 0: (a,)}, {-1: Matrix([[Rational(1)]])})
    return base.shift(shift)


def present(obj: DerivedObject) -> PresentedComplex:
    """Projective presentation of each term, shifted, summed in canonical order."""
    return direct_sum(obj.n, [_present_module(obj.n, iv.a, iv.b, s) for iv, s in obj.terms])


def direct_sum(n: int, complexes: Sequence[PresentedComplex]) -> PresentedComplex:
    complexes = list(complexes)
    if len(complexes) == 1:
        return complexes[0]
    degrees = sorted({d for c in complexes for d in c.degrees()})
    terms = {d: tuple(label for c in complexes for label in c.labels(d)) for d in degrees}
    diffs: Dict[int, Matrix] = {}
    for d in degrees:
        rows, cols = len(terms.get(d + 1, ())), len(terms[d])
        if rows == 0:
            continue
        m = Matrix.zeros(rows, cols)
        ro = co = 0
        for c in complexes:
            for q in range(c.size(d + 1)):
                for p in range(c.size(d)):
                    m[ro + q, co + p] = c.entry(d, q, p)
            ro += c.size(d + 1)
            co += c.size(d)
        _store(diffs, d, m)
    return PresentedComplex(n, terms, diffs)


def identity(C: PresentedComplex) -> ChainMap:
    return ChainMap(C, C, {d: eye(C.size(d)) for d in C.degrees()})


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g o f."""
    comps: Dict[int, Matrix] = {}
    for d in f.source.degrees():
        if d in g.components and d in f.components:
            _store(comps, d, g.components[d] * f.components[d])
    return ChainMap(f.source, g.target, comps)


def hstack_maps(maps: Sequence[ChainMap]) -> ChainMap:
    """[f_1 ... f_m]: (+) sources -> common target."""
    maps = list(maps)
    target = maps[0].target
    source = direct_sum(target.n, [f.source for f in maps])
    comps: Dict[int, Matrix] = {}
    for d in source.degrees():
        def value(q, p, d=d):
            offset = 0
            for f in maps:
                width = f.source.size(d)
                if p < offset + width:
                    return f.entry(d, q, p - offset)
                offset += width
            return 0
        _store(comps, d, _matrix(target.size(d), source.size(d), value))
    return ChainMap(source, target, comps)


def vstack_maps(maps: Sequence[ChainMap]) -> ChainMap:
    """Column (f_1, ..., f_m): common source -> (+) targets."""
    maps = list(maps)
    source = maps[0].source
    target = direct_sum(source.n, [f.target for f in maps])
    comps: Dict[int, Matrix] = {}
    for d in source.degrees():
        def value(q, p, d=d):
            offset = 0
            for f in maps:
                height = f.target.size(d)
                if q < offset + height:
                    return f.entry(d, q - offset, p)
                offset += height
            return 0
        _store(comps, d, _matrix(target.size(d), source.size(d), value))
    return ChainMap(source, target, comps)


def mapping_cone(f: ChainMap) -> PresentedComplex:
    """Cone(f)^d = X^{d+1} (+) Y^d with differential [[-d_X, 0], [f, d_Y]]."""
    X, Y = f.source, f.target
    degrees = sorted({d - 1 for d in X.degrees()} | set(Y.degrees()))
    terms = {d: X.labels(d + 1) + Y.labels(d) for d in degrees}

    diffs: Dict[int, Matrix] = {}
    for d in degrees:
        x_top, x_src = X.size(d + 2), X.size(d + 1)

        def value(q, p, d=d, x_top=x_top, x_src=x_src):
            if q < x_top:
                return -X.entry(d + 1, q, p) if p < x_src else 0
            if p < x_src:
                return f.entry(d + 1, q - x_top, p)
            return Y.entry(d, q - x_top, p - x_src)
        _store(diffs, d, _matrix(len(terms.get(d + 1, ())), len(terms[d]), value))
    return PresentedComplex(X.n, terms, diffs)


def fiber(f: ChainMap) -> Tuple[PresentedComplex, ChainMap]:
    """Cone(f)[-1] together with its projection onto the source of f."""
    X, Y = f.source, f.target
    degrees = sorted(set(X.degrees()) | {d + 1 for d in Y.degrees()})
    terms = {d: X.labels(d) + Y.labels(d - 1) for d in degrees}

    diffs: Dict[int, Matrix] = {}
    for d in degrees:
        x_top, x_src = X.size(d + 1), X.size(d)

        def value(q, p, d=d, x_top=x_top, x_src=x_src):
            if q < x_top:
                return X.entry(d, q, p) if p < x_src else 0
            if p < x_src:
                return -f.entry(d, q - x_top, p)
            return -Y.entry(d - 1, q - x_top, p - x_src)
        _store(diffs, d, _matrix(len(terms.get(d + 1, ())), len(terms[d]), value))
    fib = PresentedComplex(X.n, terms, diffs)

    proj: Dict[int, Matrix] = {}
    for d in X.degrees():
        _store(proj, d, _matrix(X.size(d), fib.size(d), lambda q, p: 1 if q == p else 0))
    return fib, ChainMap(fib, X, proj)


def _rank(columns: List[Matrix]) -> int:
    if not columns:
        return 0
    return Matrix.hstack(*columns).rank()


def _restricted_cycles(C: PresentedComplex, d: int, v: int) -> List[Matrix]:
    cols = C.vertex_indices(d, v)
    rows = C.vertex_indices(d + 1, v)
    if not cols:
        return []
    if not rows:
        return [eye(len(cols))[:, i] for i in range(len(cols))]
    m = Matrix(len(rows), len(cols), lambda i, j: C.entry(d, rows[i], cols[j]))
    return m.nullspace()


def _restricted_boundaries(C: PresentedComplex, d: int, v: int) -> List[Matrix]:
    rows = C.vertex_indices(d, v)
    cols = C.vertex_indices(d - 1, v)
    if not rows or not cols:
        return []
    m = Matrix(len(rows), len(cols), lambda i, j: C.entry(d - 1, rows[i], cols[j]))
    return [m[:, j] for j in range(m.cols)]


def cohomology_multiplicities(C: PresentedComplex, d: int) -> Dict[Tuple[int, int], int]:
    """Interval multiplicities of H^d(C) from the ranks of its structure maps."""
    n = C.n
    cycles = {v: _restricted_cycles(C, d, v) for v in range(1, n + 1)}
    boundaries = {v: _restricted_boundaries(C, d, v) for v in range(1, n + 1)}
    boundary_rank = {v: _rank(boundaries[v]) for v in range(1, n + 1)}
    ranks: Dict[Tuple[int, int], int] = {}

    def r(a: int, b: int) -> int:
        if a < 1 or b > n or a > b:
            return 0
        if (a, b) not in ranks:
            src, dst = C.vertex_indices(d, a), C.vertex_indices(d, b)
            position = {p: i for i, p in enumerate(dst)}
            embedded = []
            for z in cycles[a]:
                col = Matrix.zeros(len(dst), 1)
                for i, p in enumerate(src):
                    col[position[p], 0] = z[i, 0]
                embedded.append(col)
            ranks[(a, b)] = _rank(embedded + boundaries[b]) - boundary_rank[b]
        return ranks[(a, b)]

    mult = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            m = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1)
            if m < 0:
                raise ConsistencyError(f"Negative multiplicity {m} for [{a},{b}] in degree {d}")
            if m:
                mult[(a, b)] = m
    return mult


def decompose(C: PresentedComplex) -> DerivedObject:
    """Krull-Schmidt decomposition: sum over k of H^k(C)[-k]."""
    terms = []
    for d in C.degrees():
        for (a, b), m in cohomology_multiplicities(C, d).items():
            terms.extend([(Interval(a, b), -d)] * m)
    return DerivedObject.build(C.n, terms)


def cone(f: ChainMap) -> DerivedObject:
    return decompose(mapping_cone(f))


def _vector_to_map(X: PresentedComplex, T: PresentedComplex, variables, vector) -> ChainMap:
    comps: Dict[int, Matrix] = {}
    for (d, q, p), value in zip(variables, vector):
        if value != 0:
            if d not in comps:
                comps[d] = Matrix.zeros(T.size(d), X.size(d))
            comps[d][q, p] = value
    return ChainMap(X, T, comps)


def hom_basis(X: PresentedComplex, Y: PresentedComplex, k: int = 0) -> List[ChainMap]:
    """
    Basis of Hom(X, Y[k]) in the homotopy category, as chain maps X -> Y[k].

    Cycles are the solutions of d_Y f = f d_X; boundaries are the maps d h + h d.
    The returned maps are cycles extending a basis of the boundaries.
    """
    if X.n != Y.n:
        raise InvalidInputError(f"Complexes over A_{X.n} and A_{Y.n}")
    T = Y.shift(k)
    variables: List[Tuple[int, int, int]] = []
    index: Dict[Tuple[int, int, int], int] = {}
    for d in X.degrees():
        for p, src in enumerate(X.labels(d)):
            for q, tgt in enumerate(T.labels(d)):
                if allowed(src, tgt):
                    index[(d, q, p)] = len(variables)
                    variables.append((d, q, p))
    if not variables:
        return []
    nvars = len(variables)

    degrees = sorted(set(X.degrees()) | set(T.degrees()))
    rows = []
    for d in range(degrees[0] - 1, degrees[-1] + 1):
        for q in range(T.size(d + 1)):
            for p in range(X.size(d)):
                row = [0] * nvars
                for r in range(T.size(d)):
                    c = T.entry(d, q, r)
                    if c != 0 and (d, r, p) in index:
                        row[index[(d, r, p)]] += c
                for r in range(X.size(d + 1)):
                    c = X.entry(d, r, p)
                    if c != 0 and (d + 1, q, r) in index:
                        row[index[(d + 1, q, r)]] -= c
                if any(v != 0 for v in row):
                    rows.append(row)
    if rows:
        cycles = Matrix(rows).nullspace()
    else:
        cycles = [eye(nvars)[:, i] for i in range(nvars)]
    if not cycles:
        return []

    boundaries = []
    for d in X.degrees():
        for p, src in enumerate(X.labels(d)):
            for q, tgt in enumerate(T.labels(d - 1)):
                if not allowed(src, tgt):
                    continue
                col = Matrix.zeros(nvars, 1)
                for r in range(T.size(d)):
                    c = T.entry(d - 1, r, q)
                    if c != 0:
                        col[index[(d, r, p)], 0] += c
                for s in range(X.size(d - 1)):
                    c = X.entry(d - 1, p, s)
                    if c != 0:
                        col[index[(d - 1, q, s)], 0] += c
                if not col.is_zero_matrix:
                    boundaries.append(col)

    span = list(boundaries)
    current = _rank(span)
    basis = []
    for z in cycles:
        if _rank(span + [z]) > current:
            span.append(z)
            current += 1
            basis.append(_vector_to_map(X, T, variables, list(z)))
    logger.debug(f"hom_basis: {len(variables)} unknowns, {len(cycles)} cycles, {len(basis)} classes")
    return basis


def hom_dimension(X: PresentedComplex, Y: PresentedComplex, k: int = 0) -> int:
    return len(hom_basis(X, Y, k))
