"""
Mutation graphs of finest SODs, their reduction decomposition along the last
block, the component graph, and the connectedness criterion in terms of
exceptional objects of perpendicular categories.
"""
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import categorical_multiedge_match

from src.config import get_max_criterion_rank, get_max_graph_rank, get_threads
from src.core_lattice import QuiverSpec, require_type_a, type_a
from src.errors import CapacityError, ConsistencyError, InvalidInputError
from src.exceptional import enumerate_full_exceptional_sequences, left_mutate
from src.objects import DerivedObject, Interval
from src.sod_tstab import RIGHT, Sod, chi, eta_inv, finest_sods, rho, rho_tstability, sigma, xi
from src.typea_engine import (
    ThickSubcat,
    all_indecomposables,
    is_exceptional_interval,
    perp,
    project_quotient,
    thick_closure,
)

logger = logging.getLogger(__name__)


@dataclass
class MutationGraph:
    """Vertices in canonical order; graph nodes are vertex indices, edges carry a 'label'."""

    vertices: List[Any]
    graph: nx.MultiDiGraph = field(default_factory=nx.MultiDiGraph)

    def index(self, vertex) -> int:
        return self.vertices.index(vertex)

    def edges(self) -> List[Tuple[int, int, str]]:
        return sorted((u, v, data["label"]) for u, v, data in self.graph.edges(data=True))

    def out_degree(self, u: int) -> int:
        return self.graph.out_degree(u)

    def labels(self) -> List[str]:
        return [v.name() for v in self.vertices]

    def __len__(self) -> int:
        return len(self.vertices)


def _graph_from(vertices: Sequence[Any], edges: Sequence[Tuple[int, int, str]]) -> MutationGraph:
    g = nx.MultiDiGraph()
    for i, v in enumerate(vertices):
        g.add_node(i, label=v.name())
    for u, v, label in sorted(edges):
        g.add_edge(u, v, label=label)
    return MutationGraph(list(vertices), g)


def _mutation_edges(vertices: Sequence[Any], step, labels: Sequence[Tuple[int, str]]) -> List[Tuple[int, int, str]]:
    """Edges u -> step(u, i) for every (i, label); a target outside the vertex set is a bug."""
    position = {v: k for k, v in enumerate(vertices)}

    def edges_of(u: int):
        found = []
        for i, label in labels:
            target = step(vertices[u], i)
            if target not in position:
                raise ConsistencyError(f"Mutation {label} of {vertices[u].name()} left the vertex set")
            found.append((u, position[target], label))
        return found

    threads = get_threads()
    if threads > 1 and len(vertices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(edges_of, range(len(vertices))))
    else:
        chunks = [edges_of(u) for u in range(len(vertices))]
    return [e for chunk in chunks for e in chunk]


def _finest_vertices(n: int) -> List[Sod]:
    if n < 2:
        return []
    return [chi(seq) for seq in enumerate_full_exceptional_sequences(type_a(n))]


def build_graph(q: QuiverSpec) -> MutationGraph:
    """Finest SODs of D^b(A_n) with an edge u -> rho_i(u) labelled rho_i for each index."""
    n = require_type_a(q, "build_graph")
    cap = get_max_graph_rank()
    if n > cap:
        raise CapacityError(f"Mutation graphs are built up to n = {cap}, got n = {n}")
    vertices = _finest_vertices(n)
    labels = [(i, f"rho_{i}") for i in range(1, n)]
    edges = _mutation_edges(vertices, lambda s, i: rho(s, i, RIGHT), labels)
    logger.info(f"A_{n} mutation graph: {len(vertices)} vertices, {len(edges)} edges")
    return _graph_from(vertices, edges)


def is_connected(g: MutationGraph) -> bool:
    if len(g.vertices) <= 1:
        return True
    return nx.is_weakly_connected(g.graph)


def filtration_graph(q: QuiverSpec) -> MutationGraph:
    """Finest right admissible filtrations xi(s) with edges sigma_j."""
    n = require_type_a(q, "filtration_graph")
    vertices = [xi(s) for s in _finest_vertices(n)]
    labels = [(j, f"sigma_{j}") for j in range(1, n)]
    return _graph_from(vertices, _mutation_edges(vertices, lambda f, j: sigma(f, j, RIGHT), labels))


def tstability_graph(q: QuiverSpec) -> MutationGraph:
    """Finest t-stabilities eta^-1(s) with edges rho_i."""
    n = require_type_a(q, "tstability_graph")
    vertices = [eta_inv(s) for s in _finest_vertices(n)]
    labels = [(i, f"rho_{i}") for i in range(1, n)]
    return _graph_from(vertices, _mutation_edges(vertices, lambda t, i: rho_tstability(t, i, RIGHT), labels))


@dataclass
class ReductionDecomposition:
    """Vertices grouped by their last block U; each group models the finest SODs of D/U."""

    groups: Dict[ThickSubcat, List[int]]
    quotients: Dict[ThickSubcat, ThickSubcat]

    def sizes(self) -> List[int]:
        return [len(members) for members in self.groups.values()]

    def group_of(self, vertex: int) -> ThickSubcat:
        for key, members in self.groups.items():
            if vertex in members:
                return key
        raise KeyError(vertex)


def quotient_category(U: ThickSubcat) -> ThickSubcat:
    """D/U as the thick closure of the projections of all indecomposables."""
    images = set()
    for x in all_indecomposables(U.n):
        images |= project_quotient(U, DerivedObject.module(U.n, x)).intervals()
    model = thick_closure(sorted(images), U.n)
    if model != perp(U, RIGHT):
        raise ConsistencyError(f"Quotient by {U.name()} does not match its right perpendicular")
    return model


def reduction_decomposition(g: MutationGraph) -> ReductionDecomposition:
    """Group vertices by last block and check each group against the finest SODs of the quotient."""
    groups: Dict[ThickSubcat, List[int]] = {}
    for idx, s in enumerate(g.vertices):
        groups.setdefault(s.blocks[-1], []).append(idx)
    quotients = {}
    for U, members in groups.items():
        quotient = quotient_category(U)
        expected = {s.blocks for s in finest_sods(quotient)}
        actual = {g.vertices[idx].blocks[:-1] for idx in members}
        if expected != actual or len(actual) != len(members):
            raise ConsistencyError(
                f"Group of {U.name()} has {len(members)} vertices, quotient has {len(expected)} finest SODs"
            )
        quotients[U] = quotient
    return ReductionDecomposition(groups, quotients)


def quotient_graph(g: MutationGraph, U: ThickSubcat) -> MutationGraph:
    """Mutation graph of the finest SODs of D/U, computed inside the perpendicular model."""
    if all(s.blocks[-1] != U for s in g.vertices):
        raise InvalidInputError(f"{U.name()} is not the last block of any vertex")
    quotient = perp(U, RIGHT)
    vertices = finest_sods(quotient)
    length = len(vertices[0]) if vertices else 0
    labels = [(i, f"rho_{i}") for i in range(1, length)]
    return _graph_from(vertices, _mutation_edges(vertices, lambda s, i: rho(s, i, RIGHT), labels))


def group_subgraph(g: MutationGraph, members: Sequence[int]) -> nx.MultiDiGraph:
    """Edges of g inside one reduction group."""
    keep = set(members)
    sub = nx.MultiDiGraph()
    sub.add_nodes_from(members)
    for u, v, data in g.graph.edges(data=True):
        if u in keep and v in keep:
            sub.add_edge(u, v, label=data["label"])
    return sub


def group_matches_quotient(g: MutationGraph, decomposition: ReductionDecomposition, U: ThickSubcat) -> bool:
    """Labelled isomorphism between a reduction group and the mutation graph of D/U."""
    sub = group_subgraph(g, decomposition.groups[U])
    quotient = quotient_graph(g, U)
    return nx.is_isomorphic(sub, quotient.graph, edge_match=categorical_multiedge_match("label", None))


@dataclass
class ComponentGraph:
    keys: List[Any]
    graph: nx.MultiDiGraph

    @property
    def vertices(self) -> List[Any]:
        return self.keys

    def labels(self) -> List[str]:
        return [k.name() for k in self.keys]

    def edges(self) -> List[Tuple[int, int, str]]:
        return sorted((u, v, data["label"]) for u, v, data in self.graph.edges(data=True))


def component_graph(g: MutationGraph, decomposition: Optional[ReductionDecomposition] = None) -> ComponentGraph:
    """Contract each reduction group to a vertex, keeping the labels of crossing edges."""
    decomposition = decomposition or reduction_decomposition(g)
    keys = list(decomposition.groups)
    position = {key: k for k, key in enumerate(keys)}
    owner = {idx: position[key] for key, members in decomposition.groups.items() for idx in members}
    crossing = sorted({(owner[u], owner[v], label) for u, v, label in g.edges() if owner[u] != owner[v]})
    graph = nx.MultiDiGraph()
    for k, key in enumerate(keys):
        graph.add_node(k, label=key.name())
    for u, v, label in crossing:
        graph.add_edge(u, v, label=label)
    return ComponentGraph(keys, graph)


@dataclass
class CriterionResult:
    holds: bool
    witness_chains: Dict[Tuple[Interval, Interval], Optional[Tuple[Interval, ...]]]


def _exceptional_members(S: ThickSubcat) -> frozenset:
    return frozenset(x for x in S.members if is_exceptional_interval(S.n, x))


def _linked(w: Interval, v: Interval, right: Dict, left: Dict) -> bool:
    return bool(right[w] & left[v]) or bool(right[v] & left[w])


def check_connectedness_criterion(q: QuiverSpec) -> CriterionResult:
    """
    For every ordered pair (U, V) of exceptional objects look for a chain
    U = W_1, ..., W_m = V whose neighbours W, W' share an exceptional object
    of W^perp and of perp^W' (in one of the two orders).
    """
    n = require_type_a(q, "check_connectedness_criterion")
    cap = get_max_criterion_rank()
    if n > cap:
        raise CapacityError(f"Connectedness criterion is checked up to n = {cap}, got n = {n}")
    objects = [x for x in all_indecomposables(n) if is_exceptional_interval(n, x)]
    right = {w: _exceptional_members(perp(ThickSubcat(n, frozenset([w])), "right")) for w in objects}
    left = {w: _exceptional_members(perp(ThickSubcat(n, frozenset([w])), "left")) for w in objects}

    chains: Dict[Tuple[Interval, Interval], Optional[Tuple[Interval, ...]]] = {}
    for u in objects:
        parent = {u: None}
        queue = deque([u])
        while queue:
            w = queue.popleft()
            for v in objects:
                if v not in parent and _linked(w, v, right, left):
                    parent[v] = w
                    queue.append(v)
        for v in objects:
            if v not in parent:
                chains[(u, v)] = None
                continue
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            chains[(u, v)] = tuple(reversed(path))
    holds = all(chain is not None for chain in chains.values())
    logger.info(f"A_{n}: connectedness criterion {'holds' if holds else 'fails'}")
    return CriterionResult(holds, chains)


def check_braid_relations(q: QuiverSpec) -> Dict[str, int]:
    """
    Check rho_i rho_{i+1} rho_i = rho_{i+1} rho_i rho_{i+1}, far commutation and
    chi L_i = rho_i chi on every finest SOD; returns the number of checks per relation.
    """
    n = require_type_a(q, "check_braid_relations")
    counts = {"braid": 0, "commute": 0, "chi": 0}
    for seq in enumerate_full_exceptional_sequences(q) if n >= 2 else []:
        s = chi(seq)
        for i in range(1, n):
            if chi(left_mutate(seq, i)) != rho(s, i, RIGHT):
                raise ConsistencyError(f"chi L_{i} != rho_{i} chi at {seq.name()}")
            counts["chi"] += 1
        for i in range(1, n - 1):
            lhs = rho(rho(rho(s, i), i + 1), i)
            rhs = rho(rho(rho(s, i + 1), i), i + 1)
            if lhs != rhs:
                raise ConsistencyError(f"Braid relation fails at index {i} on {s.name()}")
            counts["braid"] += 1
        for i in range(1, n):
            for j in range(i + 2, n):
                if rho(rho(s, i), j) != rho(rho(s, j), i):
                    raise ConsistencyError(f"rho_{i} and rho_{j} do not commute on {s.name()}")
                counts["commute"] += 1
    return counts


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(g, name: str = "mutation_graph") -> str:
    """DOT digraph with vertex labels in canonical order and edge labels."""
    lines = [f"digraph {name} {{"]
    for idx, label in enumerate(g.labels()):
        lines.append(f'  v{idx} [label="{_dot_escape(label)}"];')
    for u, v, label in g.edges():
        lines.append(f'  v{u} -> v{v} [label="{_dot_escape(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
