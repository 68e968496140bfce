# exchange_graph.py

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from basis_reconf import config
from basis_reconf.errors import InputError
from basis_reconf.matroids import (
    Bases, ElementId, MatroidSpec, check_feasible, element_key, sorted_elements, union_ground,
)

logger = logging.getLogger(__name__)

# DOT colours cycle by matroid index
ARC_COLOURS = ('red', 'blue', 'darkgreen', 'orange', 'purple', 'brown', 'magenta', 'cyan')


class ExchangeArc(NamedTuple):
    tail: ElementId
    head: ElementId
    matroid_index: int


def arc_key(arc: ExchangeArc) -> Tuple:
    return arc.matroid_index, element_key(arc.tail), element_key(arc.head)


@dataclass(frozen=True)
class UnionExchangeGraph:
    """
    Union of the exchangeability graphs D(M_i, B_i) for a feasible sequence.

    Immutable once built. The arcs live in a networkx MultiDiGraph keyed by
    matroid index; a per-index set of (tail, head) pairs answers
    "is (x, y) an arc of A_i" in constant time.
    """

    vertices: FrozenSet[ElementId]
    arcs: Tuple[ExchangeArc, ...]
    snapshot: Bases
    digraph: nx.MultiDiGraph = field(repr=False, compare=False)
    _pairs: Tuple[FrozenSet[Tuple[ElementId, ElementId]], ...] = field(repr=False, compare=False)

    @classmethod
    def from_arcs(cls, vertices: Iterable[ElementId], arcs: Iterable[ExchangeArc],
                  snapshot: Bases) -> 'UnionExchangeGraph':
        vertices = frozenset(vertices)
        arcs = tuple(sorted(set(arcs), key=arc_key))
        pairs: List[Set[Tuple[ElementId, ElementId]]] = [set() for _ in snapshot]
        digraph = nx.MultiDiGraph()
        digraph.add_nodes_from(sorted_elements(vertices))
        for arc in arcs:
            pairs[arc.matroid_index].add((arc.tail, arc.head))
            digraph.add_edge(arc.tail, arc.head, key=arc.matroid_index)
        return cls(
            vertices=vertices,
            arcs=arcs,
            snapshot=tuple(snapshot),
            digraph=digraph,
            _pairs=tuple(frozenset(p) for p in pairs),
        )

    @property
    def k(self) -> int:
        return len(self.snapshot)

    def has_arc(self, matroid_index: int, tail: ElementId, head: ElementId) -> bool:
        return (tail, head) in self._pairs[matroid_index]

    def out_arcs(self, vertex: ElementId) -> Tuple[ExchangeArc, ...]:
        if vertex not in self.digraph:
            return ()
        found = (ExchangeArc(u, v, key) for u, v, key in self.digraph.out_edges(vertex, keys=True))
        return tuple(sorted(found, key=arc_key))

    def in_arcs(self, vertex: ElementId) -> Tuple[ExchangeArc, ...]:
        if vertex not in self.digraph:
            return ()
        found = (ExchangeArc(u, v, key) for u, v, key in self.digraph.in_edges(vertex, keys=True))
        return tuple(sorted(found, key=arc_key))

    def arcs_of(self, matroid_index: int) -> List[ExchangeArc]:
        return [arc for arc in self.arcs if arc.matroid_index == matroid_index]

    @property
    def occupied(self) -> FrozenSet[ElementId]:
        return frozenset().union(*self.snapshot)

    @property
    def free(self) -> FrozenSet[ElementId]:
        """Vertices in no basis of the snapshot."""
        return self.vertices - self.occupied

    def owner(self, element: ElementId) -> Optional[int]:
        for index, basis in enumerate(self.snapshot):
            if element in basis:
                return index
        return None


def build_single(spec: MatroidSpec, basis: Iterable[ElementId], matroid_index: int = 0) -> List[ExchangeArc]:
    """All arcs (x, y) with x in B, y in E - B and B - x + y a basis; bipartite from B to E - B."""
    basis = frozenset(basis)
    if not basis <= spec.ground or not spec.is_basis(basis):
        raise InputError(f"exchange graph requested for a non-basis of matroid {matroid_index}",
                         index=matroid_index)
    arcs = []
    for x in sorted_elements(basis):
        for y in sorted_elements(spec.exchange_candidates(basis, x)):
            arcs.append(ExchangeArc(x, y, matroid_index))
    return arcs


def build_union(matroids: Sequence[MatroidSpec], bases: Sequence[Iterable[ElementId]],
                parallel: Optional[bool] = None) -> UnionExchangeGraph:
    """
    Build D(M, B) as the union of the per-matroid exchangeability graphs.

    With `parallel` (default from config) each matroid is probed on its own
    worker thread; arcs are sorted afterwards so the result is identical to
    sequential construction.
    """
    bases = check_feasible(matroids, bases)
    parallel = config.ENABLE_PARALLEL_PROBES if parallel is None else parallel

    if parallel and len(matroids) > 1:
        with ThreadPoolExecutor(max_workers=config.MAX_PROBE_WORKERS) as executor:
            futures = [executor.submit(build_single, spec, basis, index)
                       for index, (spec, basis) in enumerate(zip(matroids, bases))]
            per_matroid = [future.result() for future in futures]
    else:
        per_matroid = [build_single(spec, basis, index)
                       for index, (spec, basis) in enumerate(zip(matroids, bases))]

    arcs = [arc for chunk in per_matroid for arc in chunk]
    graph = UnionExchangeGraph.from_arcs(union_ground(matroids), arcs, bases)
    logger.debug(f"Union exchange graph: {len(graph.vertices)} vertices, {len(graph.arcs)} arcs, k={len(bases)}")
    return graph


def distances_to(graph: UnionExchangeGraph, targets: Iterable[ElementId]) -> Dict[ElementId, int]:
    """Shortest arc count from each vertex to the nearest target; vertices that cannot reach one are absent."""
    targets = frozenset(targets)
    outside = targets - graph.vertices
    if outside:
        raise InputError(f"targets {sorted_elements(outside)} are not vertices of the graph")
    if not targets:
        return {}
    reverse = graph.digraph.reverse(copy=False)
    return dict(nx.multi_source_dijkstra_path_length(reverse, sorted_elements(targets)))


def coreachable(graph: UnionExchangeGraph, targets: Iterable[ElementId]) -> FrozenSet[ElementId]:
    """Vertices with a directed path to some target (targets included)."""
    return frozenset(distances_to(graph, targets))


def coloops_of_graph(graph: UnionExchangeGraph) -> FrozenSet[ElementId]:
    """Coloops of the matroid union: occupied elements that cannot reach a free one."""
    return graph.occupied - coreachable(graph, graph.free)


def coloops(matroids: Sequence[MatroidSpec], bases: Sequence[Iterable[ElementId]]) -> FrozenSet[ElementId]:
    return coloops_of_graph(build_union(matroids, bases))


def to_dot(graph: UnionExchangeGraph, name: str = "exchange") -> str:
    """Render the graph as DOT; arcs coloured by matroid index, free vertices dashed."""
    lines = [f'digraph "{name}" {{']
    free = graph.free
    for vertex in sorted_elements(graph.vertices):
        owner = graph.owner(vertex)
        if vertex in free:
            attrs = 'style=dashed'
        else:
            attrs = f'color={ARC_COLOURS[owner % len(ARC_COLOURS)]}, xlabel="B{owner}"'
        lines.append(f'  "{vertex}" [{attrs}];')
    for arc in graph.arcs:
        colour = ARC_COLOURS[arc.matroid_index % len(ARC_COLOURS)]
        lines.append(f'  "{arc.tail}" -> "{arc.head}" [color={colour}, label="{arc.matroid_index}"];')
    lines.append('}')
    return "\n".join(lines) + "\n"
