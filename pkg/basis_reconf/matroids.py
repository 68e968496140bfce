# matroids.py

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Sequence, Tuple, Union

from networkx.utils import UnionFind

from basis_reconf.errors import InputError, NoBasisError

logger = logging.getLogger(__name__)

ElementId = Union[int, str]
Bases = Tuple[FrozenSet[ElementId], ...]


def element_key(element: ElementId) -> Tuple[bool, ElementId]:
    """Total order on labels: integers first (numerically), then strings."""
    return isinstance(element, str), element


def sorted_elements(elements: Iterable[ElementId]) -> List[ElementId]:
    return sorted(elements, key=element_key)


class MatroidSpec(ABC):
    """
    Declarative matroid answering basis queries.

    Subclasses are immutable; every method is a pure function of the spec
    and its arguments. Sets passed in are assumed to lie inside `ground`;
    the module-level wrappers below do that check.
    """

    kind = "abstract"

    @property
    @abstractmethod
    def ground(self) -> FrozenSet[ElementId]:
        ...

    @abstractmethod
    def full_rank(self) -> int:
        ...

    @abstractmethod
    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        ...

    @abstractmethod
    def canonical_basis(self) -> FrozenSet[ElementId]:
        ...

    def exchange_candidates(self, basis: FrozenSet[ElementId], x: ElementId) -> FrozenSet[ElementId]:
        """All y outside `basis` with basis - x + y a basis, by oracle probes."""
        rest = basis - {x}
        return frozenset(y for y in self.ground - basis if self.is_basis(rest | {y}))

    def is_exchange(self, basis: FrozenSet[ElementId], x: ElementId, y: ElementId) -> bool:
        """Whether basis - x + y is a basis, given that `basis` is one."""
        if x not in basis or y in basis or y not in self.ground:
            return False
        return self.is_basis((basis - {x}) | {y})


@dataclass(frozen=True)
class UniformMatroid(MatroidSpec):
    elements: FrozenSet[ElementId]
    rank: int

    kind = "uniform"

    def __post_init__(self):
        object.__setattr__(self, 'elements', frozenset(self.elements))
        if not 0 <= self.rank <= len(self.elements):
            raise InputError(f"uniform rank {self.rank} outside [0, {len(self.elements)}]")

    @property
    def ground(self) -> FrozenSet[ElementId]:
        return self.elements

    def full_rank(self) -> int:
        return self.rank

    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        return len(subset) == self.rank

    def canonical_basis(self) -> FrozenSet[ElementId]:
        return frozenset(sorted_elements(self.elements)[:self.rank])

    def exchange_candidates(self, basis, x):
        return self.elements - basis

    def is_exchange(self, basis, x, y):
        return x in basis and y in self.elements and y not in basis


class Block(NamedTuple):
    elements: FrozenSet[ElementId]
    rank: int


@dataclass(frozen=True)
class PartitionMatroid(MatroidSpec):
    blocks: Tuple[Block, ...]

    kind = "partition"

    def __post_init__(self):
        blocks = tuple(Block(frozenset(elements), rank) for elements, rank in self.blocks)
        object.__setattr__(self, 'blocks', blocks)
        seen = set()
        for index, block in enumerate(blocks):
            if not 0 <= block.rank <= len(block.elements):
                raise InputError(f"partition block {index} rank {block.rank} outside [0, {len(block.elements)}]",
                                 index=index)
            shared = seen & block.elements
            if shared:
                raise InputError(f"partition block {index} repeats elements {sorted_elements(shared)}",
                                 index=index)
            seen |= block.elements

    @cached_property
    def _block_of(self) -> Dict[ElementId, int]:
        return {element: index for index, block in enumerate(self.blocks) for element in block.elements}

    @cached_property
    def _ground(self) -> FrozenSet[ElementId]:
        return frozenset(self._block_of)

    @property
    def ground(self) -> FrozenSet[ElementId]:
        return self._ground

    def full_rank(self) -> int:
        return sum(block.rank for block in self.blocks)

    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        if len(subset) != self.full_rank():
            return False
        counts = [0] * len(self.blocks)
        for element in subset:
            counts[self._block_of[element]] += 1
        return all(count == block.rank for count, block in zip(counts, self.blocks))

    def canonical_basis(self) -> FrozenSet[ElementId]:
        basis = set()
        for block in self.blocks:
            basis.update(sorted_elements(block.elements)[:block.rank])
        return frozenset(basis)

    def block_of(self, element: ElementId) -> int:
        return self._block_of[element]

    def exchange_candidates(self, basis, x):
        return self.blocks[self._block_of[x]].elements - basis

    def is_exchange(self, basis, x, y):
        if x not in basis or y in basis or y not in self._block_of:
            return False
        return self._block_of[x] == self._block_of[y]


class Edge(NamedTuple):
    u: int
    v: int
    label: ElementId


@dataclass(frozen=True)
class GraphicMatroid(MatroidSpec):
    """Cycle matroid of a multigraph; bases are spanning trees, self-loops never qualify."""

    vertex_count: int
    edges: Tuple[Edge, ...]

    kind = "graphic"

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InputError(f"graphic vertex count {self.vertex_count} is negative")
        edges = tuple(Edge(u, v, label) for u, v, label in self.edges)
        object.__setattr__(self, 'edges', edges)
        labels = set()
        for edge in edges:
            if not (0 <= edge.u < self.vertex_count and 0 <= edge.v < self.vertex_count):
                raise InputError(f"edge {edge.label!r} has endpoint outside [0, {self.vertex_count})")
            if edge.label in labels:
                raise InputError(f"edge label {edge.label!r} used twice")
            labels.add(edge.label)

    @cached_property
    def _edge_of(self) -> Dict[ElementId, Edge]:
        return {edge.label: edge for edge in self.edges}

    @cached_property
    def _ground(self) -> FrozenSet[ElementId]:
        return frozenset(self._edge_of)

    @property
    def ground(self) -> FrozenSet[ElementId]:
        return self._ground

    def _forest(self, labels: Iterable[ElementId]) -> UnionFind:
        forest = UnionFind(range(self.vertex_count))
        for label in labels:
            edge = self._edge_of[label]
            forest.union(edge.u, edge.v)
        return forest

    def full_rank(self) -> int:
        tree = self.canonical_basis()
        return len(tree)

    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        if len(subset) != max(self.vertex_count - 1, 0):
            return False
        forest = UnionFind(range(self.vertex_count))
        for label in subset:
            edge = self._edge_of[label]
            if forest[edge.u] == forest[edge.v]:
                return False  # cycle, or a self-loop
            forest.union(edge.u, edge.v)
        return True

    def canonical_basis(self) -> FrozenSet[ElementId]:
        """Greedy spanning tree over label-sorted edges (the lexicographically least basis)."""
        forest = UnionFind(range(self.vertex_count))
        tree = []
        for label in sorted_elements(self._edge_of):
            edge = self._edge_of[label]
            if forest[edge.u] != forest[edge.v]:
                forest.union(edge.u, edge.v)
                tree.append(label)
        if len(tree) < self.vertex_count - 1:
            raise NoBasisError(f"graph on {self.vertex_count} vertices is disconnected; no spanning tree")
        return frozenset(tree)

    def _reconnects(self, forest: UnionFind, label: ElementId) -> bool:
        edge = self._edge_of[label]
        return forest[edge.u] != forest[edge.v]

    def exchange_candidates(self, basis, x):
        forest = self._forest(basis - {x})
        return frozenset(y for y in self._ground - basis if self._reconnects(forest, y))

    def is_exchange(self, basis, x, y):
        if x not in basis or y in basis or y not in self._edge_of:
            return False
        return self._reconnects(self._forest(basis - {x}), y)


@dataclass(frozen=True)
class DualMatroid(MatroidSpec):
    inner: MatroidSpec

    kind = "dual"

    @property
    def ground(self) -> FrozenSet[ElementId]:
        return self.inner.ground

    def full_rank(self) -> int:
        return len(self.inner.ground) - self.inner.full_rank()

    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        return self.inner.is_basis(self.inner.ground - subset)

    def canonical_basis(self) -> FrozenSet[ElementId]:
        return self.inner.ground - self.inner.canonical_basis()

    def exchange_candidates(self, basis, x):
        # B - x + y is a dual basis iff (E - B) - y + x is a basis of the inner matroid
        complement = self.inner.ground - basis
        return frozenset(y for y in complement if self.inner.is_exchange(complement, y, x))

    def is_exchange(self, basis, x, y):
        if x not in basis or y in basis or y not in self.inner.ground:
            return False
        return self.inner.is_exchange(self.inner.ground - basis, y, x)


@dataclass(frozen=True)
class DirectSum(MatroidSpec):
    parts: Tuple[MatroidSpec, ...]

    kind = "direct_sum"

    def __post_init__(self):
        object.__setattr__(self, 'parts', tuple(self.parts))
        seen = set()
        for index, part in enumerate(self.parts):
            shared = seen & part.ground
            if shared:
                raise InputError(f"direct-sum part {index} overlaps earlier parts on {sorted_elements(shared)}",
                                 index=index)
            seen |= part.ground

    @cached_property
    def _part_of(self) -> Dict[ElementId, int]:
        return {element: index for index, part in enumerate(self.parts) for element in part.ground}

    @cached_property
    def _ground(self) -> FrozenSet[ElementId]:
        return frozenset(self._part_of)

    @property
    def ground(self) -> FrozenSet[ElementId]:
        return self._ground

    def full_rank(self) -> int:
        return sum(part.full_rank() for part in self.parts)

    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        return all(part.is_basis(subset & part.ground) for part in self.parts)

    def canonical_basis(self) -> FrozenSet[ElementId]:
        return frozenset().union(*(part.canonical_basis() for part in self.parts))

    def exchange_candidates(self, basis, x):
        part = self.parts[self._part_of[x]]
        return part.exchange_candidates(basis & part.ground, x)

    def is_exchange(self, basis, x, y):
        if x not in basis or y in basis or y not in self._part_of:
            return False
        if self._part_of[x] != self._part_of[y]:
            return False
        part = self.parts[self._part_of[x]]
        return part.is_exchange(basis & part.ground, x, y)


@dataclass(frozen=True)
class OracleMatroid(MatroidSpec):
    """Black-box basis oracle; ground set and rank must be declared."""

    elements: FrozenSet[ElementId]
    rank: int
    query: Callable[[FrozenSet[ElementId]], bool] = field(compare=False)

    kind = "oracle"

    def __post_init__(self):
        object.__setattr__(self, 'elements', frozenset(self.elements))
        if not 0 <= self.rank <= len(self.elements):
            raise InputError(f"oracle rank {self.rank} outside [0, {len(self.elements)}]")

    @property
    def ground(self) -> FrozenSet[ElementId]:
        return self.elements

    def full_rank(self) -> int:
        return self.rank

    def is_basis(self, subset: FrozenSet[ElementId]) -> bool:
        return len(subset) == self.rank and bool(self.query(frozenset(subset)))

    def canonical_basis(self) -> FrozenSet[ElementId]:
        raise NoBasisError("oracle matroids carry no basis of their own; supply one with the instance")


# ==================== CHECKED ENTRY POINTS ====================

def _as_subset(spec: MatroidSpec, elements: Iterable[ElementId]) -> FrozenSet[ElementId]:
    subset = frozenset(elements)
    outside = subset - spec.ground
    if outside:
        raise InputError(f"elements {sorted_elements(outside)} are not in the {spec.kind} ground set")
    return subset


def is_basis(spec: MatroidSpec, elements: Iterable[ElementId]) -> bool:
    return spec.is_basis(_as_subset(spec, elements))


def canonical_basis(spec: MatroidSpec) -> FrozenSet[ElementId]:
    return spec.canonical_basis()


def rank(spec: MatroidSpec) -> int:
    return spec.full_rank()


def exchange_candidates(spec: MatroidSpec, basis: Iterable[ElementId], x: ElementId) -> FrozenSet[ElementId]:
    basis = _as_subset(spec, basis)
    if x not in basis:
        raise InputError(f"{x!r} is not in the basis")
    return spec.exchange_candidates(basis, x)


def check_feasible(matroids: Sequence[MatroidSpec], bases: Sequence[Iterable[ElementId]],
                   label: str = "bases") -> Bases:
    """
    Validate a basis sequence against its matroids.

    Returns the sequence as a tuple of frozensets; raises InputError naming the
    violated invariant (wrong length, foreign element, non-basis or overlap).
    """
    if len(bases) != len(matroids):
        raise InputError(f"{label} has {len(bases)} bases for {len(matroids)} matroids")
    normalized = []
    owner: Dict[ElementId, int] = {}
    for index, (spec, raw) in enumerate(zip(matroids, bases)):
        raw = list(raw)
        basis = frozenset(raw)
        if len(basis) != len(raw):
            raise InputError(f"{label} basis {index} lists an element twice", index=index)
        outside = basis - spec.ground
        if outside:
            raise InputError(f"{label} basis {index} uses elements {sorted_elements(outside)} "
                             f"outside the ground set of matroid {index}", index=index)
        if not spec.is_basis(basis):
            raise InputError(f"{label} basis {index} is not a basis of matroid {index}", index=index)
        for element in sorted_elements(basis):
            if element in owner:
                raise InputError(f"{label} bases {owner[element]} and {index} share element {element!r}",
                                 index=index)
            owner[element] = index
        normalized.append(basis)
    return tuple(normalized)


def union_ground(matroids: Sequence[MatroidSpec]) -> FrozenSet[ElementId]:
    return frozenset().union(*(spec.ground for spec in matroids))
