# random_instances.py

import logging
from typing import FrozenSet, List, Optional, Sequence

import numpy as np
from networkx.utils import UnionFind

from basis_reconf import config
from basis_reconf.brute_oracle import BruteOracle
from basis_reconf.errors import CapExceeded, GenerationError, InputError, InvariantViolation
from basis_reconf.instance_io import ProblemInstance
from basis_reconf.matroids import (
    Bases, Block, DirectSum, DualMatroid, Edge, ElementId, GraphicMatroid, MatroidSpec, PartitionMatroid,
    UniformMatroid, sorted_elements,
)
from basis_reconf.reconfig_engine import Move, verify

logger = logging.getLogger(__name__)

PROFILES = ('uniform', 'partition', 'graphic', 'mixed')
MIXED_KINDS = ('uniform', 'partition', 'graphic', 'dual', 'direct_sum')


def element_labels(size: int) -> List[str]:
    width = len(str(max(size - 1, 0)))
    return [f"x{index:0{width}d}" for index in range(size)]


class InstanceGenerator:
    """
    Seeded generator of feasible problem instances.

    Every random choice goes through one numpy Generator and is made over
    sorted candidate lists, so the same seed always yields the same instance.
    """

    def __init__(self, seed: int, retry_budget: Optional[int] = None, walk_factor: Optional[int] = None):
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.retry_budget = retry_budget if retry_budget is not None else config.RANDOM_RETRY_BUDGET
        self.walk_factor = walk_factor if walk_factor is not None else config.RANDOM_WALK_FACTOR
        self._oracle = BruteOracle()

    # ==================== SMALL HELPERS ====================

    def _int(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]."""
        return int(self.rng.integers(low, high + 1))

    def _pick(self, items: Sequence, count: int) -> List:
        if count == 0:
            return []
        chosen = self.rng.choice(len(items), size=count, replace=False)
        return [items[i] for i in sorted(int(i) for i in chosen)]

    def _shuffled(self, items: Sequence) -> List:
        return [items[int(i)] for i in self.rng.permutation(len(items))]

    # ==================== MATROIDS ====================

    def uniform(self, ground: List[ElementId], rank: int) -> UniformMatroid:
        return UniformMatroid(frozenset(ground), rank)

    def partition(self, ground: List[ElementId], k: int) -> PartitionMatroid:
        shuffled = self._shuffled(ground)
        count = self._int(1, max(1, min(len(ground), len(ground) // 3)))
        cuts = sorted(self._pick(list(range(1, len(ground))), count - 1))
        bounds = [0] + cuts + [len(ground)]
        blocks = []
        for start, stop in zip(bounds, bounds[1:]):
            members = shuffled[start:stop]
            blocks.append(Block(frozenset(members), self._int(0, max(1, len(members) // k))))
        if all(block.rank == 0 for block in blocks):
            blocks[0] = Block(blocks[0].elements, 1)
        return PartitionMatroid(tuple(blocks))

    def graphic(self, ground: List[ElementId], rank: int) -> GraphicMatroid:
        """Connected multigraph on rank + 1 vertices: a random spanning tree plus random extra edges."""
        shuffled = self._shuffled(ground)
        vertices = rank + 1
        edges = []
        for vertex in range(1, vertices):
            edges.append(Edge(self._int(0, vertex - 1), vertex, shuffled[vertex - 1]))
        for label in shuffled[rank:]:
            edges.append(Edge(self._int(0, rank), self._int(0, rank), label))
        return GraphicMatroid(vertices, tuple(edges))

    def _rank(self, ground: List[ElementId], k: int) -> int:
        return self._int(1, max(1, len(ground) // k))

    def matroid(self, kind: str, ground: List[ElementId], k: int) -> MatroidSpec:
        if kind == 'uniform':
            return self.uniform(ground, self._rank(ground, k))
        if kind == 'partition':
            return self.partition(ground, k)
        if kind == 'graphic':
            return self.graphic(ground, self._rank(ground, k))
        if kind == 'dual':
            # inner rank chosen so that the dual has a small rank
            inner_rank = len(ground) - self._rank(ground, k)
            inner_kind = ('uniform', 'graphic')[self._int(0, 1)]
            return DualMatroid(self.matroid_of_rank(inner_kind, ground, inner_rank))
        if kind == 'direct_sum':
            if len(ground) < 2:
                return self.uniform(ground, 1)
            shuffled = self._shuffled(ground)
            cut = self._int(1, len(ground) - 1)
            halves = [sorted_elements(shuffled[:cut]), sorted_elements(shuffled[cut:])]
            parts = [self.matroid(('uniform', 'graphic')[self._int(0, 1)], half, 2 * k) for half in halves]
            return DirectSum(tuple(parts))
        raise InputError(f"unknown matroid kind {kind!r}")

    def matroid_of_rank(self, kind: str, ground: List[ElementId], rank: int) -> MatroidSpec:
        if kind == 'graphic':
            return self.graphic(ground, rank)
        return self.uniform(ground, rank)

    def _ground(self, labels: List[str], k: int) -> List[str]:
        if k == 1:
            return list(labels)
        return self._pick(labels, self._int(max(1, (len(labels) + 1) // 2), len(labels)))

    def matroids(self, k: int, profile: str, labels: List[str]) -> List[MatroidSpec]:
        specs = []
        for _ in range(k):
            kind = profile if profile != 'mixed' else MIXED_KINDS[self._int(0, len(MIXED_KINDS) - 1)]
            specs.append(self.matroid(kind, self._ground(labels, k), k))
        return specs

    # ==================== BASES ====================

    def random_basis(self, spec: MatroidSpec, forbidden: FrozenSet[ElementId]) -> Optional[FrozenSet[ElementId]]:
        """A random basis of `spec` avoiding `forbidden`, or None if none was found."""
        if isinstance(spec, UniformMatroid):
            allowed = sorted_elements(spec.elements - forbidden)
            return frozenset(self._pick(allowed, spec.rank)) if len(allowed) >= spec.rank else None
        if isinstance(spec, PartitionMatroid):
            basis = set()
            for block in spec.blocks:
                allowed = sorted_elements(block.elements - forbidden)
                if len(allowed) < block.rank:
                    return None
                basis.update(self._pick(allowed, block.rank))
            return frozenset(basis)
        if isinstance(spec, GraphicMatroid):
            # randomised Kruskal over the allowed edges
            forest = UnionFind(range(spec.vertex_count))
            tree = []
            for edge in self._shuffled([e for e in spec.edges if e.label not in forbidden]):
                if forest[edge.u] != forest[edge.v]:
                    forest.union(edge.u, edge.v)
                    tree.append(edge.label)
            return frozenset(tree) if len(tree) == max(spec.vertex_count - 1, 0) else None
        if isinstance(spec, DirectSum):
            basis = set()
            for part in spec.parts:
                piece = self.random_basis(part, forbidden)
                if piece is None:
                    return None
                basis |= piece
            return frozenset(basis)
        try:
            bases = [b for b in self._oracle.enumerate_bases(spec) if not b & forbidden]
        except CapExceeded:
            logger.debug(f"Ground set too large to enumerate {spec.kind} bases")
            return None
        return bases[self._int(0, len(bases) - 1)] if bases else None

    def disjoint_bases(self, matroids: Sequence[MatroidSpec]) -> Optional[Bases]:
        """Greedy: give each matroid, in random order, a random basis avoiding what is taken."""
        taken: FrozenSet[ElementId] = frozenset()
        bases: List[Optional[FrozenSet[ElementId]]] = [None] * len(matroids)
        for index in self.rng.permutation(len(matroids)):
            basis = self.random_basis(matroids[int(index)], taken)
            if basis is None:
                return None
            bases[int(index)] = basis
            taken |= basis
        return tuple(bases)

    def random_walk(self, matroids: Sequence[MatroidSpec], source: Bases, steps: int) -> Bases:
        """Apply up to `steps` random legal exchanges; the walk is re-verified before returning."""
        bases = list(source)
        occupied = set(frozenset().union(*source))
        moves = []
        for _ in range(steps):
            index = self._int(0, len(matroids) - 1)
            basis = bases[index]
            if not basis:
                continue
            x = sorted_elements(basis)[self._int(0, len(basis) - 1)]
            candidates = sorted_elements(matroids[index].exchange_candidates(basis, x) - occupied)
            if not candidates:
                continue
            y = candidates[self._int(0, len(candidates) - 1)]
            bases[index] = (basis - {x}) | {y}
            occupied.discard(x)
            occupied.add(y)
            moves.append(Move(index, x, y))
        target = tuple(bases)
        report = verify(matroids, source, target, moves)
        if not report.ok:
            raise InvariantViolation(f"random walk failed verification at step {report.failed_step}: {report.reason}")
        return target

    # ==================== INSTANCES ====================

    def generate(self, k: int, profile: str, size: int, yes_by_walk: bool = True) -> ProblemInstance:
        if profile not in PROFILES:
            raise InputError(f"unknown profile {profile!r}; expected one of {', '.join(PROFILES)}")
        if k < 1 or size < 1:
            raise InputError(f"need k >= 1 and size >= 1, got k={k}, size={size}")
        if k > size:
            raise GenerationError(f"{k} disjoint bases of rank >= 1 cannot fit in {size} elements")

        labels = element_labels(size)
        for attempt in range(1, self.retry_budget + 1):
            matroids = self.matroids(k, profile, labels)
            if sum(spec.full_rank() for spec in matroids) > size:
                continue
            source = self.disjoint_bases(matroids)
            if source is None:
                continue
            if yes_by_walk:
                target = self.random_walk(matroids, source, self.walk_factor * size)
            else:
                target = self.disjoint_bases(matroids)
                if target is None:
                    continue
            logger.debug(f"Instance seed={self.seed} profile={profile} k={k} size={size} after {attempt} attempt(s)")
            return ProblemInstance.validated(matroids, source, target)

        raise GenerationError(f"no feasible basis sequence found in {self.retry_budget} attempts "
                              f"(seed={self.seed}, profile={profile}, k={k}, size={size})")


def random_instance(seed: int, k: int, profile: str, size: int, yes_by_walk: bool = True) -> ProblemInstance:
    return InstanceGenerator(seed).generate(k, profile, size, yes_by_walk)
