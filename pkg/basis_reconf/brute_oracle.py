# brute_oracle.py

import logging
from collections import deque
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from basis_reconf import config
from basis_reconf.errors import CapExceeded, NoBasisError
from basis_reconf.matroids import Bases, ElementId, MatroidSpec, check_feasible, sorted_elements
from basis_reconf.reconfig_engine import Move, ReconfigSequence

logger = logging.getLogger(__name__)

State = Tuple[Tuple[ElementId, ...], ...]


def canonical_state(bases: Sequence[FrozenSet[ElementId]]) -> State:
    """Sorted tuple of sorted element tuples; the hashing key of a state."""
    return tuple(tuple(sorted_elements(basis)) for basis in bases)


class BruteOracle:
    """
    Exhaustive reference implementations for desk-scale instances.
    Exceeding a cap is a refusal (CapExceeded), never a silent truncation.
    """

    def __init__(self, basis_cap: Optional[int] = None, state_cap: Optional[int] = None):
        self.basis_cap = basis_cap if basis_cap is not None else config.BASIS_ENUMERATION_CAP
        self.state_cap = state_cap if state_cap is not None else config.STATE_SPACE_CAP

    def enumerate_bases(self, spec: MatroidSpec) -> List[FrozenSet[ElementId]]:
        """All bases of `spec`, in sorted order."""
        ground = sorted_elements(spec.ground)
        if len(ground) > self.basis_cap:
            raise CapExceeded(f"ground set of {len(ground)} elements exceeds the basis cap {self.basis_cap}")
        try:
            size = spec.full_rank()
        except NoBasisError:
            return []
        # combinations of a sorted list come out in sorted order
        return [frozenset(subset) for subset in combinations(ground, size) if spec.is_basis(frozenset(subset))]

    def neighbours(self, matroids: Sequence[MatroidSpec], bases: Bases):
        """Yield (move, state) for every legal single exchange out of `bases`."""
        occupied = frozenset().union(*bases)
        for index, (spec, basis) in enumerate(zip(matroids, bases)):
            for x in sorted_elements(basis):
                for y in sorted_elements(spec.exchange_candidates(basis, x) - occupied):
                    updated = list(bases)
                    updated[index] = (basis - {x}) | {y}
                    yield Move(index, x, y), tuple(updated)

    def bfs_solve(self, matroids: Sequence[MatroidSpec], source,
                  target) -> Optional[Tuple[int, ReconfigSequence]]:
        """Shortest reconfiguration by breadth-first search; None if unreachable."""
        source = check_feasible(matroids, source, "source")
        target = check_feasible(matroids, target, "target")
        goal = canonical_state(target)
        start = canonical_state(source)
        if start == goal:
            return 0, ReconfigSequence()

        parent: Dict[State, Optional[Tuple[State, Move]]] = {start: None}
        queue = deque([source])
        while queue:
            bases = queue.popleft()
            key = canonical_state(bases)
            for move, state in self.neighbours(matroids, bases):
                state_key = canonical_state(state)
                if state_key in parent:
                    continue
                parent[state_key] = (key, move)
                if state_key == goal:
                    moves = self._unwind(parent, state_key)
                    logger.debug(f"BFS reached target after {len(parent)} states, distance {len(moves)}")
                    return len(moves), ReconfigSequence(tuple(moves))
                if len(parent) > self.state_cap:
                    raise CapExceeded(f"state space exceeds the cap of {self.state_cap} states")
                queue.append(state)
        logger.debug(f"BFS exhausted the component of the source: {len(parent)} states")
        return None

    @staticmethod
    def _unwind(parent, key: State) -> List[Move]:
        moves = []
        while parent[key] is not None:
            key, move = parent[key]
            moves.append(move)
        return moves[::-1]

    def component_size(self, matroids: Sequence[MatroidSpec], source) -> int:
        """Number of feasible sequences reachable from `source`."""
        source = check_feasible(matroids, source, "source")
        seen = {canonical_state(source)}
        queue = deque([source])
        while queue:
            for _, state in self.neighbours(matroids, queue.popleft()):
                state_key = canonical_state(state)
                if state_key not in seen:
                    seen.add(state_key)
                    if len(seen) > self.state_cap:
                        raise CapExceeded(f"state space exceeds the cap of {self.state_cap} states")
                    queue.append(state)
        return len(seen)

    def feasible_sequences(self, matroids: Sequence[MatroidSpec]) -> List[Bases]:
        """Every feasible basis sequence of `matroids`, in sorted order."""
        per_matroid = [self.enumerate_bases(spec) for spec in matroids]
        self._check_product(per_matroid)
        sequences = []
        for combo in product(*per_matroid):
            if sum(len(basis) for basis in combo) == len(frozenset().union(*combo)):
                sequences.append(tuple(combo))
        return sequences

    def brute_coloops(self, matroids: Sequence[MatroidSpec], bases) -> FrozenSet[ElementId]:
        """
        Intersection of all bases of the matroid union, with union bases
        enumerated directly as maximum-size unions B_1 ∪ ... ∪ B_k.
        """
        check_feasible(matroids, bases, "bases")
        per_matroid = [self.enumerate_bases(spec) for spec in matroids]
        self._check_product(per_matroid)
        best = -1
        common: FrozenSet[ElementId] = frozenset()
        for combo in product(*per_matroid):
            union = frozenset().union(*combo)
            if len(union) > best:
                best, common = len(union), union
            elif len(union) == best:
                common = common & union
        return common

    def _check_product(self, per_matroid: List[List[FrozenSet[ElementId]]]) -> None:
        total = 1
        for bases in per_matroid:
            total *= max(len(bases), 1)
            if total > self.state_cap:
                raise CapExceeded(f"more than {self.state_cap} basis combinations to enumerate")


_default_oracle = BruteOracle()


def enumerate_bases(spec: MatroidSpec) -> List[FrozenSet[ElementId]]:
    return _default_oracle.enumerate_bases(spec)


def bfs_solve(matroids: Sequence[MatroidSpec], source, target) -> Optional[Tuple[int, ReconfigSequence]]:
    return _default_oracle.bfs_solve(matroids, source, target)


def brute_coloops(matroids: Sequence[MatroidSpec], bases) -> FrozenSet[ElementId]:
    return _default_oracle.brute_coloops(matroids, bases)
