# reconfig_engine.py

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from basis_reconf.errors import ContractError, InputError, InvariantViolation
from basis_reconf.exchange_graph import ExchangeArc, UnionExchangeGraph, build_union, coloops_of_graph, distances_to
from basis_reconf.matroids import Bases, ElementId, MatroidSpec, check_feasible, element_key, sorted_elements

logger = logging.getLogger(__name__)


class Move(NamedTuple):
    matroid_index: int
    remove: ElementId
    add: ElementId


@dataclass(frozen=True)
class ReconfigSequence:
    moves: Tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'moves', tuple(Move(*move) for move in self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __getitem__(self, index):
        return self.moves[index]

    def states(self, source: Bases) -> List[Bases]:
        """Every state of the sequence, source first. No legality checks."""
        states = [tuple(source)]
        for move in self.moves:
            states.append(apply_move(states[-1], move))
        return states


@dataclass(frozen=True)
class TadpoleWalk:
    """
    A directed cycle C (possibly empty) followed by a directed path P ending
    at a free element. Vertices are x_0 .. x_n with x_m = x_0 closing the cycle.
    """

    cycle: Tuple[ExchangeArc, ...]
    path: Tuple[ExchangeArc, ...]

    def __post_init__(self):
        object.__setattr__(self, 'cycle', tuple(self.cycle))
        object.__setattr__(self, 'path', tuple(self.path))

    @property
    def arcs(self) -> Tuple[ExchangeArc, ...]:
        return self.cycle + self.path

    @property
    def m(self) -> int:
        return len(self.cycle)

    @property
    def n(self) -> int:
        return len(self.cycle) + len(self.path)

    @property
    def is_type_one(self) -> bool:
        return not self.cycle

    @property
    def root(self) -> ElementId:
        return self.arcs[0].tail

    @property
    def end(self) -> ElementId:
        return self.path[-1].head

    @property
    def vertices(self) -> List[ElementId]:
        arcs = self.arcs
        return [arc.tail for arc in arcs] + [arcs[-1].head]

    def tail_order(self) -> Dict[ElementId, int]:
        """Walk order of the vertices, x_0 = x_m first."""
        order: Dict[ElementId, int] = {}
        for vertex in self.vertices:
            order.setdefault(vertex, len(order))
        return order

    def validate(self, graph: Optional[UnionExchangeGraph] = None) -> None:
        """Raise ContractError unless this is a well-formed tadpole-walk (over `graph`, if given)."""
        if not self.path:
            raise ContractError("tadpole-walk needs a nonempty path")
        arcs = self.arcs
        for before, after in zip(arcs, arcs[1:]):
            if before.head != after.tail:
                raise ContractError(f"arc {before} does not continue into {after}")
            if before.matroid_index == after.matroid_index:
                raise ContractError(f"consecutive arcs {before} and {after} share matroid {after.matroid_index}")
        if self.cycle and self.cycle[-1].head != self.cycle[0].tail:
            raise ContractError("cycle part does not close at its first vertex")
        vertices = self.vertices
        expected_repeats = 1 if self.cycle else 0
        if len(set(vertices)) != len(vertices) - expected_repeats:
            raise ContractError("walk repeats a vertex other than the cycle root")
        if graph is not None:
            for arc in arcs:
                if not graph.has_arc(arc.matroid_index, arc.tail, arc.head):
                    raise ContractError(f"{arc} is not an arc of the exchange graph")
            if self.end not in graph.free:
                raise ContractError(f"walk ends at {self.end!r}, which is not free")

    def prefix_subgraphs(self) -> List[FrozenSet[ExchangeArc]]:
        """
        Arc sets W_1 .. W_last such that applying the first p moves of
        `walk_moves` yields B △ W_p. The last one is W (type I) or C (type II).
        """
        arcs, m, n = self.arcs, self.m, self.n
        if not self.cycle:
            return [frozenset(arcs[n - p:]) for p in range(1, n + 1)]
        subgraphs = [frozenset(arcs[n - p:]) for p in range(1, n)]
        cycle = frozenset(self.cycle)
        for p in range(n, 2 * n - m):
            subgraphs.append(cycle | frozenset(arcs[m - n + 1 + p:]))
        return subgraphs


class WalkStep(NamedTuple):
    walk: TadpoleWalk
    moves: Tuple[Move, ...]
    distance_before: int
    distance_after: int


@dataclass(frozen=True)
class ColoopCertificate:
    """Coloops of the matroid union with their placement in source and target."""

    coloops: FrozenSet[ElementId]
    source_partition: Tuple[FrozenSet[ElementId], ...]
    target_partition: Tuple[FrozenSet[ElementId], ...]

    @property
    def reconfigurable(self) -> bool:
        return self.source_partition == self.target_partition

    def to_dict(self) -> Dict:
        return {
            'coloops': sorted_elements(self.coloops),
            'source': [sorted_elements(part) for part in self.source_partition],
            'target': [sorted_elements(part) for part in self.target_partition],
        }


@dataclass
class VerifyReport:
    ok: bool
    failed_step: Optional[int] = None
    reason: str = ""
    steps_checked: int = 0
    final_state: Optional[Bases] = field(default=None, repr=False)

    def to_dict(self) -> Dict:
        return {'ok': self.ok, 'failed_step': self.failed_step, 'reason': self.reason,
                'steps_checked': self.steps_checked}


# ==================== STATE ARITHMETIC ====================

def apply_move(bases: Sequence[FrozenSet[ElementId]], move: Move) -> Bases:
    updated = list(bases)
    updated[move.matroid_index] = (updated[move.matroid_index] - {move.remove}) | {move.add}
    return tuple(updated)


def apply_arcs(bases: Sequence[FrozenSet[ElementId]], arcs: Iterable[ExchangeArc]) -> Bases:
    """B △ W: every arc (x, y) of A_i replaces x by y in B_i."""
    removed = [set() for _ in bases]
    added = [set() for _ in bases]
    for arc in arcs:
        removed[arc.matroid_index].add(arc.tail)
        added[arc.matroid_index].add(arc.head)
    return tuple((basis - gone) | new for basis, gone, new in zip(bases, removed, added))


def distance(bases: Sequence[FrozenSet[ElementId]], other: Sequence[FrozenSet[ElementId]]) -> int:
    """Sum of symmetric differences; even, and zero only for equal sequences."""
    if len(bases) != len(other):
        raise InputError(f"cannot compare sequences of length {len(bases)} and {len(other)}")
    return sum(len(frozenset(b) ^ frozenset(o)) for b, o in zip(bases, other))


# ==================== DECISION ====================

def _certificate_on_graph(graph: UnionExchangeGraph, target: Bases) -> ColoopCertificate:
    found = coloops_of_graph(graph)
    return ColoopCertificate(
        coloops=found,
        source_partition=tuple(found & basis for basis in graph.snapshot),
        target_partition=tuple(found & basis for basis in target),
    )


def certificate(matroids: Sequence[MatroidSpec], source, target) -> ColoopCertificate:
    source = check_feasible(matroids, source, "source")
    target = check_feasible(matroids, target, "target")
    return _certificate_on_graph(build_union(matroids, source), target)


def decide(matroids: Sequence[MatroidSpec], source, target) -> bool:
    """Reconfigurable iff every coloop of the union sits in the same basis at both ends."""
    return certificate(matroids, source, target).reconfigurable


# ==================== WALK DISCOVERY ====================

def _chase(graph: UnionExchangeGraph, target: Bases) -> Tuple[List[ExchangeArc], int]:
    """
    Follow arcs x_l -> x_{l+1} with x_l in B_i - B'_i and x_{l+1} in B'_i - B_i.

    Returns the arcs walked and the position where a cycle closes, or -1 when
    the chase ended at a free element.
    """
    source = graph.snapshot
    leaving = [basis - goal for basis, goal in zip(source, target)]
    current = min((x for part in leaving for x in part), key=element_key)
    position = {current: 0}
    walked: List[ExchangeArc] = []
    free = graph.free

    while True:
        index = graph.owner(current)
        entering = target[index] - source[index]
        options = [arc for arc in graph.out_arcs(current) if arc.head in entering]
        if not options:
            raise InvariantViolation(f"no exchange from {current!r} into target basis {index}")
        arc = min(options, key=lambda a: element_key(a.head))
        walked.append(arc)
        if arc.head in free:
            return walked, -1
        if arc.head in position:
            return walked, position[arc.head]
        position[arc.head] = len(walked)
        current = arc.head


def _shortest_escape(graph: UnionExchangeGraph, starts: Iterable[ElementId]) -> List[ExchangeArc]:
    """
    Shortest path from any start vertex to a free vertex.

    The start closest to a free element wins (label order breaks ties); the
    path then steps to the smallest-labelled neighbour one arc closer.
    """
    to_free = distances_to(graph, graph.free)
    reachable = [vertex for vertex in starts if vertex in to_free]
    if not reachable:
        return []
    current = min(reachable, key=lambda v: (to_free[v], element_key(v)))
    path: List[ExchangeArc] = []
    while to_free[current] > 0:
        closer = [arc for arc in graph.out_arcs(current) if to_free.get(arc.head) == to_free[current] - 1]
        arc = min(closer, key=lambda a: element_key(a.head))
        path.append(arc)
        current = arc.head
    return path


def find_walk(matroids: Sequence[MatroidSpec], source, target,
              graph: Optional[UnionExchangeGraph] = None) -> TadpoleWalk:
    """
    Find a tadpole-walk whose chase part moves elements toward the target.

    Type I: the chase reaches a free element. Type II: the chase closes a
    cycle, and a shortest path from the cycle to a free element is attached
    at its first vertex; the cycle is re-rooted there.
    """
    source = check_feasible(matroids, source, "source")
    target = check_feasible(matroids, target, "target")
    if graph is None:
        graph = build_union(matroids, source)
    elif graph.snapshot != source:
        raise ContractError("exchange graph was built for a different basis sequence")
    if distance(source, target) == 0:
        raise ContractError("find_walk needs distinct source and target")
    if not _certificate_on_graph(graph, target).reconfigurable:
        raise ContractError("find_walk called on a non-reconfigurable pair")

    walked, closes_at = _chase(graph, target)
    if closes_at < 0:
        walk = TadpoleWalk(cycle=(), path=tuple(walked))
        logger.debug(f"Type I walk of length {walk.n} ending at {walk.end!r}")
        return walk

    cycle = walked[closes_at:]
    escape = _shortest_escape(graph, [arc.tail for arc in cycle])
    if not escape:
        raise InvariantViolation("cycle vertices cannot reach a free element although no coloop blocks them")
    attach = escape[0].tail
    shift = next(i for i, arc in enumerate(cycle) if arc.tail == attach)
    walk = TadpoleWalk(cycle=tuple(cycle[shift:] + cycle[:shift]), path=tuple(escape))
    logger.debug(f"Type II walk: cycle {walk.m}, path {len(walk.path)}, root {walk.root!r}")
    return walk


# ==================== SHORTCUT REMOVAL ====================

def _first_shortcut(walk: TadpoleWalk, graph: UnionExchangeGraph) -> Optional[Tuple[int, int, ExchangeArc]]:
    """
    First same-matroid pair (a, a') with tail(a) before tail(a') and (tail(a), head(a')) an arc.

    Pairs are scanned in increasing walk order of tail(a). The cycle arc and the
    path arc leaving the root share tail and matroid, so the cycle arc is tried first.
    """
    arcs = walk.arcs
    order = walk.tail_order()
    for i in sorted(range(len(arcs)), key=lambda position: order[arcs[position].tail]):
        first = arcs[i]
        for j, second in enumerate(arcs):
            if first.matroid_index != second.matroid_index:
                continue
            if order[first.tail] >= order[second.tail] or first.tail == second.head:
                continue
            if graph.has_arc(first.matroid_index, first.tail, second.head):
                return i, j, ExchangeArc(first.tail, second.head, first.matroid_index)
    return None


def _splice(walk: TadpoleWalk, i: int, j: int, shortcut: ExchangeArc) -> TadpoleWalk:
    """Path/path, cycle/cycle or cycle/path repair, chosen by where a (index i) and a' (index j) sit."""
    m = walk.m
    cycle, path = list(walk.cycle), list(walk.path)
    if i >= m > j:
        raise InvariantViolation("a path arc cannot shortcut into the cycle")
    if i >= m and j >= m:
        return TadpoleWalk(cycle=cycle, path=path[:i - m] + [shortcut] + path[j - m + 1:])
    if j < m:
        return TadpoleWalk(cycle=cycle[:i] + [shortcut] + cycle[j + 1:], path=path)
    return TadpoleWalk(cycle=cycle[i:] + cycle[:i], path=[shortcut] + path[j - m + 1:])


def is_shortcut_free(walk: TadpoleWalk, graph: UnionExchangeGraph) -> bool:
    return _first_shortcut(walk, graph) is None


def remove_shortcuts(walk: TadpoleWalk, graph: UnionExchangeGraph) -> TadpoleWalk:
    """Splice out shortcuts one at a time until none is left; each splice shortens the walk."""
    while True:
        found = _first_shortcut(walk, graph)
        if found is None:
            return walk
        i, j, shortcut = found
        shorter = _splice(walk, i, j, shortcut)
        if shorter.n >= walk.n:
            raise InvariantViolation("shortcut splice did not shorten the walk")
        logger.debug(f"Spliced shortcut {shortcut}: walk length {walk.n} -> {shorter.n}")
        walk = shorter


# ==================== WALK EXPANSION ====================

def walk_moves(walk: TadpoleWalk, bases: Sequence[FrozenSet[ElementId]],
               graph: Optional[UnionExchangeGraph] = None) -> Tuple[List[Move], Bases]:
    """
    Expand a shortcut-free walk into single exchanges.

    Type I peels the path from its free end (n moves). Type II peels the path
    and the cycle back to x_1, swaps x_{m+1} for x_1 in the root's matroid,
    then restores the rest of the path (2n - m - 1 moves) and ends at B △ C.
    """
    if __debug__ and graph is not None and not is_shortcut_free(walk, graph):
        raise ContractError("walk_moves requires a shortcut-free walk")

    arcs, m, n = walk.arcs, walk.m, walk.n
    moves = [Move(arc.matroid_index, arc.tail, arc.head) for arc in reversed(arcs if not m else arcs[1:])]
    if m:
        root_arc, first_path_arc = arcs[0], arcs[m]
        moves.append(Move(root_arc.matroid_index, first_path_arc.head, root_arc.head))
        moves.extend(Move(arc.matroid_index, arc.head, arc.tail) for arc in arcs[m + 1:])

    result = tuple(bases)
    for move in moves:
        result = apply_move(result, move)
    return moves, result


# ==================== SOLVER ====================

def solve_with_trace(matroids: Sequence[MatroidSpec], source,
                     target) -> Tuple[Optional[ReconfigSequence], List[WalkStep]]:
    """Run the distance-decreasing loop; returns (None, []) on a no-instance."""
    source = check_feasible(matroids, source, "source")
    target = check_feasible(matroids, target, "target")
    if source == target:
        return ReconfigSequence(), []

    graph = build_union(matroids, source)
    if not _certificate_on_graph(graph, target).reconfigurable:
        logger.info("Not reconfigurable: coloops are placed differently in source and target")
        return None, []

    current = source
    gap = distance(current, target)
    moves: List[Move] = []
    trace: List[WalkStep] = []
    while gap > 0:
        if graph is None:
            graph = build_union(matroids, current)
        walk = remove_shortcuts(find_walk(matroids, current, target, graph), graph)
        step_moves, current = walk_moves(walk, current, graph)
        new_gap = distance(current, target)
        if new_gap >= gap:
            raise InvariantViolation(f"walk application did not decrease the distance ({gap} -> {new_gap})")
        logger.debug(f"{'Type I' if walk.is_type_one else 'Type II'} walk: {len(step_moves)} moves, "
                     f"distance {gap} -> {new_gap}")
        trace.append(WalkStep(walk, tuple(step_moves), gap, new_gap))
        moves.extend(step_moves)
        gap = new_gap
        graph = None

    logger.info(f"✅ Reconfiguration found: {len(moves)} moves over {len(trace)} walks")
    return ReconfigSequence(tuple(moves)), trace


def solve(matroids: Sequence[MatroidSpec], source, target) -> Optional[ReconfigSequence]:
    sequence, _ = solve_with_trace(matroids, source, target)
    return sequence


# ==================== VERIFICATION ====================

def verify(matroids: Sequence[MatroidSpec], source, target, sequence: Iterable) -> VerifyReport:
    """
    Replay `sequence` from `source`, checking each step is a legal adjacency
    and that the replay ends at `target`. Never raises on bad input.
    """
    try:
        source = check_feasible(matroids, source, "source")
        target = check_feasible(matroids, target, "target")
    except InputError as e:
        return VerifyReport(ok=False, failed_step=0, reason=str(e))

    bases = [set(basis) for basis in source]
    owner = {element: index for index, basis in enumerate(source) for element in basis}
    step = 0
    for step, raw in enumerate(sequence, 1):
        try:
            move = Move(*raw)
            hash((move.remove, move.add))
        except TypeError:
            return VerifyReport(ok=False, failed_step=step, reason="malformed move", steps_checked=step - 1)
        index = move.matroid_index
        if not isinstance(index, int) or not 0 <= index < len(matroids):
            reason = "matroid index out of range"
        elif move.remove not in bases[index]:
            reason = "removed element not in basis"
        elif move.add not in matroids[index].ground:
            reason = "added element outside ground set"
        elif move.add in owner:
            reason = "overlap"
        elif not matroids[index].is_exchange(frozenset(bases[index]), move.remove, move.add):
            reason = "not a basis"
        else:
            reason = ""
        if reason:
            return VerifyReport(ok=False, failed_step=step, reason=reason, steps_checked=step - 1)
        bases[index].discard(move.remove)
        bases[index].add(move.add)
        del owner[move.remove]
        owner[move.add] = index

    final = tuple(frozenset(basis) for basis in bases)
    if final != target:
        # every move was legal; only the end state is wrong
        return VerifyReport(ok=False, failed_step=None, reason="terminal mismatch",
                            steps_checked=step, final_state=final)
    return VerifyReport(ok=True, steps_checked=step, final_state=final)
