# hardness_gadgets.py

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from basis_reconf.errors import InputError
from basis_reconf.matroids import Bases, Block, ElementId, PartitionMatroid, check_feasible, sorted_elements
from basis_reconf.reconfig_engine import Move, ReconfigSequence, verify

logger = logging.getLogger(__name__)


def e_label(u: ElementId, j: int) -> str:
    return f"e:{u}:{j}"


def c_label(u: ElementId, i: int) -> str:
    return f"c:{u}:{i}"


def s_label(set_index: int, i: int) -> str:
    return f"s:{set_index}:{i}"


@dataclass(frozen=True)
class SetCoverInstance:
    """Universe U and an ordered family of subsets; list order is the tie-break order of the family."""

    universe: Tuple[ElementId, ...]
    family: Tuple[FrozenSet[ElementId], ...]

    def __post_init__(self):
        object.__setattr__(self, 'universe', tuple(self.universe))
        object.__setattr__(self, 'family', tuple(frozenset(s) for s in self.family))
        if len(set(self.universe)) != len(self.universe):
            raise InputError("universe lists an element twice")
        universe = frozenset(self.universe)
        for index, members in enumerate(self.family):
            if not members:
                raise InputError(f"set {index} is empty", index=index)
            stray = members - universe
            if stray:
                raise InputError(f"set {index} has elements {sorted_elements(stray)} outside the universe",
                                 index=index)
        uncovered = universe - frozenset().union(*self.family)
        if uncovered:
            raise InputError(f"family does not cover {sorted_elements(uncovered)}")

    @property
    def n(self) -> int:
        return len(self.universe)

    @property
    def m(self) -> int:
        return len(self.family)

    def covers(self, indices: Iterable[int]) -> bool:
        chosen = frozenset().union(*(self.family[i] for i in indices))
        return chosen >= frozenset(self.universe)


@dataclass(frozen=True)
class GadgetInstance:
    """Two partition matroids with source/target sequences built from a Set Cover instance."""

    set_cover: SetCoverInstance
    m1: PartitionMatroid
    m2: PartitionMatroid
    source: Bases
    target: Bases
    L: int
    elem_ids: Dict[Tuple[ElementId, int], int] = field(compare=False, repr=False)

    @property
    def matroids(self) -> Tuple[PartitionMatroid, PartitionMatroid]:
        return self.m1, self.m2

    def elemid(self, u: ElementId, set_index: int) -> int:
        """Rank of S among the sets containing u, counting S itself."""
        return self.elem_ids[(u, set_index)]

    def e(self, u: ElementId, j: int) -> str:
        return e_label(u, j)

    def c(self, u: ElementId, i: int) -> str:
        return c_label(u, i)

    def s(self, set_index: int, i: int) -> str:
        return s_label(set_index, i)

    def counters_of(self, set_index: int) -> FrozenSet[str]:
        """The c-elements that the block M_S^0 shares with the element gadgets."""
        return frozenset(c_label(u, self.elemid(u, set_index)) for u in self.set_cover.family[set_index])

    def length_threshold(self, k: int) -> int:
        """(2k + 1)L: a cover of size <= k exists iff a sequence this short exists (n >= 4)."""
        return (2 * k + 1) * self.L

    def name_tables(self) -> Dict[str, Dict[str, str]]:
        sc = self.set_cover
        return {
            'e': {f"{u}:{j}": e_label(u, j) for u in sc.universe for j in (1, 2, 3)},
            'c': {f"{u}:{i}": c_label(u, i) for (u, _), i in self.elem_ids.items()},
            's': {f"{index}:{i}": s_label(index, i) for index in range(sc.m) for i in range(1, self.L + 2)},
        }


def build_gadget(sc: SetCoverInstance) -> GadgetInstance:
    """Encode (U, S) as two partition matroids whose reconfiguration length tracks cover size."""
    n = sc.n
    half = n * n
    L = 2 * half

    elem_ids: Dict[Tuple[ElementId, int], int] = {}
    occurrences = {u: 0 for u in sc.universe}
    for index, members in enumerate(sc.family):
        for u in sc.universe:
            if u in members:
                occurrences[u] += 1
                elem_ids[(u, index)] = occurrences[u]

    m1_blocks: List[Block] = []
    m2_blocks: List[Block] = []
    for u in sc.universe:
        m1_blocks.append(Block(frozenset({e_label(u, 1), e_label(u, 2)}), 1))
    for u in sc.universe:
        counters = {c_label(u, i) for i in range(1, occurrences[u] + 1)}
        m1_blocks.append(Block(frozenset({e_label(u, 3)} | counters), 1))
    for u in sc.universe:
        m2_blocks.append(Block(frozenset({e_label(u, 1), e_label(u, 2), e_label(u, 3)}), 1))
    for index, members in enumerate(sc.family):
        counters = {c_label(u, elem_ids[(u, index)]) for u in members}
        m2_blocks.append(Block(frozenset(counters | {s_label(index, 1)}), len(members)))
    for index in range(sc.m):
        for i in range(1, half + 1):
            m1_blocks.append(Block(frozenset({s_label(index, 2 * i - 1), s_label(index, 2 * i)}), 1))
            m2_blocks.append(Block(frozenset({s_label(index, 2 * i), s_label(index, 2 * i + 1)}), 1))

    odd_chain = {s_label(index, 2 * i - 1) for index in range(sc.m) for i in range(1, half + 1)}
    even_chain = {s_label(index, 2 * i) for index in range(sc.m) for i in range(1, half + 1)}
    counters = {c_label(u, i) for (u, _), i in elem_ids.items()}
    firsts = {e_label(u, 1) for u in sc.universe}
    seconds = {e_label(u, 2) for u in sc.universe}
    thirds = {e_label(u, 3) for u in sc.universe}

    m1, m2 = PartitionMatroid(tuple(m1_blocks)), PartitionMatroid(tuple(m2_blocks))
    source = check_feasible((m1, m2), (firsts | thirds | odd_chain, seconds | counters | even_chain), "source")
    target = check_feasible((m1, m2), (seconds | thirds | odd_chain, firsts | counters | even_chain), "target")

    gadget = GadgetInstance(set_cover=sc, m1=m1, m2=m2, source=source, target=target, L=L, elem_ids=elem_ids)
    logger.info(f"Gadget built: n={n}, m={sc.m}, L={L}, |E1|={len(m1.ground)}, |E2|={len(m2.ground)}")
    return gadget


class _Replay:
    """Mutable two-basis state that emits a Move for every valid pair it applies."""

    def __init__(self, bases: Bases):
        self.owner = {element: index for index, basis in enumerate(bases) for element in basis}
        self.moves: List[Move] = []

    def exchange(self, x: str, y: str) -> None:
        index = self.owner.pop(x)
        self.owner[y] = index
        self.moves.append(Move(index, x, y))


def _check_cover(g: GadgetInstance, cover: Sequence[int]) -> List[int]:
    sc = g.set_cover
    chosen = list(cover)
    for index in chosen:
        if not isinstance(index, int) or not 0 <= index < sc.m:
            raise InputError(f"cover index {index!r} is not a family index")
    if len(set(chosen)) != len(chosen):
        raise InputError("cover lists a set twice")
    if not sc.covers(chosen):
        missing = frozenset(sc.universe) - frozenset().union(*(sc.family[i] for i in chosen))
        raise InputError(f"selected sets do not cover {sorted_elements(missing)}")
    return sorted(chosen)


def cover_to_sequence(g: GadgetInstance, cover: Sequence[int]) -> ReconfigSequence:
    """
    Turn a set cover into a reconfiguration sequence of length 2|cover|L + 7n.

    Each chosen set drains its s-chain (L moves), every element u is swapped
    once through the free slot brought down one chosen chain (7 moves), and
    the chains are refilled (L moves each).
    """
    chosen = _check_cover(g, cover)
    sc = g.set_cover
    replay = _Replay(g.source)

    for index in chosen:
        for i in range(g.L, 0, -1):
            replay.exchange(s_label(index, i), s_label(index, i + 1))

    handled = set()
    for index in chosen:
        pending = [u for u in sc.universe if u in sc.family[index] and u not in handled]
        if not pending:
            continue
        s1 = s_label(index, 1)
        for u in pending:
            c = c_label(u, g.elemid(u, index))
            replay.exchange(c, s1)
            replay.exchange(e_label(u, 3), c)
            replay.exchange(e_label(u, 2), e_label(u, 3))
            replay.exchange(e_label(u, 1), e_label(u, 2))
            replay.exchange(e_label(u, 3), e_label(u, 1))
            replay.exchange(c, e_label(u, 3))
            replay.exchange(s1, c)
        handled.update(sc.family[index])

    for index in chosen:
        for i in range(1, g.L + 1):
            replay.exchange(s_label(index, i + 1), s_label(index, i))

    logger.debug(f"Cover {chosen} expanded to {len(replay.moves)} moves")
    return ReconfigSequence(tuple(replay.moves))


def sequence_to_cover(g: GadgetInstance, sequence: Iterable) -> List[int]:
    """Sets whose s_S^1 is free at some point of a verified sequence; always a cover."""
    moves = [Move(*move) for move in sequence]
    report = verify(g.matroids, g.source, g.target, moves)
    if not report.ok:
        raise InputError(f"sequence fails verification at step {report.failed_step}: {report.reason}")
    heads = {s_label(index, 1): index for index in range(g.set_cover.m)}
    freed = {heads[move.remove] for move in moves if move.remove in heads}
    cover = sorted(freed)
    bound = len(moves) // (2 * g.L) if g.L else 0
    if len(cover) > bound:
        logger.warning(f"⚠️  extracted cover of size {len(cover)} exceeds floor(len/2L) = {bound}; "
                       f"the length gap needs n >= 4")
    return cover


def exact_set_cover(sc: SetCoverInstance) -> Optional[List[int]]:
    """Minimum cover by exhaustive search over subfamilies (desk scale only)."""
    for size in range(sc.m + 1):
        for chosen in combinations(range(sc.m), size):
            if sc.covers(chosen):
                return list(chosen)
    return None
