# fixtures.py

from basis_reconf.errors import GenerationError
from basis_reconf.instance_io import ProblemInstance
from basis_reconf.matroids import GraphicMatroid, PartitionMatroid, UniformMatroid
from basis_reconf.random_instances import InstanceGenerator

K4_EDGES = (
    (0, 1, "e01"), (0, 2, "e02"), (0, 3, "e03"),
    (1, 2, "e12"), (1, 3, "e13"), (2, 3, "e23"),
)
K4_PATH_TREE = frozenset({"e01", "e12", "e23"})
K4_OTHER_TREE = frozenset({"e02", "e03", "e13"})


def k4():
    return GraphicMatroid(4, K4_EDGES)


def k4_no_instance() -> ProblemInstance:
    """Two edge-disjoint spanning trees of K4, target swaps them."""
    return ProblemInstance.validated((k4(), k4()), (K4_PATH_TREE, K4_OTHER_TREE), (K4_OTHER_TREE, K4_PATH_TREE))


def triangle():
    return GraphicMatroid(3, ((0, 1, "e1"), (1, 2, "e2"), (0, 2, "e3")))


def four_cycle():
    return GraphicMatroid(4, ((0, 1, "e1"), (1, 2, "e2"), (2, 3, "e3"), (3, 0, "e4")))


def two_rank_one() -> ProblemInstance:
    """(U1 on {a,b,c}) twice, ({a},{b}) -> ({b},{a}); needs the free element c."""
    u1 = UniformMatroid({"a", "b", "c"}, 1)
    return ProblemInstance.validated((u1, u1), ({"a"}, {"b"}), ({"b"}, {"a"}))


def chain_instance() -> ProblemInstance:
    """U1 on {a,b} and U1 on {b,c}: one Type I walk a -> b -> c."""
    return ProblemInstance.validated(
        (UniformMatroid({"a", "b"}, 1), UniformMatroid({"b", "c"}, 1)),
        ({"a"}, {"b"}), ({"b"}, {"c"}),
    )


def block_swap_instance(blocks: int = 20, width: int = 10, rank: int = 3) -> ProblemInstance:
    """Two copies of one partition matroid; the target swaps the two bases inside every block."""
    labels = [[f"p{b:02d}_{i}" for i in range(width)] for b in range(blocks)]
    spec = PartitionMatroid(tuple((frozenset(block), rank) for block in labels))
    first = frozenset(e for block in labels for e in block[:rank])
    second = frozenset(e for block in labels for e in block[rank:2 * rank])
    return ProblemInstance.validated((spec, spec), (first, second), (second, first))


def generated(seed: int, k: int, profile: str, size: int, yes_by_walk: bool = True) -> ProblemInstance:
    """A seeded random instance; falls through to later seeds if generation gives up."""
    for offset in range(0, 50_000, 1_000):
        try:
            return InstanceGenerator(seed + offset).generate(k, profile, size, yes_by_walk)
        except GenerationError:
            continue
    raise GenerationError(f"no instance near seed {seed}")
