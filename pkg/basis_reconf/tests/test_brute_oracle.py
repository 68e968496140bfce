from unittest import TestCase

from hypothesis import given, settings
from hypothesis import strategies as st

from basis_reconf.brute_oracle import BruteOracle, bfs_solve, brute_coloops, canonical_state, enumerate_bases
from basis_reconf.errors import CapExceeded
from basis_reconf.exchange_graph import coloops
from basis_reconf.matroids import Block, PartitionMatroid, UniformMatroid
from basis_reconf.random_instances import PROFILES
from basis_reconf.reconfig_engine import verify
from basis_reconf.tests.fixtures import block_swap_instance, generated, k4_no_instance, triangle, two_rank_one


class EnumerateBasesTests(TestCase):

    def test_uniform(self):
        self.assertEqual(enumerate_bases(UniformMatroid({"a", "b", "c"}, 2)),
                         [frozenset("ab"), frozenset("ac"), frozenset("bc")])

    def test_graphic_triangle(self):
        self.assertEqual(enumerate_bases(triangle()),
                         [frozenset({"e1", "e2"}), frozenset({"e1", "e3"}), frozenset({"e2", "e3"})])

    def test_partition(self):
        spec = PartitionMatroid((Block(frozenset("ab"), 1), Block(frozenset("c"), 1)))
        self.assertEqual(enumerate_bases(spec), [frozenset("ac"), frozenset("bc")])

    def test_ground_cap_is_a_refusal(self):
        with self.assertRaises(CapExceeded):
            BruteOracle(basis_cap=2).enumerate_bases(UniformMatroid({"a", "b", "c"}, 1))


class BfsSolveTests(TestCase):

    def test_equal_endpoints(self):
        instance = two_rank_one()
        dist, sequence = bfs_solve(instance.matroids, instance.source, instance.source)
        self.assertEqual((dist, len(sequence)), (0, 0))

    def test_two_rank_one_swap_needs_three_moves(self):
        instance = two_rank_one()
        dist, sequence = bfs_solve(instance.matroids, instance.source, instance.target)
        self.assertEqual(dist, 3)
        self.assertTrue(verify(instance.matroids, instance.source, instance.target, sequence).ok)

    def test_k4_component_is_a_singleton(self):
        instance = k4_no_instance()
        self.assertIsNone(bfs_solve(instance.matroids, instance.source, instance.target))
        self.assertEqual(BruteOracle().component_size(instance.matroids, instance.source), 1)

    def test_state_cap_is_a_refusal(self):
        instance = block_swap_instance(blocks=2, width=5, rank=2)
        with self.assertRaises(CapExceeded):
            BruteOracle(state_cap=5).bfs_solve(instance.matroids, instance.source, instance.target)

    def test_states_hash_canonically(self):
        self.assertEqual(canonical_state([frozenset({"b", "a"}), frozenset()]), (("a", "b"), ()))


class BruteColoopTests(TestCase):

    def test_uniform_has_none(self):
        self.assertEqual(brute_coloops((UniformMatroid({"a", "b", "c"}, 2),), ({"a", "b"},)), frozenset())

    def test_forced_element(self):
        spec = PartitionMatroid((Block(frozenset("a"), 1),))
        self.assertEqual(brute_coloops((spec,), ({"a"},)), {"a"})

    def test_k4_twice(self):
        instance = k4_no_instance()
        self.assertEqual(len(brute_coloops(instance.matroids, instance.source)), 6)

    @given(st.integers(0, 100_000), st.sampled_from(PROFILES), st.integers(1, 3))
    @settings(max_examples=100, deadline=None)
    def test_agrees_with_reachability(self, seed, profile, k):
        instance = generated(seed, k, profile, 7)
        self.assertEqual(brute_coloops(instance.matroids, instance.source),
                         coloops(instance.matroids, instance.source))
