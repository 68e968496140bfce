from itertools import combinations
from unittest import TestCase

import numpy as np

from basis_reconf.brute_oracle import bfs_solve
from basis_reconf.errors import InputError
from basis_reconf.hardness_gadgets import (
    SetCoverInstance, build_gadget, c_label, cover_to_sequence, e_label, exact_set_cover, s_label,
    sequence_to_cover,
)
from basis_reconf.matroids import Block
from basis_reconf.reconfig_engine import Move, verify


def random_set_cover(seed: int, n: int, m: int) -> SetCoverInstance:
    """Random family of m nonempty subsets of n elements whose union is the universe."""
    rng = np.random.default_rng(seed)
    universe = [f"u{i}" for i in range(n)]
    family = []
    for _ in range(m):
        size = int(rng.integers(1, n + 1))
        family.append(frozenset(universe[int(i)] for i in rng.choice(n, size=size, replace=False)))
    missing = frozenset(universe) - frozenset().union(*family)
    family[-1] = family[-1] | missing
    return SetCoverInstance(tuple(universe), tuple(family))


def all_covers(sc: SetCoverInstance):
    for size in range(1, sc.m + 1):
        for chosen in combinations(range(sc.m), size):
            if sc.covers(chosen):
                yield list(chosen)


class SetCoverInstanceTests(TestCase):

    def test_family_must_cover(self):
        with self.assertRaises(InputError):
            SetCoverInstance(("u", "v"), (frozenset({"u"}),))

    def test_members_inside_universe(self):
        with self.assertRaises(InputError):
            SetCoverInstance(("u",), (frozenset({"u", "w"}),))

    def test_members_nonempty(self):
        with self.assertRaises(InputError):
            SetCoverInstance(("u",), (frozenset({"u"}), frozenset()))

    def test_exact_cover(self):
        sc = SetCoverInstance(("a", "b", "c"), (frozenset("a"), frozenset("bc"), frozenset("ab"), frozenset("c")))
        self.assertEqual(exact_set_cover(sc), [0, 1])


class BuildGadgetTests(TestCase):

    def setUp(self):
        self.sc = SetCoverInstance(("u",), (frozenset({"u"}),))
        self.g = build_gadget(self.sc)

    def test_single_element_blocks(self):
        e1, e2, e3 = (e_label("u", j) for j in (1, 2, 3))
        c1, s1, s2, s3 = c_label("u", 1), s_label(0, 1), s_label(0, 2), s_label(0, 3)
        self.assertEqual(self.g.L, 2)
        self.assertEqual(set(self.g.m1.blocks), {
            Block(frozenset({e1, e2}), 1), Block(frozenset({e3, c1}), 1), Block(frozenset({s1, s2}), 1),
        })
        self.assertEqual(set(self.g.m2.blocks), {
            Block(frozenset({e1, e2, e3}), 1), Block(frozenset({c1, s1}), 1), Block(frozenset({s2, s3}), 1),
        })
        self.assertEqual(self.g.source, (frozenset({e1, e3, s1}), frozenset({e2, c1, s2})))
        self.assertEqual(self.g.target, (frozenset({e2, e3, s1}), frozenset({e1, c1, s2})))

    def test_last_chain_element_is_free(self):
        sc = SetCoverInstance(("a", "b"), (frozenset("a"), frozenset("ab")))
        g = build_gadget(sc)
        for index in range(sc.m):
            last = s_label(index, g.L + 1)
            self.assertFalse(any(last in basis for basis in g.source + g.target))

    def test_source_and_target_differ_on_first_two_copies(self):
        g = build_gadget(random_set_cover(3, 4, 3))
        firsts = {e_label(u, 1) for u in g.set_cover.universe}
        seconds = {e_label(u, 2) for u in g.set_cover.universe}
        self.assertEqual(g.source[0] - g.target[0], firsts)
        self.assertEqual(g.target[1] - g.source[1], firsts)
        self.assertEqual(g.target[0] - g.source[0], seconds)

    def test_elemid_counts_earlier_sets(self):
        g = build_gadget(SetCoverInstance(("a", "b"), (frozenset("a"), frozenset("b"), frozenset("ab"))))
        self.assertEqual((g.elemid("a", 0), g.elemid("a", 2), g.elemid("b", 2)), (1, 2, 2))
        self.assertEqual(g.counters_of(2), {c_label("a", 2), c_label("b", 2)})
        self.assertEqual(g.name_tables()['c']["b:2"], c_label("b", 2))


class CoverToSequenceTests(TestCase):

    def test_single_element_length_eleven(self):
        g = build_gadget(SetCoverInstance(("u",), (frozenset({"u"}),)))
        sequence = cover_to_sequence(g, [0])
        self.assertEqual(len(sequence), 11)
        self.assertTrue(verify(g.matroids, g.source, g.target, sequence).ok)
        self.assertEqual(sequence_to_cover(g, sequence), [0])
        self.assertGreaterEqual(len(sequence) // (2 * g.L), 1)

    def test_four_elements_two_sets(self):
        sc = SetCoverInstance(tuple("abcd"), (frozenset("ab"), frozenset("cd"), frozenset("abc")))
        g = build_gadget(sc)
        self.assertEqual(g.L, 32)
        sequence = cover_to_sequence(g, [0, 1])
        self.assertEqual(len(sequence), 156)
        self.assertTrue(verify(g.matroids, g.source, g.target, sequence).ok)

    def test_empty_universe(self):
        g = build_gadget(SetCoverInstance((), ()))
        sequence = cover_to_sequence(g, [])
        self.assertEqual(len(sequence), 0)
        self.assertTrue(verify(g.matroids, g.source, g.target, sequence).ok)

    def test_non_cover_is_rejected(self):
        g = build_gadget(SetCoverInstance(tuple("ab"), (frozenset("a"), frozenset("b"))))
        for bad in ([0], [0, 0, 1], [0, 7]):
            with self.assertRaises(InputError):
                cover_to_sequence(g, bad)

    def test_moves_stay_inside_blocks_and_use_free_elements(self):
        g = build_gadget(random_set_cover(5, 4, 3))
        bases = [set(basis) for basis in g.source]
        for move in cover_to_sequence(g, exact_set_cover(g.set_cover)):
            spec = g.matroids[move.matroid_index]
            self.assertEqual(spec.block_of(move.remove), spec.block_of(move.add))
            self.assertFalse(any(move.add in basis for basis in bases))
            bases[move.matroid_index].remove(move.remove)
            bases[move.matroid_index].add(move.add)


class LengthIdentityTests(TestCase):
    """Every cover of every small instance expands to 2|C|L + 7n moves and extracts back."""

    def test_all_covers(self):
        for seed in range(12):
            n, m = 4 + seed % 3, 2 + seed % 5
            sc = random_set_cover(seed, n, m)
            g = build_gadget(sc)
            self.assertEqual(g.L, 2 * n * n)
            for cover in all_covers(sc):
                sequence = cover_to_sequence(g, cover)
                self.assertEqual(len(sequence), 2 * len(cover) * g.L + 7 * n)
                self.assertTrue(verify(g.matroids, g.source, g.target, sequence).ok)
                extracted = sequence_to_cover(g, sequence)
                self.assertEqual(extracted, sorted(cover))
                self.assertTrue(sc.covers(extracted))
                self.assertLessEqual(len(extracted), len(sequence) // (2 * g.L))
                self.assertLessEqual(len(sequence), g.length_threshold(len(cover)))

    def test_blocked_counters_while_chain_head_is_held(self):
        sc = random_set_cover(9, 4, 3)
        g = build_gadget(sc)
        sequence = cover_to_sequence(g, exact_set_cover(sc))
        for state in sequence.states(g.source):
            for index in range(sc.m):
                if s_label(index, 1) in state[0]:
                    self.assertTrue(g.counters_of(index) <= state[1])


class SequenceToCoverTests(TestCase):

    def test_failed_verify_is_input_error(self):
        g = build_gadget(SetCoverInstance(("u",), (frozenset({"u"}),)))
        with self.assertRaises(InputError):
            sequence_to_cover(g, [Move(0, e_label("u", 1), e_label("u", 2))])

    def test_shortest_sequence_matches_minimum_cover(self):
        # n = 2 keeps the state space small enough for breadth-first search
        sc = SetCoverInstance(("a", "b"), (frozenset("a"), frozenset("ab")))
        g = build_gadget(sc)
        dist, sequence = bfs_solve(g.matroids, g.source, g.target)
        self.assertLessEqual(dist, len(cover_to_sequence(g, exact_set_cover(sc))))
        self.assertTrue(sc.covers(sequence_to_cover(g, sequence)))
