import json
import os
import tempfile
from unittest import TestCase

from basis_reconf.errors import InputError
from basis_reconf.hardness_gadgets import SetCoverInstance, build_gadget, cover_to_sequence
from basis_reconf.instance_io import (
    ProblemInstance, dump_moves, load_instance, parse_cover, parse_instance, parse_moves, parse_set_cover,
    save_instance, set_cover_to_json, spec_from_json, spec_to_json,
)
from basis_reconf.matroids import DirectSum, DualMatroid, GraphicMatroid, OracleMatroid, UniformMatroid
from basis_reconf.random_instances import PROFILES
from basis_reconf.reconfig_engine import Move
from basis_reconf.tests.fixtures import generated, k4_no_instance

MINIMAL = {
    "matroids": [{"type": "uniform", "elements": ["a", "b", "c"], "rank": 2}],
    "source": [["a", "b"]],
    "target": [["b", "c"]],
}


class LoadInstanceTests(TestCase):

    def test_minimal_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "instance.json")
            with open(path, "w") as handle:
                json.dump(MINIMAL, handle)
            instance = load_instance(path)
        self.assertEqual(instance.k, 1)
        self.assertEqual(instance.target, (frozenset({"b", "c"}),))

    def test_overlapping_source(self):
        payload = {
            "matroids": [{"type": "uniform", "elements": ["a", "b", "c"], "rank": 1}] * 2,
            "source": [["a"], ["a"]],
            "target": [["a"], ["b"]],
        }
        with self.assertRaisesRegex(InputError, "source bases 0 and 1 share element 'a'"):
            parse_instance(json.dumps(payload))

    def test_duplicate_label_in_one_basis(self):
        payload = dict(MINIMAL, source=[["a", "a"]])
        with self.assertRaises(InputError) as caught:
            parse_instance(json.dumps(payload))
        self.assertEqual(caught.exception.index, 0)

    def test_non_basis(self):
        with self.assertRaisesRegex(InputError, "target basis 0 is not a basis"):
            parse_instance(json.dumps(dict(MINIMAL, target=[["c"]])))

    def test_parse_error_has_position(self):
        with self.assertRaisesRegex(InputError, r"line 1, column \d+"):
            parse_instance('{"matroids": [')

    def test_unknown_matroid_type(self):
        with self.assertRaisesRegex(InputError, "unknown matroid type"):
            parse_instance(json.dumps(dict(MINIMAL, matroids=[{"type": "linear"}])))

    def test_missing_file(self):
        with self.assertRaises(InputError):
            load_instance("/nonexistent/instance.json")

    def test_integer_labels_become_strings(self):
        payload = {
            "matroids": [{"type": "graphic", "vertices": 3, "edges": [[0, 1, 1], [1, 2, 2], [0, 2, 3]]}],
            "source": [[1, 2]],
            "target": [[2, 3]],
        }
        instance = parse_instance(json.dumps(payload))
        self.assertEqual(instance.source, (frozenset({"1", "2"}),))


class SpecJsonTests(TestCase):

    def test_nested_specs(self):
        spec = DirectSum((DualMatroid(UniformMatroid({"a", "b", "c"}, 2)),
                          GraphicMatroid(2, ((0, 1, "x"), (1, 1, "loop")))))
        self.assertEqual(spec_from_json(spec_to_json(spec)), spec)

    def test_oracle_cannot_be_saved(self):
        with self.assertRaises(InputError):
            spec_to_json(OracleMatroid({"a"}, 1, query=lambda subset: True))

    def test_error_names_position(self):
        with self.assertRaisesRegex(InputError, r"matroids\[0\]\.parts\[1\]"):
            parse_instance(json.dumps({
                "matroids": [{"type": "direct_sum", "parts": [
                    {"type": "uniform", "elements": ["a"], "rank": 1},
                    {"type": "uniform", "elements": ["b"], "rank": 3},
                ]}],
                "source": [["a", "b"]], "target": [["a", "b"]],
            }))

    def test_non_list_containers_are_input_errors(self):
        cases = [
            ({"type": "graphic", "vertices": 2, "edges": 5}, "'edges' must be a list"),
            ({"type": "direct_sum", "parts": 3}, "'parts' must be a list"),
            ({"type": "partition", "blocks": {"elements": ["a"], "rank": 1}}, "'blocks' must be a list"),
        ]
        for spec, message in cases:
            with self.subTest(spec=spec):
                with self.assertRaisesRegex(InputError, r"matroids\[0\]: " + message):
                    parse_instance(json.dumps(dict(MINIMAL, matroids=[spec])))


class RoundTripTests(TestCase):

    def test_random_instances(self):
        for seed, profile in enumerate(PROFILES * 3):
            instance = generated(seed, 1 + seed % 3, profile, 8, yes_by_walk=seed % 2 == 0)
            self.assertEqual(parse_instance(save_instance(instance)), instance)

    def test_k4(self):
        instance = k4_no_instance()
        self.assertEqual(parse_instance(save_instance(instance)), instance)

    def test_gadget_output_is_byte_stable(self):
        g = build_gadget(SetCoverInstance(tuple("abcd"), (frozenset("ab"), frozenset("cd"), frozenset("abc"))))
        text = save_instance(ProblemInstance.from_gadget(g))
        self.assertEqual(save_instance(parse_instance(text)), text)


class MoveAndCoverFormatTests(TestCase):

    def test_moves_round_trip(self):
        g = build_gadget(SetCoverInstance(("u",), (frozenset({"u"}),)))
        sequence = cover_to_sequence(g, [0])
        text = dump_moves(sequence)
        self.assertEqual(len(text.splitlines()), 11)
        self.assertEqual(json.loads(text.splitlines()[0]),
                         {"step": 1, "matroid": 1, "remove": "s:0:2", "add": "s:0:3"})
        self.assertEqual(parse_moves(text), sequence)

    def test_bad_move_line(self):
        with self.assertRaisesRegex(InputError, "move line 2"):
            parse_moves('{"matroid": 0, "remove": "a", "add": "b"}\n{"matroid": 0}\n')

    def test_blank_lines_are_skipped(self):
        self.assertEqual(list(parse_moves('\n{"matroid": 0, "remove": "a", "add": "b"}\n\n')),
                         [Move(0, "a", "b")])

    def test_set_cover(self):
        sc = parse_set_cover('{"universe": ["u", "v"], "sets": [["u"], ["u", "v"]]}')
        self.assertEqual(sc.family, (frozenset({"u"}), frozenset({"u", "v"})))
        self.assertEqual(set_cover_to_json(sc), {"universe": ["u", "v"], "sets": [["u"], ["u", "v"]]})

    def test_cover(self):
        self.assertEqual(parse_cover("[0, 2]"), [0, 2])
        with self.assertRaises(InputError):
            parse_cover('{"cover": [0]}')
