# instance_io.py

import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from basis_reconf.errors import InputError
from basis_reconf.hardness_gadgets import GadgetInstance, SetCoverInstance
from basis_reconf.matroids import (
    Bases, Block, DirectSum, DualMatroid, Edge, ElementId, GraphicMatroid, MatroidSpec, OracleMatroid,
    PartitionMatroid, UniformMatroid, check_feasible, sorted_elements,
)
from basis_reconf.reconfig_engine import Move, ReconfigSequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemInstance:
    """A tuple of matroids with a feasible source and target sequence."""

    matroids: Tuple[MatroidSpec, ...]
    source: Bases
    target: Bases

    @classmethod
    def validated(cls, matroids: Sequence[MatroidSpec], source, target) -> 'ProblemInstance':
        matroids = tuple(matroids)
        return cls(matroids, check_feasible(matroids, source, "source"), check_feasible(matroids, target, "target"))

    @classmethod
    def from_gadget(cls, gadget: GadgetInstance) -> 'ProblemInstance':
        return cls(tuple(gadget.matroids), gadget.source, gadget.target)

    @property
    def k(self) -> int:
        return len(self.matroids)


# ==================== LABELS ====================

def _label(raw: Any, where: str) -> str:
    """Labels are strings in memory once loaded; JSON integers are accepted and stringified."""
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise InputError(f"{where}: element label {raw!r} must be a string or integer")
    return str(raw)


def _labels(raw: Any, where: str) -> List[str]:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list of element labels")
    return [_label(item, where) for item in raw]


def _int(raw: Any, where: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise InputError(f"{where}: expected an integer, got {raw!r}")
    return raw


def _field(obj: Dict, key: str, where: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def _list_field(obj: Dict, key: str, where: str) -> List:
    value = _field(obj, key, where)
    if not isinstance(value, list):
        raise InputError(f"{where}: {key!r} must be a list, got {type(value).__name__}")
    return value


# ==================== MATROID SPECS ====================

def spec_from_json(obj: Dict, where: str = "matroid") -> MatroidSpec:
    kind = _field(obj, "type", where)
    try:
        if kind == "uniform":
            elements = _labels(_field(obj, "elements", where), where)
            if len(set(elements)) != len(elements):
                raise InputError("duplicate element label")
            return UniformMatroid(frozenset(elements), _int(_field(obj, "rank", where), where))
        if kind == "partition":
            blocks = []
            for index, block in enumerate(_list_field(obj, "blocks", where)):
                block_where = f"{where}.blocks[{index}]"
                elements = _labels(_field(block, "elements", block_where), block_where)
                if len(set(elements)) != len(elements):
                    raise InputError("duplicate element label")
                blocks.append(Block(frozenset(elements), _int(_field(block, "rank", block_where), block_where)))
            return PartitionMatroid(tuple(blocks))
        if kind == "graphic":
            edges = []
            for index, edge in enumerate(_list_field(obj, "edges", where)):
                if not isinstance(edge, list) or len(edge) != 3:
                    raise InputError(f"edge {index} must be [u, v, label]")
                u, v, label = edge
                edges.append(Edge(_int(u, where), _int(v, where), _label(label, where)))
            return GraphicMatroid(_int(_field(obj, "vertices", where), where), tuple(edges))
        if kind == "dual":
            return DualMatroid(spec_from_json(_field(obj, "inner", where), f"{where}.inner"))
        if kind == "direct_sum":
            parts = _list_field(obj, "parts", where)
            return DirectSum(tuple(spec_from_json(part, f"{where}.parts[{i}]") for i, part in enumerate(parts)))
    except InputError as e:
        if str(e).startswith(where):
            raise
        raise InputError(f"{where}: {e}", index=e.index) from e
    raise InputError(f"{where}: unknown matroid type {kind!r}")


def spec_to_json(spec: MatroidSpec) -> Dict:
    if isinstance(spec, UniformMatroid):
        return {"type": "uniform", "elements": _dump_labels(spec.elements), "rank": spec.rank}
    if isinstance(spec, PartitionMatroid):
        return {"type": "partition",
                "blocks": [{"elements": _dump_labels(b.elements), "rank": b.rank} for b in spec.blocks]}
    if isinstance(spec, GraphicMatroid):
        return {"type": "graphic", "vertices": spec.vertex_count,
                "edges": [[e.u, e.v, str(e.label)] for e in spec.edges]}
    if isinstance(spec, DualMatroid):
        return {"type": "dual", "inner": spec_to_json(spec.inner)}
    if isinstance(spec, DirectSum):
        return {"type": "direct_sum", "parts": [spec_to_json(part) for part in spec.parts]}
    if isinstance(spec, OracleMatroid):
        raise InputError("oracle matroids cannot be serialised")
    raise InputError(f"unsupported matroid spec {type(spec).__name__}")


def _dump_labels(elements: Iterable[ElementId]) -> List[str]:
    return [str(e) for e in sorted_elements(elements)]


# ==================== PROBLEM INSTANCES ====================

def read_text(path: str) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def parse_json(text: str, what: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{what} is not valid JSON (line {e.lineno}, column {e.colno}): {e.msg}") from e


def _sequence(raw: Any, where: str) -> List[List[str]]:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list of bases")
    sequence = []
    for index, basis in enumerate(raw):
        labels = _labels(basis, f"{where}[{index}]")
        if len(set(labels)) != len(labels):
            raise InputError(f"{where} basis {index} lists an element twice", index=index)
        sequence.append(labels)
    return sequence


def instance_from_json(obj: Dict) -> ProblemInstance:
    raw_matroids = _field(obj, "matroids", "instance")
    if not isinstance(raw_matroids, list):
        raise InputError("instance: 'matroids' must be a list")
    matroids = [spec_from_json(raw, f"matroids[{i}]") for i, raw in enumerate(raw_matroids)]
    source = _sequence(_field(obj, "source", "instance"), "source")
    target = _sequence(_field(obj, "target", "instance"), "target")
    return ProblemInstance.validated(matroids, source, target)


def instance_to_json(instance: ProblemInstance) -> Dict:
    return {
        "matroids": [spec_to_json(spec) for spec in instance.matroids],
        "source": [_dump_labels(basis) for basis in instance.source],
        "target": [_dump_labels(basis) for basis in instance.target],
    }


def parse_instance(text: str) -> ProblemInstance:
    return instance_from_json(parse_json(text, "instance"))


def load_instance(path: str = "-") -> ProblemInstance:
    """Read and validate an instance from a path, or stdin for '-'."""
    instance = parse_instance(read_text(path))
    logger.debug(f"Loaded instance with k={instance.k} from {path}")
    return instance


def save_instance(instance: ProblemInstance) -> str:
    return json.dumps(instance_to_json(instance), indent=2, sort_keys=True) + "\n"


# ==================== MOVES ====================

def dump_moves(sequence: Iterable[Move]) -> str:
    """JSON lines, one move per line, steps numbered from 1."""
    lines = []
    for step, move in enumerate(sequence, 1):
        lines.append(json.dumps({"step": step, "matroid": move.matroid_index,
                                 "remove": str(move.remove), "add": str(move.add)}))
    return "".join(line + "\n" for line in lines)


def parse_moves(text: str) -> ReconfigSequence:
    moves = []
    for number, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        record = parse_json(line, f"move line {number}")
        where = f"move line {number}"
        moves.append(Move(_int(_field(record, "matroid", where), where),
                          _label(_field(record, "remove", where), where),
                          _label(_field(record, "add", where), where)))
    return ReconfigSequence(tuple(moves))


# ==================== SET COVER ====================

def set_cover_from_json(obj: Dict) -> SetCoverInstance:
    universe = _labels(_field(obj, "universe", "set cover"), "universe")
    raw_sets = _field(obj, "sets", "set cover")
    if not isinstance(raw_sets, list):
        raise InputError("set cover: 'sets' must be a list")
    family = [frozenset(_labels(members, f"sets[{i}]")) for i, members in enumerate(raw_sets)]
    return SetCoverInstance(tuple(universe), tuple(family))


def set_cover_to_json(sc: SetCoverInstance) -> Dict:
    return {"universe": [str(u) for u in sc.universe],
            "sets": [_dump_labels(members) for members in sc.family]}


def parse_set_cover(text: str) -> SetCoverInstance:
    return set_cover_from_json(parse_json(text, "set cover"))


def parse_cover(text: str) -> List[int]:
    raw = parse_json(text, "cover")
    if not isinstance(raw, list):
        raise InputError("cover must be a JSON array of family indices")
    return [_int(item, "cover") for item in raw]
