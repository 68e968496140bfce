# cli.py

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

from basis_reconf import config
from basis_reconf.bench import all_agree, run_corpus, summarize
from basis_reconf.brute_oracle import BruteOracle
from basis_reconf.errors import InputError, ReconfError
from basis_reconf.exchange_graph import build_union, to_dot
from basis_reconf.hardness_gadgets import (
    build_gadget, cover_to_sequence, exact_set_cover, sequence_to_cover,
)
from basis_reconf.instance_io import (
    ProblemInstance, dump_moves, instance_to_json, load_instance, parse_cover, parse_moves, parse_set_cover,
    read_text, save_instance,
)
from basis_reconf.matroids import sorted_elements
from basis_reconf.random_instances import PROFILES, InstanceGenerator
from basis_reconf.reconfig_engine import certificate, verify, solve_with_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2


def _write(args: argparse.Namespace, text: str) -> None:
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _labels(elements) -> List[str]:
    return [str(e) for e in sorted_elements(elements)]


def _no_answer(instance: ProblemInstance) -> str:
    cert = certificate(instance.matroids, instance.source, instance.target)
    payload = {
        'coloops': _labels(cert.coloops),
        'source': [_labels(part) for part in cert.source_partition],
        'target': [_labels(part) for part in cert.target_partition],
    }
    return "NO\n" + _json(payload)


# ==================== MAIN SUBCOMMANDS ====================

def cmd_decide(args) -> int:
    instance = load_instance(args.input)
    cert = certificate(instance.matroids, instance.source, instance.target)
    if cert.reconfigurable:
        _write(args, "YES\n")
        return EXIT_OK
    _write(args, _no_answer(instance))
    return EXIT_NO


def cmd_solve(args) -> int:
    instance = load_instance(args.input)
    sequence, trace = solve_with_trace(instance.matroids, instance.source, instance.target)
    if sequence is None:
        _write(args, _no_answer(instance))
        return EXIT_NO
    logger.info(f"Solved with {len(sequence)} moves over {len(trace)} walks")
    _write(args, dump_moves(sequence))
    return EXIT_OK


def cmd_verify(args) -> int:
    if (args.input in (None, "-")) and (args.moves in (None, "-")):
        raise InputError("verify needs the instance or the moves from a file; both cannot come from stdin")
    instance = load_instance(args.input)
    moves = parse_moves(read_text(args.moves))
    report = verify(instance.matroids, instance.source, instance.target, moves)
    _write(args, _json(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_NO


def cmd_coloops(args) -> int:
    instance = load_instance(args.input)
    cert = certificate(instance.matroids, instance.source, instance.target)
    _write(args, json.dumps(_labels(cert.coloops)) + "\n")
    return EXIT_OK


def cmd_graph(args) -> int:
    instance = load_instance(args.input)
    _write(args, to_dot(build_union(instance.matroids, instance.source)))
    return EXIT_OK


# ==================== BRUTE FORCE ====================

def _oracle(args) -> BruteOracle:
    return BruteOracle(state_cap=args.cap_states)


def cmd_brute_solve(args) -> int:
    instance = load_instance(args.input)
    found = _oracle(args).bfs_solve(instance.matroids, instance.source, instance.target)
    if found is None:
        _write(args, "NO\n")
        return EXIT_NO
    dist, sequence = found
    logger.info(f"Shortest reconfiguration: {dist} moves")
    _write(args, dump_moves(sequence))
    return EXIT_OK


def cmd_brute_coloops(args) -> int:
    instance = load_instance(args.input)
    found = _oracle(args).brute_coloops(instance.matroids, instance.source)
    _write(args, json.dumps(_labels(found)) + "\n")
    return EXIT_OK


# ==================== HARDNESS GADGETS ====================

def _gadget(args):
    sc = parse_set_cover(read_text(args.input))
    if sc.n < config.GADGET_MIN_UNIVERSE:
        logger.warning(f"⚠️  universe has {sc.n} elements; the cover/length equivalence needs "
                       f"n >= {config.GADGET_MIN_UNIVERSE}")
    return build_gadget(sc)


def cmd_gen_gadget(args) -> int:
    gadget = _gadget(args)
    payload = instance_to_json(ProblemInstance.from_gadget(gadget))
    if args.report:
        best = exact_set_cover(gadget.set_cover)
        payload['report'] = {
            'n': gadget.set_cover.n,
            'm': gadget.set_cover.m,
            'L': gadget.L,
            'ground': [len(spec.ground) for spec in gadget.matroids],
            'min_cover': best,
            'threshold': gadget.length_threshold(len(best)) if best is not None else None,
        }
    _write(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_cover2seq(args) -> int:
    gadget = _gadget(args)
    sequence = cover_to_sequence(gadget, parse_cover(args.cover))
    _write(args, dump_moves(sequence))
    return EXIT_OK


def cmd_seq2cover(args) -> int:
    if args.input in (None, "-") and args.moves in (None, "-"):
        raise InputError("seq2cover needs the set cover or the moves from a file; both cannot come from stdin")
    gadget = _gadget(args)
    moves = parse_moves(read_text(args.moves))
    report = verify(gadget.matroids, gadget.source, gadget.target, moves)
    if not report.ok:
        _write(args, _json(report.to_dict()))
        return EXIT_NO
    _write(args, json.dumps(sequence_to_cover(gadget, moves)) + "\n")
    return EXIT_OK


# ==================== GENERATORS ====================

def cmd_random(args) -> int:
    generator = InstanceGenerator(args.seed)
    instance = generator.generate(args.k, args.profile, args.size, yes_by_walk=args.yes_by_walk)
    _write(args, save_instance(instance))
    return EXIT_OK


def cmd_bench(args) -> int:
    df = run_corpus(args.count, seed=args.seed, max_size=args.size, state_cap=args.cap_states)
    summary = summarize(df)
    _write(args, _json(summary))
    return EXIT_OK if all_agree(summary) else EXIT_NO


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    'decide': cmd_decide,
    'solve': cmd_solve,
    'verify': cmd_verify,
    'coloops': cmd_coloops,
    'graph': cmd_graph,
    'brute-solve': cmd_brute_solve,
    'brute-coloops': cmd_brute_coloops,
    'gen-gadget': cmd_gen_gadget,
    'cover2seq': cmd_cover2seq,
    'seq2cover': cmd_seq2cover,
    'random': cmd_random,
    'bench': cmd_bench,
}

HELP = {
    'decide': "print YES, or NO with the coloop certificate",
    'solve': "print a reconfiguration sequence as JSON lines",
    'verify': "replay a move list against an instance",
    'coloops': "print the coloops of the matroid union",
    'graph': "print the union exchange graph as DOT",
    'brute-solve': "shortest sequence by breadth-first search (small instances)",
    'brute-coloops': "coloops by enumerating union bases (small instances)",
    'gen-gadget': "build the two-matroid instance for a Set Cover input",
    'cover2seq': "turn a cover into a gadget reconfiguration sequence",
    'seq2cover': "extract a cover from a verified gadget sequence",
    'random': "generate a seeded random instance",
    'bench': "cross-check solver and brute force on a seeded corpus",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", default="-", help="input JSON file (default: stdin)")
    common.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(prog="reconf", description="Reconfiguration of disjoint matroid basis sequences")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    sub = {name: subparsers.add_parser(name, parents=[common], help=HELP[name]) for name in COMMANDS}

    for name in ('verify', 'seq2cover'):
        sub[name].add_argument("--moves", default="-", help="move list, JSON lines (default: stdin)")
    for name in ('brute-solve', 'brute-coloops', 'bench'):
        sub[name].add_argument("--cap-states", type=int, default=None, help="state-space cap for brute force")
    sub['gen-gadget'].add_argument("--report", action="store_true", help="add minimum cover and length threshold")
    sub['cover2seq'].add_argument("--cover", required=True, help="JSON array of family indices, e.g. [0,2]")

    sub['random'].add_argument("--seed", type=int, default=0)
    sub['random'].add_argument("--k", type=int, default=2, help="number of matroids")
    sub['random'].add_argument("--profile", choices=PROFILES, default="uniform")
    sub['random'].add_argument("--size", type=int, default=8, help="number of elements")
    sub['random'].add_argument("--yes-by-walk", action="store_true", help="reach the target by a random legal walk")

    sub['bench'].add_argument("--seed", type=int, default=0)
    sub['bench'].add_argument("--count", type=int, default=200, help="number of instances")
    sub['bench'].add_argument("--size", type=int, default=10, help="largest ground set")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    config.configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except ReconfError as e:
        logger.debug("Command failed", exc_info=True)
        print(f"reconf {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
