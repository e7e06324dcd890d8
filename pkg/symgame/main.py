from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from symgame.documents import (
    canonical_json,
    game_to_document,
    load_game,
    load_generators,
    report_to_document,
)
from symgame.errors import (
    DocumentFormatError,
    GameValidationError,
    PreconditionError,
    SearchBudgetExceeded,
)
from symgame.services.classifier import class_name, classify
from symgame.services.game import pure_nash_equilibria
from symgame.services.matchings import enumerate_matchings, equal_payoff_matchings, format_matching
from symgame.services.morphisms import automorphism_group, format_bijection, isomorphisms_between
from symgame.services.param_games import (
    CellPartition,
    generic_assignment,
    hasse,
    instantiate,
    orbit_partition,
    parse_assignment,
    to_dot,
)
from symgame.services.registry import FAMILIES, get_family
from symgame.settings import Settings, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_FORMAT = 2
EXIT_VALIDATION = 3
EXIT_PRECONDITION = 4


def _yes_no(value: bool | None) -> str:
    if value is None:
        return "n/a"
    return "yes" if value else "no"


def _emit_json(document: Any) -> None:
    print(canonical_json(document))


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    report = classify(load_game(args.path), settings=settings)
    if args.json:
        _emit_json(report_to_document(report))
        return EXIT_OK
    print(class_name(report))
    print(
        f"symmetric: {_yes_no(report.symmetric)}, n-transitive: {_yes_no(report.n_transitive)}, "
        f"standard: {_yes_no(report.standard)}, fully: {_yes_no(report.fully)}"
    )
    print(
        f"automorphisms: {report.aut_order} "
        f"(player image {report.player_image_order}, stabiliser {report.stabiliser_order})"
    )
    print(f"certified by: {report.certified_by}")
    if report.witness_matching is not None:
        print(f"witness matching: {format_matching(report.witness_matching)}")
    return EXIT_OK


def cmd_aut(args: argparse.Namespace, settings: Settings) -> int:
    group = automorphism_group(load_game(args.path), settings=settings)
    lines = [format_bijection(element) for element in group.elements]
    if args.json:
        _emit_json({"order": group.order, "automorphisms": lines})
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_iso(args: argparse.Namespace, settings: Settings) -> int:
    found = isomorphisms_between(load_game(args.path1), load_game(args.path2), settings=settings)
    lines = [format_bijection(g) for g in found]
    if args.json:
        _emit_json({"isomorphic": bool(found), "isomorphisms": lines})
    elif found:
        print("\n".join(lines))
    else:
        print("not isomorphic")
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_nash(args: argparse.Namespace, settings: Settings) -> int:
    game = load_game(args.path)
    lines = [game.shape.format_profile(profile) for profile in pure_nash_equilibria(game)]
    if args.json:
        _emit_json({"equilibria": lines})
    elif lines:
        print("\n".join(lines))
    return EXIT_OK


def cmd_matchings(args: argparse.Namespace, settings: Settings) -> int:
    game = load_game(args.path)
    found = equal_payoff_matchings(game) if args.equal_payoff else list(enumerate_matchings(game.shape))
    lines = [format_matching(matching) for matching in found]
    if args.json:
        _emit_json({"matchings": lines})
    elif lines:
        print("\n".join(lines))
    return EXIT_OK


def _resolve_partition(source: str, set_name: str | None) -> CellPartition:
    if source in FAMILIES:
        return get_family(source).partition(set_name)
    shape, gens = load_generators(source)
    return orbit_partition(shape, gens)


def cmd_paramgame(args: argparse.Namespace, settings: Settings) -> int:
    partition = _resolve_partition(args.source, args.set_name)
    assignment = parse_assignment(args.params) if args.params else generic_assignment(partition)
    text = canonical_json(game_to_document(instantiate(partition, assignment)))
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        logger.info("paramgame_written path=%s parameters=%s", args.output, partition.num_classes)
    else:
        print(text)
    return EXIT_OK


def _hasse_inputs(source: str) -> list[tuple[str, CellPartition]]:
    if source in FAMILIES:
        return get_family(source).partitions()
    directory = Path(source)
    if not directory.is_dir():
        raise DocumentFormatError(
            f"Unknown family or directory: {source}. Options: {list(FAMILIES.keys())}"
        )
    inputs = []
    for path in sorted(directory.glob("*.json")):
        shape, gens = load_generators(path)
        inputs.append((path.stem, orbit_partition(shape, gens)))
    if not inputs:
        raise DocumentFormatError(f"{source} contains no generator documents (*.json).")
    return inputs


def cmd_hasse(args: argparse.Namespace, settings: Settings) -> int:
    diagram = hasse(_hasse_inputs(args.source))
    if args.json:
        _emit_json(
            {
                "nodes": [
                    {"name": node.name, "members": list(node.members), "height": node.height}
                    for node in diagram.nodes
                ],
                "edges": [list(edge) for edge in diagram.edges],
            }
        )
    else:
        sys.stdout.write(to_dot(diagram, name=Path(args.source).name))
    print(f"nodes={len(diagram.nodes)} edges={len(diagram.edges)}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable JSON document")

    parser = argparse.ArgumentParser(
        prog="symgame",
        description="Symmetry analysis of finite normal-form games with exact payoffs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    classify_parser = commands.add_parser("classify", parents=[common], help="classify a game's symmetry")
    classify_parser.add_argument("path")
    classify_parser.set_defaults(handler=cmd_classify)

    aut_parser = commands.add_parser("aut", parents=[common], help="list the automorphism group")
    aut_parser.add_argument("path")
    aut_parser.set_defaults(handler=cmd_aut)

    iso_parser = commands.add_parser("iso", parents=[common], help="list isomorphisms between two games")
    iso_parser.add_argument("path1")
    iso_parser.add_argument("path2")
    iso_parser.set_defaults(handler=cmd_iso)

    nash_parser = commands.add_parser("nash", parents=[common], help="list pure strategy Nash equilibria")
    nash_parser.add_argument("path")
    nash_parser.set_defaults(handler=cmd_nash)

    matchings_parser = commands.add_parser("matchings", parents=[common], help="list matchings")
    matchings_parser.add_argument("path")
    matchings_parser.add_argument(
        "--equal-payoff",
        action="store_true",
        help="only matchings whose rows pay every player the same",
    )
    matchings_parser.set_defaults(handler=cmd_matchings)

    paramgame_parser = commands.add_parser(
        "paramgame", parents=[common], help="instantiate a parameterised game"
    )
    paramgame_parser.add_argument("source", help="family name or generator document path")
    paramgame_parser.add_argument("--set", dest="set_name", help="generator set within a family")
    paramgame_parser.add_argument(
        "--params",
        help="parameter values such as α=1,β=2 (default: 1, 2, 3, ... in parameter order)",
    )
    paramgame_parser.add_argument("--output", help="write the game document here instead of stdout")
    paramgame_parser.set_defaults(handler=cmd_paramgame)

    hasse_parser = commands.add_parser("hasse", parents=[common], help="Hasse diagram of a family as DOT")
    hasse_parser.add_argument("source", help="family name or directory of generator documents")
    hasse_parser.set_defaults(handler=cmd_hasse)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    settings = load_settings()
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args, settings)
    except DocumentFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except GameValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PreconditionError, SearchBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception:
        logger.exception("command_unhandled command=%s", args.command)
        raise


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
