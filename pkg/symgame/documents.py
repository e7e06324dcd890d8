from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError

from symgame.errors import DocumentFormatError, GameValidationError
from symgame.services.classifier import ClassificationReport, class_name
from symgame.services.game import Game, GameShape
from symgame.services.matchings import format_matching
from symgame.services.morphisms import GameBijection, format_bijection, parse_bijection

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"


class GameDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    players: StrictInt
    strategies: list[list[StrictStr]]
    payoffs: list[list[StrictInt | StrictStr]]


class GeneratorDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    players: StrictInt
    strategies: list[list[StrictStr]]
    generators: list[StrictStr]


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error["loc"]) or "document"
        parts.append(f"{location}: {error['msg']}")
    return "; ".join(parts)


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentFormatError(f"Cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _check_players(players: int, strategies: list[list[str]]) -> None:
    if players != len(strategies):
        raise GameValidationError(
            f"players: declares {players} players but strategies lists {len(strategies)}."
        )


def parse_game_document(data: Any) -> Game:
    try:
        document = GameDocument.model_validate(data)
    except ValidationError as exc:
        raise DocumentFormatError(_validation_message(exc)) from exc
    _check_players(document.players, document.strategies)
    return Game.from_table(document.strategies, document.payoffs)


def load_game(path: str | Path) -> Game:
    return parse_game_document(_read_json(path))


def load_fixture(name: str) -> Game:
    return load_game(FIXTURES_DIR / f"{name}.json")


def parse_generator_document(data: Any) -> tuple[GameShape, list[GameBijection]]:
    try:
        document = GeneratorDocument.model_validate(data)
    except ValidationError as exc:
        raise DocumentFormatError(_validation_message(exc)) from exc
    _check_players(document.players, document.strategies)
    shape = GameShape(tuple(tuple(labels) for labels in document.strategies))
    return shape, [parse_bijection(text, shape) for text in document.generators]


def load_generators(path: str | Path) -> tuple[GameShape, list[GameBijection]]:
    return parse_generator_document(_read_json(path))


def payoff_to_json(value: Fraction) -> int | str:
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def game_to_document(game: Game) -> dict[str, Any]:
    return {
        "players": game.n_players,
        "strategies": [list(labels) for labels in game.strategies],
        "payoffs": [[payoff_to_json(value) for value in row] for row in game.payoffs],
    }


def canonical_json(document: Any) -> str:
    return json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dump_game(game: Game) -> str:
    return canonical_json(game_to_document(game))


def report_to_document(report: ClassificationReport) -> dict[str, Any]:
    return {
        "class": class_name(report),
        "symmetric": report.symmetric,
        "n_transitive": report.n_transitive,
        "standard": report.standard,
        "fully": report.fully,
        "only_transitive": report.only_transitive,
        "aut_order": report.aut_order,
        "player_image_order": report.player_image_order,
        "stabiliser_order": report.stabiliser_order,
        "certified_by": report.certified_by,
        "witness_matching": (
            format_matching(report.witness_matching) if report.witness_matching is not None else None
        ),
        "witness_subgroup": (
            [format_bijection(g) for g in report.witness_subgroup]
            if report.witness_subgroup is not None
            else None
        ),
    }
