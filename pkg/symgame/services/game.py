from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from symgame.errors import (
    DocumentFormatError,
    GameValidationError,
    InvalidPlayerError,
    InvalidProfileError,
)

# One strategy index per player; entry i lies in range(|A_i|).
Profile = tuple[int, ...]
Payoff = Fraction

# Largest decimal exponent accepted in a payoff string, zero aside.
MAX_PAYOFF_EXPONENT = 1000


# Characters that end a bare label in profile, matching and bijection text.
_LABEL_DELIMITERS = frozenset(',;(){}"\\')


def format_label(label: str) -> str:
    """A strategy label as written in text forms, double-quoted when it would not read back bare."""
    if label and label == label.strip() and "->" not in label and not _LABEL_DELIMITERS.intersection(label):
        return label
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


class LabelScanner:
    """Cursor over profile, matching and bijection text.

    Whitespace between tokens is skipped. A bare label runs up to the next
    delimiter or ``->``; a quoted label reads ``\\"`` and ``\\\\`` as escapes.
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def _skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self._skip_space()
        return self.pos >= len(self.text)

    def accept(self, literal: str) -> bool:
        self._skip_space()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str, what: str) -> None:
        if not self.accept(literal):
            raise DocumentFormatError(
                f"{what}: expected {literal!r} at position {self.pos} of {self.text!r}."
            )

    def expect_end(self, what: str) -> None:
        if not self.at_end():
            raise DocumentFormatError(
                f"{what}: unexpected text {self.text[self.pos:]!r} at the end of {self.text!r}."
            )

    def number(self, what: str) -> int:
        self._skip_space()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            raise DocumentFormatError(f"{what}: expected a number at position {start} of {self.text!r}.")
        return int(self.text[start:self.pos])

    def label(self, what: str) -> str:
        if self.accept('"'):
            chars = []
            while self.pos < len(self.text):
                char = self.text[self.pos]
                self.pos += 1
                if char == '"':
                    return "".join(chars)
                if char == "\\" and self.pos < len(self.text):
                    char = self.text[self.pos]
                    self.pos += 1
                chars.append(char)
            raise DocumentFormatError(f"{what}: unterminated quoted label in {self.text!r}.")
        start = self.pos
        text = self.text
        while self.pos < len(text) and text[self.pos] not in _LABEL_DELIMITERS and not text.startswith("->", self.pos):
            self.pos += 1
        label = text[start:self.pos].rstrip()
        if not label:
            raise DocumentFormatError(f"{what}: expected a label at position {start} of {text!r}.")
        return label


@dataclass(frozen=True, slots=True)
class GameShape:
    """Players and their strategy labels, without payoffs.

    Profiles are indexed mixed-radix with player 1 as the most significant
    digit, which is the order the payoff tables are printed in: player 1
    picks the matrix and player n the column.
    """

    strategies: tuple[tuple[str, ...], ...]
    _weights: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        strategies = tuple(tuple(str(label) for label in labels) for labels in self.strategies)
        object.__setattr__(self, "strategies", strategies)
        if len(strategies) < 2:
            raise GameValidationError(
                f"players: a game needs at least 2 players, got {len(strategies)}."
            )
        for number, labels in enumerate(strategies, start=1):
            if not labels:
                raise GameValidationError(f"strategies[{number - 1}]: player {number} has no strategies.")
            if len(set(labels)) != len(labels):
                raise GameValidationError(
                    f"strategies[{number - 1}]: player {number} repeats a strategy label: {list(labels)}."
                )

        weights = []
        weight = 1
        for count in reversed(self.counts):
            weights.append(weight)
            weight *= count
        object.__setattr__(self, "_weights", tuple(reversed(weights)))

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(labels) for labels in self.strategies)

    @property
    def num_profiles(self) -> int:
        return math.prod(self.counts)

    @property
    def num_cells(self) -> int:
        return self.n_players * self.num_profiles

    @property
    def weights(self) -> tuple[int, ...]:
        """Place value of each player's strategy index in the flat profile index."""
        return self._weights

    @property
    def is_m_strategy(self) -> bool:
        return len(set(self.counts)) == 1

    @property
    def m(self) -> int | None:
        return self.counts[0] if self.is_m_strategy else None

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*(range(count) for count in self.counts))

    def profile_index(self, profile: Sequence[int]) -> int:
        if len(profile) != self.n_players:
            raise InvalidProfileError(
                f"Profile {tuple(profile)} has {len(profile)} entries; expected {self.n_players}."
            )
        index = 0
        for player, (choice, count, weight) in enumerate(zip(profile, self.counts, self._weights)):
            if not 0 <= choice < count:
                raise InvalidProfileError(
                    f"Profile {tuple(profile)}: player {player + 1} strategy index {choice} "
                    f"is outside [0, {count})."
                )
            index += choice * weight
        return index

    def profile_of_index(self, index: int) -> Profile:
        if not 0 <= index < self.num_profiles:
            raise InvalidProfileError(
                f"Profile index {index} is outside [0, {self.num_profiles})."
            )
        digits = []
        for weight, count in zip(self._weights, self.counts):
            digits.append((index // weight) % count)
        return tuple(digits)

    def strategy_index(self, player: int, label: str) -> int:
        try:
            return self.strategies[player].index(label)
        except ValueError:
            raise InvalidProfileError(
                f"Unknown strategy {label!r} for player {player + 1}. "
                f"Options: {list(self.strategies[player])}"
            ) from None

    def format_profile(self, profile: Sequence[int]) -> str:
        labels = (format_label(self.strategies[i][choice]) for i, choice in enumerate(profile))
        return "(" + ",".join(labels) + ")"

    def parse_profile(self, text: str) -> Profile:
        scanner = LabelScanner(text)
        profile = self.read_profile(scanner)
        scanner.expect_end("Profile")
        return profile

    def read_profile(self, scanner: LabelScanner) -> Profile:
        if not scanner.accept("("):
            raise DocumentFormatError(f"Profile in {scanner.text!r} must be written as (label,...,label).")
        labels = [scanner.label("Profile")]
        while scanner.accept(","):
            labels.append(scanner.label("Profile"))
        scanner.expect(")", "Profile")
        if len(labels) != self.n_players:
            raise InvalidProfileError(
                f"Profile in {scanner.text!r} has {len(labels)} entries; expected {self.n_players}."
            )
        return tuple(self.strategy_index(i, label) for i, label in enumerate(labels))


@dataclass(frozen=True, slots=True)
class Game:
    shape: GameShape
    payoffs: tuple[tuple[Payoff, ...], ...]

    def __post_init__(self) -> None:
        n = self.shape.n_players
        if len(self.payoffs) != self.shape.num_profiles:
            raise GameValidationError(
                f"payoffs: expected {self.shape.num_profiles} profiles, got {len(self.payoffs)}."
            )
        rows = []
        for index, row in enumerate(self.payoffs):
            if len(row) != n:
                raise GameValidationError(
                    f"payoffs[{index}]: expected {n} payoffs, got {len(row)}."
                )
            rows.append(tuple(to_payoff(value) for value in row))
        object.__setattr__(self, "payoffs", tuple(rows))

    @classmethod
    def from_table(
        cls,
        strategies: Iterable[Iterable[str]],
        payoffs: Iterable[Iterable[object]],
    ) -> Game:
        shape = GameShape(tuple(tuple(labels) for labels in strategies))
        return cls(shape, tuple(tuple(row) for row in payoffs))

    @property
    def n_players(self) -> int:
        return self.shape.n_players

    @property
    def strategies(self) -> tuple[tuple[str, ...], ...]:
        return self.shape.strategies

    def u(self, player: int, profile: Sequence[int]) -> Payoff:
        """Payoff to the 0-based ``player``."""
        return self.payoffs[self.shape.profile_index(profile)][player]

    def vector(self, profile: Sequence[int]) -> tuple[Payoff, ...]:
        return self.payoffs[self.shape.profile_index(profile)]

    def profiles(self) -> Iterator[Profile]:
        return self.shape.profiles()


def to_payoff(value: object) -> Payoff:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentFormatError(
            f"Payoff {value!r} must be an integer or a decimal/fraction string."
        )
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            number = Decimal(text)
        except (InvalidOperation, ValueError, ZeroDivisionError):
            raise DocumentFormatError(f"Payoff {value!r} is not an exact number.") from None
        if not number.is_finite():
            raise DocumentFormatError(f"Payoff {value!r} is not finite.")
        if number and abs(number.adjusted()) > MAX_PAYOFF_EXPONENT:
            raise DocumentFormatError(
                f"Payoff {value!r} has a decimal exponent beyond ±{MAX_PAYOFF_EXPONENT}."
            )
        return Fraction(number)
    raise DocumentFormatError(f"Payoff {value!r} has unsupported type {type(value).__name__}.")


def profile_index(game: Game, profile: Sequence[int]) -> int:
    return game.shape.profile_index(profile)


def profile_of_index(game: Game, index: int) -> Profile:
    return game.shape.profile_of_index(index)


def payoff(game: Game, player: int, profile: Sequence[int]) -> Payoff:
    """u_player(profile) with ``player`` numbered 1..n."""
    if not 1 <= player <= game.n_players:
        raise InvalidPlayerError(f"Player {player} is outside [1, {game.n_players}].")
    return game.u(player - 1, profile)


def pure_nash_equilibria(game: Game) -> list[Profile]:
    """Profiles where no player gains from a unilateral deviation, in index order."""
    shape = game.shape
    equilibria: list[Profile] = []
    for index, profile in enumerate(shape.profiles()):
        values = game.payoffs[index]
        stable = True
        for player in range(shape.n_players):
            for alternative in range(shape.counts[player]):
                if alternative == profile[player]:
                    continue
                deviation = profile[:player] + (alternative,) + profile[player + 1:]
                if game.u(player, deviation) > values[player]:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            equilibria.append(profile)
    return equilibria


def constant_game(strategies: Iterable[Iterable[str]], value: object) -> Game:
    shape = GameShape(tuple(tuple(labels) for labels in strategies))
    row = tuple(to_payoff(value) for _ in range(shape.n_players))
    return Game(shape, tuple(row for _ in range(shape.num_profiles)))


def utilities_identical(game: Game) -> bool:
    return all(len(set(row)) == 1 for row in game.payoffs)
