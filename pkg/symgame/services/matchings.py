from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from symgame.errors import DocumentFormatError, InvalidPlayerError, PreconditionError, ShapeMismatchError
from symgame.services.game import Game, GameShape, LabelScanner, Profile
from symgame.services.morphisms import (
    BijectionGroup,
    GameBijection,
    is_player_transitive,
)
from symgame.services.permutations import PermutationGroup, PlayerPermutation


def is_matching(rows: Iterable[Sequence[int]], shape: GameShape) -> bool:
    """True when every strategy of every player occurs in exactly one row."""
    profiles = [tuple(row) for row in rows]
    for profile in profiles:
        shape.profile_index(profile)
    for i, count in enumerate(shape.counts):
        if sorted(profile[i] for profile in profiles) != list(range(count)):
            return False
    return True


@dataclass(frozen=True, slots=True)
class Matching:
    shape: GameShape
    rows: tuple[Profile, ...]

    def __post_init__(self) -> None:
        rows = tuple(sorted(tuple(row) for row in self.rows))
        object.__setattr__(self, "rows", rows)
        if not is_matching(rows, self.shape):
            raise PreconditionError(
                f"Rows {format_rows(self.shape, rows)} are not a matching: "
                "some strategy is missing or repeated."
            )

    @property
    def size(self) -> int:
        return len(self.rows)

    def __str__(self) -> str:
        return format_matching(self)


def format_rows(shape: GameShape, rows: Iterable[Sequence[int]]) -> str:
    return "{" + ",".join(shape.format_profile(row) for row in rows) + "}"


def format_matching(matching: Matching) -> str:
    return format_rows(matching.shape, matching.rows)


def parse_matching(text: str, shape: GameShape) -> Matching:
    scanner = LabelScanner(text)
    if not scanner.accept("{"):
        raise DocumentFormatError(f"Matching {text!r} must be written as {{(a,c),(b,d)}}.")
    if scanner.accept("}"):
        raise DocumentFormatError(f"Matching {text!r} has no rows.")
    rows = [shape.read_profile(scanner)]
    while scanner.accept(","):
        rows.append(shape.read_profile(scanner))
    scanner.expect("}", "Matching")
    scanner.expect_end("Matching")
    return Matching(shape, tuple(rows))


def _induced(matching: Matching, i: int, j: int) -> tuple[int, ...]:
    mapping = [0] * matching.shape.counts[i]
    for row in matching.rows:
        mapping[row[i]] = row[j]
    return tuple(mapping)


def induced_strategy_bijection(matching: Matching, i: int, j: int) -> tuple[int, ...]:
    """M_ij for players numbered 1..n, as an index map A_i -> A_j."""
    n = matching.shape.n_players
    for player in (i, j):
        if not 1 <= player <= n:
            raise InvalidPlayerError(f"Player {player} is outside [1, {n}].")
    return _induced(matching, i - 1, j - 1)


def induced_game_bijection(matching: Matching, pi: PlayerPermutation) -> GameBijection:
    """M_π = (π; (M_{i,π(i)})_i)."""
    shape = matching.shape
    return GameBijection(
        source=shape,
        target=shape,
        player_map=pi,
        strategy_maps=tuple(_induced(matching, i, pi(i)) for i in range(shape.n_players)),
    )


def induced_group(matching: Matching, group: PermutationGroup) -> BijectionGroup:
    """M_T for a permutation group T; a group because π -> M_π is a homomorphism."""
    elements = sorted(
        (induced_game_bijection(matching, pi) for pi in group.elements),
        key=lambda g: g.sort_key,
    )
    return BijectionGroup(
        shape=matching.shape,
        elements=tuple(elements),
        generators=tuple(induced_game_bijection(matching, pi) for pi in group.generators),
    )


def shared_label_form(game: Game, matching: Matching) -> Game:
    """The isomorphic game where every player uses player 1's labels and each row of M shares one."""
    shape = game.shape
    if matching.shape != shape:
        raise ShapeMismatchError("Matching and game have different shapes.")
    shared = GameShape(tuple(shape.strategies[0] for _ in range(shape.n_players)))
    relabel = [[0] * count for count in shape.counts]
    for row in matching.rows:
        for i, choice in enumerate(row):
            relabel[i][choice] = row[0]
    rows: list[tuple | None] = [None] * shape.num_profiles
    for index, profile in enumerate(shape.profiles()):
        moved = tuple(relabel[i][choice] for i, choice in enumerate(profile))
        rows[shared.profile_index(moved)] = game.payoffs[index]
    return Game(shared, tuple(rows))


def is_strategy_trivial(group: BijectionGroup) -> bool:
    for element in group.elements:
        for i, mapping in enumerate(element.strategy_maps):
            if element.player_map(i) == i and mapping != tuple(range(len(mapping))):
                return False
    return True


def matching_from_group(group: BijectionGroup) -> Matching:
    """Rebuild the matching M with {M_π} = G, using player 1 as the base player."""
    if not is_player_transitive(group):
        raise PreconditionError("Group is not player transitive; no matching induces it.")
    if not is_strategy_trivial(group):
        raise PreconditionError("Group is not strategy trivial; no matching induces it.")
    shape = group.shape
    to_player: dict[int, tuple[int, ...]] = {}
    for element in group.elements:
        to_player.setdefault(element.player_map(0), element.strategy_maps[0])
    rows = [
        tuple(to_player[j][a] for j in range(shape.n_players))
        for a in range(shape.counts[0])
    ]
    return Matching(shape, tuple(rows))


def _require_m_strategy(shape: GameShape) -> int:
    if not shape.is_m_strategy:
        raise PreconditionError(
            f"Matchings need every player to have the same number of strategies, got {list(shape.counts)}."
        )
    return shape.counts[0]


def count_matchings(n: int, m: int) -> int:
    return math.factorial(m) ** (n - 1)


def enumerate_matchings(shape: GameShape) -> Iterator[Matching]:
    """Player 1's strategies fixed in order; one bijection A_1 -> A_j per later player."""
    m = _require_m_strategy(shape)
    for maps in itertools.product(itertools.permutations(range(m)), repeat=shape.n_players - 1):
        rows = tuple((k,) + tuple(mapping[k] for mapping in maps) for k in range(m))
        yield Matching(shape, rows)


def equal_payoff_matchings(game: Game) -> list[Matching]:
    """Matchings in which every row pays all players the same amount."""
    shape = game.shape
    m = _require_m_strategy(shape)
    n = shape.n_players
    by_first: list[list[Profile]] = [[] for _ in range(m)]
    for index, profile in enumerate(shape.profiles()):
        if len(set(game.payoffs[index])) == 1:
            by_first[profile[0]].append(profile)

    found: list[Matching] = []
    rows: list[Profile] = []
    used = [set() for _ in range(n)]

    def extend(first: int) -> None:
        if first == m:
            found.append(Matching(shape, tuple(rows)))
            return
        for profile in by_first[first]:
            if any(profile[j] in used[j] for j in range(1, n)):
                continue
            rows.append(profile)
            for j in range(1, n):
                used[j].add(profile[j])
            extend(first + 1)
            for j in range(1, n):
                used[j].discard(profile[j])
            rows.pop()

    extend(0)
    return found
