from __future__ import annotations

import itertools
import logging
from collections import Counter, deque
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from time import perf_counter

from symgame.errors import DocumentFormatError, PreconditionError, ShapeMismatchError
from symgame.services.game import Game, GameShape, LabelScanner, Profile, format_label
from symgame.services.permutations import (
    PermutationGroup,
    PlayerPermutation,
    all_permutations,
    format_cycles,
    is_n_transitive,
    is_transitive,
    parse_cycles,
    perm_compose,
    perm_invert,
)
from symgame.settings import SearchBudget, Settings, load_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GameBijection:
    """A player bijection π plus strategy bijections τ_i: A_i -> B_π(i).

    ``strategy_maps[i][a]`` is the index, among the target strategies of
    player π(i), of the image of source strategy ``a`` of player i.
    """

    source: GameShape
    target: GameShape
    player_map: PlayerPermutation
    strategy_maps: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        maps = tuple(tuple(mapping) for mapping in self.strategy_maps)
        object.__setattr__(self, "strategy_maps", maps)
        n = self.source.n_players
        if self.target.n_players != n or self.player_map.degree != n or len(maps) != n:
            raise ShapeMismatchError(
                f"Bijection between {n}-player and {self.target.n_players}-player shapes "
                f"with a degree {self.player_map.degree} player map and {len(maps)} strategy maps."
            )
        for i, mapping in enumerate(maps):
            size = self.source.counts[i]
            target_size = self.target.counts[self.player_map(i)]
            if size != target_size:
                raise ShapeMismatchError(
                    f"Player {i + 1} has {size} strategies but its image player "
                    f"{self.player_map(i) + 1} has {target_size}."
                )
            if sorted(mapping) != list(range(size)):
                raise PreconditionError(
                    f"Strategy map of player {i + 1} is not a bijection: {list(mapping)}."
                )

    @property
    def sort_key(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        return self.player_map.image, self.strategy_maps

    @property
    def is_identity(self) -> bool:
        return (
            self.source == self.target
            and self.player_map.is_identity
            and all(mapping == tuple(range(len(mapping))) for mapping in self.strategy_maps)
        )

    def __call__(self, profile: Sequence[int]) -> Profile:
        return bij_apply(self, profile)

    def __str__(self) -> str:
        return format_bijection(self)


def identity_bijection(shape: GameShape) -> GameBijection:
    return GameBijection(
        source=shape,
        target=shape,
        player_map=PlayerPermutation.identity(shape.n_players),
        strategy_maps=tuple(tuple(range(count)) for count in shape.counts),
    )


def bij_apply(g: GameBijection, profile: Sequence[int]) -> Profile:
    """(g(s))_{π(i)} = τ_i(s_i)."""
    g.source.profile_index(profile)
    result = [0] * len(profile)
    for i, choice in enumerate(profile):
        result[g.player_map.image[i]] = g.strategy_maps[i][choice]
    return tuple(result)


def bij_compose(h: GameBijection, g: GameBijection) -> GameBijection:
    """h∘g: apply g first."""
    if g.target != h.source:
        raise ShapeMismatchError("Cannot compose: target shape of g differs from source shape of h.")
    pi = g.player_map
    return GameBijection(
        source=g.source,
        target=h.target,
        player_map=perm_compose(h.player_map, pi),
        strategy_maps=tuple(
            tuple(h.strategy_maps[pi(i)][b] for b in mapping)
            for i, mapping in enumerate(g.strategy_maps)
        ),
    )


def bij_invert(g: GameBijection) -> GameBijection:
    inverse_players = perm_invert(g.player_map)
    maps = []
    for j in range(g.target.n_players):
        forward = g.strategy_maps[inverse_players(j)]
        backward = [0] * len(forward)
        for a, b in enumerate(forward):
            backward[b] = a
        maps.append(tuple(backward))
    return GameBijection(source=g.target, target=g.source, player_map=inverse_players, strategy_maps=tuple(maps))


def is_isomorphism(g: GameBijection, src: Game, dst: Game) -> bool:
    if g.source != src.shape or g.target != dst.shape:
        raise ShapeMismatchError("Bijection shapes do not match the given games.")
    image = g.player_map.image
    for index, profile in enumerate(src.profiles()):
        target_values = dst.vector(bij_apply(g, profile))
        values = src.payoffs[index]
        for i in range(src.n_players):
            if values[i] != target_values[image[i]]:
                return False
    return True


def enumerate_bijections(source: GameShape, target: GameShape) -> Iterator[GameBijection]:
    """Every game bijection source -> target, in sort-key order."""
    if source.n_players != target.n_players:
        return
    for pi in all_permutations(source.n_players):
        if any(source.counts[i] != target.counts[pi(i)] for i in range(source.n_players)):
            continue
        choices = [itertools.permutations(range(count)) for count in source.counts]
        for maps in itertools.product(*choices):
            yield GameBijection(source=source, target=target, player_map=pi, strategy_maps=maps)


# -- text form ----------------------------------------------------------------


def format_bijection(g: GameBijection) -> str:
    parts = [format_cycles(g.player_map)]
    for i, mapping in enumerate(g.strategy_maps):
        source_labels = g.source.strategies[i]
        target_labels = g.target.strategies[g.player_map(i)]
        pairs = ",".join(
            f"{format_label(source_labels[a])}->{format_label(target_labels[b])}" for a, b in enumerate(mapping)
        )
        parts.append(f"{i + 1}:{{{pairs}}}")
    return "; ".join(parts)


def parse_bijection(text: str, source: GameShape, target: GameShape | None = None) -> GameBijection:
    """Read the text form; cycle notation never holds ';', so the first one ends the player map."""
    target = source if target is None else target
    n = source.n_players
    cycles, separator, rest = text.partition(";")
    if not separator:
        raise DocumentFormatError(
            f"Bijection {text!r} needs a player map and {n} strategy maps separated by ';'."
        )
    player_map = parse_cycles(cycles, n)
    scanner = LabelScanner(rest)
    maps: list[tuple[int, ...] | None] = [None] * n
    for position in range(n):
        if position and not scanner.accept(";"):
            raise DocumentFormatError(
                f"Bijection {text!r} needs a player map and {n} strategy maps separated by ';'."
            )
        player = scanner.number("Strategy map") - 1
        if not 0 <= player < n or maps[player] is not None:
            raise DocumentFormatError(f"Strategy map for player {player + 1} in {text!r} is invalid or repeated.")
        scanner.expect(":", "Strategy map")
        scanner.expect("{", "Strategy map")
        source_labels = source.strategies[player]
        target_labels = target.strategies[player_map(player)]
        mapping: dict[int, int] = {}
        while True:
            left = scanner.label("Strategy pair")
            scanner.expect("->", "Strategy pair")
            right = scanner.label("Strategy pair")
            if left not in source_labels or right not in target_labels:
                raise DocumentFormatError(
                    f"Strategy pair {left!r}->{right!r} for player {player + 1}: expected a label in "
                    f"{list(source_labels)} mapped to one in {list(target_labels)}."
                )
            mapping[source_labels.index(left)] = target_labels.index(right)
            if not scanner.accept(","):
                break
        scanner.expect("}", "Strategy map")
        if sorted(mapping) != list(range(len(source_labels))) or len(set(mapping.values())) != len(mapping):
            raise DocumentFormatError(f"Strategy map for player {player + 1} is not a bijection.")
        maps[player] = tuple(mapping[a] for a in range(len(source_labels)))
    if not scanner.at_end():
        raise DocumentFormatError(
            f"Bijection {text!r} needs a player map and {n} strategy maps separated by ';'."
        )
    return GameBijection(source=source, target=target, player_map=player_map, strategy_maps=tuple(maps))


# -- groups of bijections --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class BijectionGroup:
    shape: GameShape
    elements: tuple[GameBijection, ...]
    generators: tuple[GameBijection, ...]
    _members: frozenset[GameBijection] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.elements))

    @classmethod
    def from_elements(cls, elements: Iterable[GameBijection], shape: GameShape) -> BijectionGroup:
        """Wrap a set of self-bijections, checking it is closed under a greedy generating set."""
        members = set(elements)
        identity = identity_bijection(shape)
        if identity not in members:
            raise PreconditionError("Bijection set does not contain the identity.")
        generators: list[GameBijection] = []
        seen = {identity}
        for candidate in sorted(members, key=lambda g: g.sort_key):
            if candidate in seen:
                continue
            generators.append(candidate)
            queue = deque(seen)
            while queue:
                current = queue.popleft()
                for generator in generators:
                    product = bij_compose(generator, current)
                    if product not in members:
                        raise PreconditionError(
                            f"Bijection set is not closed under composition: {format_bijection(product)}."
                        )
                    if product not in seen:
                        seen.add(product)
                        queue.append(product)
        return cls(
            shape=shape,
            elements=tuple(sorted(members, key=lambda g: g.sort_key)),
            generators=tuple(generators),
        )

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GameBijection]:
        return iter(self.elements)

    def __contains__(self, item: object) -> bool:
        return item in self._members


def bijection_closure(gens: Iterable[GameBijection], shape: GameShape) -> BijectionGroup:
    generators = tuple(dict.fromkeys(gens))
    for generator in generators:
        if generator.source != shape or generator.target != shape:
            raise ShapeMismatchError(f"Generator {format_bijection(generator)} does not map the shape to itself.")
    identity = identity_bijection(shape)
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for generator in generators:
            product = bij_compose(generator, current)
            if product not in seen:
                seen.add(product)
                queue.append(product)
    return BijectionGroup(
        shape=shape,
        elements=tuple(sorted(seen, key=lambda g: g.sort_key)),
        generators=generators,
    )


def player_image(group: BijectionGroup) -> PermutationGroup:
    return PermutationGroup.from_elements(
        {element.player_map for element in group.elements}, group.shape.n_players
    )


def stabiliser_N(group: BijectionGroup) -> BijectionGroup:
    """Elements whose player permutation is the identity."""
    fixed = [element for element in group.elements if element.player_map.is_identity]
    stab = BijectionGroup(shape=group.shape, elements=tuple(fixed), generators=())
    image_order = len({element.player_map for element in group.elements})
    if group.order != image_order * stab.order:
        raise PreconditionError(
            f"Coset identity fails: |G|={group.order} but |image|*|stabiliser|={image_order * stab.order}."
        )
    return BijectionGroup.from_elements(fixed, group.shape)


def is_player_transitive(group: BijectionGroup) -> bool:
    return is_transitive(player_image(group))


def is_player_n_transitive(group: BijectionGroup) -> bool:
    return is_n_transitive(player_image(group))


# -- isomorphism search ------------------------------------------------------------


def _payoff_codes(*games: Game) -> dict[Fraction, int]:
    values = sorted({value for game in games for row in game.payoffs for value in row})
    return {value: code for code, value in enumerate(values)}


def _signatures(game: Game, codes: dict[Fraction, int]) -> list[list[tuple[tuple[int, ...], ...]]]:
    """sig[i][a][k]: sorted payoff codes of player k over profiles with s_i = a."""
    n = game.n_players
    buckets = [[[[] for _ in range(n)] for _ in range(count)] for count in game.shape.counts]
    for index, profile in enumerate(game.profiles()):
        row = [codes[value] for value in game.payoffs[index]]
        for i, choice in enumerate(profile):
            for k in range(n):
                buckets[i][choice][k].append(row[k])
    return [
        [tuple(tuple(sorted(values)) for values in per_player) for per_player in per_strategy]
        for per_strategy in buckets
    ]


@dataclass(slots=True)
class _SearchContext:
    src: Game
    dst: Game
    src_sig: list[list[tuple[tuple[int, ...], ...]]]
    dst_sig: list[list[tuple[tuple[int, ...], ...]]]
    dst_rows: list[tuple[int, ...]]
    src_columns: list[Counter]
    budget: SearchBudget


def _offsets(counts: Sequence[int], weights: Sequence[int]) -> list[int]:
    """Flat index contributions of every choice tuple over the given coordinates, in product order."""
    offsets = [0]
    for count, weight in zip(counts, weights):
        offsets = [offset + choice * weight for offset in offsets for choice in range(count)]
    return offsets


def _split_columns(rows: Sequence[tuple], prefix: list[int], suffix: list[int]) -> Counter:
    """Multiset over suffix choices of the payoff rows listed along every prefix choice."""
    return Counter(tuple(rows[head + tail] for head in prefix) for tail in suffix)


def _source_columns(game: Game, rows: list[tuple[int, ...]]) -> list[Counter]:
    counts = game.shape.counts
    weights = game.shape.weights
    return [
        _split_columns(
            rows,
            _offsets(counts[: level + 1], weights[: level + 1]),
            _offsets(counts[level + 1:], weights[level + 1:]),
        )
        for level in range(game.n_players)
    ]


def _candidate_player_maps(src: Game, dst: Game, codes: dict[Fraction, int]) -> list[PlayerPermutation]:
    n = src.n_players
    src_rows = [tuple(codes[value] for value in row) for row in src.payoffs]
    dst_rows = [tuple(codes[value] for value in row) for row in dst.payoffs]
    src_columns = [sorted(row[i] for row in src_rows) for i in range(n)]
    dst_columns = [sorted(row[j] for row in dst_rows) for j in range(n)]
    dst_vectors = Counter(dst_rows)

    candidates = []
    for pi in all_permutations(n):
        if any(src.shape.counts[i] != dst.shape.counts[pi(i)] for i in range(n)):
            continue
        if any(src_columns[i] != dst_columns[pi(i)] for i in range(n)):
            continue
        inverse = perm_invert(pi).image
        moved = Counter(tuple(row[inverse[j]] for j in range(n)) for row in src_rows)
        if moved != dst_vectors:
            continue
        candidates.append(pi)
    return candidates


def _search_root(pi: PlayerPermutation, context: _SearchContext) -> list[GameBijection]:
    """Backtrack over strategy maps for player map π, source players in order.

    Once players 0..k are mapped, every completion of the unmapped players
    gives a column of payoffs along all choices of the mapped ones. The
    isomorphism pairs source columns with target columns one to one, so
    their multisets must agree; at the last player this is the full set of
    payoff equations.
    """
    src, dst = context.src, context.dst
    n = src.n_players
    options: list[list[tuple[int, ...]]] = []
    for i in range(n):
        allowed = []
        for a in range(src.shape.counts[i]):
            wanted = tuple(context.src_sig[i][a][pi.image.index(k)] for k in range(n))
            allowed.append(
                {b for b in range(dst.shape.counts[pi(i)]) if context.dst_sig[pi(i)][b] == wanted}
            )
        player_options = [
            mapping
            for mapping in itertools.permutations(range(src.shape.counts[i]))
            if all(mapping[a] in allowed[a] for a in range(len(mapping)))
        ]
        if not player_options:
            return []
        options.append(player_options)

    # Target rows reordered so entry i is the payoff of π(i), matching source player i.
    moved_rows = [tuple(row[pi(i)] for i in range(n)) for row in context.dst_rows]
    weights = dst.shape.weights
    suffixes = [
        _offsets(
            [dst.shape.counts[pi(j)] for j in range(level + 1, n)],
            [weights[pi(j)] for j in range(level + 1, n)],
        )
        for level in range(n)
    ]

    found: list[GameBijection] = []
    chosen: list[tuple[int, ...]] = []

    def descend(player: int, prefix: list[int]) -> None:
        context.budget.consume()
        if player == n:
            found.append(GameBijection(src.shape, dst.shape, pi, tuple(chosen)))
            return
        weight = weights[pi(player)]
        for mapping in options[player]:
            extended = [offset + mapping[a] * weight for offset in prefix for a in range(len(mapping))]
            if _split_columns(moved_rows, extended, suffixes[player]) != context.src_columns[player]:
                continue
            chosen.append(mapping)
            descend(player + 1, extended)
            chosen.pop()

    descend(0, [0])
    return found


def isomorphisms_between(
    src: Game,
    dst: Game,
    *,
    settings: Settings | None = None,
    budget: SearchBudget | None = None,
) -> list[GameBijection]:
    """All game isomorphisms src -> dst, ordered by player map then strategy maps.

    Player maps are filtered by per-player payoff multisets and by the
    multiset of permuted payoff vectors; strategy maps are then chosen per
    player among those preserving every strategy's payoff signature, and a
    partial assignment is dropped as soon as the payoff columns over the
    still unmapped players stop matching.
    """
    started = perf_counter()
    settings = settings or load_settings()
    budget = budget or SearchBudget(max_nodes=settings.max_search_nodes)

    if src.n_players != dst.n_players or sorted(src.shape.counts) != sorted(dst.shape.counts):
        return []

    codes = _payoff_codes(src, dst)
    roots = _candidate_player_maps(src, dst, codes)
    src_rows = [tuple(codes[value] for value in row) for row in src.payoffs]
    context = _SearchContext(
        src=src,
        dst=dst,
        src_sig=_signatures(src, codes),
        dst_sig=_signatures(dst, codes),
        dst_rows=[tuple(codes[value] for value in row) for row in dst.payoffs],
        src_columns=_source_columns(src, src_rows),
        budget=budget,
    )

    results: list[GameBijection] = []
    if settings.threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            for batch in pool.map(lambda pi: _search_root(pi, context), roots):
                results.extend(batch)
    else:
        for pi in roots:
            results.extend(_search_root(pi, context))

    results.sort(key=lambda g: g.sort_key)
    logger.info(
        "iso_search_completed players=%s roots=%s found=%s nodes=%s duration_ms=%s",
        src.n_players,
        len(roots),
        len(results),
        budget.used_nodes,
        int((perf_counter() - started) * 1000),
    )
    return results


def are_isomorphic(src: Game, dst: Game, *, settings: Settings | None = None) -> bool:
    return bool(isomorphisms_between(src, dst, settings=settings))


def automorphism_group(game: Game, *, settings: Settings | None = None) -> BijectionGroup:
    return BijectionGroup.from_elements(isomorphisms_between(game, game, settings=settings), game.shape)
