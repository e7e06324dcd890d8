from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from time import perf_counter

from symgame.errors import PreconditionError
from symgame.services.game import Game, Profile, utilities_identical
from symgame.services.label_dependent import AnonymityReport
from symgame.services.matchings import (
    Matching,
    enumerate_matchings,
    equal_payoff_matchings,
    induced_game_bijection,
    is_strategy_trivial,
)
from symgame.services.morphisms import (
    BijectionGroup,
    GameBijection,
    automorphism_group,
    bij_apply,
    bijection_closure,
    player_image,
    stabiliser_N,
)
from symgame.services.permutations import (
    PermutationGroup,
    PlayerPermutation,
    act_on_profile,
    all_permutations,
    is_n_transitive,
    is_transitive,
    transpositions,
)
from symgame.settings import Settings

logger = logging.getLogger(__name__)

CERTIFIED_EXHAUSTIVE = "exhaustive"
CERTIFIED_PAYOFF_WITNESS = "payoff-witness"


@dataclass(frozen=True, slots=True)
class ClassificationReport:
    """Where a game sits among the symmetry classes.

    ``standard`` and ``fully`` are None for games whose players have
    different numbers of strategies, where matchings do not exist.
    """

    symmetric: bool
    n_transitive: bool
    standard: bool | None
    fully: bool | None
    aut_order: int
    player_image_order: int
    stabiliser_order: int
    witness_matching: Matching | None = None
    witness_subgroup: tuple[GameBijection, ...] | None = None
    certified_by: str = CERTIFIED_EXHAUSTIVE
    only_transitive: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "only_transitive", self.symmetric and not self.n_transitive)
        if self.fully and not (self.standard and self.n_transitive):
            raise ValueError("A fully symmetric game must be standard and n-transitively symmetric.")
        if self.standard and not self.symmetric:
            raise ValueError("A standard symmetric game must be symmetric.")
        if self.n_transitive and not self.symmetric:
            raise ValueError("An n-transitively symmetric game must be symmetric.")
        if self.aut_order != self.player_image_order * self.stabiliser_order:
            raise ValueError(
                f"aut_order={self.aut_order} differs from "
                f"player_image_order*stabiliser_order={self.player_image_order * self.stabiliser_order}."
            )


def _aut(game: Game, aut: BijectionGroup | None, settings: Settings | None) -> BijectionGroup:
    return aut if aut is not None else automorphism_group(game, settings=settings)


def is_symmetric(game: Game, *, aut: BijectionGroup | None = None, settings: Settings | None = None) -> bool:
    return is_transitive(player_image(_aut(game, aut, settings)))


def is_n_transitively_symmetric(
    game: Game,
    *,
    aut: BijectionGroup | None = None,
    settings: Settings | None = None,
) -> bool:
    """Player image of Aut is all of S_N.

    Without a precomputed ``aut`` a payoff witness answers False before any
    automorphism search runs.
    """
    if aut is None and payoff_witness(game) is not None:
        logger.info("n_transitivity_refuted certified_by=%s", CERTIFIED_PAYOFF_WITNESS)
        return False
    return is_n_transitive(player_image(_aut(game, aut, settings)))


def _require_m_strategy(game: Game) -> None:
    if not game.shape.is_m_strategy:
        raise PreconditionError(
            "Standard and full symmetry need every player to have the same number of strategies; "
            f"got {list(game.shape.counts)}."
        )


def _matching_subgroup(matching: Matching, aut: BijectionGroup, candidates: Iterable[PlayerPermutation]) -> PermutationGroup:
    """T_M = {π : M_π ∈ Aut}, a group since π -> M_π is a homomorphism."""
    members = [pi for pi in candidates if induced_game_bijection(matching, pi) in aut]
    return PermutationGroup.from_elements(members, aut.shape.n_players)


def _standard_search(game: Game, aut: BijectionGroup) -> tuple[Matching, PermutationGroup] | None:
    n = game.n_players
    # M_π ∈ Aut needs π in the player image, so larger games only try those.
    candidates = list(all_permutations(n)) if n <= 4 else list(player_image(aut).elements)
    for matching in equal_payoff_matchings(game):
        group = _matching_subgroup(matching, aut, candidates)
        if is_transitive(group):
            return matching, group
    return None


def is_standard_symmetric(
    game: Game,
    *,
    aut: BijectionGroup | None = None,
    settings: Settings | None = None,
) -> tuple[bool, Matching | None]:
    _require_m_strategy(game)
    found = _standard_search(game, _aut(game, aut, settings))
    if found is None:
        return False, None
    return True, found[0]


def is_fully_symmetric(
    game: Game,
    *,
    aut: BijectionGroup | None = None,
    settings: Settings | None = None,
) -> tuple[bool, Matching | None]:
    _require_m_strategy(game)
    aut = _aut(game, aut, settings)
    swaps = transpositions(game.n_players)
    for matching in equal_payoff_matchings(game):
        if all(induced_game_bijection(matching, tau) in aut for tau in swaps):
            return True, matching
    return False, None


# -- anonymity up to isomorphism -----------------------------------------------


def _payoffs_fixed(game: Game, g: GameBijection, players: Iterable[int]) -> bool:
    """u_i = u_i ∘ g for every i in ``players``."""
    players = tuple(players)
    for index, profile in enumerate(game.profiles()):
        row = game.payoffs[index]
        moved = game.vector(bij_apply(g, profile))
        if any(row[i] != moved[i] for i in players):
            return False
    return True


def _anonymous_under(game: Game, matching: Matching, *, opponents_only: bool) -> bool:
    # Transpositions generate S_N, and those fixing i generate S_{N-{i}}.
    n = game.n_players
    for tau in transpositions(n):
        players = [i for i in range(n) if tau(i) == i] if opponents_only else range(n)
        if not _payoffs_fixed(game, induced_game_bijection(matching, tau), players):
            return False
    return True


def _first_matching(game: Game, opponents_only: bool) -> Matching | None:
    _require_m_strategy(game)
    for matching in enumerate_matchings(game.shape):
        if _anonymous_under(game, matching, opponents_only=opponents_only):
            return matching
    return None


def isomorphic_to_weakly_anonymous(game: Game) -> tuple[bool, Matching | None]:
    """Some matching M has u_i = u_i ∘ M_π for every i and every π fixing i."""
    matching = _first_matching(game, opponents_only=True)
    return matching is not None, matching


def isomorphic_to_anonymous(game: Game) -> tuple[bool, Matching | None]:
    matching = _first_matching(game, opponents_only=False)
    return matching is not None, matching


def isomorphic_to_fully_anonymous(game: Game) -> tuple[bool, Matching | None]:
    # π = id forces u_i = u_j, after which full anonymity is anonymity.
    _require_m_strategy(game)
    if not utilities_identical(game):
        return False, None
    return isomorphic_to_anonymous(game)


def anonymity_up_to_isomorphism(game: Game) -> AnonymityReport:
    started = perf_counter()
    report = AnonymityReport(
        weakly_anonymous=isomorphic_to_weakly_anonymous(game)[0],
        anonymous=isomorphic_to_anonymous(game)[0],
        fully_anonymous=isomorphic_to_fully_anonymous(game)[0],
    )
    logger.info(
        "anonymity_completed weakly=%s anonymous=%s fully=%s duration_ms=%s",
        report.weakly_anonymous,
        report.anonymous,
        report.fully_anonymous,
        int((perf_counter() - started) * 1000),
    )
    return report


def payoff_witness(game: Game) -> tuple[PlayerPermutation, Profile] | None:
    """A transposition τ and profile s whose payoff vector, moved by τ, occurs nowhere.

    Any automorphism with player map τ would carry s to a profile paying
    exactly that moved vector, so τ is missing from the player image.
    """
    vectors = set(game.payoffs)
    for tau in transpositions(game.n_players):
        for index, profile in enumerate(game.profiles()):
            moved = act_on_profile(tau, game.payoffs[index])
            if moved not in vectors:
                return tau, profile
    return None


def has_transitive_strategy_trivial_subgroup(
    game: Game,
    *,
    aut: BijectionGroup | None = None,
    settings: Settings | None = None,
) -> BijectionGroup | None:
    """Search subgroups of Aut generated by one or two elements.

    Every minimally transitive group of degree at most 7 is 2-generated and
    subgroups of a strategy-trivial group stay strategy trivial, so for up to
    7 players this finds a witness whenever one exists.
    """
    aut = _aut(game, aut, settings)
    for subgroup in _small_subgroups(aut):
        if is_transitive(player_image(subgroup)) and is_strategy_trivial(subgroup):
            return subgroup
    return None


def _small_subgroups(aut: BijectionGroup) -> Iterable[BijectionGroup]:
    seen: set[frozenset[GameBijection]] = set()
    elements = aut.elements
    pairs = [(a,) for a in elements] + [
        (a, b) for position, a in enumerate(elements) for b in elements[position + 1:]
    ]
    for generators in pairs:
        subgroup = bijection_closure(generators, aut.shape)
        key = frozenset(subgroup.elements)
        if key in seen:
            continue
        seen.add(key)
        yield subgroup


def check_subgroup_proposition(
    game: Game,
    *,
    report: ClassificationReport | None = None,
    aut: BijectionGroup | None = None,
    settings: Settings | None = None,
) -> bool:
    """A subgroup with player image S_N and trivial stabiliser forces n-transitive standard symmetry.

    Returns True when the hypothesis fails or when the report agrees.
    """
    aut = _aut(game, aut, settings)
    report = report or classify(game, aut=aut, settings=settings)
    factorial = math.factorial(game.n_players)
    if aut.order % factorial:
        return True
    for subgroup in _small_subgroups(aut):
        if subgroup.order == factorial and player_image(subgroup).order == factorial:
            return bool(report.n_transitive and report.standard)
    return True


def classify(
    game: Game,
    *,
    aut: BijectionGroup | None = None,
    settings: Settings | None = None,
) -> ClassificationReport:
    started = perf_counter()
    logger.info("classify_started players=%s profiles=%s", game.n_players, game.shape.num_profiles)

    witness = payoff_witness(game)
    aut = _aut(game, aut, settings)
    image = player_image(aut)
    stab = stabiliser_N(aut)
    symmetric = is_transitive(image)

    certified_by = CERTIFIED_EXHAUSTIVE
    if witness is None:
        n_transitive = is_n_transitive(image)
    else:
        # The witnessed transposition is outside the player image.
        n_transitive = False
        if symmetric:
            certified_by = CERTIFIED_PAYOFF_WITNESS

    standard: bool | None = None
    fully: bool | None = None
    witness_matching: Matching | None = None
    witness_subgroup: tuple[GameBijection, ...] | None = None
    if game.shape.is_m_strategy:
        found = _standard_search(game, aut) if symmetric else None
        standard = found is not None
        if found is not None:
            witness_matching, group = found
            witness_subgroup = tuple(induced_game_bijection(witness_matching, pi) for pi in group.generators)
        fully = False
        if standard and n_transitive:
            fully, full_matching = is_fully_symmetric(game, aut=aut)
            if fully:
                witness_matching = full_matching

    report = ClassificationReport(
        symmetric=symmetric,
        n_transitive=n_transitive,
        standard=standard,
        fully=fully,
        aut_order=aut.order,
        player_image_order=image.order,
        stabiliser_order=stab.order,
        witness_matching=witness_matching,
        witness_subgroup=witness_subgroup,
        certified_by=certified_by,
    )
    logger.info(
        "classify_completed class=%r aut_order=%s certified_by=%s duration_ms=%s",
        class_name(report),
        report.aut_order,
        report.certified_by,
        int((perf_counter() - started) * 1000),
    )
    return report


def class_name(report: ClassificationReport) -> str:
    if report.fully:
        return "fully symmetric"
    if not report.symmetric:
        return "non-symmetric"
    prefix = "n-transitively" if report.n_transitive else "only-transitive"
    if report.standard is None:
        return f"{prefix} symmetric"
    if report.standard:
        if report.n_transitive:
            return f"{prefix} non-fully standard symmetric"
        return f"{prefix} standard symmetric"
    return f"{prefix} non-standard symmetric"
