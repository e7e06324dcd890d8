"""Label-dependent symmetry notions for games whose players share strategy labels.

Every check here compares payoffs across players through the left action
π(s) = (s_{π⁻¹(i)})_i, which only makes sense when strategy ``a`` means the
same thing to every player.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

from symgame.errors import LabelMismatchError
from symgame.services.game import Game, Profile
from symgame.services.permutations import (
    PermutationGroup,
    PlayerPermutation,
    act_on_profile,
    all_permutations,
    is_transitive,
    perm_invert,
    transpositions,
)


class FullSymmetryCondition(str, Enum):
    ALL_INVARIANT = "i"
    STANDARD_AND_WEAKLY_ANONYMOUS = "ii"
    INVERSE_ACTION = "iii"
    TRANSPOSITIONS = "iv"
    INVERSE_TRANSPOSITIONS = "v"


@dataclass(frozen=True, slots=True)
class AnonymityReport:
    weakly_anonymous: bool
    anonymous: bool
    fully_anonymous: bool

    def __post_init__(self) -> None:
        if self.fully_anonymous and not self.anonymous:
            raise ValueError("A fully anonymous game must be anonymous.")
        if self.anonymous and not self.weakly_anonymous:
            raise ValueError("An anonymous game must be weakly anonymous.")


def shares_labels(game: Game) -> bool:
    first = game.strategies[0]
    return all(labels == first for labels in game.strategies[1:])


def _require_shared_labels(game: Game) -> None:
    if not shares_labels(game):
        raise LabelMismatchError(
            "Label-dependent checks need every player to use the same strategy labels; "
            f"got {[list(labels) for labels in game.strategies]}."
        )


def _holds(game: Game, check: Callable[[int, Profile], bool]) -> bool:
    for profile in game.profiles():
        for i in range(game.n_players):
            if not check(i, profile):
                return False
    return True


def _invariant(game: Game, pi: PlayerPermutation) -> bool:
    return _holds(game, lambda i, s: game.u(i, s) == game.u(pi(i), act_on_profile(pi, s)))


def is_invariant(game: Game, pi: PlayerPermutation) -> bool:
    """u_i = u_π(i) ∘ π for every player i."""
    _require_shared_labels(game)
    return _invariant(game, pi)


def invariant_group(game: Game) -> PermutationGroup:
    _require_shared_labels(game)
    members = [pi for pi in all_permutations(game.n_players) if _invariant(game, pi)]
    return PermutationGroup.from_elements(members, game.n_players)


def _weakly_anonymous(game: Game) -> bool:
    for pi in all_permutations(game.n_players):
        for i in range(game.n_players):
            if pi(i) != i:
                continue
            for profile in game.profiles():
                if game.u(i, profile) != game.u(i, act_on_profile(pi, profile)):
                    return False
    return True


def _anonymous(game: Game) -> bool:
    return all(
        _holds(game, lambda i, s, pi=pi: game.u(i, s) == game.u(i, act_on_profile(pi, s)))
        for pi in all_permutations(game.n_players)
    )


def _fully_anonymous(game: Game) -> bool:
    n = game.n_players
    for pi in all_permutations(n):
        for profile in game.profiles():
            moved = act_on_profile(pi, profile)
            for i in range(n):
                for j in range(n):
                    if game.u(i, profile) != game.u(j, moved):
                        return False
    return True


def anonymity(game: Game) -> AnonymityReport:
    _require_shared_labels(game)
    return AnonymityReport(
        weakly_anonymous=_weakly_anonymous(game),
        anonymous=_anonymous(game),
        fully_anonymous=_fully_anonymous(game),
    )


def label_dep_standard_symmetric(game: Game) -> tuple[bool, PermutationGroup]:
    """Invariant under a transitive group; the invariant group is the witness.

    Any transitive subgroup makes the whole invariant group transitive, so
    checking the full group is enough.
    """
    group = invariant_group(game)
    return is_transitive(group), group


def label_dep_fully_symmetric(
    game: Game,
    condition: FullSymmetryCondition | str = FullSymmetryCondition.ALL_INVARIANT,
) -> bool:
    _require_shared_labels(game)
    condition = FullSymmetryCondition(condition)
    n = game.n_players

    if condition is FullSymmetryCondition.ALL_INVARIANT:
        return all(_invariant(game, pi) for pi in all_permutations(n))
    if condition is FullSymmetryCondition.STANDARD_AND_WEAKLY_ANONYMOUS:
        standard, _ = label_dep_standard_symmetric(game)
        return standard and _weakly_anonymous(game)
    if condition is FullSymmetryCondition.INVERSE_ACTION:
        for pi in all_permutations(n):
            inverse = perm_invert(pi)
            check = lambda i, s: game.u(pi(i), s) == game.u(i, act_on_profile(inverse, s))  # noqa: E731
            if not _holds(game, check):
                return False
        return True
    if condition is FullSymmetryCondition.TRANSPOSITIONS:
        return all(_invariant(game, tau) for tau in transpositions(n))
    return all(_invariant(game, perm_invert(tau)) for tau in transpositions(n))


def maskin_condition(game: Game) -> bool:
    """u_i = u_π(i) ∘ π⁻¹ for all i and π.

    Not equivalent to full symmetry once n ≥ 3.
    """
    _require_shared_labels(game)
    for pi in all_permutations(game.n_players):
        inverse = perm_invert(pi)
        check = lambda i, s: game.u(i, s) == game.u(pi(i), act_on_profile(inverse, s))  # noqa: E731
        if not _holds(game, check):
            return False
    return True
