from __future__ import annotations

import itertools
import math
import re
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from symgame.errors import DocumentFormatError, InvalidPlayerError, PreconditionError, ShapeMismatchError


@dataclass(frozen=True, slots=True, order=True)
class PlayerPermutation:
    """A bijection of the players, stored 0-based as ``image[i] = π(i)``.

    Text forms use the usual 1-based cycle notation.
    """

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(self.image)
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(len(image))):
            raise PreconditionError(f"Player map {image} is not a bijection of 0..{len(image) - 1}.")

    @classmethod
    def identity(cls, degree: int) -> PlayerPermutation:
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.image)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def __call__(self, player: int) -> int:
        return self.image[player]

    def __str__(self) -> str:
        return format_cycles(self)


def _check_degree(*perms: PlayerPermutation) -> int:
    degree = perms[0].degree
    for perm in perms[1:]:
        if perm.degree != degree:
            raise ShapeMismatchError(
                f"Permutations act on different player counts: {degree} and {perm.degree}."
            )
    return degree


def perm_compose(tau: PlayerPermutation, pi: PlayerPermutation) -> PlayerPermutation:
    """(τ∘π)(i) = τ(π(i))."""
    _check_degree(tau, pi)
    return PlayerPermutation(tuple(tau.image[p] for p in pi.image))


def perm_invert(pi: PlayerPermutation) -> PlayerPermutation:
    inverse = [0] * pi.degree
    for i, j in enumerate(pi.image):
        inverse[j] = i
    return PlayerPermutation(tuple(inverse))


def act_on_profile(pi: PlayerPermutation, profile: Sequence[int]) -> tuple[int, ...]:
    """Left action on profiles: the result r has r[π(i)] = s[i]."""
    if len(profile) != pi.degree:
        raise ShapeMismatchError(
            f"Profile of length {len(profile)} cannot be permuted by a degree {pi.degree} permutation."
        )
    result = [0] * pi.degree
    for i, choice in enumerate(profile):
        result[pi.image[i]] = choice
    return tuple(result)


def transposition(degree: int, i: int, j: int) -> PlayerPermutation:
    image = list(range(degree))
    image[i], image[j] = image[j], image[i]
    return PlayerPermutation(tuple(image))


def transpositions(degree: int) -> list[PlayerPermutation]:
    return [transposition(degree, i, j) for i, j in itertools.combinations(range(degree), 2)]


def all_permutations(degree: int) -> Iterator[PlayerPermutation]:
    for image in itertools.permutations(range(degree)):
        yield PlayerPermutation(image)


# -- cycle notation ---------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> PlayerPermutation:
    """Parse "(1 2 3)(4 5)", "(14)∘(25)" or "()".

    Cycles are composed right to left. Digits may be run together only
    when every player number is a single digit.
    """
    body = text.strip().replace("∘", "").replace("*", "")
    if body in {"", "e", "id"}:
        return PlayerPermutation.identity(degree)
    if _CYCLE_RE.sub("", body).strip():
        raise DocumentFormatError(f"Cycle notation {text!r} has text outside parentheses.")

    result = PlayerPermutation.identity(degree)
    for match in reversed(list(_CYCLE_RE.finditer(body))):
        inner = match.group(1).strip()
        if not inner:
            continue
        tokens = inner.replace(",", " ").split()
        if len(tokens) == 1 and len(tokens[0]) > 1:
            if degree > 9:
                raise DocumentFormatError(
                    f"Compact cycle {match.group(0)!r} is ambiguous for {degree} players; separate with spaces."
                )
            tokens = list(tokens[0])
        try:
            points = [int(token) - 1 for token in tokens]
        except ValueError:
            raise DocumentFormatError(f"Cycle {match.group(0)!r} contains a non-integer player.") from None
        if len(set(points)) != len(points):
            raise DocumentFormatError(f"Cycle {match.group(0)!r} repeats a player.")
        for point in points:
            if not 0 <= point < degree:
                raise DocumentFormatError(
                    f"Cycle {match.group(0)!r} names player {point + 1}, outside [1, {degree}]."
                )
        image = list(range(degree))
        for position, point in enumerate(points):
            image[point] = points[(position + 1) % len(points)]
        result = perm_compose(PlayerPermutation(tuple(image)), result)
    return result


def cycles(pi: PlayerPermutation) -> list[tuple[int, ...]]:
    """Non-trivial cycles, 0-based, each starting at its smallest point."""
    seen: set[int] = set()
    found = []
    for start in range(pi.degree):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        point = pi.image[start]
        while point != start:
            cycle.append(point)
            seen.add(point)
            point = pi.image[point]
        if len(cycle) > 1:
            found.append(tuple(cycle))
    return found


def format_cycles(pi: PlayerPermutation) -> str:
    found = cycles(pi)
    if not found:
        return "()"
    return "".join("(" + " ".join(str(point + 1) for point in cycle) + ")" for cycle in found)


# -- groups -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PermutationGroup:
    degree: int
    elements: tuple[PlayerPermutation, ...]
    generators: tuple[PlayerPermutation, ...]

    @classmethod
    def from_elements(cls, elements: Iterable[PlayerPermutation], degree: int) -> PermutationGroup:
        """Wrap an element set that should already be a group.

        Raises PreconditionError when the set is not closed. Generators are
        picked greedily until they generate the whole set.
        """
        members = set(elements)
        identity = PlayerPermutation.identity(degree)
        if identity not in members:
            raise PreconditionError("Element set does not contain the identity permutation.")
        for a in members:
            if perm_invert(a) not in members:
                raise PreconditionError(f"Element set is not closed under inversion at {a}.")
            for b in members:
                if perm_compose(a, b) not in members:
                    raise PreconditionError(f"Element set is not closed under composition at {a}, {b}.")

        generators: list[PlayerPermutation] = []
        generated = {identity}
        for candidate in sorted(members):
            if candidate in generated:
                continue
            generators.append(candidate)
            generated = set(closure(generators, degree).elements)
        return cls(degree=degree, elements=tuple(sorted(members)), generators=tuple(generators))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[PlayerPermutation]:
        return iter(self.elements)

    def __contains__(self, item: object) -> bool:
        return item in self.elements


def closure(gens: Iterable[PlayerPermutation], degree: int | None = None) -> PermutationGroup:
    generators = tuple(dict.fromkeys(gens))
    if degree is None:
        if not generators:
            raise PreconditionError("closure() of no generators needs an explicit degree.")
        degree = generators[0].degree
    if generators:
        if _check_degree(*generators) != degree:
            raise ShapeMismatchError(f"Generators act on {generators[0].degree} players, expected {degree}.")

    identity = PlayerPermutation.identity(degree)
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for generator in generators:
            product = perm_compose(generator, current)
            if product not in seen:
                seen.add(product)
                queue.append(product)
    return PermutationGroup(degree=degree, elements=tuple(sorted(seen)), generators=generators)


def symmetric_group(degree: int) -> PermutationGroup:
    if degree < 2:
        gens: tuple[PlayerPermutation, ...] = ()
    else:
        cycle = PlayerPermutation(tuple((i + 1) % degree for i in range(degree)))
        gens = tuple(dict.fromkeys([transposition(degree, 0, 1), cycle]))
    return PermutationGroup(
        degree=degree,
        elements=tuple(sorted(all_permutations(degree))),
        generators=gens,
    )


def _orbit_of(group: PermutationGroup, start: int) -> set[int]:
    return {element.image[start] for element in group.elements}


def is_transitive(group: PermutationGroup, n: int | None = None) -> bool:
    degree = group.degree if n is None else n
    return len(_orbit_of(group, 0)) == degree


def is_n_transitive(group: PermutationGroup, n: int | None = None) -> bool:
    degree = group.degree if n is None else n
    return group.order == math.factorial(degree)


def is_regular(group: PermutationGroup) -> bool:
    return is_transitive(group) and group.order == group.degree


def has_regular_subgroup(group: PermutationGroup) -> bool:
    """Search subgroups generated by one or two elements.

    Every group of order at most 7 is 2-generated, so the search is
    complete for degree up to 7.
    """
    degree = group.degree
    if group.order % degree:
        return False
    for element in group.elements:
        found = cycles(element)
        if len(found) == 1 and len(found[0]) == degree:
            return True
    elements = group.elements
    for a_pos, a in enumerate(elements):
        for b in elements[a_pos + 1:]:
            candidate = closure((a, b), degree)
            if candidate.order == degree and is_transitive(candidate):
                return True
    return False


def stabiliser(group: PermutationGroup, player: int) -> PermutationGroup:
    """Elements fixing ``player`` (numbered 1..n)."""
    if not 1 <= player <= group.degree:
        raise InvalidPlayerError(f"Player {player} is outside [1, {group.degree}].")
    fixed = [element for element in group.elements if element.image[player - 1] == player - 1]
    return PermutationGroup.from_elements(fixed, group.degree)


def orbits(group: PermutationGroup, n: int | None = None) -> list[tuple[int, ...]]:
    """Orbits on players 1..n, each sorted, listed by smallest member."""
    degree = group.degree if n is None else n
    remaining = set(range(degree))
    blocks = []
    while remaining:
        start = min(remaining)
        block = _orbit_of(group, start)
        remaining -= block
        blocks.append(tuple(sorted(point + 1 for point in block)))
    return blocks
