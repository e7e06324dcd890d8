from __future__ import annotations

from dataclasses import dataclass

from symgame.errors import UnknownFamilyError
from symgame.services.game import GameShape
from symgame.services.morphisms import GameBijection, parse_bijection
from symgame.services.param_games import CellPartition, orbit_partition


@dataclass(frozen=True, slots=True)
class GeneratorFamily:
    """Named generator sets, all over one game shape, in bijection text form."""

    strategies: tuple[tuple[str, ...], ...]
    sets: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def shape(self) -> GameShape:
        return GameShape(self.strategies)

    @property
    def set_names(self) -> list[str]:
        return [name for name, _ in self.sets]

    def generator_sets(self) -> dict[str, list[GameBijection]]:
        shape = self.shape
        return {name: [parse_bijection(text, shape) for text in texts] for name, texts in self.sets}

    def partitions(self) -> list[tuple[str, CellPartition]]:
        shape = self.shape
        return [(name, orbit_partition(shape, gens)) for name, gens in self.generator_sets().items()]

    def partition(self, set_name: str | None = None) -> CellPartition:
        generator_sets = self.generator_sets()
        if set_name is None:
            if len(generator_sets) != 1:
                raise UnknownFamilyError(
                    f"Family has several generator sets; choose one of {list(generator_sets)}."
                )
            set_name = next(iter(generator_sets))
        gens = generator_sets.get(set_name)
        if gens is None:
            raise UnknownFamilyError(f"Unknown generator set: {set_name}. Options: {list(generator_sets)}")
        return orbit_partition(self.shape, gens)


_TWO_2S = (("a", "b"), ("c", "d"))
_THREE_2S = (("a", "b"), ("c", "d"), ("e", "f"))
_FOUR_2S = (("a", "b"), ("c", "d"), ("e", "f"), ("g", "h"))
_SIX_2S = (("a", "b"), ("c", "d"), ("e", "f"), ("g", "h"), ("i", "j"), ("k", "l"))

_SWAP_2P = "(1 2); 1:{a->c,b->d}; 2:{c->a,d->b}"
_CROSS_2P = "(1 2); 1:{a->d,b->c}; 2:{c->b,d->a}"
_TWIST_2P = "(1 2); 1:{a->d,b->c}; 2:{c->a,d->b}"

_CYCLE_3P = "(1 2 3); 1:{a->c,b->d}; 2:{c->e,d->f}; 3:{e->a,f->b}"
_SWAP_3P = "(1 2); 1:{a->c,b->d}; 2:{c->a,d->b}; 3:{e->e,f->f}"
_CROSS_3P = "(1 2); 1:{a->d,b->c}; 2:{c->b,d->a}; 3:{e->f,f->e}"
_TWISTED_CYCLE_3P = "(1 2 3); 1:{a->d,b->c}; 2:{c->f,d->e}; 3:{e->b,f->a}"
_HALF_TWISTED_CYCLE_3P = "(1 2 3); 1:{a->d,b->c}; 2:{c->f,d->e}; 3:{e->a,f->b}"

FAMILIES: dict[str, GeneratorFamily] = {
    "two_player_2s": GeneratorFamily(
        strategies=_TWO_2S,
        sets=(
            ("G_11", (_SWAP_2P,)),
            ("G_21", (_SWAP_2P, _CROSS_2P)),
            ("G_22", (_TWIST_2P,)),
            ("G_31", (_SWAP_2P, _TWIST_2P)),
        ),
    ),
    "three_player_2s": GeneratorFamily(
        strategies=_THREE_2S,
        sets=(
            ("G_11", (_CYCLE_3P,)),
            ("G_21", (_CYCLE_3P, _SWAP_3P)),
            ("G_22", (_CYCLE_3P, _CROSS_3P)),
            ("G_23", (_TWISTED_CYCLE_3P,)),
            ("G_31", (_CYCLE_3P, _SWAP_3P, _HALF_TWISTED_CYCLE_3P)),
            ("G_32", (_CYCLE_3P, _SWAP_3P, _CROSS_3P)),
            ("G_41", (_CYCLE_3P, _SWAP_3P, _HALF_TWISTED_CYCLE_3P, _CROSS_3P)),
        ),
    ),
    "example_5_5": GeneratorFamily(
        strategies=_THREE_2S,
        sets=(("G", (_CYCLE_3P, _CROSS_3P)),),
    ),
    "example_5_6": GeneratorFamily(
        strategies=_TWO_2S,
        sets=(("G", (_SWAP_2P,)),),
    ),
    "one_orbit_3p": GeneratorFamily(
        strategies=_THREE_2S,
        sets=(
            (
                "G",
                (
                    "(1 2 3); 1:{a->d,b->c}; 2:{c->e,d->f}; 3:{e->a,f->b}",
                    "(1 2 3); 1:{a->c,b->d}; 2:{c->f,d->e}; 3:{e->a,f->b}",
                ),
            ),
        ),
    ),
    "example_5_9a": GeneratorFamily(
        strategies=_FOUR_2S,
        sets=(("G", ("(1 2 3 4); 1:{a->d,b->c}; 2:{c->e,d->f}; 3:{e->g,f->h}; 4:{g->a,h->b}",)),),
    ),
    "example_5_9b": GeneratorFamily(
        strategies=_FOUR_2S,
        sets=(
            (
                "G",
                (
                    "(1 2)(3 4); 1:{a->d,b->c}; 2:{c->a,d->b}; 3:{e->h,f->g}; 4:{g->e,h->f}",
                    "(1 3)(2 4); 1:{a->f,b->e}; 2:{c->h,d->g}; 3:{e->a,f->b}; 4:{g->c,h->d}",
                    "(1 4)(2 3); 1:{a->h,b->g}; 2:{c->f,d->e}; 3:{e->c,f->d}; 4:{g->a,h->b}",
                ),
            ),
        ),
    ),
    "example_5_10": GeneratorFamily(
        strategies=_FOUR_2S,
        sets=(
            (
                "G",
                (
                    "(1 2 3 4); 1:{a->c,b->d}; 2:{c->e,d->f}; 3:{e->h,f->g}; 4:{g->a,h->b}",
                    "(1 2); 1:{a->c,b->d}; 2:{c->a,d->b}; 3:{e->e,f->f}; 4:{g->h,h->g}",
                ),
            ),
        ),
    ),
    "example_5_11": GeneratorFamily(
        strategies=_SIX_2S,
        sets=(
            (
                "G",
                (
                    "(1 4)(2 5); 1:{a->h,b->g}; 2:{c->i,d->j}; 3:{e->f,f->e}; "
                    "4:{g->b,h->a}; 5:{i->c,j->d}; 6:{k->l,l->k}",
                    "(1 3 5)(2 4 6); 1:{a->e,b->f}; 2:{c->g,d->h}; 3:{e->i,f->j}; "
                    "4:{g->k,h->l}; 5:{i->a,j->b}; 6:{k->c,l->d}",
                ),
            ),
        ),
    ),
}

FAMILY_LABELS: dict[str, str] = {
    "two_player_2s": "Symmetric 2-player 2-strategy games",
    "three_player_2s": "Symmetric 3-player 2-strategy games",
    "example_5_5": "3-player n-transitive standard non-fully symmetric game",
    "example_5_6": "Fully symmetric 2-player 2-strategy game",
    "one_orbit_3p": "3-player game with a single parameter",
    "example_5_9a": "4-player game generated by a 4-cycle",
    "example_5_9b": "4-player game generated by the Klein group",
    "example_5_10": "4-player n-transitive non-standard game",
    "example_5_11": "6-player game with an order-12 group and no regular subgroup",
}


def get_family(family: str) -> GeneratorFamily:
    found = FAMILIES.get(family)
    if found is None:
        raise UnknownFamilyError(f"Unknown family: {family}. Options: {list(FAMILIES.keys())}")
    return found


def fixture_generators(family: str) -> dict[str, list[GameBijection]]:
    return get_family(family).generator_sets()


def g32_variants() -> dict[str, list[GameBijection]]:
    """The three pairwise unions of G_21, G_22 and G_23 in the 3-player family."""
    shape = GameShape(_THREE_2S)
    texts = {
        "G_21+G_22": (_CYCLE_3P, _SWAP_3P, _CROSS_3P),
        "G_21+G_23": (_CYCLE_3P, _SWAP_3P, _TWISTED_CYCLE_3P),
        "G_22+G_23": (_CYCLE_3P, _CROSS_3P, _TWISTED_CYCLE_3P),
    }
    return {name: [parse_bijection(text, shape) for text in group] for name, group in texts.items()}
