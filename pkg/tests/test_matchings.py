import hypothesis
import hypothesis.strategies as strat
import pytest

from symgame.errors import DocumentFormatError, InvalidPlayerError, PreconditionError
from symgame.services.matchings import (
    Matching,
    count_matchings,
    enumerate_matchings,
    equal_payoff_matchings,
    format_matching,
    induced_game_bijection,
    induced_group,
    induced_strategy_bijection,
    is_matching,
    is_strategy_trivial,
    matching_from_group,
    parse_matching,
)
from symgame.services.morphisms import (
    automorphism_group,
    bij_apply,
    bij_compose,
    bij_invert,
    bijection_closure,
    format_bijection,
    stabiliser_N,
)
from symgame.services.permutations import closure, parse_cycles, perm_compose, perm_invert, symmetric_group
from symgame.services.registry import fixture_generators
from tests.strategies import games, labelled_shapes, player_permutations, shape_of, small_shapes

THREE = shape_of([2, 2, 2])


def test_example_matching_induced_maps():
    matching = parse_matching("{(a,d,f),(b,c,e)}", THREE)
    assert matching.size == 2
    assert induced_strategy_bijection(matching, 3, 1) == (1, 0)
    assert induced_strategy_bijection(matching, 2, 2) == (0, 1)
    swap = induced_game_bijection(matching, parse_cycles("(1 3)", 3))
    assert format_bijection(swap) == "(1 3); 1:{a->f,b->e}; 2:{c->c,d->d}; 3:{e->b,f->a}"


def test_induced_strategy_bijection_rejects_bad_player():
    matching = parse_matching("{(a,d,f),(b,c,e)}", THREE)
    with pytest.raises(InvalidPlayerError):
        induced_strategy_bijection(matching, 0, 1)
    with pytest.raises(InvalidPlayerError):
        induced_strategy_bijection(matching, 1, 4)


def test_matching_text_round_trip():
    text = "{(a,d,f),(b,c,e)}"
    assert format_matching(parse_matching(text, THREE)) == text
    assert format_matching(parse_matching("{(b,c,e), (a,d,f)}", THREE)) == text
    for bad in ("(a,d,f),(b,c,e)", "{}"):
        with pytest.raises(DocumentFormatError):
            parse_matching(bad, THREE)


@hypothesis.settings(max_examples=200, deadline=None)
@hypothesis.given(strat.data())
def test_matching_text_round_trips_any_labels(data):
    shape = data.draw(labelled_shapes())
    matching = data.draw(strat.sampled_from(list(enumerate_matchings(shape))))
    assert parse_matching(format_matching(matching), shape) == matching


def test_rows_that_repeat_a_strategy_are_not_a_matching():
    assert not is_matching([(0, 0, 0), (1, 0, 1)], THREE)
    with pytest.raises(PreconditionError):
        Matching(THREE, ((0, 0, 0), (1, 0, 1)))
    with pytest.raises(PreconditionError):
        Matching(THREE, ((0, 0, 0),))


# ----------
# Groupoid and homomorphism laws
# ----------


@strat.composite
def matchings_with_permutations(draw):
    n = draw(strat.integers(2, 4))
    m = draw(strat.integers(1, 3))
    shape = shape_of([m] * n)
    found = list(enumerate_matchings(shape))
    matching = draw(strat.sampled_from(found))
    return matching, draw(player_permutations(n)), draw(player_permutations(n))


@hypothesis.settings(max_examples=300, deadline=None)
@hypothesis.given(matchings_with_permutations())
def test_induced_maps_form_a_groupoid(case):
    matching, _, _ = case
    n = matching.shape.n_players
    for i in range(1, n + 1):
        assert induced_strategy_bijection(matching, i, i) == tuple(range(matching.size))
        for j in range(1, n + 1):
            there = induced_strategy_bijection(matching, i, j)
            back = induced_strategy_bijection(matching, j, i)
            assert tuple(back[there[a]] for a in range(matching.size)) == tuple(range(matching.size))
            for k in range(1, n + 1):
                onward = induced_strategy_bijection(matching, j, k)
                assert tuple(onward[there[a]] for a in range(matching.size)) == induced_strategy_bijection(matching, i, k)


@hypothesis.settings(max_examples=300, deadline=None)
@hypothesis.given(matchings_with_permutations())
def test_induced_bijections_are_a_homomorphism(case):
    matching, pi, phi = case
    m_pi = induced_game_bijection(matching, pi)
    m_phi = induced_game_bijection(matching, phi)
    assert bij_compose(m_phi, m_pi) == induced_game_bijection(matching, perm_compose(phi, pi))
    assert bij_invert(m_pi) == induced_game_bijection(matching, perm_invert(pi))
    for row in matching.rows:
        assert bij_apply(m_pi, row) == row


@hypothesis.settings(max_examples=100, deadline=None)
@hypothesis.given(matchings_with_permutations())
def test_matching_is_recovered_from_its_induced_group(case):
    matching, pi, phi = case
    group = closure([pi, phi], matching.shape.n_players)
    induced = induced_group(matching, group)
    assert is_strategy_trivial(induced)
    if len({g(0) for g in group}) == matching.shape.n_players:
        assert matching_from_group(induced) == matching


def test_matching_from_group_preconditions(matching_pennies):
    with pytest.raises(PreconditionError, match="not strategy trivial"):
        matching_from_group(automorphism_group(matching_pennies))
    with pytest.raises(PreconditionError, match="not player transitive"):
        matching_from_group(bijection_closure([], THREE))


# ----------
# Counting and enumeration
# ----------


def test_two_player_two_strategy_matchings():
    found = [format_matching(matching) for matching in enumerate_matchings(shape_of([2, 2]))]
    assert found == ["{(a,c),(b,d)}", "{(a,d),(b,c)}"]


def test_two_player_three_strategy_matchings():
    found = {format_matching(matching) for matching in enumerate_matchings(shape_of([3, 3]))}
    assert found == {
        "{(a,d),(b,e),(c,f)}",
        "{(a,d),(b,f),(c,e)}",
        "{(a,e),(b,d),(c,f)}",
        "{(a,e),(b,f),(c,d)}",
        "{(a,f),(b,d),(c,e)}",
        "{(a,f),(b,e),(c,d)}",
    }


@pytest.mark.parametrize("n,m", [(n, m) for n in (2, 3, 4) for m in (1, 2, 3)])
def test_count_matches_enumeration(n, m):
    found = list(enumerate_matchings(shape_of([m] * n)))
    assert len(found) == count_matchings(n, m)
    assert len(set(found)) == len(found)


def test_count_examples():
    assert count_matchings(3, 2) == 4
    assert count_matchings(4, 3) == 216


@pytest.mark.parametrize("n", [2, 3, 4])
def test_two_strategy_matchings_partition_the_profiles(n):
    shape = shape_of([2] * n)
    rows = [row for matching in enumerate_matchings(shape) for row in matching.rows]
    assert sorted(rows) == list(shape.profiles())


def test_matchings_need_equal_strategy_counts():
    with pytest.raises(PreconditionError):
        list(enumerate_matchings(shape_of([2, 3])))


def test_equal_payoff_matchings_examples(matching_pennies, example_5_5):
    assert equal_payoff_matchings(matching_pennies) == []
    found = [format_matching(matching) for matching in equal_payoff_matchings(example_5_5)]
    assert found == ["{(a,c,e),(b,d,f)}"]
    assert all(matching.size == 2 for matching in equal_payoff_matchings(example_5_5))


@hypothesis.settings(max_examples=200, deadline=None)
@hypothesis.given(games(small_shapes(), values=strat.integers(0, 1)))
def test_equal_payoff_matchings_match_brute_force(game):
    oracle = [
        matching
        for matching in enumerate_matchings(game.shape)
        if all(len(set(game.vector(row))) == 1 for row in matching.rows)
    ]
    assert sorted(equal_payoff_matchings(game), key=lambda m: m.rows) == sorted(oracle, key=lambda m: m.rows)


def test_induced_group_of_symmetric_group():
    matching = parse_matching("{(a,d,f),(b,c,e)}", THREE)
    group = induced_group(matching, symmetric_group(3))
    assert group.order == 6
    assert matching_from_group(group) == matching


def test_example_5_5_first_generator_is_strategy_trivial():
    first, second = fixture_generators("example_5_5")["G"]
    cyclic = bijection_closure([first], THREE)
    assert is_strategy_trivial(cyclic)
    assert format_matching(matching_from_group(cyclic)) == "{(a,c,e),(b,d,f)}"

    generated = bijection_closure([first, second], THREE)
    assert stabiliser_N(generated).order == 1
    assert not is_strategy_trivial(generated)
    assert is_strategy_trivial(bijection_closure([], THREE))
