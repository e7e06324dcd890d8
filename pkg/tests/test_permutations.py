import math

import hypothesis
import hypothesis.strategies as strat
import pytest

from symgame.errors import DocumentFormatError, ShapeMismatchError
from symgame.services.permutations import (
    PlayerPermutation,
    act_on_profile,
    closure,
    format_cycles,
    has_regular_subgroup,
    is_n_transitive,
    is_regular,
    is_transitive,
    orbits,
    parse_cycles,
    perm_compose,
    perm_invert,
    stabiliser,
    symmetric_group,
    transpositions,
)
from tests.strategies import player_permutations


def cyc(text, degree):
    return parse_cycles(text, degree)


def test_compose_and_invert():
    assert format_cycles(perm_compose(cyc("(1 2)", 3), cyc("(1 2 3)", 3))) == "(2 3)"
    assert format_cycles(perm_invert(cyc("(1 2 3)", 3))) == "(1 3 2)"
    pi = cyc("(1 3)(2 4)", 4)
    assert perm_compose(pi, PlayerPermutation.identity(4)) == pi
    with pytest.raises(ShapeMismatchError):
        perm_compose(cyc("(1 2)", 2), cyc("(1 2)", 3))


def test_act_on_profile_examples():
    pi = cyc("(1 2 3)", 3)
    a, b = 0, 1
    assert act_on_profile(pi, (a, a, b)) == (b, a, a)
    assert act_on_profile(pi, ("s1", "s2", "s3")) == ("s3", "s1", "s2")
    assert act_on_profile(PlayerPermutation.identity(3), (1, 0, 1)) == (1, 0, 1)


@hypothesis.given(strat.integers(2, 6).flatmap(
    lambda n: strat.tuples(player_permutations(n), player_permutations(n), strat.lists(strat.integers(0, 2), min_size=n, max_size=n))
))
def test_left_action_law_and_duality(case):
    tau, pi, s = case
    s = tuple(s)
    assert act_on_profile(perm_compose(tau, pi), s) == act_on_profile(tau, act_on_profile(pi, s))
    assert act_on_profile(perm_invert(pi), s) == tuple(s[pi(i)] for i in range(len(s)))
    assert perm_compose(pi, perm_invert(pi)) == PlayerPermutation.identity(len(s))


def test_closure_examples():
    assert closure([cyc("(1 2)", 3), cyc("(1 2 3)", 3)]).order == 6
    cyclic = closure([cyc("(1 2 3)", 3)])
    assert {format_cycles(g) for g in cyclic} == {"()", "(1 2 3)", "(1 3 2)"}
    assert closure([], 3).order == 1
    klein = closure([cyc("(1 2)(3 4)", 4), cyc("(1 3)(2 4)", 4)])
    assert {format_cycles(g) for g in klein} == {"()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_transpositions_generate_symmetric_group(n):
    group = closure(transpositions(n), n)
    assert group.order == math.factorial(n)
    assert set(group.elements) == set(symmetric_group(n).elements)


@hypothesis.given(strat.integers(2, 4).flatmap(lambda n: strat.lists(player_permutations(n), max_size=3).map(lambda gens: (n, gens))))
def test_closure_satisfies_group_axioms(case):
    n, gens = case
    group = closure(gens, n)
    members = set(group.elements)
    assert PlayerPermutation.identity(n) in members
    assert all(g in members for g in gens)
    for a in members:
        assert perm_invert(a) in members
        for b in members:
            assert perm_compose(a, b) in members


def test_transitivity_predicates():
    klein = closure([cyc("(1 2)(3 4)", 4), cyc("(1 3)(2 4)", 4)])
    assert is_transitive(klein, 4)
    assert not is_n_transitive(klein, 4)
    assert is_regular(klein)
    assert is_transitive(closure([cyc("(1 2 3)", 3)]), 3)
    assert not is_transitive(closure([], 2), 2)
    assert is_n_transitive(symmetric_group(3), 3)


def test_degree_six_group_without_regular_subgroup():
    group = closure([cyc("(1 4)(2 5)", 6), cyc("(1 3 5)(2 4 6)", 6)])
    assert group.order == 12
    assert is_transitive(group)
    assert not has_regular_subgroup(group)
    assert has_regular_subgroup(symmetric_group(4))


def test_stabiliser_and_orbits():
    s3 = symmetric_group(3)
    stab = stabiliser(s3, 1)
    assert {format_cycles(g) for g in stab} == {"()", "(2 3)"}
    klein = closure([cyc("(1 2)(3 4)", 4), cyc("(1 3)(2 4)", 4)])
    assert orbits(klein) == [(1, 2, 3, 4)]
    assert orbits(closure([], 3)) == [(1,), (2,), (3,)]
    assert orbits(closure([cyc("(1 3)", 4)])) == [(1, 3), (2,), (4,)]


def test_cycle_notation_forms():
    assert parse_cycles("()", 4) == PlayerPermutation.identity(4)
    assert parse_cycles("(123)", 3) == parse_cycles("(1 2 3)", 3)
    assert parse_cycles("(14)∘(25)", 6) == parse_cycles("(1 4)(2 5)", 6)
    assert format_cycles(parse_cycles("(3 1 2)(5 4)", 5)) == "(1 2 3)(4 5)"
    for bad in ("(1 2", "(1 1)", "(1 7)", "x(1 2)", "(a b)"):
        with pytest.raises(DocumentFormatError):
            parse_cycles(bad, 3)
