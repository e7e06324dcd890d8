import hypothesis
import pytest

from symgame.errors import LabelMismatchError
from symgame.services.game import utilities_identical
from symgame.services.label_dependent import (
    AnonymityReport,
    FullSymmetryCondition,
    anonymity,
    invariant_group,
    is_invariant,
    label_dep_fully_symmetric,
    label_dep_standard_symmetric,
    maskin_condition,
    shares_labels,
)
from symgame.services.permutations import format_cycles, parse_cycles
from tests.strategies import shared_label_games


def test_example_2_1_is_fully_symmetric(example_2_1):
    for condition in FullSymmetryCondition:
        assert label_dep_fully_symmetric(example_2_1, condition)
    standard, group = label_dep_standard_symmetric(example_2_1)
    assert standard
    assert group.order == 6


def test_example_3_6_is_standard_but_not_fully_symmetric(example_3_6):
    assert is_invariant(example_3_6, parse_cycles("(1 2 3)", 3))
    assert not is_invariant(example_3_6, parse_cycles("(1 2)", 3))
    standard, group = label_dep_standard_symmetric(example_3_6)
    assert standard
    assert {format_cycles(pi) for pi in group} == {"()", "(1 2 3)", "(1 3 2)"}
    for condition in FullSymmetryCondition:
        assert not label_dep_fully_symmetric(example_3_6, condition)


def test_weakly_anonymous_example_is_not_fully_symmetric(example_3_1):
    for condition in FullSymmetryCondition:
        assert label_dep_fully_symmetric(example_3_1, condition) is False
    assert label_dep_standard_symmetric(example_3_1)[0] is False


def test_fully_anonymous_example_meets_maskin_condition(example_3_3):
    assert maskin_condition(example_3_3) is True
    assert label_dep_fully_symmetric(example_3_3) is True


def test_maskin_condition_is_stricter_than_full_symmetry(example_2_1):
    assert label_dep_fully_symmetric(example_2_1)
    assert not maskin_condition(example_2_1)
    b_a_a = example_2_1.shape.parse_profile("(b,a,a)")
    a_a_b = example_2_1.shape.parse_profile("(a,a,b)")
    assert example_2_1.u(0, b_a_a) == 3
    assert example_2_1.u(1, a_a_b) == 2


@pytest.mark.parametrize(
    "name,expected",
    [
        ("example_3_1", AnonymityReport(True, False, False)),
        ("example_3_2", AnonymityReport(True, True, False)),
        ("example_3_3", AnonymityReport(True, True, True)),
    ],
)
def test_anonymity_examples(request, name, expected):
    assert anonymity(request.getfixturevalue(name)) == expected


def test_anonymity_report_rejects_broken_chain():
    with pytest.raises(ValueError):
        AnonymityReport(weakly_anonymous=True, anonymous=False, fully_anonymous=True)
    with pytest.raises(ValueError):
        AnonymityReport(weakly_anonymous=False, anonymous=True, fully_anonymous=False)


def test_label_mismatch_is_rejected(gamma1, matching_pennies):
    assert not shares_labels(gamma1)
    assert shares_labels(matching_pennies)
    with pytest.raises(LabelMismatchError):
        invariant_group(gamma1)
    with pytest.raises(LabelMismatchError):
        label_dep_fully_symmetric(gamma1, "iv")
    with pytest.raises(LabelMismatchError):
        anonymity(gamma1)
    with pytest.raises(LabelMismatchError):
        maskin_condition(gamma1)


def test_unknown_condition_is_rejected(example_2_1):
    with pytest.raises(ValueError):
        label_dep_fully_symmetric(example_2_1, "vi")


# ----------
# Equivalences on random shared-label games
# ----------


@hypothesis.settings(max_examples=500, deadline=None)
@hypothesis.given(shared_label_games(n=3))
def test_full_symmetry_conditions_agree(game):
    verdicts = {condition: label_dep_fully_symmetric(game, condition) for condition in FullSymmetryCondition}
    assert len(set(verdicts.values())) == 1, verdicts


@hypothesis.settings(max_examples=200, deadline=None)
@hypothesis.given(shared_label_games(n=2))
def test_two_player_maskin_condition_matches_full_symmetry(game):
    assert maskin_condition(game) == label_dep_fully_symmetric(game)


@hypothesis.settings(max_examples=500, deadline=None)
@hypothesis.given(shared_label_games(n=3))
def test_three_player_maskin_condition_matches_full_anonymity(game):
    assert maskin_condition(game) == anonymity(game).fully_anonymous


@hypothesis.settings(max_examples=500, deadline=None)
@hypothesis.given(shared_label_games(n=3))
def test_full_anonymity_is_full_symmetry_with_identical_utilities(game):
    expected = label_dep_fully_symmetric(game) and utilities_identical(game)
    assert anonymity(game).fully_anonymous == expected


@hypothesis.settings(max_examples=200, deadline=None)
@hypothesis.given(shared_label_games(n=3))
def test_invariant_group_is_closed(game):
    group = invariant_group(game)
    assert all(is_invariant(game, pi) for pi in group)
    standard, _ = label_dep_standard_symmetric(game)
    assert standard == (len({pi(0) for pi in group}) == 3)
