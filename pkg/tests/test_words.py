from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monoidlab.words import (
    WordSyntaxError,
    alpha_canonical,
    apply_substitution,
    factors,
    format_word,
    match_pattern,
    parse_word,
)


def W(text):
    return parse_word(text)


@pytest.mark.parametrize("text,expected", [
    ("x^2 t1 x", ("x", "x", "t1", "x")),
    ("1", ()),
    ("x^0 t", ("t",)),
    ("  a_1   b ", ("a_1", "b")),
])
def test_parse_word(text, expected):
    assert parse_word(text) == expected


@pytest.mark.parametrize("bad", ["", "X", "x^", "x y^a", "1 x", "x-y", "x^-1"])
def test_parse_word_rejects(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_syntax_error_reports_position():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("x y Z")
    assert info.value.position == 4


def test_format_word():
    assert format_word(()) == "1"
    assert format_word(W("x x t1 x")) == "x^2 t1 x"
    assert format_word(W("x x t1 x"), compact=False) == "x x t1 x"


@pytest.mark.parametrize("sigma,w,expected", [
    ({"x": W("a b")}, "x t x", "a b t a b"),
    ({"x": ()}, "x y x", "y"),
    ({}, "x y", "x y"),
])
def test_apply_substitution(sigma, w, expected):
    assert apply_substitution(sigma, W(w)) == W(expected)


def test_factors():
    assert factors(W("x y x")) == {W(s) for s in ["x", "y", "x y", "y x", "x y x"]}
    assert factors(()) == set()
    assert factors(W("x x")) == {W("x"), W("x x")}


def test_alpha_canonical():
    assert alpha_canonical(W("y t y")) == W("v1 v2 v1")
    assert alpha_canonical(()) == ()
    assert alpha_canonical(W("x t1 x t2")) == W("v1 v2 v1 v3")


def _sols(pattern, target, allow_empty=True):
    return [({k: v for k, v in s.sigma.items()}, s.prefix, s.suffix)
            for s in match_pattern(W(pattern), W(target), allow_empty)]


def test_match_single_variable():
    sols = _sols("x", "a b")
    assert len(sols) == 6
    assert sorted(s[0]["x"] for s in sols).count(()) == 3
    assert {s[0]["x"] for s in sols} == {(), ("a",), ("b",), ("a", "b")}


def test_match_square():
    sols = _sols("x x", "a a")
    assert len(sols) == 4
    assert [s[0]["x"] for s in sols].count(("a",)) == 1


def test_match_two_variables_into_letter():
    sols = _sols("x y", "a")
    assert len(sols) == 4
    assert ({"x": ("a",), "y": ()}, (), ()) in sols
    assert ({"x": (), "y": ("a",)}, (), ()) in sols
    assert sum(1 for s in sols if s[0] == {"x": (), "y": ()}) == 2


def test_match_nonempty_flag():
    assert _sols("x", "a b", allow_empty=False) == [
        ({"x": ("a",)}, (), ("b",)), ({"x": ("a", "b")}, (), ()), ({"x": ("b",)}, ("a",), ())]


def test_match_order_is_by_split_positions():
    sols = match_pattern(W("x"), W("a b"))
    keys = [(len(s.prefix), len(s.prefix) + len(s.sigma["x"])) for s in sols]
    assert keys == sorted(keys)


# -- independent oracle: assign factors-or-empty to variables, then locate ----

def oracle_matches(pattern, target):
    vs = list(dict.fromkeys(pattern))
    choices = [()] + sorted(factors(target))
    found = set()
    for combo in product(choices, repeat=len(vs)):
        sigma = dict(zip(vs, combo))
        img = apply_substitution(sigma, pattern)
        for i in range(len(target) - len(img) + 1):
            if target[i:i + len(img)] == img:
                found.add((target[:i], tuple(sorted(sigma.items())), target[i + len(img):]))
    return found


letters = st.sampled_from(["a", "b", "c"])
pvars = st.sampled_from(["x", "y", "z"])


@settings(max_examples=120, deadline=None)
@given(st.lists(pvars, max_size=4), st.lists(letters, max_size=6))
def test_match_pattern_agrees_with_oracle(pattern, target):
    pattern, target = tuple(pattern), tuple(target)
    sols = match_pattern(pattern, target)
    keys = [s.key() for s in sols]
    assert len(keys) == len(set(keys))
    assert set(keys) == oracle_matches(pattern, target)
    for s in sols:
        assert s.prefix + apply_substitution(s.sigma, pattern) + s.suffix == target


words = st.lists(st.sampled_from(["x", "y", "t1", "t_2", "ab"]), max_size=10).map(tuple)


@given(words)
def test_parse_format_round_trip(w):
    assert parse_word(format_word(w)) == w
    assert parse_word(format_word(w, compact=False)) == w


@given(words, words, st.dictionaries(st.sampled_from(["x", "y"]), words, max_size=2))
def test_substitution_is_homomorphic(u, v, sigma):
    assert apply_substitution(sigma, u + v) == \
        apply_substitution(sigma, u) + apply_substitution(sigma, v)
    assert len(apply_substitution(sigma, u)) == sum(len(sigma.get(a, (a,))) for a in u)


@given(words, st.permutations(["x", "y", "t1", "t_2", "ab"]))
def test_alpha_canonical_invariant_under_renaming(w, perm):
    rename = dict(zip(["x", "y", "t1", "t_2", "ab"], perm))
    assert alpha_canonical(tuple(rename[a] for a in w)) == alpha_canonical(w)
