from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monoidlab.basisfile import BasisSyntaxError, expand_directive, format_basis, load_basis, parse_basis
from monoidlab.deduction import Identity, identity
from monoidlab.families import (
    RigidIdentity,
    RigidWord,
    chain_B,
    enumerate_rigid_words,
    family,
    ids_A,
    ids_B,
    ids_C,
    ids_D,
    ids_E,
    ids_O,
    m_test_profile,
    tm1_satisfies,
    tm_satisfies,
    word_w,
    words_B,
    words_D,
)
from monoidlab.words import alpha_canonical, apply_substitution, format_word, parse_word

W = parse_word


def test_ids_O():
    sys_ = ids_O()
    assert len(sys_) == 3
    assert set().union(*(i.variables() for i in sys_)) == {"x", "y", "t1", "t2"}
    for i in sys_:
        assert sorted(i.lhs) == sorted(i.rhs)
        assert alpha_canonical(i.lhs) != alpha_canonical(i.rhs)


def test_ids_A():
    (a3,) = list(ids_A(3))
    assert a3.lhs == W("x^3 t1 t2 t3") and a3.rhs == W("t1 x t2 x t3 x")
    with pytest.raises(ValueError):
        ids_A(2)


def test_words_and_ids_B():
    assert [format_word(w.to_word()) for w in words_B(3)] == ["x^2 t", "x t x", "t x^2"]
    assert len(ids_B(4)) == 6
    assert len(chain_B(4)) == 3
    for n in (3, 4, 5):
        ws = words_B(n)
        assert len({w.to_word() for w in ws}) == n
        assert all(w.r == 1 and w.total == n - 1 and w.n_limited(n - 1) for w in ws)
    with pytest.raises(ValueError):
        words_B(2)


def test_ids_C():
    c2 = list(ids_C(2))
    assert c2[0] == identity("x^4 = x^3")
    assert c2[1] == identity("x^3 t = t x^3")
    assert c2[2].lhs == W("x^4 t1 t2 t3 t4")
    with pytest.raises(ValueError):
        ids_C(1)


def test_words_D():
    assert [format_word(w.to_word()) for w in words_D(2)] == ["x t1 x^2", "x^2 t1 x"]
    for n in (2, 3, 4):
        ws = words_D(n)
        assert len(ws) == n
        assert all(w.cube_free() and w.total == 2 * n - 1 and w.n_limited(2 * n - 1)
                   for w in ws)
    with pytest.raises(ValueError):
        words_D(1)


def test_D_pairs_are_efficient():
    for n in (2, 3, 4):
        ws = words_D(n)
        for a in ws:
            for b in ws:
                assert RigidIdentity(a.exponents, b.exponents).efficient()
    assert not RigidIdentity((0, 1), (0, 2)).efficient()


def test_ids_E():
    assert list(ids_E(2)) == [identity("x^3 = x^2"), identity("x^2 t = t x^2")]
    e1 = list(ids_E(1))
    assert e1 == [identity("x^2 = x"), identity("x t = t x")]
    balanced = [sorted(i.lhs) == sorted(i.rhs) for i in ids_E(3)]
    assert balanced == [False, True]
    with pytest.raises(ValueError):
        ids_E(0)


def test_word_w():
    assert word_w(2, 3).to_word() == W("x t1 x t2 x t3 x")
    assert word_w(3, 1).to_word() == W("x^2 t1 x^2")
    for m in (2, 3, 4):
        for r in (1, 2, 3):
            w = word_w(m, r)
            assert w.m_free(m) and not w.m_free(m - 1)
            assert w.n_limited((m - 1) * (r + 1))
    with pytest.raises(ValueError):
        word_w(1, 1)


def test_rigid_word_validation():
    with pytest.raises(ValueError):
        RigidWord(())
    with pytest.raises(ValueError):
        RigidWord((1, -1))
    with pytest.raises(ValueError):
        RigidWord((1, 1), separators=("a", "b"))


def test_enumerate_small():
    got = [format_word(w.to_word()) for w in enumerate_rigid_words(1, 1)]
    assert got == ["1", "x", "t1", "t1 x", "x t1"]
    assert len(list(enumerate_rigid_words(0, 2))) == 3


@pytest.mark.parametrize("r_max,sum_max", [(0, 4), (1, 3), (2, 3), (3, 2), (2, 5)])
def test_enumerate_counts_by_stars_and_bars(r_max, sum_max):
    expected = sum(comb(sum_max + r + 1, r + 1) for r in range(r_max + 1))
    words = list(enumerate_rigid_words(r_max, sum_max))
    assert len(words) == expected
    for w in words:
        assert parse_word(format_word(w.to_word())) == w.to_word()


def test_families_lookup():
    assert family("O") == ids_O()
    assert family("B", 3) == ids_B(3)
    for bad in [("Z", 1), ("O", 3), ("A", None)]:
        with pytest.raises(ValueError):
            family(*bad)


# -- basis files --------------------------------------------------------------

def test_basis_directives_and_files(tmp_path):
    assert expand_directive("@A(3)") == ids_A(3)
    text = "# comment\n@O\nx y = y x  # trailing\n\n@B(3)\n"
    sys_ = parse_basis(text)
    assert len(sys_) == 3 + 1 + 3
    f = tmp_path / "b.eq"
    f.write_text(format_basis(sys_))
    assert load_basis(str(f)) == sys_
    assert load_basis("@O+@A(3)") == ids_O() | ids_A(3)
    with pytest.raises(BasisSyntaxError):
        parse_basis("@Q(3)")
    with pytest.raises(BasisSyntaxError):
        parse_basis("x y")
    with pytest.raises(FileNotFoundError):
        load_basis(str(tmp_path / "missing.eq"))
    assert load_basis("x y = y x; x x = x") == parse_basis("x y = y x\nx x = x")


# -- m-testable profiles ------------------------------------------------------

def test_m_test_profile():
    p = m_test_profile(W("x y x y x"), 2)
    assert p.prefix == W("x") and p.suffix == W("x")
    assert p.factor_set == {W("x y"), W("y x")}
    p = m_test_profile(W("x"), 3)
    assert p.prefix == p.suffix == W("x") and p.factor_set == frozenset()
    p = m_test_profile((), 2)
    assert p.prefix == p.suffix == () and p.factor_set == frozenset()
    with pytest.raises(ValueError):
        m_test_profile(W("x"), 1)


def test_tm_satisfies_examples():
    assert tm_satisfies(2, identity("x y x = x y x y x"))
    assert not tm_satisfies(2, identity("x y = y x"))
    assert tm_satisfies(3, identity("x^2 t x = x^2 t x"))
    with pytest.raises(ValueError):
        tm_satisfies(2, identity("1 = x"))


def test_tm1_satisfies_examples():
    assert not tm1_satisfies(2, identity("x t x = x^2 t"))
    assert tm1_satisfies(2, identity("x y = x y"))
    # deleting x leaves t against t t, whose length-2 factor sets differ
    assert not tm1_satisfies(2, identity("x t x = x t x t x"))
    assert not tm_satisfies(2, identity("t = t t"))
    assert tm_satisfies(2, identity("x t x = x t x t x"))


def test_tm1_mixed_empty_deletion_fails():
    assert not tm1_satisfies(2, identity("x = x y"))
    assert tm1_satisfies(3, identity("1 = 1"))


def test_word_w_is_separated_from_other_rigid_words():
    for m in (2, 3):
        for r in (1, 2, 3):
            target = word_w(m, r)
            bound = 2 * (m - 1) * (r + 1)
            for exps in product(range(m + 1), repeat=r + 1):
                if sum(exps) > bound:
                    continue
                v = RigidWord(exps)
                same = tm1_satisfies(m, Identity(target.to_word(), v.to_word()))
                assert same == (v.exponents == target.exponents), (m, r, exps)


# -- properties -----------------------------------------------------------

nonempty = st.lists(st.sampled_from(["x", "y", "t"]), min_size=1, max_size=6).map(tuple)
possibly_empty = st.lists(st.sampled_from(["x", "y", "t"]), max_size=5).map(tuple)
ms = st.integers(min_value=2, max_value=4)


@given(ms, nonempty, nonempty, nonempty)
def test_tm_is_an_equivalence(m, u, v, w):
    assert tm_satisfies(m, Identity(u, u))
    assert tm_satisfies(m, Identity(u, v)) == tm_satisfies(m, Identity(v, u))
    if tm_satisfies(m, Identity(u, v)) and tm_satisfies(m, Identity(v, w)):
        assert tm_satisfies(m, Identity(u, w))


@given(ms, nonempty, nonempty)
def test_tm1_implies_tm(m, u, v):
    if tm1_satisfies(m, Identity(u, v)):
        assert tm_satisfies(m, Identity(u, v))


IMAGES = [(), ("a",), ("b",), ("c",), ("a", "b"), ("b", "a"), ("a", "a")]


def substitution_oracle(m, u, v):
    """Monoid semantics by brute force: images of every substitution into
    short words must have matching profiles, or both be empty."""
    vs = sorted(set(u) | set(v))
    for combo in product(IMAGES, repeat=len(vs)):
        sigma = dict(zip(vs, combo))
        a, b = apply_substitution(sigma, u), apply_substitution(sigma, v)
        if not a and not b:
            continue
        if not a or not b or m_test_profile(a, m) != m_test_profile(b, m):
            return False
    return True


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=2, max_value=3), possibly_empty, possibly_empty)
def test_tm1_agrees_with_substitution_oracle(m, u, v):
    assert tm1_satisfies(m, Identity(u, v)) == substitution_oracle(m, u, v)
