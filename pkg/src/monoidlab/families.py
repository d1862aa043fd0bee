"""Identity families, rigid words, and the m-testable identity test."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

from .deduction import Identity, IdentitySystem
from .words import Word, delete, factors_of_length, format_word, parse_word, variables


@dataclass(frozen=True)
class RigidWord:
    """``x^e0 t1 x^e1 ... tr x^er``."""

    exponents: tuple[int, ...]
    base: str = "x"
    separators: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.exponents:
            raise ValueError("a rigid word needs at least e0")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")
        if self.separators is not None and len(self.separators) != self.r:
            raise ValueError("need exactly r separators")

    @property
    def r(self) -> int:
        return len(self.exponents) - 1

    @property
    def seps(self) -> tuple[str, ...]:
        if self.separators is not None:
            return self.separators
        return tuple(f"t{i}" for i in range(1, self.r + 1))

    @property
    def total(self) -> int:
        return sum(self.exponents)

    def to_word(self) -> Word:
        out = [self.base] * self.exponents[0]
        for t, e in zip(self.seps, self.exponents[1:]):
            out.append(t)
            out.extend([self.base] * e)
        return tuple(out)

    def n_limited(self, n: int) -> bool:
        return self.total <= n

    def cube_free(self) -> bool:
        return all(e < 3 for e in self.exponents)

    def m_free(self, m: int) -> bool:
        return all(e < m for e in self.exponents)

    def __str__(self) -> str:
        return format_word(self.to_word())


@dataclass(frozen=True)
class RigidIdentity:
    lhs_exponents: tuple[int, ...]
    rhs_exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.lhs_exponents) != len(self.rhs_exponents):
            raise ValueError("both sides must share r")

    def efficient(self) -> bool:
        return all(e or f for e, f in zip(self.lhs_exponents, self.rhs_exponents))

    def to_identity(self) -> Identity:
        return Identity(RigidWord(self.lhs_exponents).to_word(),
                        RigidWord(self.rhs_exponents).to_word())


def _ids(name: str, pairs: Sequence[tuple[str, str]]) -> IdentitySystem:
    return IdentitySystem(name, [Identity(parse_word(a), parse_word(b)) for a, b in pairs])


def ids_O() -> IdentitySystem:
    return _ids("O", [
        ("x y t1 x t2 y", "y x t1 x t2 y"),
        ("x t1 x y t2 y", "x t1 y x t2 y"),
        ("x t1 y t2 x y", "x t1 y t2 y x"),
    ])


def _seps(k: int) -> list[str]:
    return [f"t{i}" for i in range(1, k + 1)]


def _power_then_rotate(power: int) -> Identity:
    ts = _seps(power)
    lhs = ("x",) * power + tuple(ts)
    rhs = tuple(v for t in ts for v in (t, "x"))
    return Identity(lhs, rhs)


def ids_A(n: int) -> IdentitySystem:
    if n < 3:
        raise ValueError("A(n) needs n >= 3")
    return IdentitySystem(f"A({n})", [_power_then_rotate(n)])


def _pairwise(name: str, ws: list[Word]) -> IdentitySystem:
    # adjacent pairs first, matching the displayed chain, then the rest
    chain = [(ws[i], ws[i + 1]) for i in range(len(ws) - 1)]
    rest = [(a, b) for a, b in combinations(ws, 2) if (a, b) not in chain]
    return IdentitySystem(name, [Identity(a, b) for a, b in chain + rest])


def words_B(n: int) -> list[RigidWord]:
    if n < 3:
        raise ValueError("B(n) needs n >= 3")
    return [RigidWord((n - 1 - i, i), separators=("t",)) for i in range(n)]


def ids_B(n: int) -> IdentitySystem:
    return _pairwise(f"B({n})", [w.to_word() for w in words_B(n)])


def chain_B(n: int) -> IdentitySystem:
    ws = [w.to_word() for w in words_B(n)]
    return IdentitySystem(f"B({n}) chain", [Identity(a, b) for a, b in zip(ws, ws[1:])])


def ids_C(n: int) -> IdentitySystem:
    if n < 2:
        raise ValueError("C(n) needs n >= 2")
    return IdentitySystem(f"C({n})", [
        Identity(("x",) * 4, ("x",) * 3),
        Identity(("x", "x", "x", "t"), ("t", "x", "x", "x")),
        _power_then_rotate(2 * n),
    ])


def words_D(n: int) -> list[RigidWord]:
    if n < 2:
        raise ValueError("D(n) needs n >= 2")
    return [RigidWord(tuple(1 if j == i else 2 for j in range(n))) for i in range(n)]


def ids_D(n: int) -> IdentitySystem:
    return _pairwise(f"D({n})", [w.to_word() for w in words_D(n)])


def ids_E(m: int) -> IdentitySystem:
    if m < 1:
        raise ValueError("E(m) needs m >= 1")
    return IdentitySystem(f"E({m})", [
        Identity(("x",) * (m + 1), ("x",) * m),
        Identity(("x",) * m + ("t",), ("t",) + ("x",) * m),
    ])


def word_w(m: int, r: int) -> RigidWord:
    if m < 2 or r < 1:
        raise ValueError("word_w needs m >= 2 and r >= 1")
    return RigidWord((m - 1,) * (r + 1))


def enumerate_rigid_words(r_max: int, sum_max: int, r_min: int = 0,
                          max_exponent: int | None = None) -> Iterator[RigidWord]:
    """All rigid words with ``r_min <= r <= r_max`` and exponent sum at most
    ``sum_max``, by r and then lexicographically by exponent vector."""
    if r_max < 0 or sum_max < 0:
        raise ValueError("bounds must be nonnegative")
    top = sum_max if max_exponent is None else min(sum_max, max_exponent)
    for r in range(r_min, r_max + 1):
        for exps in product(range(top + 1), repeat=r + 1):
            if sum(exps) <= sum_max:
                yield RigidWord(exps)


# -- m-testable theory ----------------------------------------------------

@dataclass(frozen=True)
class MTestProfile:
    prefix: Word
    suffix: Word
    factor_set: frozenset[Word]


def m_test_profile(w: Word, m: int) -> MTestProfile:
    if m < 2:
        raise ValueError("m must be at least 2")
    k = min(m - 1, len(w))
    return MTestProfile(w[:k], w[len(w) - k:], frozenset(factors_of_length(w, m)))


def tm_satisfies(m: int, ident: Identity) -> bool:
    """Whether the m-testable semigroup satisfies ``ident`` (both sides nonempty)."""
    if not ident.lhs or not ident.rhs:
        raise ValueError("semigroup identities need nonempty sides")
    return m_test_profile(ident.lhs, m) == m_test_profile(ident.rhs, m)


def tm1_satisfies(m: int, ident: Identity) -> bool:
    """Monoid-level check: every deletion of variables must still hold."""
    vs = ident.variables()
    for k in range(len(vs) + 1):
        for gone in combinations(vs, k):
            g = frozenset(gone)
            u, v = delete(ident.lhs, g), delete(ident.rhs, g)
            if not u and not v:
                continue
            if not u or not v:
                return False
            if not tm_satisfies(m, Identity(u, v)):
                return False
    return True


# -- named families -------------------------------------------------------

FAMILIES = {
    "O": (ids_O, 0),
    "A": (ids_A, 1),
    "B": (ids_B, 1),
    "C": (ids_C, 1),
    "D": (ids_D, 1),
    "E": (ids_E, 1),
}


def family(name: str, param: int | None = None) -> IdentitySystem:
    try:
        fn, arity = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}") from None
    if arity == 0:
        if param is not None:
            raise ValueError(f"family {name} takes no parameter")
        return fn()
    if param is None:
        raise ValueError(f"family {name} needs a parameter, e.g. {name}(3)")
    return fn(param)


def variables_of(system: IdentitySystem) -> tuple[str, ...]:
    return variables(tuple(v for i in system for v in i.lhs + i.rhs))
