"""Words over the free monoid, substitutions, and the pattern matcher.

A word is a plain tuple of variable names; the empty tuple is the identity
element and prints as ``1``.  Keeping words as tuples makes them hashable,
cheap to slice and directly comparable, which the deduction search relies on.
"""

from __future__ import annotations

import re
from typing import Iterator, Mapping, NamedTuple

Word = tuple[str, ...]
Substitution = Mapping[str, Word]

EMPTY: Word = ()

_VARIABLE = re.compile(r"[a-z][a-z0-9_]*\Z")
_TOKEN = re.compile(r"([a-z][a-z0-9_]*)(?:\^([0-9]+))?\Z")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def is_variable(name: str) -> bool:
    return bool(_VARIABLE.match(name))


def parse_word(text: str) -> Word:
    """Parse ``"x^2 t1 x"`` style text into a word.

    Tokens are whitespace separated; ``v^k`` repeats ``v`` k times (k may be
    0) and the lone token ``1`` is the empty word.
    """
    tokens = [(m.start(), m.group()) for m in re.finditer(r"\S+", text)]
    if not tokens:
        raise WordSyntaxError("empty input", text, 0)
    if len(tokens) == 1 and tokens[0][1] == "1":
        return EMPTY
    letters: list[str] = []
    for pos, tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            if tok == "1":
                raise WordSyntaxError("'1' must stand alone", text, pos)
            raise WordSyntaxError(f"bad token {tok!r}", text, pos)
        name, exp = m.group(1), m.group(2)
        letters.extend([name] * (int(exp) if exp is not None else 1))
    return tuple(letters)


def format_word(w: Word, compact: bool = True) -> str:
    """Render a word; runs of a letter collapse to ``v^k`` when ``compact``."""
    if not w:
        return "1"
    if not compact:
        return " ".join(w)
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        out.append(w[i] if j - i == 1 else f"{w[i]}^{j - i}")
        i = j
    return " ".join(out)


def word(text: str | Word) -> Word:
    """Coerce text or an existing tuple to a word."""
    if isinstance(text, str):
        return parse_word(text)
    return tuple(text)


def variables(w: Word) -> tuple[str, ...]:
    """Distinct variables of ``w`` in order of first occurrence."""
    return tuple(dict.fromkeys(w))


def apply_substitution(sigma: Substitution, w: Word) -> Word:
    out: list[str] = []
    for v in w:
        img = sigma.get(v)
        if img is None:
            out.append(v)
        else:
            out.extend(img)
    return tuple(out)


def delete(w: Word, gone: set[str] | frozenset[str]) -> Word:
    """Substitute the empty word for every variable in ``gone``."""
    return tuple(v for v in w if v not in gone)


def factors(w: Word) -> set[Word]:
    return {w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1)}


def factors_of_length(w: Word, k: int) -> set[Word]:
    return {w[i:i + k] for i in range(len(w) - k + 1)} if k > 0 else set()


def alpha_canonical(w: Word) -> Word:
    names: dict[str, str] = {}
    for v in w:
        if v not in names:
            names[v] = f"v{len(names) + 1}"
    return tuple(names[v] for v in w)


class MatchSolution(NamedTuple):
    sigma: dict[str, Word]
    prefix: Word
    suffix: Word

    def image(self, pattern: Word) -> Word:
        return apply_substitution(self.sigma, pattern)

    def key(self) -> tuple:
        return (self.prefix, tuple(sorted(self.sigma.items())), self.suffix)


def iter_matches(pattern: Word, target: Word, allow_empty: bool = True
                 ) -> Iterator[tuple[int, int, dict[str, Word]]]:
    """Yield ``(start, end, bindings)`` with ``target[start:end] == sigma(pattern)``.

    Backtracks over pattern positions; bound variables are checked by slice
    comparison, unbound ones try every length.  Order is lexicographic in the
    split positions (start first, then each boundary).  The yielded dict is
    owned by the caller.
    """
    n = len(target)
    plen = len(pattern)
    # occurrences of each variable in pattern[k:], for the length lower bound
    remaining = [dict() for _ in range(plen + 1)]
    for k in range(plen - 1, -1, -1):
        counts = dict(remaining[k + 1])
        counts[pattern[k]] = counts.get(pattern[k], 0) + 1
        remaining[k] = counts
    floor = 0 if allow_empty else 1

    def min_rest(k: int, bound: dict[str, Word]) -> int:
        total = 0
        for v, c in remaining[k].items():
            b = bound.get(v)
            total += c * (len(b) if b is not None else floor)
        return total

    def extend(k: int, pos: int, bound: dict[str, Word]) -> Iterator[int]:
        if k == plen:
            yield pos
            return
        v = pattern[k]
        b = bound.get(v)
        if b is not None:
            end = pos + len(b)
            if target[pos:end] == b:
                yield from extend(k + 1, end, bound)
            return
        rest = min_rest(k + 1, bound)
        for end in range(pos + floor, n - rest + 1):
            bound[v] = target[pos:end]
            yield from extend(k + 1, end, bound)
            del bound[v]

    for start in range(n + 1):
        bound: dict[str, Word] = {}
        for end in extend(0, start, bound):
            yield start, end, dict(bound)


def match_pattern(pattern: Word, target: Word, allow_empty: bool = True
                  ) -> list[MatchSolution]:
    """Every ``(sigma, prefix, suffix)`` with ``prefix sigma(pattern) suffix == target``.

    ``sigma`` is defined exactly on the variables of ``pattern``.  Empty
    images are allowed unless ``allow_empty`` is false.
    """
    out = []
    seen = set()
    for start, end, sigma in iter_matches(pattern, target, allow_empty):
        sol = MatchSolution(sigma, target[:start], target[end:])
        key = sol.key()
        if key not in seen:
            seen.add(key)
            out.append(sol)
    return out
