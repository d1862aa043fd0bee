"""Direct deducibility, bounded deduction closure and basis comparison.

Rewriting is done in the monoid signature: a variable may be sent to the
empty word.  Rather than enumerating empty images inside the matcher, each
rule is precompiled into its *deletion instances* (the identity with some
variables erased), keeping only the instances that are still nontrivial; the
instances are then matched with nonempty images only.  Every substitution
factors uniquely as a deletion followed by a nonempty substitution, so the
rewrite sets agree with the naive definition while skipping the flood of
no-op matches that empty images produce.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Union

from .words import (
    MatchSolution,
    Word,
    apply_substitution,
    delete,
    format_word,
    iter_matches,
    variables,
    word,
)


@dataclass(frozen=True)
class Identity:
    lhs: Word
    rhs: Word

    @classmethod
    def parse(cls, text: str) -> "Identity":
        if text.count("=") != 1:
            raise ValueError(f"identity needs exactly one '=': {text!r}")
        left, right = text.split("=")
        return cls(word(left), word(right))

    @property
    def trivial(self) -> bool:
        return self.lhs == self.rhs

    def reversed(self) -> "Identity":
        return Identity(self.rhs, self.lhs)

    def unordered(self) -> frozenset[Word]:
        return frozenset((self.lhs, self.rhs))

    def variables(self) -> tuple[str, ...]:
        return variables(self.lhs + self.rhs)

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} = {format_word(self.rhs)}"


def identity(text: str) -> Identity:
    return Identity.parse(text)


class IdentitySystem:
    """A named finite set of identities; ``u = v`` and ``v = u`` collapse."""

    def __init__(self, name: str, identities: Iterable[Identity] = ()):
        self.name = name
        seen: set[frozenset[Word]] = set()
        kept = []
        for ident in identities:
            key = ident.unordered()
            if key not in seen:
                seen.add(key)
                kept.append(ident)
        self.identities: tuple[Identity, ...] = tuple(kept)

    def __iter__(self) -> Iterator[Identity]:
        return iter(self.identities)

    def __len__(self) -> int:
        return len(self.identities)

    def __contains__(self, ident: Identity) -> bool:
        return ident.unordered() in {i.unordered() for i in self.identities}

    def __or__(self, other: "IdentitySystem") -> "IdentitySystem":
        return IdentitySystem(f"{self.name} + {other.name}",
                              self.identities + other.identities)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IdentitySystem):
            return NotImplemented
        return self.pairs() == other.pairs()

    def __hash__(self) -> int:
        return hash(self.pairs())

    def pairs(self) -> frozenset[frozenset[Word]]:
        return frozenset(i.unordered() for i in self.identities)

    def __repr__(self) -> str:
        return f"IdentitySystem({self.name!r}, {len(self)} identities)"


def union(name: str, *systems: IdentitySystem) -> IdentitySystem:
    return IdentitySystem(name, [i for s in systems for i in s])


EMPTY_SYSTEM = IdentitySystem("empty")


@dataclass(frozen=True)
class SearchLimits:
    max_word_length: int | None = None  # None: 3 * |input| + 6
    max_visited_words: int = 200_000

    def __post_init__(self):
        if self.max_word_length is not None and self.max_word_length <= 0:
            raise ValueError("max_word_length must be positive")
        if self.max_visited_words <= 0:
            raise ValueError("max_visited_words must be positive")

    def length_bound(self, *words: Word) -> int:
        if self.max_word_length is not None:
            return self.max_word_length
        return 3 * max((len(w) for w in words), default=0) + 6


DEFAULT_LIMITS = SearchLimits()


# -- compiled rules -------------------------------------------------------

@dataclass(frozen=True)
class _Instance:
    source: Word
    target: Word
    rule: Identity          # oriented: rule.lhs is replaced by rule.rhs
    deleted: frozenset[str]


@lru_cache(maxsize=512)
def _compile(identities: tuple[Identity, ...]) -> tuple[_Instance, ...]:
    out = []
    seen = set()
    for ident in identities:
        if ident.trivial:
            continue
        for rule in (ident, ident.reversed()):
            vs = variables(rule.lhs)
            for k in range(len(vs) + 1):
                for gone in combinations(vs, k):
                    gone_set = frozenset(gone)
                    s, t = delete(rule.lhs, gone_set), delete(rule.rhs, gone_set)
                    if s == t or (s, t) in seen:
                        continue
                    seen.add((s, t))
                    out.append(_Instance(s, t, rule, gone_set))
    return tuple(out)


def _successors(w: Word, system: IdentitySystem
                ) -> Iterator[tuple[Word, Identity, MatchSolution]]:
    for inst in _compile(system.identities):
        for start, end, sigma in iter_matches(inst.source, w, allow_empty=False):
            new = w[:start] + apply_substitution(sigma, inst.target) + w[end:]
            if new == w:
                continue
            for v in inst.deleted:
                sigma[v] = ()
            yield new, inst.rule, MatchSolution(sigma, w[:start], w[end:])


def rewrites_with_witness(w: Word, system: IdentitySystem
                          ) -> dict[Word, tuple[Identity, MatchSolution]]:
    """Map each one-step successor of ``w`` to the first rule and match producing it."""
    found: dict[Word, tuple[Identity, MatchSolution]] = {}
    for new, rule, sol in _successors(w, system):
        if new not in found:
            found[new] = (rule, sol)
    return found


def one_step_rewrites(w: Word, system: IdentitySystem) -> set[Word]:
    return {new for new, _, _ in _successors(w, system)}


def is_isoterm(w: Word, system: IdentitySystem) -> bool:
    """True iff no identity of ``system`` changes ``w`` in one direct step.

    Any deduction out of ``w`` starts with a direct step to a different word,
    so one-step emptiness decides isoterm-ness for the defined variety.
    """
    for _ in _successors(w, system):
        return False
    return True


def _sort_key(w: Word) -> tuple:
    return (len(w), w)


@dataclass(frozen=True)
class ClosureResult:
    words: frozenset[Word]
    complete: bool
    frontier_truncated_at: int | None = None
    pruned: int = 0          # successors dropped for exceeding the length bound
    length_bound: int = 0


def closure(w: Word, system: IdentitySystem, limits: SearchLimits = DEFAULT_LIMITS
            ) -> ClosureResult:
    """Breadth-first set of words reachable from ``w`` by direct steps."""
    bound = limits.length_bound(w)
    seen = {w}
    queue = deque([w])
    pruned = 0
    while queue:
        cur = queue.popleft()
        for new in sorted(one_step_rewrites(cur, system), key=_sort_key):
            if len(new) > bound:
                pruned += 1
                continue
            if new not in seen:
                if len(seen) >= limits.max_visited_words:
                    return ClosureResult(frozenset(seen), False, len(seen), pruned, bound)
                seen.add(new)
                queue.append(new)
    return ClosureResult(frozenset(seen), pruned == 0, None, pruned, bound)


# -- deduction ------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    word: Word                 # the word produced by this step
    rule: Identity             # oriented: rule.lhs was replaced by rule.rhs
    solution: MatchSolution    # match of rule.lhs inside the previous word


@dataclass(frozen=True)
class RewriteTrace:
    start: Word
    steps: tuple[TraceStep, ...] = ()

    @property
    def words(self) -> list[Word]:
        return [self.start] + [s.word for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def replay(self) -> bool:
        """Re-derive each step from its recorded rule and match."""
        prev = self.start
        for step in self.steps:
            sol = step.solution
            if sol.prefix + apply_substitution(sol.sigma, step.rule.lhs) + sol.suffix != prev:
                return False
            if sol.prefix + apply_substitution(sol.sigma, step.rule.rhs) + sol.suffix != step.word:
                return False
            if step.word == prev:
                return False
            prev = step.word
        return True

    def render(self) -> str:
        lines = [format_word(self.start)]
        for s in self.steps:
            lines.append(f"  -> {format_word(s.word)}    [{s.rule}]")
        return "\n".join(lines)


@dataclass(frozen=True)
class Proved:
    trace: RewriteTrace

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Unknown:
    reason: str = "not found within limits"
    visited: int = 0
    limit_hit: bool = False
    missing: tuple[Identity, ...] = ()

    def __bool__(self) -> bool:
        return False


def deducible(goal: Identity, system: IdentitySystem,
              limits: SearchLimits = DEFAULT_LIMITS) -> Union[Proved, Unknown]:
    """Search for a chain of direct steps from ``goal.lhs`` to ``goal.rhs``.

    BFS gives a shortest trace; successors are expanded in (length, word)
    order so the trace is deterministic.  ``Unknown`` is never a disproof.
    """
    if goal.trivial:
        return Proved(RewriteTrace(goal.lhs))
    bound = limits.length_bound(goal.lhs, goal.rhs)
    parent: dict[Word, tuple[Word, Identity, MatchSolution] | None] = {goal.lhs: None}
    queue = deque([goal.lhs])
    limit_hit = False
    while queue:
        cur = queue.popleft()
        succ = rewrites_with_witness(cur, system)
        for new in sorted(succ, key=_sort_key):
            if len(new) > bound:
                limit_hit = True
                continue
            if new in parent:
                continue
            if len(parent) >= limits.max_visited_words:
                return Unknown(visited=len(parent), limit_hit=True)
            rule, sol = succ[new]
            parent[new] = (cur, rule, sol)
            if new == goal.rhs:
                return Proved(_trace(goal.lhs, new, parent))
            queue.append(new)
    return Unknown(visited=len(parent), limit_hit=limit_hit)


def _trace(start: Word, end: Word, parent) -> RewriteTrace:
    steps = []
    cur = end
    while cur != start:
        prev, rule, sol = parent[cur]
        steps.append(TraceStep(cur, rule, sol))
        cur = prev
    return RewriteTrace(start, tuple(reversed(steps)))


@dataclass(frozen=True)
class Equivalent:
    proofs: tuple[tuple[Identity, RewriteTrace], ...] = field(default=())

    def __bool__(self) -> bool:
        return True


def derives_all(targets: IdentitySystem, system: IdentitySystem,
                limits: SearchLimits = DEFAULT_LIMITS
                ) -> tuple[list[tuple[Identity, RewriteTrace]], list[Identity], bool]:
    proofs, missing, limit_hit = [], [], False
    for ident in targets:
        res = deducible(ident, system, limits)
        if isinstance(res, Proved):
            proofs.append((ident, res.trace))
        else:
            missing.append(ident)
            limit_hit = limit_hit or res.limit_hit
    return proofs, missing, limit_hit


def bases_equivalent(sigma1: IdentitySystem, sigma2: IdentitySystem,
                     base: IdentitySystem = EMPTY_SYSTEM,
                     limits: SearchLimits = DEFAULT_LIMITS) -> Union[Equivalent, Unknown]:
    """Check ``base + sigma2 |- sigma1`` and ``base + sigma1 |- sigma2`` by bounded search."""
    p1, m1, h1 = derives_all(sigma1, union("b+s2", base, sigma2), limits)
    p2, m2, h2 = derives_all(sigma2, union("b+s1", base, sigma1), limits)
    if m1 or m2:
        return Unknown(reason="some identity not derived within limits",
                       limit_hit=h1 or h2, missing=tuple(m1 + m2))
    return Equivalent(tuple(p1 + p2))
