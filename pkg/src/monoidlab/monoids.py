"""Finite monoids given by tables, factor monoids and brute-force identity checks."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .deduction import Identity, IdentitySystem
from .words import Word, factors, format_word

DEFAULT_EVAL_BUDGET = 10**8


class EvaluationBudgetExceeded(RuntimeError):
    def __init__(self, identity: Identity, required: int, budget: int):
        super().__init__(
            f"checking {identity} needs about {required:,} table lookups; "
            f"budget is {budget:,} (raise --eval-budget to proceed)")
        self.identity = identity
        self.required = required
        self.budget = budget


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    elements: tuple[str, ...]
    table: np.ndarray
    identity_index: int
    zero_index: int | None = None

    def __post_init__(self):
        n = len(self.elements)
        if self.table.shape != (n, n):
            raise ValueError(f"table must be {n}x{n}, got {self.table.shape}")
        self.table.setflags(write=False)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        return self.elements.index(label)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def evaluate(self, w: Word, assignment: dict[str, int]) -> int:
        acc = self.identity_index
        for v in w:
            acc = int(self.table[acc, assignment[v]])
        return acc

    def dump(self) -> str:
        lines = [f"elements: {len(self)}"]
        lines.extend(self.elements)
        lines.extend(" ".join(str(int(x)) for x in row) for row in self.table)
        return "\n".join(lines) + "\n"


def _index_dtype(n: int):
    return np.uint8 if n <= 256 else np.uint16 if n <= 65536 else np.int64


def factor_monoid(w: Word) -> FiniteMonoid:
    """The monoid of factors of ``w`` with 1 and an adjoined zero.

    Elements are ordered 1, the nonempty factors by (length, letters), then
    0; a product is the concatenation when that is a factor of ``w`` and 0
    otherwise.
    """
    facs = sorted(factors(w), key=lambda f: (len(f), f))
    words: list[Word] = [()] + facs
    pos = {f: i for i, f in enumerate(words)}
    zero = len(words)
    n = zero + 1
    table = np.full((n, n), zero, dtype=_index_dtype(n))
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            k = pos.get(a + b)
            if k is not None:
                table[i, j] = k
    labels = tuple(format_word(f) for f in words) + ("0",)
    return FiniteMonoid(labels, table, identity_index=0, zero_index=zero)


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_monoid_axioms(m: FiniteMonoid) -> AxiomCheck:
    t = m.table.astype(np.int64)
    n = len(m)
    if t.min(initial=0) < 0 or t.max(initial=0) >= n:
        return AxiomCheck(False, "table entry out of range")
    e = m.identity_index
    for a in range(n):
        if t[e, a] != a or t[a, e] != a:
            return AxiomCheck(False, f"identity law fails at {m.elements[a]}")
    if m.zero_index is not None:
        z = m.zero_index
        for a in range(n):
            if t[z, a] != z or t[a, z] != z:
                return AxiomCheck(False, f"zero law fails at {m.elements[a]}")
    left = t[t[:, :, None], np.arange(n)[None, None, :]]    # (ab)c
    right = t[np.arange(n)[:, None, None], t[None, :, :]]   # a(bc)
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (m.elements[i] for i in bad[0])
        return AxiomCheck(False, f"associativity fails at ({a}, {b}, {c})")
    return AxiomCheck(True)


# -- identity satisfaction ------------------------------------------------

def _lookups_for(w: Word, order: list[str], n: int) -> int:
    """Table lookups of a left-to-right broadcast evaluation of ``w``."""
    axis = {v: i for i, v in enumerate(order)}
    seen: set[str] = set()
    total = 0
    for i, v in enumerate(w):
        seen.add(v)
        if i:
            total += n ** len({axis[u] for u in seen})
    return total


def required_lookups(m: FiniteMonoid, ident: Identity) -> int:
    order = list(ident.variables())
    n = len(m)
    return (_lookups_for(ident.lhs, order, n) + _lookups_for(ident.rhs, order, n)
            + n ** len(order))


def _evaluate_all(m: FiniteMonoid, w: Word, order: list[str]) -> np.ndarray:
    k = len(order)
    n = len(m)
    dtype = m.table.dtype
    if not w:
        return np.full((1,) * k, m.identity_index, dtype=dtype)
    axes = {}
    for i, v in enumerate(order):
        shape = [1] * k
        shape[i] = n
        axes[v] = np.arange(n, dtype=dtype).reshape(shape)
    acc = axes[w[0]]
    for v in w[1:]:
        acc = m.table[acc, axes[v]]
    return acc


@dataclass(frozen=True)
class Satisfaction:
    holds: bool
    counterexample: dict[str, str] | None = None
    identity: Identity | None = None

    def __bool__(self) -> bool:
        return self.holds


def _pruned_search(m: FiniteMonoid, ident: Identity, budget: int) -> Satisfaction:
    """Depth-first enumeration of assignments that skips whole subtrees when
    the outcome is already forced: both sides contain a run of assigned
    letters evaluating to zero, or the sides become literally equal once the
    variables sent to the identity element are erased."""
    order = list(ident.variables())
    e, z = m.identity_index, m.zero_index
    table = m.table
    lookups = 0
    assignment: dict[str, int] = {}

    def zero_side(w: Word) -> bool:
        nonlocal lookups
        acc = None
        for v in w:
            val = assignment.get(v)
            if val is None:
                acc = None
                continue
            acc = val if acc is None else int(table[acc, val])
            lookups += 1
            if acc == z:
                return True
        return False

    def rec(i: int) -> dict[str, int] | None:
        nonlocal lookups
        if lookups > budget:
            raise EvaluationBudgetExceeded(ident, lookups, budget)
        ones = {v for v, val in assignment.items() if val == e}
        lhs = tuple(v for v in ident.lhs if v not in ones)
        rhs = tuple(v for v in ident.rhs if v not in ones)
        if lhs == rhs:
            return None
        if z is not None and zero_side(lhs) and zero_side(rhs):
            return None
        if i == len(order):
            lookups += len(lhs) + len(rhs)
            if m.evaluate(lhs, assignment) != m.evaluate(rhs, assignment):
                return dict(assignment)
            return None
        v = order[i]
        for val in range(len(m)):
            assignment[v] = val
            bad = rec(i + 1)
            if bad is not None:
                return bad
        del assignment[v]
        return None

    bad = rec(0)
    if bad is None:
        return Satisfaction(True, identity=ident)
    return Satisfaction(False, {v: m.elements[i] for v, i in bad.items()}, ident)


def satisfies(m: FiniteMonoid, ident: Identity, budget: int = DEFAULT_EVAL_BUDGET,
              method: str = "exhaustive") -> Satisfaction:
    """Evaluate both sides of ``ident`` under every assignment into ``m``.

    ``method="exhaustive"`` evaluates all ``|M|^k`` assignments at once and
    raises :class:`EvaluationBudgetExceeded` before doing any work when the
    estimated number of table lookups exceeds ``budget``.  ``"pruned"`` walks
    the assignments depth first and cuts subtrees whose outcome is forced;
    it stops with the same exception once it has spent ``budget`` lookups.
    ``"auto"`` uses the exhaustive route when it fits, else the pruned one.
    """
    if method not in ("exhaustive", "pruned", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if ident.trivial:
        return Satisfaction(True, identity=ident)
    order = list(ident.variables())
    need = required_lookups(m, ident)
    if method == "pruned" or (method == "auto" and need > budget):
        return _pruned_search(m, ident, budget)
    if need > budget:
        raise EvaluationBudgetExceeded(ident, need, budget)
    lhs = _evaluate_all(m, ident.lhs, order)
    rhs = _evaluate_all(m, ident.rhs, order)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    if lhs.shape != (len(m),) * len(order):
        lhs = np.broadcast_to(lhs, (len(m),) * len(order))
        rhs = np.broadcast_to(rhs, (len(m),) * len(order))
    diff = lhs != rhs
    if not diff.any():
        return Satisfaction(True, identity=ident)
    where = np.unravel_index(int(np.argmax(diff)), diff.shape)
    cex = {v: m.elements[int(i)] for v, i in zip(order, where)}
    return Satisfaction(False, cex, ident)


def satisfies_all(m: FiniteMonoid, system: IdentitySystem | Iterable[Identity],
                  budget: int = DEFAULT_EVAL_BUDGET, method: str = "exhaustive"
                  ) -> Satisfaction:
    """Conjunction of :func:`satisfies`; stops at the first failing identity."""
    for ident in system:
        res = satisfies(m, ident, budget, method)
        if not res:
            return res
    return Satisfaction(True)


# -- dump format ----------------------------------------------------------

def load_monoid(text: str) -> FiniteMonoid:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("elements:"):
        raise ValueError("monoid dump must start with 'elements: <n>'")
    n = int(lines[0].split(":", 1)[1])
    if len(lines) != 1 + 2 * n:
        raise ValueError(f"expected {n} labels and {n} table rows")
    labels = tuple(lines[1:1 + n])
    rows = [[int(x) for x in ln.split()] for ln in lines[1 + n:]]
    if any(len(r) != n for r in rows):
        raise ValueError("table rows must have n entries")
    table = np.array(rows, dtype=_index_dtype(n))
    ident = next((e for e in range(n)
                  if all(table[e, a] == a and table[a, e] == a for a in range(n))), None)
    if ident is None:
        raise ValueError("table has no identity element")
    zero = next((z for z in range(n)
                 if all(table[z, a] == z and table[a, z] == z for a in range(n))), None)
    if n == 1:
        zero = None
    return FiniteMonoid(labels, table, ident, zero)


def read_monoid(path: str | Path) -> FiniteMonoid:
    return load_monoid(Path(path).read_text())
