"""Partition lattices over finite word sets, explicit finite lattices, and a
backtracking search for sublattice embeddings into partition lattices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .deduction import Identity, IdentitySystem
from .words import Word, format_word, parse_word

MAX_PARTITION_GROUND = 10
MAX_LATTICE_K = 6
MAX_EMBED_SOURCE = 8
MAX_EMBED_K = 5


@dataclass(frozen=True)
class Partition:
    ground: tuple[Word, ...]
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(len(self.ground))) or any(not b for b in self.blocks):
            raise ValueError("blocks must be nonempty, disjoint and cover the ground set")
        canon = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_labels(cls, ground: Sequence[Word], labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return cls(tuple(ground), tuple(tuple(g) for g in groups.values()))

    def labels(self) -> list[int]:
        lab = [0] * len(self.ground)
        for b, block in enumerate(self.blocks):
            for i in block:
                lab[i] = b
        return lab

    def block_of(self, i: int) -> tuple[int, ...]:
        return next(b for b in self.blocks if i in b)

    def block_words(self, w: Word) -> set[Word]:
        return {self.ground[j] for j in self.block_of(self.ground.index(w))}

    def related(self, i: int, j: int) -> bool:
        return j in self.block_of(i)

    def pairs(self) -> set[tuple[int, int]]:
        return {(i, j) for b in self.blocks for i in b for j in b}

    def __str__(self) -> str:
        return " | ".join(", ".join(format_word(self.ground[i]) for i in b)
                          for b in self.blocks)

    def short(self) -> str:
        """Block notation on 1-based indices, e.g. ``12|34``."""
        sep = "," if len(self.ground) > 9 else ""
        return "|".join(sep.join(str(i + 1) for i in b) for b in self.blocks)


def equality(ground: Sequence[Word]) -> Partition:
    return Partition(tuple(ground), tuple((i,) for i in range(len(ground))))


def full(ground: Sequence[Word]) -> Partition:
    return Partition(tuple(ground), (tuple(range(len(ground))),))


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Lexicographic restricted growth strings of length ``n``."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def enumerate_partitions(ground: Sequence[Word]) -> list[Partition]:
    if len(ground) > MAX_PARTITION_GROUND:
        raise ValueError(f"ground set larger than {MAX_PARTITION_GROUND}")
    return [Partition.from_labels(ground, rgs)
            for rgs in restricted_growth_strings(len(ground))]


def _check_same(p: Partition, q: Partition):
    if p.ground != q.ground:
        raise ValueError("partitions live on different ground sets")


def meet(p: Partition, q: Partition) -> Partition:
    _check_same(p, q)
    lp, lq = p.labels(), q.labels()
    return Partition.from_labels(p.ground, [hash((a, b)) for a, b in zip(lp, lq)])


def join(p: Partition, q: Partition) -> Partition:
    _check_same(p, q)
    parent = list(range(len(p.ground)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for part in (p, q):
        for b in part.blocks:
            for i in b[1:]:
                parent[find(i)] = find(b[0])
    return Partition.from_labels(p.ground, [find(i) for i in range(len(p.ground))])


def is_finer(p: Partition, q: Partition) -> bool:
    _check_same(p, q)
    lq = q.labels()
    return all(len({lq[i] for i in b}) == 1 for b in p.blocks)


def id_of_partition(p: Partition) -> IdentitySystem:
    idents = [Identity(p.ground[i], p.ground[j])
              for b in p.blocks for i, j in combinations(b, 2)]
    return IdentitySystem(f"Id({p})", idents)


def parse_partition(text: str) -> Partition:
    """``"x^2 t, x t x | t x^2"``: blocks split on ``|``, words on ``,``."""
    ground: list[Word] = []
    blocks = []
    for chunk in text.split("|"):
        block = []
        for piece in chunk.split(","):
            w = parse_word(piece)
            if w in ground:
                raise ValueError(f"word {format_word(w)} listed twice")
            ground.append(w)
            block.append(len(ground) - 1)
        blocks.append(tuple(block))
    return Partition(tuple(ground), tuple(blocks))


# -- finite lattices ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteLattice:
    elements: tuple[str, ...]
    leq: np.ndarray  # leq[a, b] iff a <= b

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        return self.elements.index(label)

    def _bound(self, a: int, b: int, upper: bool) -> int | None:
        rel = self.leq if upper else self.leq.T
        cands = np.flatnonzero(rel[a] & rel[b])
        best = cands[rel[np.ix_(cands, cands)].all(axis=1)]
        return int(best[0]) if len(best) == 1 else None

    def meet(self, a: int, b: int) -> int | None:
        return self._bound(a, b, upper=False)

    def join(self, a: int, b: int) -> int | None:
        return self._bound(a, b, upper=True)

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        n = len(self)
        mt = np.full((n, n), -1, dtype=np.int64)
        jt = np.full((n, n), -1, dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                m, j = self.meet(a, b), self.join(a, b)
                mt[a, b] = mt[b, a] = -1 if m is None else m
                jt[a, b] = jt[b, a] = -1 if j is None else j
        return mt, jt

    def height(self) -> int:
        n = len(self)
        longest = [0] * n
        for a in sorted(range(n), key=lambda i: int(self.leq[:, i].sum())):
            below = [b for b in range(n) if b != a and self.leq[b, a]]
            longest[a] = max((longest[b] + 1 for b in below), default=0)
        return max(longest, default=0)

    def covers(self) -> list[tuple[int, int]]:
        n = len(self)
        out = []
        for a in range(n):
            for b in range(n):
                if a != b and self.leq[a, b] and not any(
                        c not in (a, b) and self.leq[a, c] and self.leq[c, b]
                        for c in range(n)):
                    out.append((a, b))
        return out

    def to_json(self) -> dict:
        pairs = [[self.elements[a], self.elements[b]]
                 for a in range(len(self)) for b in range(len(self)) if self.leq[a, b]]
        return {"elements": list(self.elements), "leq": pairs}


def _closure(rel: np.ndarray) -> np.ndarray:
    rel = rel.copy()
    np.fill_diagonal(rel, True)
    for k in range(len(rel)):
        rel |= rel[:, k:k + 1] & rel[k:k + 1, :]
    return rel


def lattice_from_pairs(elements: Sequence[str], pairs: Sequence[Sequence[str]],
                       close: bool = True) -> FiniteLattice:
    idx = {e: i for i, e in enumerate(elements)}
    if len(idx) != len(elements):
        raise ValueError("duplicate element labels")
    rel = np.zeros((len(elements), len(elements)), dtype=bool)
    for a, b in pairs:
        rel[idx[a], idx[b]] = True
    if close:
        rel = _closure(rel)
    return FiniteLattice(tuple(elements), rel)


def load_lattice(text: str) -> FiniteLattice:
    data = json.loads(text)
    return lattice_from_pairs(data["elements"], data["leq"])


def read_lattice(path: str | Path) -> FiniteLattice:
    return load_lattice(Path(path).read_text())


def chain(n: int) -> FiniteLattice:
    labels = [str(i) for i in range(n)]
    return lattice_from_pairs(labels, list(zip(labels, labels[1:])))


def diamond() -> FiniteLattice:
    """M3: bottom, three pairwise incomparable atoms, top."""
    return lattice_from_pairs(["0", "a", "b", "c", "1"],
                              [("0", "a"), ("0", "b"), ("0", "c"),
                               ("a", "1"), ("b", "1"), ("c", "1")])


def pentagon() -> FiniteLattice:
    """N5: 0 < a < b < 1 and 0 < c < 1."""
    return lattice_from_pairs(["0", "a", "b", "c", "1"],
                              [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


@dataclass(frozen=True)
class LatticeCheck:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_lattice_axioms(lat: FiniteLattice) -> LatticeCheck:
    r = lat.leq
    e = lat.elements
    n = len(lat)
    for a in range(n):
        if not r[a, a]:
            return LatticeCheck(False, f"not reflexive at {e[a]}")
    for a in range(n):
        for b in range(n):
            if a != b and r[a, b] and r[b, a]:
                return LatticeCheck(False, f"not antisymmetric at {e[a]}, {e[b]}")
            for c in range(n):
                if r[a, b] and r[b, c] and not r[a, c]:
                    return LatticeCheck(False, f"not transitive at {e[a]}, {e[b]}, {e[c]}")
    for a in range(n):
        for b in range(a + 1, n):
            if lat.meet(a, b) is None:
                return LatticeCheck(False, f"no meet for {e[a]}, {e[b]}")
            if lat.join(a, b) is None:
                return LatticeCheck(False, f"no join for {e[a]}, {e[b]}")
    return LatticeCheck(True)


def _partition_ground(k: int) -> tuple[Word, ...]:
    return tuple((f"p{i}",) for i in range(1, k + 1))


def partitions_of(k: int) -> list[Partition]:
    return enumerate_partitions(_partition_ground(k))


def partition_lattice(k: int) -> FiniteLattice:
    """Eq(k) as an explicit lattice; labels like ``12|34``, ordered by refinement."""
    if k > MAX_LATTICE_K or k < 1:
        raise ValueError(f"partition_lattice needs 1 <= k <= {MAX_LATTICE_K}")
    parts = partitions_of(k)
    n = len(parts)
    labs = np.array([p.labels() for p in parts])
    rel = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            # a finer than b iff labels of b are constant on each block of a
            rel[a, b] = all(len({labs[b][i] for i in blk}) == 1 for blk in parts[a].blocks)
    return FiniteLattice(tuple(p.short() for p in parts), rel)


def _partition_tables(k: int) -> tuple[np.ndarray, np.ndarray]:
    parts = partitions_of(k)
    pos = {p: i for i, p in enumerate(parts)}
    n = len(parts)
    mt = np.empty((n, n), dtype=np.int64)
    jt = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            mt[a, b] = mt[b, a] = pos[meet(parts[a], parts[b])]
            jt[a, b] = jt[b, a] = pos[join(parts[a], parts[b])]
    return mt, jt


def sublattice_embedding_search(lat: FiniteLattice, k: int) -> dict[str, str] | None:
    """Find an injective meet- and join-preserving map of ``lat`` into Eq(k).

    Exhaustive backtracking in a deterministic order; bounds need not go to
    bounds.  ``None`` means no embedding into Eq(k) for this ``k``.
    """
    if len(lat) > MAX_EMBED_SOURCE:
        raise ValueError(f"source lattice larger than {MAX_EMBED_SOURCE}")
    if k < 1 or k > MAX_EMBED_K:
        raise ValueError(f"embedding target needs 1 <= k <= {MAX_EMBED_K}")
    check = check_lattice_axioms(lat)
    if not check:
        raise ValueError(f"source is not a lattice: {check.failure}")
    target = partition_lattice(k)
    smt, sjt = lat.tables()
    tmt, tjt = _partition_tables(k)
    sleq, tleq = lat.leq, target.leq
    n, m = len(lat), len(target)
    # place elements from the bottom up so meets/joins get checked early
    order = sorted(range(n), key=lambda a: (int(sleq[:, a].sum()), a))
    image = [-1] * n
    used = [False] * m

    def consistent(a: int) -> bool:
        fa = image[a]
        for b in range(n):
            fb = image[b]
            if fb < 0:
                continue
            if bool(sleq[a, b]) != bool(tleq[fa, fb]) or bool(sleq[b, a]) != bool(tleq[fb, fa]):
                return False
            for table_s, table_t in ((smt, tmt), (sjt, tjt)):
                c = table_s[a, b]
                if image[c] >= 0 and image[c] != table_t[fa, fb]:
                    return False
        # a may itself be the meet/join of an already placed pair
        for b in range(n):
            for c in range(n):
                if image[b] < 0 or image[c] < 0:
                    continue
                if smt[b, c] == a and tmt[image[b], image[c]] != fa:
                    return False
                if sjt[b, c] == a and tjt[image[b], image[c]] != fa:
                    return False
        return True

    def rec(pos: int) -> bool:
        if pos == n:
            return True
        a = order[pos]
        for t in range(m):
            if used[t]:
                continue
            image[a] = t
            used[t] = True
            if consistent(a) and rec(pos + 1):
                return True
            used[t] = False
            image[a] = -1
        return False

    if not rec(0):
        return None
    return {lat.elements[a]: target.elements[image[a]] for a in range(n)}


def verify_embedding(lat: FiniteLattice, k: int, mapping: dict[str, str]) -> bool:
    """Re-check a map pointwise against meet/join computed on partitions."""
    parts = {p.short(): p for p in partitions_of(k)}
    img = {a: parts[mapping[a]] for a in lat.elements}
    if len({p for p in img.values()}) != len(lat):
        return False
    for a in range(len(lat)):
        for b in range(len(lat)):
            pa, pb = img[lat.elements[a]], img[lat.elements[b]]
            if meet(pa, pb) != img[lat.elements[lat.meet(a, b)]]:
                return False
            if join(pa, pb) != img[lat.elements[lat.join(a, b)]]:
                return False
    return True
