"""Bounded machine checks of the anti-isomorphism theorems and their lemmas.

Each harness returns a :class:`VerificationReport`.  Varietal statements are
never decided directly; every report names the finite surrogate it checks
(closure fibers, brute-force satisfaction in factor monoids, or profile
comparison for the m-testable theory).
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .deduction import (
    DEFAULT_LIMITS,
    Equivalent,
    Identity,
    IdentitySystem,
    SearchLimits,
    bases_equivalent,
    closure,
    is_isoterm,
    union,
)
from .families import (
    enumerate_rigid_words,
    ids_A,
    ids_B,
    ids_C,
    ids_D,
    ids_E,
    ids_O,
    tm1_satisfies,
    word_w,
    words_B,
    words_D,
)
from .lattices import Partition, enumerate_partitions, id_of_partition, is_finer
from .monoids import DEFAULT_EVAL_BUDGET, EvaluationBudgetExceeded, factor_monoid, satisfies_all
from .words import Word, format_word, parse_word

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class CaseOutcome:
    name: str
    status: str
    detail: str = ""
    limit_hit: bool = False

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail,
                "limit_hit": self.limit_hit}


@dataclass
class VerificationReport:
    tag: str
    params: dict
    surrogate: str
    cases: list[CaseOutcome] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool | None, detail: str = "", limit_hit: bool = False):
        status = INCONCLUSIVE if ok is None else PASS if ok else FAIL
        self.cases.append(CaseOutcome(name, status, detail, limit_hit))

    @property
    def limits_hit(self) -> bool:
        return any(c.limit_hit for c in self.cases)

    @property
    def status(self) -> str:
        if any(c.status == FAIL for c in self.cases):
            return FAIL
        if self.limits_hit or any(c.status == INCONCLUSIVE for c in self.cases):
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
        for c in self.cases:
            out[c.status] += 1
        return out

    def to_json(self, timings: bool = False) -> dict:
        doc = {
            "tag": self.tag,
            "params": self.params,
            "surrogate": self.surrogate,
            "status": self.status,
            "limits_hit": self.limits_hit,
            "counts": self.counts(),
            "cases": [c.to_json() for c in self.cases],
            "notes": list(self.notes),
        }
        if timings:
            doc["wall_time"] = round(self.wall_time, 3)
        return doc

    def render(self, timings: bool = False, verbose: bool = False) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [f"{self.tag} [{params}]: {self.status.upper()}",
                 f"  surrogate: {self.surrogate}"]
        c = self.counts()
        lines.append(f"  cases: {len(self.cases)} ({c[PASS]} pass, {c[FAIL]} fail, "
                     f"{c[INCONCLUSIVE]} inconclusive); limits hit: "
                     f"{'yes' if self.limits_hit else 'no'}")
        for case in self.cases:
            if verbose or case.status != PASS:
                lines.append(f"  [{case.status}] {case.name}"
                             + (f": {case.detail}" if case.detail else ""))
        for note in self.notes:
            lines.append(f"  note: {note}")
        if timings:
            lines.append(f"  wall time: {self.wall_time:.2f}s")
        return "\n".join(lines)


def _timed(fn: Callable[..., VerificationReport]) -> Callable[..., VerificationReport]:
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - t0
        return report
    return wrapper


def _require(value: int, allowed: tuple[int, ...], name: str):
    if value not in allowed:
        raise ValueError(f"{name} must be one of {allowed}, got {value}")


def fmt(w: Word) -> str:
    return format_word(w)


# -- fiber protocol shared by the two anti-isomorphism theorems -----------

def _fiber_protocol(report: VerificationReport, ground: list[Word],
                    base: IdentitySystem, limits: SearchLimits):
    partitions = enumerate_partitions(ground)
    fibers: dict[Partition, tuple[frozenset[Word], ...]] = {}
    gset = set(ground)
    for pi in partitions:
        system = union(f"{base.name} + Id({pi})", base, id_of_partition(pi))
        row = []
        for u in ground:
            res = closure(u, system, limits)
            fiber = frozenset(res.words & gset)
            row.append(fiber)
            block = frozenset(pi.block_words(u))
            name = f"fiber pi={{{pi}}} u={fmt(u)}"
            if not res.complete:
                report.add(name, None, f"closure incomplete ({len(res.words)} words, "
                           f"{res.pruned} pruned)", limit_hit=True)
            else:
                ok = fiber == block
                detail = f"closure {len(res.words)} words"
                if not ok:
                    detail += f"; fiber {sorted(map(fmt, fiber))} != block {sorted(map(fmt, block))}"
                report.add(name, ok, detail)
        fibers[pi] = tuple(row)

    if report.limits_hit:
        for name in ("injective", "order reversal", "strict order reversal"):
            report.add(name, None, "skipped: some fibers are incomplete")
        report.extra["partitions"] = partitions
        report.extra["fibers"] = {}
        report.extra["fiber_sizes"] = {}
        return

    # injectivity: distinct partitions give distinct fiber systems
    distinct = len(set(fibers.values())) == len(partitions)
    report.add("injective", distinct, f"{len(set(fibers.values()))} distinct fiber systems "
               f"for {len(partitions)} partitions")

    # order reversal: Phi(rho) <= Phi(pi) (rho's fibers contain pi's) iff pi finer than rho
    bad = []
    strict_missing = []
    for pi in partitions:
        for rho in partitions:
            contains = all(a <= b for a, b in zip(fibers[pi], fibers[rho]))
            if contains != is_finer(pi, rho):
                bad.append((pi, rho))
            if pi != rho and is_finer(pi, rho):
                # an identity of Id(rho) that the fiber system of pi does not derive
                witness = next(((ground[i], ground[j]) for i, j in sorted(rho.pairs())
                                if ground[j] not in fibers[pi][i]), None)
                if witness is None:
                    strict_missing.append((pi, rho))
    report.add("order reversal", not bad,
               f"{len(partitions) ** 2} ordered pairs checked"
               + (f"; {len(bad)} mismatches" if bad else ""))
    report.add("strict order reversal", not strict_missing,
               "every pi < rho has an Id(rho) identity outside pi's fibers"
               if not strict_missing else f"{len(strict_missing)} pairs without witness")
    report.extra["fibers"] = {str(pi): [sorted(map(fmt, f)) for f in row]
                              for pi, row in fibers.items()}
    report.extra["partitions"] = partitions
    report.extra["fiber_sizes"] = {pi.short(): sum(len(f) for f in row)
                                   for pi, row in fibers.items()}


@_timed
def verify_phi(n: int, limits: SearchLimits = DEFAULT_LIMITS) -> VerificationReport:
    """Fibers of (0) + A_n + Id(pi) over B_n for every partition pi of B_n."""
    _require(n, (3, 4), "n")
    report = VerificationReport(
        "phi", {"n": n},
        "closure fibers: closure(u, O+A(n)+Id(pi)) restricted to B(n) equals the pi-block of u")
    ground = [w.to_word() for w in words_B(n)]
    _fiber_protocol(report, ground, union("O+A", ids_O(), ids_A(n)), limits)
    return report


@_timed
def verify_lambda(n: int, limits: SearchLimits = DEFAULT_LIMITS) -> VerificationReport:
    """Fibers of (0) + C_n + Id(pi) over D_n for every partition pi of D_n."""
    _require(n, (2, 3), "n")
    report = VerificationReport(
        "lambda", {"n": n},
        "closure fibers: closure(u, O+C(n)+Id(pi)) restricted to D(n) equals the pi-block of u")
    ground = [w.to_word() for w in words_D(n)]
    _fiber_protocol(report, ground, union("O+C", ids_O(), ids_C(n)), limits)
    return report


# -- isoterm lemmas -------------------------------------------------------

def _dual_isoterm_check(report: VerificationReport, label: str, w: Word,
                        basis: IdentitySystem, budget: int, method: str):
    name = f"{label} w={fmt(w)}"
    deduction_ok = is_isoterm(w, basis)
    try:
        monoid = satisfies_all(factor_monoid(w), basis, budget, method)
    except EvaluationBudgetExceeded as exc:
        report.add(name, None if deduction_ok else False,
                   f"deduction side {'ok' if deduction_ok else 'FAILED'}; "
                   f"monoid side refused: {exc.required:,} lookups > {exc.budget:,}")
        return
    detail = []
    if not deduction_ok:
        detail.append("deduction side: a one-step rewrite exists")
    if not monoid:
        detail.append(f"monoid side: {monoid.identity} fails at {monoid.counterexample}")
    report.add(name, deduction_ok and bool(monoid), "; ".join(detail))


@_timed
def verify_isoterm_lemmas(n: int, r_max: int = 4, side: str = "phi",
                          budget: int = DEFAULT_EVAL_BUDGET, method: str = "auto"
                          ) -> VerificationReport:
    """Bounded check that limited rigid words are isoterms, by two routes.

    Deduction route: no one-step rewrite under the basis.  Monoid route: the
    factor monoid of the word satisfies the basis by exhaustive evaluation,
    which makes the word an isoterm by the factor-monoid criterion.
    """
    if r_max < 0 or r_max > 4:
        raise ValueError("r_max must be between 0 and 4")
    if side == "phi":
        _require(n, (3, 4), "n")
        big = union("O+A", ids_O(), ids_A(n))
        small = union("O+A+B", big, ids_B(n))
        top, low = n - 1, n - 2
        keep = lambda rw: True  # noqa: E731
        controls = [w.to_word() for w in words_B(n)]
        tag = "isoterms-phi"
    elif side == "lambda":
        _require(n, (2, 3), "n")
        big = union("O+C", ids_O(), ids_C(n))
        small = union("O+C+D", big, ids_D(n))
        top, low = 2 * n - 1, 2 * n - 2
        keep = lambda rw: rw.cube_free()  # noqa: E731
        controls = [w.to_word() for w in words_D(n)]
        tag = "isoterms-lambda"
    else:
        raise ValueError("side must be 'phi' or 'lambda'")
    report = VerificationReport(
        tag, {"n": n, "r_max": r_max},
        "one-step rewrite emptiness (deduction) and satisfaction of the basis in M(w) "
        "by exhaustive or zero-pruned enumeration (monoid)")
    report.params["method"] = method
    report.notes.append(f"bounded verification: rigid words with r <= {r_max} only")
    for rw in enumerate_rigid_words(r_max, top):
        if not keep(rw):
            continue
        w = rw.to_word()
        _dual_isoterm_check(report, f"{top}-limited isoterm for {big.name}", w, big,
                            budget, method)
        if rw.total <= low:
            _dual_isoterm_check(report, f"{low}-limited isoterm for {small.name}", w, small,
                                budget, method)
    # negative controls: the ground words themselves are changed by the larger basis
    for w in controls:
        report.add(f"control: {fmt(w)} not an isoterm for {small.name}",
                   not is_isoterm(w, small))
    return report


# -- the case analysis behind surjectivity --------------------------------

def _x(k: int) -> tuple[str, ...]:
    return ("x",) * k


def _w(*parts) -> Word:
    out: list[str] = []
    for p in parts:
        out.extend(p if isinstance(p, tuple) else (p,))
    return tuple(out)


@dataclass(frozen=True)
class CaseInstance:
    case: str
    p: int
    q: int
    p2: int
    q2: int
    identity: Identity
    stated: IdentitySystem
    chain_length: int   # steps in the displayed conversion from the stated set


def case_instances(n: int) -> list[CaseInstance]:
    """All instantiations of cases (iv)-(ix) with p+q = p'+q' = n-1."""
    out = []
    full = n - 1
    splits = [(p, full - p) for p in range(1, full)]
    for (p, q), (p2, q2) in product(splits, splits):
        X = _x
        def I(a, b):  # noqa: E306,E743
            return Identity(a, b)
        table = {
            "iv": (I(_w(X(p), "h", X(q), "k"), _w(X(p2), "h", "k", X(q2))),
                   [I(_w(X(p), "h", X(q)), _w(X(p2), "h", X(q2))),
                    I(_w(X(full), "k"), _w(X(p2), "k", X(q2)))], 3),
            "v": (I(_w(X(p), "h", X(q), "k"), _w("h", X(p2), "k", X(q2))),
                  [I(_w(X(p), "h", X(q)), _w("h", X(full))),
                   I(_w(X(full), "k"), _w(X(p2), "k", X(q2)))], 2),
            "vi": (I(_w(X(p), "h", X(q), "k"), _w("h", "k", X(full))),
                   [I(_w(X(p), "h", X(q)), _w("h", X(full))),
                    I(_w(X(full), "k"), _w("k", X(full)))], 2),
            "vii": (I(_w(X(p), "h", X(q), "k", "t"), _w("h", "k", X(p2), "t", X(q2))),
                    [I(_w(X(p), "h", X(q)), _w("h", X(full))),
                     I(_w(X(full), "k"), _w("k", X(full))),
                     I(_w(X(full), "t"), _w(X(p2), "t", X(q2)))], 3),
            "viii": (I(_w(X(p), "h", "k", X(q), "t"), _w("h", X(p2), "k", "t", X(q2))),
                     [I(_w(X(p), "h", X(q)), _w("h", X(full))),
                      I(_w(X(p), "k", X(q)), _w(X(p2), "k", X(q2))),
                      I(_w(X(full), "t"), _w(X(p2), "t", X(q2)))], 5),
            "ix": (I(_w(X(p), "h", "k", "t", X(q)), _w("h", X(p2), "k", X(q2), "t")),
                   [I(_w(X(p), "h", X(q)), _w("h", X(full))),
                    I(_w(X(p), "k", X(q)), _w(X(p2), "k", X(q2))),
                    I(_w(X(p), "t", X(q)), _w(X(full), "t"))], 5),
        }
        for case, (ident, stated, steps) in table.items():
            out.append(CaseInstance(case, p, q, p2, q2, ident,
                                    IdentitySystem(f"({case}) stated", stated), steps))
    order = ["iv", "v", "vi", "vii", "viii", "ix"]
    out.sort(key=lambda c: (order.index(c.case), c.p, c.p2))
    return out


def case1_identities(n: int) -> list[tuple[str, Identity]]:
    """Cases (i)-(iii): rigid identities with r = 1 that are already in B_n."""
    full = n - 1
    out = [("i", Identity(_w(_x(full), "t"), _w("t", _x(full))))]
    splits = [(p, full - p) for p in range(1, full)]
    for p, q in splits:
        out.append(("ii", Identity(_w(_x(p), "t", _x(q)), _w(_x(full), "t"))))
    for (p, q), (p2, q2) in product(splits, splits):
        out.append(("iii", Identity(_w(_x(p), "t", _x(q)), _w(_x(p2), "t", _x(q2)))))
    return out


@_timed
def verify_case_equivalences(n: int, limits: SearchLimits = DEFAULT_LIMITS
                             ) -> VerificationReport:
    """Each case identity is equivalent to its stated set of B_n-shaped identities."""
    _require(n, (3, 4, 5), "n")
    report = VerificationReport(
        "cases", {"n": n},
        "bounded deduction both ways (empty base), shortest traces by BFS")
    bn = ids_B(n)
    for case, ident in case1_identities(n):
        ok = ident.trivial or ident in bn
        report.add(f"({case}) {ident}", ok, "member of B(n)" if ok else "not in B(n)")
    for inst in case_instances(n):
        name = f"({inst.case}) p={inst.p},q={inst.q},p'={inst.p2},q'={inst.q2}: {inst.identity}"
        res = bases_equivalent(IdentitySystem("case", [inst.identity]), inst.stated,
                               limits=limits)
        if not isinstance(res, Equivalent):
            report.add(name, None, f"not shown: {', '.join(map(str, res.missing))}",
                       limit_hit=res.limit_hit)
            continue
        back = next(t for i, t in res.proofs if i == inst.identity)
        ok = len(back) <= inst.chain_length
        report.add(name, ok, f"converse chain {len(back)} steps "
                   f"(displayed {inst.chain_length})")
    return report


# -- the E_m join and the m-testable containment --------------------------

@_timed
def verify_em_join(m: int, r_max: int = 3, budget: int = DEFAULT_EVAL_BUDGET,
                   method: str = "auto") -> VerificationReport:
    """Containment direction of the join decomposition, plus isoterm bookkeeping."""
    _require(m, (2, 3), "m")
    if r_max < 1 or r_max > 3:
        raise ValueError("r_max must be between 1 and 3")
    basis = union("O+E", ids_O(), ids_E(m))
    report = VerificationReport(
        "em-join", {"m": m, "r_max": r_max},
        "exhaustive satisfaction of O+E(m) in M(w_{m,r}); one-step rewrite emptiness")
    report.notes.append("the reverse inclusion (E_m inside the join) rests on an external "
                        "classification and is assumed, not checked")
    report.notes.append("isoterms for the join itself have no finite procedure here; "
                        "m-free words are checked against O+E(m) instead")
    for r in range(1, r_max + 1):
        w = word_w(m, r).to_word()
        try:
            res = satisfies_all(factor_monoid(w), basis, budget, method)
        except EvaluationBudgetExceeded as exc:
            report.add(f"M({fmt(w)}) satisfies {basis.name}", None, str(exc))
            continue
        report.add(f"M({fmt(w)}) satisfies {basis.name}", bool(res),
                   "" if res else f"{res.identity} fails at {res.counterexample}")
    wrong = []
    total = 0
    for rw in enumerate_rigid_words(r_max, m * (r_max + 1), max_exponent=m):
        if any(e > m for e in rw.exponents):
            continue
        total += 1
        if is_isoterm(rw.to_word(), basis) != rw.m_free(m):
            wrong.append(str(rw))
    report.add(f"isoterm for {basis.name} iff {m}-free", not wrong,
               f"{total} rigid words with r <= {r_max}, exponents <= {m}"
               + (f"; mismatches: {wrong[:5]}" if wrong else ""))
    return report


def _words_over(alphabet: tuple[str, ...], max_len: int):
    for k in range(max_len + 1):
        yield from product(alphabet, repeat=k)


@_timed
def verify_tm1(m: int, r_max: int = 3) -> VerificationReport:
    """Bounded core of the containment of E_m in the variety of T_m with 1."""
    _require(m, (2, 3), "m")
    if r_max < 1 or r_max > 3:
        raise ValueError("r_max must be between 1 and 3")
    report = VerificationReport(
        "tm1", {"m": m, "r_max": r_max},
        "prefix/suffix/factor profile test closed under variable deletion")
    report.notes.append("reduction of candidates to rigid words is assumed from the "
                        "literature, not re-proved")
    xy = parse_word("x y")
    bad = [v for v in _words_over(("x", "y"), 2 * m)
           if v != xy and tm1_satisfies(m, Identity(xy, v))]
    report.add(f"xy isoterm among words over {{x,y}} of length <= {2 * m}", not bad,
               f"{sum(1 for _ in _words_over(('x', 'y'), 2 * m)) - 1} candidates"
               + (f"; survivors {[fmt(v) for v in bad]}" if bad else ""))
    for r in range(1, r_max + 1):
        target = word_w(m, r)
        u = target.to_word()
        cands = [rw for rw in enumerate_rigid_words(r, 2 * (m - 1) * (r + 1), r_min=r,
                                                    max_exponent=m)]
        survivors = [rw for rw in cands if tm1_satisfies(m, Identity(u, rw.to_word()))]
        ok = survivors == [target]
        report.add(f"w_{{{m},{r}}} = {fmt(u)} unique survivor", ok,
                   f"{len(cands)} rigid candidates; survivors {[str(s) for s in survivors]}")
    return report


HARNESSES = {
    "phi": verify_phi,
    "lambda": verify_lambda,
    "cases": verify_case_equivalences,
    "em-join": verify_em_join,
    "tm1": verify_tm1,
    "isoterms": verify_isoterm_lemmas,
}
