import json

import pytest

from monoidlab.deduction import SearchLimits, is_isoterm, one_step_rewrites, union
from monoidlab.families import ids_A, ids_B, ids_C, ids_E, ids_O, words_B
from monoidlab.lattices import is_finer
from monoidlab.verify import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    VerificationReport,
    _fiber_protocol,
    case1_identities,
    case_instances,
    verify_case_equivalences,
    verify_em_join,
    verify_isoterm_lemmas,
    verify_lambda,
    verify_phi,
    verify_tm1,
)
from monoidlab.words import format_word, parse_word

W = parse_word


def test_report_status_rules():
    r = VerificationReport("t", {}, "s")
    r.add("a", True)
    assert r.status == PASS and r.passed
    r.add("b", None)
    assert r.status == INCONCLUSIVE
    r.add("c", False)
    assert r.status == FAIL
    r2 = VerificationReport("t", {}, "s")
    r2.add("a", True, limit_hit=True)
    assert r2.status == INCONCLUSIVE and r2.limits_hit


def test_phi_n3():
    rep = verify_phi(3)
    assert rep.passed
    fibers = [c for c in rep.cases if c.name.startswith("fiber")]
    assert len(fibers) == 5 * 3
    assert len(rep.extra["partitions"]) == 5
    # equality partition: every fiber is a singleton
    eq = next(p for p in rep.extra["partitions"] if len(p.blocks) == 3)
    assert all(len(f) == 1 for f in rep.extra["fibers"][str(eq)])


def test_phi_n4_counts():
    rep = verify_phi(4)
    assert rep.passed
    assert sum(c.name.startswith("fiber") for c in rep.cases) == 15 * 4


def test_lambda_n2():
    rep = verify_lambda(2)
    assert rep.passed
    assert sum(c.name.startswith("fiber") for c in rep.cases) == 2 * 2
    eq = next(p for p in rep.extra["partitions"] if len(p.blocks) == 2)
    assert all(len(f) == 1 for f in rep.extra["fibers"][str(eq)])


def test_strict_order_reversal_is_witnessed():
    rep = verify_phi(3)
    ground = [w.to_word() for w in words_B(3)]
    parts = rep.extra["partitions"]
    fibers = rep.extra["fibers"]
    for pi in parts:
        for rho in parts:
            if pi != rho and is_finer(pi, rho):
                # some pair related by rho lies in different fibers under pi
                row = fibers[str(pi)]
                assert any(format_word(ground[j]) not in row[i] for i, j in rho.pairs())
    assert any(c.name == "strict order reversal" and c.status == PASS for c in rep.cases)


def test_mutated_basis_makes_fiber_protocol_fail():
    rep = VerificationReport("mutant", {}, "s")
    ground = [w.to_word() for w in words_B(3)]
    too_strong = union("O+A+B", ids_O(), ids_A(3), ids_B(3))
    _fiber_protocol(rep, ground, too_strong, SearchLimits())
    assert rep.status == FAIL
    assert any(c.name == "injective" and c.status == FAIL for c in rep.cases)


def test_tight_limits_are_inconclusive():
    rep = verify_phi(3, SearchLimits(max_visited_words=2))
    assert rep.limits_hit and rep.status == INCONCLUSIVE


def test_bad_parameters_rejected():
    for call in (lambda: verify_phi(5), lambda: verify_lambda(4),
                 lambda: verify_case_equivalences(6), lambda: verify_em_join(4),
                 lambda: verify_tm1(2, r_max=4),
                 lambda: verify_isoterm_lemmas(3, side="rho")):
        with pytest.raises(ValueError):
            call()


def test_isoterm_examples():
    a3 = ids_O() | ids_A(3)
    assert is_isoterm(W("x x t"), a3)
    assert one_step_rewrites(W("x x t"), a3 | ids_B(3)) == {W("x t x"), W("t x x")}
    assert is_isoterm(W("x t"), a3 | ids_B(3))
    assert is_isoterm(W("x t1 x x"), ids_O() | ids_C(2))


def test_isoterm_lemmas_n3():
    rep = verify_isoterm_lemmas(3)
    assert rep.passed
    assert any(c.name.startswith("control") for c in rep.cases)


def test_case_instances_shape():
    insts = case_instances(3)
    assert [c.case for c in insts] == ["iv", "v", "vi", "vii", "viii", "ix"]
    assert str(insts[0].identity) == "x h x k = x h k x"
    assert len(case_instances(4)) == 6 * 4
    kinds = [k for k, _ in case1_identities(4)]
    assert kinds == ["i", "ii", "ii", "iii", "iii", "iii", "iii"]


@pytest.mark.parametrize("n,count", [(3, 9), (4, 31)])
def test_case_equivalences(n, count):
    rep = verify_case_equivalences(n)
    assert rep.passed and len(rep.cases) == count
    assert rep.counts()[INCONCLUSIVE] == 0


def test_em_join():
    for m in (2, 3):
        rep = verify_em_join(m)
        assert rep.passed, rep.render()
    assert not is_isoterm(W("x x t"), ids_O() | ids_E(2))


def test_tm1_harness():
    for m in (2, 3):
        rep = verify_tm1(m)
        assert rep.passed, rep.render()


def test_reports_are_deterministic():
    a = json.dumps(verify_phi(3).to_json(), sort_keys=True)
    b = json.dumps(verify_phi(3).to_json(), sort_keys=True)
    assert a == b
    assert "wall_time" not in verify_phi(3).to_json()
    assert "wall_time" in verify_phi(3).to_json(timings=True)
    assert verify_tm1(2).render() == verify_tm1(2).render()
