from fractions import Fraction as F

import pytest

from jacquet.analysis import (
    DOES_NOT_SPLIT,
    INCONCLUSIVE,
    SPLITS,
    acting_elements,
    all_certificates,
    character_multiplicity,
    direct_sum_criterion,
    filtration_report,
    formal_character,
    kostant_partition,
    open_question_probe,
    relation_certificate,
    splitting_test,
)
from jacquet.liedata import Weight, load_algebra

from .conftest import result


def test_certificate_sl2r_generic(sl2r_generic):
    res = sl2r_generic
    (X, kind), = acting_elements(res.module.algebra)
    cert = relation_certificate(res, 0, X)
    assert cert.kind == "theta" and cert.X == "F"
    assert cert.W_i == [0] and list(cert.P) == [0]
    assert cert.passed
    lead = {m: c for m, c in cert.P[0].terms.items() if m[0] == 0}
    assert lead == {(0, 0, 1): -res.A[0].constant_term()}


def test_certificate_resonant_has_off_diagonal(sl2r_resonant):
    X, _ = acting_elements(sl2r_resonant.module.algebra)[0]
    cert = relation_certificate(sl2r_resonant, 0, X)
    assert cert.W_i == [0, 1]
    assert 1 in cert.P and not cert.P[1].is_zero()
    assert cert.passed


def test_certificate_m_relation(sl2c_generic):
    alg = sl2c_generic.module.algebra
    m_idx = [X for X, kind in acting_elements(alg) if kind == "m"]
    assert len(m_idx) == 1
    cert = relation_certificate(sl2c_generic, 0, m_idx[0])
    assert cert.passed and cert.W_i == [0]
    assert cert.residual.K >= 8


def test_direct_sum_criterion_rank_one():
    alg = load_algebra("sl2r")
    assert direct_sum_criterion(alg, Weight([F(1, 2)]))["passes"]
    assert direct_sum_criterion(alg, Weight([F(3, 4)]))["passes"]
    assert not direct_sum_criterion(alg, Weight([2]))["passes"]


def test_filtration_reports(sl2r_generic, sl2r_resonant):
    rep = filtration_report(sl2r_generic)
    assert rep["conclusion"] == "direct sum" and rep["structural_checks"]
    rep = filtration_report(sl2r_resonant)
    assert rep["conclusion"].startswith("extension undetermined")
    assert rep["steps"][0]["W_i_proper"] == [2]


def test_kostant_partition():
    sl3 = load_algebra("sl3r")
    assert kostant_partition(sl3, Weight([1, 1])) == 2
    assert kostant_partition(sl3, Weight([2, 2])) == 3
    assert kostant_partition(sl3, Weight([-1, 0])) == 0
    sl2c = load_algebra("sl2c")
    # two root vectors of weight beta: partitions of 2 beta number 3
    assert kostant_partition(sl2c, Weight([2])) == 3


def test_formal_character_sl2r(sl2r_generic):
    table = formal_character(sl2r_generic, 6)
    assert table["agree"]
    top = sl2r_generic.eigen_weights[0]
    assert character_multiplicity(table, top) == (1, 1)
    assert character_multiplicity(table, Weight([-10])) == (0, 0)


def test_formal_character_sl3r(sl3r_generic):
    assert formal_character(sl3r_generic, 4)["agree"]


def test_splitting_verdicts():
    assert splitting_test(result("sl2r", ("1/2",), 12), 0)["verdict"] == SPLITS
    assert splitting_test(result("sl2r", ("2",), 12), 0)["verdict"] == DOES_NOT_SPLIT
    # horizon below the required height never gives a false verdict
    assert splitting_test(result("sl2r", ("2",), 12), 0, K=4)["verdict"] == INCONCLUSIVE


def test_splits_persists_in_K():
    res = result("sl2r", ("1/2",), 12)
    assert all(r["solvable"] for r in splitting_test(res, 0)["runs"])


def test_open_question_probe_flags():
    # lambda(H) = 2, i.e. r = 2: both statements agree or abstain
    probe = open_question_probe(result("sl2r", ("1",), 12))
    assert probe["r"] == "2/1"
    assert probe["detector"] == DOES_NOT_SPLIT
    assert probe["lattice_criterion"] == "not applicable"
    assert probe["agrees_with_integer_claim"] is True
    assert not probe["claims_conflict"]


def test_open_question_probe_odd_r():
    # lambda(H) = 1, i.e. r = 1: the two statements conflict and the detector
    # sides with the lattice criterion
    probe = open_question_probe(result("sl2r", ("1/2",), 12))
    assert probe["r"] == "1/1" and probe["claims_conflict"]
    assert probe["detector"] == SPLITS
    assert probe["agrees_with_lattice_criterion"] is True
    assert probe["agrees_with_integer_claim"] is False


def test_all_certificates_sl3r(sl3r_generic):
    certs = all_certificates(sl3r_generic)
    assert len(certs) == 12
    assert all(c.passed and c.W_i == [c.i] for c in certs)
