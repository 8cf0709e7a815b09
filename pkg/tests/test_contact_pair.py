from fractions import Fraction

import pytest

from cpgeo import linalg
from cpgeo.contact_pair import (
    check_decomposable,
    check_metric,
    complete_phi,
    detect_pair_type,
    metric_contact_pair,
    normality_tensor,
    normality_tensor_and_check,
    reeb_fields,
    validate,
    volume_identity_check,
)
from cpgeo.errors import AxiomViolation
from cpgeo.exterior import KForm, Vector
from cpgeo.tensors import Endomorphism, Metric


def labels(inst, names):
    return [inst.vec(n) for n in names.split()]


class TestG6:
    def test_all_gates_but_normality_pass(self, g6):
        verdicts = {name: r.passed for name, r in g6.validation.checks}
        assert verdicts.pop("pair.normality") is False
        assert all(verdicts.values())

    def test_type_and_reeb(self, g6):
        assert detect_pair_type(g6.L, g6.model.alpha1, g6.model.alpha2) == (1, 1)
        assert g6.cps.reeb == (g6.vec("Y1"), g6.vec("Y2"))

    def test_characteristic_distributions(self, g6):
        sb = g6.cps.subbundles
        assert linalg.span_equal(sb["TF1"].basis, labels(g6, "Y2 Y4 Y6"))
        assert linalg.span_equal(sb["TF2"].basis, labels(g6, "Y1 Y3 Y5"))
        assert linalg.span_equal(sb["TG1"].basis, labels(g6, "Y1 Y2 Y4 Y6"))
        assert linalg.span_equal(sb["TG2"].basis, labels(g6, "Y1 Y2 Y3 Y5"))
        assert {r: sb[r].dim for r in sb} == {"TF1": 3, "TF2": 3, "TG1": 4, "TG2": 4, "H": 4, "V": 2}

    def test_phi_completed_from_generators(self, g6):
        phi = g6.cps.phi
        assert phi(g6.vec("Y3")) == -g6.vec("Y5")
        assert phi(g6.vec("Y4")) == -g6.vec("Y6")
        assert phi(g6.vec("Y1")).is_zero()

    def test_normality_witness(self, g6):
        rep = normality_tensor_and_check(g6.cps)
        assert not rep.is_normal
        assert rep.witness == (2, 3)
        # by hand: -phi[phi Y3, Y4] = -phi[-Y5, Y4] = phi Y6 = Y4, other terms vanish
        assert rep.value == g6.vec("Y4")
        assert not rep.j_integrable and not rep.t_integrable
        assert rep.complex_structures_ok

    def test_volume_identity(self, g6):
        r = volume_identity_check(g6.cps)
        assert r.passed
        assert r.values["coefficient"] == Fraction(-1, 2880)
        assert r.values["det_g"] == Fraction(1, 16)

    def test_swapped_phi_is_not_decomposable(self, g6):
        n = 6
        y = g6.e
        phi = Endomorphism.from_images([Vector.zero(n), Vector.zero(n), -y[5], -y[4], y[3], y[2]])
        v = validate(g6.L, g6.model.alpha1, g6.model.alpha2, phi, g6.g)
        dec = v.get("pair.decomposable")
        assert not dec.passed
        assert dec.values["orthogonal"] is True
        assert not v.get("pair.metric").passed
        assert v.structure is None

    def test_strict_constructor_raises(self, g6):
        bad = Metric.diagonal([1, 1, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 1])
        with pytest.raises(AxiomViolation) as info:
            metric_contact_pair(g6.L, g6.model.alpha1, g6.model.alpha2, g6.cps.phi, bad)
        assert info.value.axiom == "pair.metric"


class TestNormalExamples:
    @pytest.mark.parametrize("name", ["h6", "products", "heis3xR"])
    def test_normal(self, name, request):
        inst = request.getfixturevalue({"h6": "h6", "products": "products", "heis3xR": "heis"}[name])
        assert inst.validation.ok
        rep = normality_tensor_and_check(inst.cps)
        assert rep.is_normal and rep.j_integrable and rep.t_integrable

    def test_heis_type(self, heis):
        assert heis.cps.type_pair == (1, 0)
        assert linalg.span_equal(heis.cps.subbundles["TF1"].basis, [heis.vec("E4")])

    def test_h6_reeb(self, h6):
        assert h6.cps.reeb == (h6.vec("X3"), h6.vec("Y3"))

    def test_N1_vanishes_on_all_pairs(self, h6):
        for x in h6.e:
            for y in h6.e:
                assert normality_tensor(h6.cps, x, y).is_zero()

    def test_J_T_square_to_minus_identity(self, h6):
        minus = -Endomorphism.identity(6)
        assert h6.cps.J @ h6.cps.J == minus
        assert h6.cps.T @ h6.cps.T == minus


class TestGateFailures:
    def test_degenerate_pair_fails_type(self, heis):
        a = KForm.dual(4, 2)
        v = validate(heis.L, a, a, heis.model.phi, heis.g)
        assert [n for n, _ in v.checks] == ["algebra.jacobi", "pair.type"]
        assert not v.get("pair.type").passed

    def test_non_positive_metric(self, heis):
        g = Metric.diagonal([Fraction(1, 2), Fraction(1, 2), 1, -1])
        r = validate(heis.L, heis.model.alpha1, heis.model.alpha2, heis.model.phi, g).get("pair.metric")
        assert not r.passed
        assert r.witness == (3,)

    def test_associated_metric_violation(self, heis):
        g = Metric.diagonal([1, 1, 1, 1])
        r = validate(heis.L, heis.model.alpha1, heis.model.alpha2, heis.model.phi, g).get("pair.metric")
        assert not r.passed
        assert "g(X, phi Y)" in r.detail

    def test_inconsistent_phi_generators(self, heis):
        e = heis.e
        with pytest.raises(AxiomViolation):
            complete_phi(heis.L, heis.model.alpha1, heis.model.alpha2, heis.cps.reeb,
                         [(e[1], e[0]), (e[0], e[0])])

    def test_underdetermined_phi(self, h6):
        with pytest.raises(AxiomViolation, match="determined"):
            complete_phi(h6.L, h6.model.alpha1, h6.model.alpha2, h6.cps.reeb, [(h6.e[1], h6.e[0])])

    def test_reeb_singular_for_closed_forms(self, heis):
        a = KForm.dual(4, 0)
        b = KForm.dual(4, 1)
        with pytest.raises(AxiomViolation):
            reeb_fields(heis.L, a, b)


def test_metric_check_reports_determinant(h6):
    r = check_metric(h6.cps)
    assert r.passed and r.values["det"] == Fraction(1, 16)


def test_decomposable_agrees_with_orthogonality(h6, products):
    for inst in (h6, products):
        r = check_decomposable(inst.cps)
        assert r.values["phi_invariant"] == r.values["orthogonal"] is True
