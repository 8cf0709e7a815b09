from fractions import Fraction

import pytest

from cpgeo import linalg
from cpgeo.connection import (
    characteristic_form,
    check_connection_laws,
    check_involutive,
    check_reeb_geodesic,
    horizontality_lemmas_check,
    killing_check,
    levi_civita,
    rummler_check,
    second_fundamental_form,
)
from cpgeo.errors import DegreeError, DependentBasis, NotInvolutive
from cpgeo.exterior import Vector
from cpgeo.tensors import Metric
from oracles import koszul_table

NAMES = ["g6", "h6", "heis", "products"]


def table_of(inst):
    return {k: [Fraction(c) for c in v] for k, v in inst.L.brackets().items()}


@pytest.mark.parametrize("name", NAMES)
def test_koszul_table_matches_sympy(name, request):
    inst = request.getfixturevalue(name)
    n = inst.L.dim
    expected = koszul_table(table_of(inst), n, inst.g.matrix)
    for (i, j), v in expected.items():
        assert list(inst.conn.table[i][j]) == v


@pytest.mark.parametrize("name", NAMES)
def test_connection_laws_and_reeb_geodesics(name, request):
    inst = request.getfixturevalue(name)
    assert check_connection_laws(inst.conn)
    assert check_reeb_geodesic(inst.cps, inst.conn)
    assert horizontality_lemmas_check(inst.cps, inst.conn)


def test_indefinite_metric_rejected(heis):
    with pytest.raises(ValueError):
        levi_civita(heis.L, Metric.diagonal([1, 1, 1, -1]))


def test_g6_connection_coefficient(g6):
    # nonzero, so TF1 is not totally geodesic; the magnitude depends on the
    # bracket normalisation fixed by the alternation convention
    v = g6.conn.nabla(g6.vec("Y4"), g6.vec("Y6"))
    assert g6.g(v, g6.vec("Y5")) == Fraction(1, 4)


class TestSecondFundamentalForm:
    def test_g6_foliations(self, g6):
        sb = g6.cps.subbundles
        out = {r: second_fundamental_form(g6.conn, sb[r].basis) for r in ("TF1", "TF2", "TG1", "TG2", "V")}
        assert all(cd.minimal for cd in out.values())
        assert {r: cd.totally_geodesic for r, cd in out.items()} == {
            "TF1": False, "TF2": True, "TG1": False, "TG2": True, "V": True}

    def test_g6_tf1_value(self, g6):
        basis = [g6.vec("Y2"), g6.vec("Y4"), g6.vec("Y6")]
        cd = second_fundamental_form(g6.conn, basis)
        assert cd.second_fundamental_form[(1, 2)] == g6.vec("Y5") * Fraction(1, 2)
        assert cd.symmetric

    def test_mean_curvature_is_basis_independent(self, g6):
        sb = g6.cps.subbundles["TG1"].basis
        mixed = [sb[0] + sb[1], sb[1] * 3, sb[2] - sb[3], sb[3]]
        assert second_fundamental_form(g6.conn, mixed).mean_curvature == \
            second_fundamental_form(g6.conn, sb).mean_curvature

    def test_not_involutive(self, g6):
        with pytest.raises(NotInvolutive) as info:
            second_fundamental_form(g6.conn, [g6.vec("Y3"), g6.vec("Y5")])
        assert info.value.witness == (0, 1)

    def test_dependent_basis(self, g6):
        with pytest.raises(DependentBasis):
            second_fundamental_form(g6.conn, [g6.vec("Y1"), g6.vec("Y1") * 2])

    def test_heis_foliations_totally_geodesic(self, heis):
        for r in ("TF1", "TF2", "TG1", "TG2"):
            assert second_fundamental_form(heis.conn, heis.cps.subbundles[r].basis).totally_geodesic


def test_check_involutive(g6):
    assert check_involutive(g6.L, g6.cps.subbundles["TG2"].basis) is None


class TestKilling:
    def test_normal_examples(self, h6, products):
        for inst in (h6, products):
            assert all(killing_check(inst.conn, z) for z in inst.cps.reeb)

    def test_heis_second_reeb(self, heis):
        assert killing_check(heis.conn, heis.cps.reeb[1])

    def test_g6_reeb_fields(self, g6):
        # not implied by the theory (the pair is not normal); computed value
        assert killing_check(g6.conn, g6.vec("Y1")) and killing_check(g6.conn, g6.vec("Y2"))

    def test_non_killing(self, g6):
        r = killing_check(g6.conn, g6.vec("Y3"))
        assert not r.passed and r.values["value"] != 0


class TestRummler:
    @pytest.mark.parametrize("name", NAMES)
    def test_agrees_with_mean_curvature(self, name, request):
        inst = request.getfixturevalue(name)
        for role in ("TG1", "TG2"):
            basis = inst.cps.subbundles[role].basis
            rummler = rummler_check(inst.L, basis, characteristic_form(inst.cps, role))
            assert rummler.passed == second_fundamental_form(inst.conn, basis).minimal

    def test_g6_leaf_value(self, g6):
        r = rummler_check(g6.L, g6.cps.subbundles["TG1"], characteristic_form(g6.cps, "TG1"))
        assert r.values["leaf_value"] != 0

    def test_degree_mismatch(self, g6):
        with pytest.raises(DegreeError):
            rummler_check(g6.L, g6.cps.subbundles["TF1"], characteristic_form(g6.cps, "TG1"))

    def test_unknown_role(self, g6):
        with pytest.raises(ValueError):
            characteristic_form(g6.cps, "TF1")

    def test_non_minimal_detected(self):
        # affine algebra [e1, e2] = e2: the orbits of e2 are not geodesics
        from cpgeo.exterior import KForm, LieAlgebra
        L = LieAlgebra(2, {(0, 1): [0, 1]})
        conn = levi_civita(L, Metric.diagonal([1, 1]))
        basis = [L.basis(1)]
        cd = second_fundamental_form(conn, basis)
        r = rummler_check(L, basis, KForm.dual(2, 1))
        assert not cd.minimal
        assert not r.passed
