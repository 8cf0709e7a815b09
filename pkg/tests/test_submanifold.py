from fractions import Fraction

import pytest

from cpgeo.errors import DependentBasis, NotPhiInvariant, WrongCase
from cpgeo.exterior import bracket
from cpgeo.submanifold import (
    EVEN_TANGENT,
    LEANING,
    ODD_TANGENT_ORTHOGONAL,
    ONE_DIM_VERTICAL,
    analyze_subspace,
    angle_certificate,
    check_theta2_relation,
    classify,
    contact_metric_leaf_check,
    horizontal_part,
    horizontal_split_ratio,
    induced_contact_structure_check,
    induced_f_structure_check,
    minimality_audit,
    split_horizontal,
)
from oracles import tangent_norm2

PAIRS = [(1, 1), (1, 2), (2, 3), (Fraction(-3, 2), Fraction(5, 7))]


def leaf(inst, a, b):
    return inst.model.subspace("leaf", {"a": a, "b": b})


class TestLeaves:
    @pytest.mark.parametrize("a,b", PAIRS)
    @pytest.mark.parametrize("name", ["g6", "h6"])
    def test_leaning_angles(self, name, a, b, request):
        inst = request.getfixturevalue(name)
        W = leaf(inst, a, b)
        x, phix, z = W
        assert bracket(inst.L, x, phix) == z
        assert inst.cps.phi(x) == phix
        inv = analyze_subspace(inst.cps, W, inst.conn)
        cls = classify(inv)
        assert cls.case == LEANING
        a4, b4 = Fraction(a) ** 4, Fraction(b) ** 4
        cert = cls.certificate
        assert cert.cos2 == a4 / (a4 + b4)
        assert cert.cos2 == tangent_norm2(inst.g.matrix, W, inst.cps.reeb[0])
        assert cert.tan == Fraction(b) ** 2 / Fraction(a) ** 2
        assert check_theta2_relation(inv)

    @pytest.mark.parametrize("a,b", PAIRS)
    def test_g6_leaf_minimal_not_totally_geodesic(self, g6, a, b):
        inv = analyze_subspace(g6.cps, leaf(g6, a, b))
        audit = minimality_audit(g6.cps, g6.conn, inv)
        assert audit.values["minimal"] and not audit.values["totally_geodesic"]

    def test_h6_leaf_totally_geodesic_only_on_diagonal(self, h6):
        # computed: the normal part of nabla_X Z carries the factor (a^2 - b^2)
        for a, b in PAIRS:
            inv = analyze_subspace(h6.cps, leaf(h6, a, b))
            audit = minimality_audit(h6.cps, h6.conn, inv)
            assert audit.passed and audit.values["minimal"]
            assert audit.values["totally_geodesic"] == (Fraction(a) ** 2 == Fraction(b) ** 2)

    @pytest.mark.parametrize("a,b", PAIRS)
    def test_split_ratio(self, h6, a, b):
        inv = analyze_subspace(h6.cps, leaf(h6, a, b))
        hor = horizontal_part(inv)
        assert len(hor) == 2
        for x in hor + [hor[0] * 3 - hor[1]]:
            r = horizontal_split_ratio(h6.cps, inv, x)
            assert r.passed, r.values

    def test_split_components(self, g6):
        x = g6.vec("Y3") + g6.vec("Y4")
        x1, x2 = split_horizontal(g6.cps, x)
        assert x1 == g6.vec("Y3") and x2 == g6.vec("Y4")

    def test_split_ratio_rejects_vertical(self, g6):
        inv = analyze_subspace(g6.cps, leaf(g6, 1, 1))
        with pytest.raises(ValueError):
            horizontal_split_ratio(g6.cps, inv, g6.vec("Y1") + g6.vec("Y2"))


class TestInducedStructure:
    @pytest.mark.parametrize("a,b", [(1, 1), (1, 2)])
    def test_h6_all_items(self, h6, a, b):
        rep = induced_contact_structure_check(h6.cps, analyze_subspace(h6.cps, leaf(h6, a, b)))
        assert set(rep.checks) == {"a_contact", "b_reeb", "c_almost_contact", "d_compatible",
                                   "e_not_contact_metric", "f_normal"}
        assert all(r.passed for r in rep.checks.values())
        assert rep.values["d_restrict_commutes"]

    @pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 3)])
    def test_g6_items_a_to_e(self, g6, a, b):
        rep = induced_contact_structure_check(g6.cps, analyze_subspace(g6.cps, leaf(g6, a, b)))
        assert rep.checks["f_normal"] is None
        assert all(rep.checks[k].passed for k in rep.checks if k != "f_normal")

    def test_wrong_case(self, g6):
        inv = analyze_subspace(g6.cps, g6.cps.subbundles["TF2"].basis)
        with pytest.raises(WrongCase):
            induced_contact_structure_check(g6.cps, inv)

    def test_tf2_routes_to_contact_metric_leaf(self, g6):
        inv = analyze_subspace(g6.cps, g6.cps.subbundles["TF2"].basis)
        cls = classify(inv)
        assert cls.case == ODD_TANGENT_ORTHOGONAL and cls.tangent_index == 1
        r = contact_metric_leaf_check(g6.cps, inv)
        assert r.passed and r.values["tangent_reeb"] == "Z1"

    def test_tf1_tangent_to_second_reeb(self, g6):
        inv = analyze_subspace(g6.cps, g6.cps.subbundles["TF1"].basis)
        cls = classify(inv)
        assert cls.tangent_index == 2 and cls.certificate is None
        assert contact_metric_leaf_check(g6.cps, inv)

    @pytest.mark.parametrize("role", ["TG1", "TG2", "V"])
    def test_even_tangent_f_structure(self, h6, role):
        inv = analyze_subspace(h6.cps, h6.cps.subbundles[role].basis)
        assert classify(inv).case == EVEN_TANGENT
        r = induced_f_structure_check(h6.cps, inv)
        assert r.passed and r.values["restricted_N1_zero"]


class TestClassification:
    def test_one_dim_vertical(self, g6):
        inv = analyze_subspace(g6.cps, [g6.vec("Y1") + g6.vec("Y2") * 2])
        assert classify(inv).case == ONE_DIM_VERTICAL
        assert minimality_audit(g6.cps, g6.conn, inv).values["geodesic"]

    def test_not_phi_invariant(self, g6):
        with pytest.raises(NotPhiInvariant) as info:
            analyze_subspace(g6.cps, [g6.vec("Y3"), g6.vec("Y4")])
        assert info.value.witness == g6.vec("Y3")

    def test_non_invariant_allowed_when_requested(self, g6):
        inv = analyze_subspace(g6.cps, [g6.vec("Y3")], require_invariant=False)
        assert not inv.phi_invariant
        with pytest.raises(NotPhiInvariant):
            classify(inv)

    def test_dependent_basis(self, g6):
        with pytest.raises(DependentBasis):
            analyze_subspace(g6.cps, [g6.vec("Y1"), g6.vec("Y1")])

    def test_even_dimension_not_tangent_to_both(self, g6):
        # phi-invariant plane of H, orthogonal to both Reeb fields
        with pytest.raises(ValueError):
            analyze_subspace(g6.cps, [g6.vec("Y3"), g6.vec("Y5")])

    def test_angle_undefined_when_z2_tangent(self, g6):
        inv = analyze_subspace(g6.cps, g6.cps.subbundles["TF1"].basis)
        with pytest.raises(WrongCase):
            angle_certificate(inv)


def test_induced_structure_data(h6):
    rep = induced_contact_structure_check(h6.cps, analyze_subspace(h6.cps, leaf(h6, 1, 2)))
    st = rep.structure
    assert st.omega(st.zeta) == st.norm2 == Fraction(1, 17)
