import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dnsym.liealgebra import (
    catalog,
    generic_element,
    in_subspace,
    match_to_basis,
    to_intermediate,
    upsilon,
    verify_symmetry_control,
)
from dnsym.symexpr import jet, normalize, opaque, var
from dnsym.vectorfield import SPACES, SpaceMismatch, VectorField, lie_bracket

z1, z2 = var("z1"), var("z2")
A13 = catalog("a13")
CHK = catalog("a13check")


def same(a: VectorField, b: VectorField) -> bool:
    return bool((a - b).is_zero())


class TestBrackets:
    def test_shift_with_scaling(self):
        assert same(lie_bracket(A13.element("P1"), A13.element("D1")), A13.element("P1"))

    def test_shift_with_galilean(self):
        assert same(lie_bracket(A13.element("P2"), A13.element("H")), A13.element("R", sp.Integer(1)))

    def test_shift_with_projective(self):
        expected = A13.element("D1").scale(2) + A13.element("D2")
        assert same(lie_bracket(A13.element("P1"), A13.element("K")), expected)

    def test_projective_with_slot(self):
        s = opaque("sigma")(z1)
        lhs = lie_bracket(A13.element("K"), A13.element("Z", s))
        rhs = A13.element("Z", z1**2 * sp.diff(s, z1) - z1 * s)
        assert same(lhs, rhs)

    def test_induced_table_row(self):
        expected = CHK.element("D1").scale(2) + CHK.element("D2")
        assert same(lie_bracket(CHK.element("P1"), CHK.element("K")), expected)

    def test_time_reparametrizations(self):
        g = catalog("g")
        t = var("t")
        t1, t2 = opaque("tau1")(t), opaque("tau2")(t)
        lhs = lie_bracket(g.element("Dt", t1), g.element("Dt", t2))
        rhs = g.element("Dt", t1 * sp.diff(t2, t) - t2 * sp.diff(t1, t))
        assert same(lhs, rhs)

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatch):
            lie_bracket(A13.element("P1"), CHK.element("P1"))

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from([g.name for g in A13.fixed]), st.sampled_from([g.name for g in A13.fixed]))
    def test_antisymmetry(self, a, b):
        x, y = A13.element(a), A13.element(b)
        assert same(lie_bracket(x, y), -lie_bracket(y, x))

    @settings(max_examples=20, deadline=None)
    @given(
        st.sampled_from([g.name for g in A13.fixed]),
        st.sampled_from([g.name for g in A13.fixed]),
        st.sampled_from([g.name for g in A13.fixed]),
    )
    def test_jacobi(self, a, b, c):
        x, y, z = A13.element(a), A13.element(b), A13.element(c)
        total = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
        assert total.is_zero()


class TestMatching:
    def test_constant_shift_of_w(self):
        d = match_to_basis(VectorField("a13", (0, 0, z2)), A13)
        assert d is not None and normalize(d.slots["R"] - 1) == 0

    def test_slot_function(self):
        s = opaque("sigma")(z1)
        d = match_to_basis(VectorField("a13", (0, 0, s)), A13)
        assert d is not None and d.slots["Z"] == s

    def test_wrong_space(self):
        assert match_to_basis(VectorField("burgers", (0, 0, 1)), A13) is None

    def test_non_member(self):
        assert match_to_basis(VectorField("a13", (z2**2, 0, 0)), A13) is None


class TestIdeals:
    @pytest.mark.parametrize("name", [g.name for g in A13.generators])
    def test_center_of_m3(self, name):
        x = A13.element(name) if A13.gen(name).slot is None else A13.element(name, A13.gen(name).slot)
        assert in_subspace(lie_bracket(x, generic_element(A13, "m5", "b")), A13, "m5")

    def test_radical_derived(self):
        r = [A13.element(n) for n in ("P2", "H")] + [A13.element("R", "alpha"), A13.element("Z", "sigma")]
        for i, x in enumerate(r):
            for y in r[i + 1 :]:
                assert in_subspace(lie_bracket(x, y), A13, "m3")

    @pytest.mark.parametrize("name", [g.name for g in A13.generators])
    def test_m7_stable(self, name):
        x = A13.element(name) if A13.gen(name).slot is None else A13.element(name, A13.gen(name).slot)
        assert in_subspace(lie_bracket(x, generic_element(A13, "m7", "c")), A13, "m7")


class TestInducedMaps:
    def test_scaling_image(self):
        h = jet("h", 0, 0)
        assert same(upsilon(A13.element("D2")), VectorField("burgers", (0, z2, h)))

    def test_kernel(self):
        assert upsilon(A13.element("R", "alpha")).is_zero()
        assert upsilon(A13.element("Z", "sigma")).is_zero()

    def test_galilean_image(self):
        assert same(upsilon(A13.element("H")), VectorField("burgers", (0, z1, 1)))

    @pytest.mark.parametrize("name", ["P1", "D1", "K", "D2", "P2", "H"])
    def test_intermediate_image(self, name):
        assert same(to_intermediate(A13.element(name)), catalog("intermediate").element(name))


def test_negative_control_passes_as_rejection():
    (res,) = verify_symmetry_control()
    assert res.passed and res.verdict == "nonzero"


def test_catalog_sizes():
    assert len(A13.generators) == 8
    assert SPACES[A13.space][2] == jet("w", 0, 0)
