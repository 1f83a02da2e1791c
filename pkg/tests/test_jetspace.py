import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dnsym import jetspace as js
from dnsym.symexpr import Verdict, is_zero, jet, normalize, parse_expr, var
from dnsym.vectorfield import SPACES, VectorField

z1, z2 = var("z1"), var("z2")
w = lambda k, l: jet("w", k, l)  # noqa: E731
h = lambda k, l: jet("h", k, l)  # noqa: E731
L = w(1, 2) + w(0, 2) * w(0, 3)
I1 = w(1, 1) + w(0, 2) ** 2 / 2


class TestTotalDerivative:
    def test_shift(self):
        assert js.total_derivative(w(0, 1), 1, "redEq13") == w(0, 2)

    def test_first_integral_gives_equation(self):
        assert normalize(js.total_derivative(I1, 1, "redEq13") - L) == 0

    def test_parametric_constant(self):
        assert js.total_derivative(z2, 0, "redEq13") == 0

    def test_by_symbol_name(self):
        assert js.total_derivative(w(0, 0), "z2", "redEq13") == w(0, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([w(0, 2), w(1, 1) * z1, sp.exp(w(0, 1)) * z2, w(0, 2) ** 3 / (1 + w(1, 0) ** 2)]))
    def test_total_derivatives_commute(self, e):
        a = js.total_derivative(js.total_derivative(e, 0, "redEq13"), 1, "redEq13")
        b = js.total_derivative(js.total_derivative(e, 1, "redEq13"), 0, "redEq13")
        assert is_zero(a - b).verdict.holds

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 3), st.integers(0, 3))
    def test_leibniz(self, k, l):
        f, g = w(k, l) * z1, sp.sin(w(l, k))
        lhs = js.total_derivative(f * g, 1, "redEq13")
        rhs = js.total_derivative(f, 1, "redEq13") * g + f * js.total_derivative(g, 1, "redEq13")
        assert is_zero(lhs - rhs).verdict.holds


class TestOnShell:
    def test_equation_vanishes(self):
        assert js.on_shell_reduce(L, "redEq13") == 0

    def test_burgers_vanishes(self):
        assert js.on_shell_reduce(h(1, 0) + h(0, 0) * h(0, 1), "burgers") == 0

    def test_parametric_untouched(self):
        assert js.on_shell_reduce(z1 * z2, "redEq13") == z1 * z2

    def test_differential_consequence(self):
        assert js.on_shell_reduce(js.total_derivative(L, 0, "redEq13"), "redEq13") == 0


class TestHattedD:
    def test_first_integral_conserved(self):
        charted = js.raw_to_integral_chart(js.integral_expr(js.REDUCED, 1))
        assert charted == js.zeta(1, 0)
        assert js.hatted_D(charted, 2) == 0

    def test_zeta_shift(self):
        assert js.hatted_D(js.zeta(1, 0), 1) == js.zeta(1, 1)

    def test_theta_zero_in_z2(self):
        got = js.hatted_D(js.theta(0), 2)
        # theta^1 = w02/w12 + z1 in the theta chart
        expected = 1 + z1 * w(1, 2) / w(0, 2)
        expected_theta = js.to_theta_chart(expected)
        assert is_zero(js.to_integral_chart(got - expected_theta)).verdict.holds

    def test_mixed_chart_rejected(self):
        with pytest.raises(js.ChartError):
            js.detect_chart(js.theta(0) + w(2, 2), js.REDUCED)

    @pytest.mark.parametrize("k", range(4))
    def test_theta_first_order_operator(self, k):
        e = js.theta(k)
        total = js.hatted_D(e, 1) + w(0, 2) * js.hatted_D(e, 2)
        assert normalize(js.to_integral_chart(total)) == 0


class TestLieSymmetry:
    def test_projective(self):
        from dnsym.liealgebra import catalog

        verdict, _ = js.check_lie_symmetry(catalog("a13").element("K"), "redEq13")
        assert verdict.verdict.holds

    def test_induced_galilean(self):
        X = VectorField("burgers", (sp.Integer(0), z1, sp.Integer(1)))
        verdict, _ = js.check_lie_symmetry(X, "burgers")
        assert verdict.verdict.holds

    def test_scaling_w_alone_rejected(self):
        X = VectorField("a13", (sp.Integer(0), sp.Integer(0), SPACES["a13"][2]))
        verdict, residual = js.check_lie_symmetry(X, "redEq13")
        assert verdict.verdict is Verdict.NONZERO
        assert normalize(residual + w(1, 2)) == 0

    def test_translation_prolongs_trivially(self):
        X = VectorField("a13", (sp.Integer(0), sp.Integer(1), sp.Integer(0)))
        coeffs = js.prolong(X, 1, "redEq13")
        assert all(normalize(c) == 0 for c in coeffs.values())

    def test_scaling_prolongation(self):
        X = VectorField("a13", (sp.Integer(0), z2, 3 * SPACES["a13"][2]))
        coeffs = js.prolong(X, 2, "redEq13")
        assert normalize(coeffs[(0, 2)] - w(0, 2)) == 0


def test_unknown_model():
    with pytest.raises(KeyError):
        js.model("nope")


def test_parse_of_model_expression():
    assert js.MODELS["redEq13"].expression == parse_expr("w[1,2] + w[0,2]*w[0,3]")
