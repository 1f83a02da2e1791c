import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from dnsym.reductions import (
    AdmissibilityError,
    build_dN_ansatz,
    invariance_check,
    row,
    rows,
    subalgebra,
    symbolic_reduce,
)
from dnsym.symexpr import jet, normalize, var
from dnsym.vectorfield import VectorField

z1, z2 = var("z1"), var("z2")
H = jet("h", 0, 0)


class TestTable:
    @pytest.mark.parametrize("name", [r.name for r in rows()])
    def test_every_row_reduces(self, name):
        res = symbolic_reduce(row(name))
        assert res.verdict.verdict.holds
        assert res.factor is not None and normalize(res.factor) != 0

    @pytest.mark.parametrize("name", [r.name for r in rows()])
    def test_every_row_invariant(self, name):
        assert invariance_check(row(name)).verdict.holds

    def test_row_11_factor(self):
        assert normalize(symbolic_reduce(row("1.1")).factor - z2) == 0

    def test_row_13_factor(self):
        assert symbolic_reduce(row("1.3")).factor == 1

    @pytest.mark.parametrize("name", ["1.5", "1.6", "1.7"])
    def test_negative_chart(self, name):
        assert symbolic_reduce(row(name), negative_chart=True).verdict.verdict.holds

    def test_wrong_generator_rejected(self):
        # the z2-shift does not annihilate the row 1.3 invariant
        X = VectorField("burgers", (0, 1, 0))
        assert not invariance_check(row("1.3"), spec=X).verdict.holds


class TestSubalgebras:
    def test_shift_invariant(self):
        X = subalgebra("b1.2").induced()
        assert X.apply(z2) == 0

    def test_galilean_combination(self):
        X = subalgebra("b1.3").induced()
        assert normalize(X.apply(z2 - z1**2 / 2)) == 0

    @settings(max_examples=10, deadline=None)
    @given(st.fractions(min_value=-3, max_value=3).filter(lambda a: a != 0))
    def test_scaling_invariant(self, a):
        a = sp.Rational(a.numerator, a.denominator)
        X = subalgebra("b1.6", a).induced()
        zp = sp.Symbol("zp", positive=True)
        omega = z2 / z1**a
        assert normalize(X.apply(omega).subs(z1, zp)) == 0


class TestDNAnsatz:
    def test_constant_density(self):
        ans = build_dN_ansatz("2")
        t = np.array([0.0, 0.5, 1.5])
        assert np.allclose(ans.z1(t), 2 * (1 - 2.0**-3) * t, atol=1e-15)

    def test_exponential_density(self):
        ans = build_dN_ansatz("exp(t)")
        t = 0.8
        exact = 2 * t + 2.0 / 3.0 * (math.exp(-3 * t) - 1.0)
        assert float(ans.z1(t)) == pytest.approx(exact, abs=1e-10)

    def test_quadrature_path_matches_scipy(self):
        ans = build_dN_ansatz("1 + t^2", use_table=False)
        f = lambda s: 2 * (1 - (1 + s * s) ** -3)  # noqa: E731
        for t in (0.3, 0.9):
            assert float(ans.z1(t)) == pytest.approx(integrate.quad(f, 0.0, t, epsabs=1e-13)[0], abs=1e-10)

    def test_unit_density_rejected(self):
        with pytest.raises(AdmissibilityError):
            build_dN_ansatz("1")

    def test_vanishing_density_rejected(self):
        with pytest.raises(AdmissibilityError):
            build_dN_ansatz("t")

    def test_x_dependence_rejected(self):
        with pytest.raises(AdmissibilityError):
            build_dN_ansatz("1 + x")
