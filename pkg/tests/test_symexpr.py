import math

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dnsym.symexpr import (
    JetIndexError,
    ParseError,
    ProbeConfig,
    UnknownFunctionError,
    Verdict,
    diff,
    evaluate,
    is_zero,
    jet,
    lambertw,
    normalize,
    opaque,
    parse_expr,
    parse_indexed,
    substitute,
    to_text,
    var,
)

z1, z2 = var("z1"), var("z2")
w = lambda k, l: jet("w", k, l)  # noqa: E731


class TestParse:
    def test_equation_text(self):
        e = parse_expr("w[1,2] + w[0,2]*w[0,3]")
        assert e == w(1, 2) + w(0, 2) * w(0, 3)

    def test_cancellation_normalizes_to_zero(self):
        assert normalize(parse_expr("z1^2 - z1*z1")) == 0

    def test_unterminated_index_reports_offset(self):
        with pytest.raises(ParseError) as exc:
            parse_expr("w[1,")
        assert exc.value.offset == 4

    def test_unknown_function(self):
        with pytest.raises(UnknownFunctionError):
            parse_expr("frobnicate(z1)")

    def test_negative_index_rejected(self):
        with pytest.raises((JetIndexError, ParseError)):
            parse_expr("w[-1,0]")

    def test_opaque_names(self):
        e = parse_expr("alpha(z1)*sigma(z1)", opaque_names={"alpha", "sigma"})
        assert e == opaque("alpha")(z1) * opaque("sigma")(z1)

    def test_parse_indexed(self):
        assert parse_indexed(w(1, 2)) == ("w", (1, 2))
        assert parse_indexed(z1) is None


class TestDiff:
    def test_power(self):
        assert diff(w(0, 2) ** 2 / 2, w(0, 2)) == w(0, 2)

    def test_opaque_derivative(self):
        assert diff(opaque("alpha")(z1), z1) == opaque("alpha", 1)(z1)
        assert diff(parse_expr("alpha(z1)", {"alpha"}), z1) == opaque("alpha", 1)(z1)

    def test_jets_are_independent(self):
        assert diff(z2 - w(0, 2) * z1, z2) == 1


class TestNormalize:
    def test_commuting_product(self):
        assert normalize(w(0, 2) * w(0, 3) - w(0, 3) * w(0, 2)) == 0

    def test_square(self):
        assert normalize((z1 + 1) ** 2 - z1**2 - 2 * z1 - 1) == 0

    def test_common_factor_removed(self):
        assert normalize((z1**2 - z2**2) / (z1 - z2)) == z1 + z2

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-5, 5), min_size=3, max_size=3))
    def test_idempotent(self, c):
        e = (c[0] * z1**2 + c[1] * w(0, 2)) / (c[2] ** 2 + 1 + z2**2)
        once = normalize(e)
        assert normalize(once) == once


class TestZeroOracle:
    def test_exp_identity_probabilistic(self):
        r = is_zero(sp.exp(z1) * sp.exp(-z1) - 1 + sp.sin(z1) ** 2 + sp.cos(z1) ** 2 - 1)
        assert r.verdict.holds

    def test_equation_not_zero(self):
        assert is_zero(w(1, 2) + w(0, 2) * w(0, 3)).verdict is Verdict.NONZERO

    def test_log_identity_on_positive_samples(self):
        r = is_zero(sp.log(z1**2) - 2 * sp.log(z1))
        assert r.verdict.holds

    def test_opaque_identity(self):
        a = opaque("alpha")(z1)
        assert is_zero(sp.diff(a * z1, z1) - a - z1 * sp.diff(a, z1)).verdict.holds

    def test_opaque_non_identity(self):
        a = opaque("alpha")(z1)
        assert is_zero(sp.diff(a, z1) - a).verdict is Verdict.NONZERO

    def test_radical_identity_exact(self):
        assert is_zero(sp.sqrt(z1 + 1) ** 2 - z1 - 1).verdict is Verdict.ZERO

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_seed_does_not_change_verdict(self, seed):
        e = sp.sin(z1) * w(0, 2) + sp.exp(z2)
        assert is_zero(e, ProbeConfig(seed=seed)).verdict is Verdict.NONZERO
        assert is_zero(e - e.expand(), ProbeConfig(seed=seed)).verdict.holds


class TestSubstitute:
    def test_principal_jet(self):
        out = substitute(w(0, 3), {w(0, 3): -w(1, 2) / w(0, 2)})
        assert normalize(out + w(1, 2) / w(0, 2)) == 0

    def test_integral_at_values(self):
        i1 = w(1, 1) + w(0, 2) ** 2 / 2
        assert substitute(i1, {w(1, 1): 0, w(0, 2): 2}) == 2

    def test_theta_zero(self):
        h = jet("h", 0, 0)
        assert substitute(z2 - w(0, 2) * z1, {w(0, 2): h}) == normalize(z2 - h * z1)


class TestEvaluate:
    def test_lambert_at_e(self):
        x = var("x")
        assert abs(evaluate(lambertw(x), {"x": math.e}) - 1.0) < 1e-14

    def test_lambert_at_zero(self):
        x = var("x")
        assert evaluate(lambertw(x), {"x": 0.0}) == 0.0

    def test_lambert_at_one(self):
        x = var("x")
        assert abs(evaluate(lambertw(x), {"x": 1.0}) - 0.5671432904097838) < 1e-12


class TestPrinting:
    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(-4, 4),
        st.integers(1, 3),
        st.sampled_from(["w[0,2]", "w[1,2]", "z1", "z2", "exp(z1)", "sqrt(z2)"]),
    )
    def test_round_trip(self, a, p, atom):
        e = parse_expr(f"{a}*{atom}^{p} + z1*w[0,3]")
        assert normalize(parse_expr(to_text(e)) - e) == 0
