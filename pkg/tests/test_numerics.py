import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize, special

from dnsym.numerics import (
    INV_E,
    Bracket,
    BracketError,
    DomainViolation,
    central_weights,
    fd_partial,
    find_root,
    integrate_1d,
    lambert_w,
    lambert_w_array,
    moc_burgers,
    moc_burgers_array,
    scan_brackets,
)

OMEGA = 0.5671432904097838


def bisection_w(branch, x):
    """Independent oracle: plain bisection on w e^w = x."""
    lo, hi = (-1.0, max(1.0, math.log1p(x) + 1.0)) if branch == 0 else (-750.0, -1.0)
    f = lambda w: w * math.exp(w) - x  # noqa: E731
    for _ in range(200):
        m = 0.5 * (lo + hi)
        if (f(lo) < 0) == (f(m) < 0):
            lo = m
        else:
            hi = m
    return 0.5 * (lo + hi)


class TestLambert:
    def test_at_e(self):
        assert lambert_w(0, math.e) == pytest.approx(1.0, abs=1e-15)

    def test_branch_point(self):
        assert lambert_w(-1, -INV_E) == pytest.approx(-1.0, abs=1e-7)

    def test_omega_constant(self):
        assert abs(lambert_w(0, 1.0) - OMEGA) < 1e-12
        assert abs(bisection_w(0, 1.0) - OMEGA) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainViolation):
            lambert_w(0, -1.0)
        with pytest.raises(DomainViolation):
            lambert_w(-1, 0.5)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-INV_E + 1e-12, 1e6))
    def test_w0_against_bisection(self, x):
        assert lambert_w(0, x) == pytest.approx(bisection_w(0, x), rel=1e-9, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-INV_E + 1e-12, -1e-200))
    def test_wm1_residual(self, x):
        w = lambert_w(-1, x)
        assert w <= -1.0
        assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x))

    def test_array_matches_scipy(self):
        rng = np.random.default_rng(1)
        x = rng.uniform(-INV_E, 20.0, 2000)
        assert np.max(np.abs(lambert_w_array(0, x) - special.lambertw(x, 0).real)) < 1e-12
        xm = -np.exp(rng.uniform(-30, -1, 2000))
        assert np.max(np.abs(lambert_w_array(-1, xm) - special.lambertw(xm, -1).real)) < 1e-10

    def test_array_nan_outside_domain(self):
        out = lambert_w_array(-1, np.array([0.5, -0.1]))
        assert math.isnan(out[0]) and math.isfinite(out[1])


class TestRoots:
    def test_linear(self):
        assert find_root(lambda s: s - 1.0, Bracket(0.0, 2.0)) == pytest.approx(1.0, abs=1e-12)

    def test_characteristic_foot(self):
        assert find_root(lambda xi: xi + xi - 1.0, Bracket(0.0, 1.0)) == pytest.approx(0.5, abs=1e-12)

    def test_parametric_constraint_against_brentq(self):
        # a = 3/4 constraint of the parametric scaling solution at (1, 0.1)
        from dnsym.solutions import family

        f = family("case-1.6-param-3/4")
        from dnsym.symexpr import compile_expr, var

        g = compile_expr(f.constraint, (var("s"), var("z1"), var("z2")))
        fn = lambda s: float(g(s, 1.0, 0.1))  # noqa: E731
        (b,) = scan_brackets(fn, *f.s_range, f.s_cells)
        s = find_root(fn, b)
        assert abs(fn(s)) < 1e-10
        assert s == pytest.approx(optimize.brentq(fn, b.lo, b.hi, xtol=1e-14), abs=1e-10)

    def test_scan_counts_sign_changes(self):
        assert len(scan_brackets(math.sin, 0.5, 10.0, 200)) == 3


class TestQuadrature:
    def test_constant(self):
        assert integrate_1d(lambda t: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_identity(self):
        assert integrate_1d(lambda t: t, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_admissibility_integrand(self):
        f = lambda t: 2.0 * (1.0 - math.exp(-3.0 * t))  # noqa: E731
        exact = 2.0 + 2.0 / 3.0 * (math.exp(-3.0) - 1.0)
        assert integrate_1d(f, 0.0, 1.0) == pytest.approx(exact, abs=1e-10)
        assert integrate.quad(f, 0.0, 1.0, epsabs=1e-13)[0] == pytest.approx(exact, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-2.0, 2.0), st.floats(0.1, 3.0))
    def test_against_scipy(self, a, length):
        f = lambda t: math.exp(math.sin(t)) / (1.0 + t * t)  # noqa: E731
        ours = integrate_1d(f, a, a + length)
        ref = integrate.quad(f, a, a + length, epsabs=1e-13, epsrel=1e-13)[0]
        assert ours == pytest.approx(ref, abs=1e-9)


class TestFiniteDifferences:
    def test_first(self):
        assert float(fd_partial(lambda z: z * z, (1.0,), (1,))) == pytest.approx(2.0, abs=1e-9)

    def test_third(self):
        assert float(fd_partial(lambda z: z**3, (0.7,), (3,), step=1e-2)) == pytest.approx(6.0, abs=1e-6)

    def test_mixed(self):
        v = fd_partial(lambda t, x, y: t * x * y, (0.3, -0.4, 0.8), (1, 1, 1), step=1e-2)
        assert float(v) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    @pytest.mark.parametrize("accuracy", [2, 4, 6])
    def test_weights_annihilate_low_powers(self, order, accuracy):
        w = central_weights(order, accuracy)
        for p in range(order + accuracy):
            moment = sum(c * k**p for k, c in w)
            expected = math.factorial(order) if p == order else 0
            assert moment == expected

    def test_rejects_odd_accuracy(self):
        with pytest.raises(ValueError):
            fd_partial(math.sin, (0.0,), (1,), accuracy=3)


class TestCharacteristics:
    def test_linear_data(self):
        assert moc_burgers(lambda xi: xi, 0.5, 1.2) == pytest.approx(1.2 / 1.5, abs=1e-12)

    def test_constant_data(self):
        assert moc_burgers(lambda xi: 3.0, 0.5, 0.2) == pytest.approx(3.0)

    def test_no_foot(self):
        with pytest.raises(BracketError):
            moc_burgers(lambda xi: 0.0, 1.0, 50.0)

    def test_array_matches_scalar(self):
        h0 = np.arctan
        dh0 = lambda x: 1.0 / (1.0 + x * x)  # noqa: E731
        z1 = np.linspace(0.0, 0.9, 7)
        z2 = np.linspace(-1.0, 1.0, 7)
        arr = moc_burgers_array(h0, dh0, z1, z2)
        ref = [moc_burgers(math.atan, a, b) for a, b in zip(z1, z2)]
        assert np.max(np.abs(arr - ref)) < 1e-12

    def test_shock_gives_nan(self):
        h0 = lambda x: -np.asarray(x)  # noqa: E731
        dh0 = lambda x: -np.ones_like(np.asarray(x, dtype=float))  # noqa: E731
        assert math.isnan(float(moc_burgers_array(h0, dh0, 2.0, 0.1)))
