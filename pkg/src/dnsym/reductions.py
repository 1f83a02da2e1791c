"""One-dimensional subalgebras, Lie reductions of the inviscid Burgers
equation and the ansatz that maps the full equation to the reduced one.

Reduction rows are checked by substituting the ansatz into h1 + h h2 and
dividing by the reduced-equation residual; the quotient must be free of the
new unknown and its derivative.  Rows with |z1| are evaluated on the chart
z1 > 0 unless ``negative_chart`` is requested.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable

import numpy as np
import sympy as sp

from dnsym.jetspace import check_lie_symmetry
from dnsym.liealgebra import catalog, upsilon
from dnsym.numerics import integrate_1d, working_dtype
from dnsym.report import CheckResult
from dnsym.symexpr import (
    Expr,
    ProbeConfig,
    Verdict,
    ZeroResult,
    compile_expr,
    is_zero,
    jet,
    normalize,
    opaque,
    parse_expr,
    to_text,
    var,
)
from dnsym.vectorfield import VectorField

Z1, Z2, T = var("z1"), var("z2"), var("t")
H = jet("h", 0, 0)
PHI, PHI_W, OMEGA = var("phi"), var("phi_w"), var("omega")
A = var("a")


class ReductionError(ValueError):
    pass


class AdmissibilityError(ValueError):
    pass


@lru_cache(maxsize=None)
def _raw() -> dict:
    text = resources.files("dnsym").joinpath("data/reductions.json").read_text(encoding="utf-8")
    return json.loads(text)


def _combination(cat_id: str, terms, params: dict | None = None) -> VectorField:
    cat = catalog(cat_id)
    total = VectorField.zero(cat.space)
    for name, coeff in terms:
        g = cat.gen(name)
        value = parse_expr(coeff).xreplace(params or {})
        total = total + (g.field(value) if g.slot else g.field().scale(value))
    return total.normalized()


# ---------------------------------------------------------------------------
# Subalgebras


@dataclass(frozen=True)
class SubalgebraSpec:
    name: str
    generator: VectorField
    parameter: Expr | None = None
    note: str = ""

    def induced(self) -> VectorField:
        """Image on (z1, z2, h) under the substitution w_22 = h."""
        return upsilon(self.generator)


def subalgebra(name: str, a: Expr | float | None = None) -> SubalgebraSpec:
    for rec in _raw()["subalgebras"]:
        if rec["name"] == name:
            params = {}
            if "parameter" in rec:
                if a is None:
                    a = A
                params[A] = sp.sympify(a)
            return SubalgebraSpec(name, _combination("a13", rec["terms"], params), params.get(A), rec.get("note", ""))
    raise KeyError(f"unknown subalgebra {name!r}")


def subalgebra_names() -> list[str]:
    return [rec["name"] for rec in _raw()["subalgebras"]]


# ---------------------------------------------------------------------------
# Table rows


@dataclass(frozen=True)
class AnsatzRow:
    name: str
    generator: VectorField
    ansatz: Expr
    omega: Expr
    reduced: Expr

    def h_ansatz(self, phi: Callable = None) -> Expr:
        """Ansatz with the unknown applied to the invariant."""
        fn = phi or opaque("phi")
        return self.ansatz.xreplace({PHI: fn(self.omega)})


def rows() -> list[AnsatzRow]:
    out = []
    for rec in _raw()["rows"]:
        out.append(
            AnsatzRow(
                rec["name"],
                _combination("a13check", rec["basis"]),
                parse_expr(rec["ansatz"]),
                parse_expr(rec["omega"]),
                parse_expr(rec["reduced"]),
            )
        )
    return out


def row(name: str) -> AnsatzRow:
    for r in rows():
        if r.name == name:
            return r
    raise KeyError(f"unknown reduction row {name!r}")


def _chart(e: Expr, negative: bool) -> tuple[Expr, sp.Symbol]:
    zp = sp.Symbol("z1_chart", positive=True)
    return e.xreplace({Z1: -zp if negative else zp}), zp


@dataclass(frozen=True)
class ReductionResult:
    verdict: ZeroResult
    factor: Expr | None
    detail: str = ""


def symbolic_reduce(r: AnsatzRow, negative_chart: bool = False, config: ProbeConfig | None = None) -> ReductionResult:
    """Substitute the ansatz into h1 + h h2 and return the nonvanishing
    factor relating it to the tabulated reduced equation.

    The factor is the ratio of one coefficient of the two sides as
    polynomials in (phi, phi_w); the full identity is then checked by the
    zero oracle.
    """
    phi = opaque("phi")
    h = r.h_ansatz(phi)
    lhs = sp.diff(h, Z1) + h * sp.diff(h, Z2)
    lhs = lhs.xreplace({opaque("phi", 1)(r.omega): PHI_W, phi(r.omega): PHI})
    if any(getattr(a, "opaque_name", "") == "phi" for a in lhs.atoms(sp.Function)):
        raise ReductionError(f"row {r.name}: ansatz does not close in (omega, phi, phi_w)")
    reduced = r.reduced.xreplace({OMEGA: r.omega})
    lhs_c, zp = _chart(sp.expand(lhs), negative_chart)
    red_c, _ = _chart(sp.expand(reduced), negative_chart)
    red_poly = sp.Poly(red_c, PHI, PHI_W)
    lhs_poly = sp.Poly(lhs_c, PHI, PHI_W)
    monomial, c_red = red_poly.terms()[0]
    factor = sp.simplify(lhs_poly.coeff_monomial(monomial) / c_red)
    identity = is_zero(lhs_c - factor * red_c, config)
    if not identity.verdict.holds:
        return ReductionResult(identity, None, f"row {r.name}: substituted ansatz is not a multiple of the reduced equation")
    if is_zero(factor, config).verdict.holds:
        return ReductionResult(ZeroResult(Verdict.NONZERO), None, f"row {r.name}: vanishing factor")
    back = factor.xreplace({zp: -Z1 if negative_chart else Z1})
    return ReductionResult(identity, back)


def invariance_check(r: AnsatzRow, spec: VectorField | None = None, negative_chart: bool = False, config: ProbeConfig | None = None) -> ZeroResult:
    """Generator annihilates the invariant and (h - ansatz) on h = ansatz."""
    X = spec or r.generator
    phi = opaque("phi")
    h_ans = r.h_ansatz(phi)
    on_omega = X.apply(r.omega)
    on_h = X.apply(H - h_ans).xreplace({H: h_ans})
    worst, verdicts = 0.0, []
    for e in (on_omega, on_h):
        e_c, _ = _chart(e, negative_chart)
        res = is_zero(sp.simplify(e_c), config)
        worst = max(worst, res.max_probe_error)
        verdicts.append(res.verdict)
    if any(v is Verdict.NONZERO for v in verdicts):
        return ZeroResult(Verdict.NONZERO, worst)
    if all(v is Verdict.ZERO for v in verdicts):
        return ZeroResult(Verdict.ZERO, worst)
    return ZeroResult(Verdict.PROBABLY_ZERO, worst)


def verify_table(config: ProbeConfig | None = None) -> list[CheckResult]:
    locus = _raw()["locus"]
    out = []
    for r in rows():
        start = time.perf_counter()
        try:
            res = symbolic_reduce(r, config=config)
            ok = res.verdict.verdict.holds
            detail = f"factor {to_text(res.factor)}" if res.factor is not None else res.detail
            out.append(CheckResult.make(f"table1.{r.name}.reduce", locus, ok, res.verdict, (time.perf_counter() - start) * 1000, detail))
        except Exception as exc:  # noqa: BLE001
            out.append(CheckResult.failure(f"table1.{r.name}.reduce", locus, exc))
        start = time.perf_counter()
        try:
            v = invariance_check(r, config=config)
            out.append(CheckResult.make(f"table1.{r.name}.invariance", locus, v.verdict.holds, v, (time.perf_counter() - start) * 1000))
        except Exception as exc:  # noqa: BLE001
            out.append(CheckResult.failure(f"table1.{r.name}.invariance", locus, exc))
    return out


def verify_subalgebras(config: ProbeConfig | None = None) -> list[CheckResult]:
    """Each listed subalgebra is spanned by a symmetry, and its induced image
    is the basis of the matching table row."""
    locus = "one-dimensional subalgebras appropriate for Lie reduction"
    out = []
    by_row = {r.name: r for r in rows()}
    for name in subalgebra_names():
        start = time.perf_counter()
        spec = subalgebra(name)
        res, _ = check_lie_symmetry(spec.generator, "redEq13", config)
        rname = name[1:]
        ok = res.verdict.holds
        if rname in by_row and rname != "1.0":
            ok = ok and (spec.induced() - by_row[rname].generator).is_zero(config).verdict.holds
        out.append(CheckResult.make(f"subalgebra.{name}", locus, ok, res, (time.perf_counter() - start) * 1000))
    return out


# ---------------------------------------------------------------------------
# Ansatz for the full equation


@dataclass(frozen=True)
class DNAnsatz:
    """u = w(z1, z2) - rho_t/(6 rho) y^3 with z1 = 2 int (1 - rho^-3) dt and
    z2 = y/rho - x; the antiderivative is normalized by z1(t0) = 0."""

    rho: Expr
    t0: float = 0.0
    antiderivative: Expr | None = None
    quad_tol: float = 1e-10
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def is_constant(self) -> bool:
        return T not in self.rho.free_symbols

    def rho_fn(self):
        return _cached(self, "rho", lambda: compile_expr(self.rho, (T,)))

    def cubic_coefficient(self):
        """rho_t/(6 rho) as a vectorized function of t."""
        return _cached(self, "cubic", lambda: compile_expr(normalize(sp.diff(self.rho, T) / (6 * self.rho)), (T,)))

    def z1(self, t):
        if self.antiderivative is not None:
            f = _cached(self, "F", lambda: compile_expr(self.antiderivative, (T,)))
            return f(t) - f(self.t0)
        integrand = _cached(self, "integrand", lambda: compile_expr(2 * (1 - self.rho**-3), (T,)))
        fn = lambda s: float(integrand(s))  # noqa: E731
        t_arr = np.asarray(t, dtype=float)
        vals = [integrate_1d(fn, self.t0, float(v), self.quad_tol) for v in t_arr.reshape(-1)]
        return np.asarray(vals, dtype=float).reshape(t_arr.shape)

    def z2(self, t, x, y):
        dt = working_dtype(t, x, y)
        return np.asarray(y, dtype=dt) / self.rho_fn()(np.asarray(t, dtype=dt)) - np.asarray(x, dtype=dt)

    def jacobian_factor(self, t):
        """The full-equation residual equals this times the reduced residual."""
        r = self.rho_fn()(t)
        return 2.0 * (1.0 - r**3) / r**4

    def assemble(self, w: Callable) -> Callable:
        """u(t, x, y) from a reduced-equation evaluator w(z1, z2)."""

        def u(t, x, y):
            dt = working_dtype(t, x, y)
            t = np.asarray(t, dtype=dt)
            return w(self.z1(t), self.z2(t, x, y)) - self.cubic_coefficient()(t) * np.asarray(y, dtype=dt) ** 3

        return u


def _cached(obj: DNAnsatz, key: str, make):
    if key not in obj._cache:
        obj._cache[key] = make()
    return obj._cache[key]


def antiderivative_table() -> dict[str, Expr]:
    return {to_text(parse_expr(rec["rho"])): parse_expr(rec["z1"]) for rec in _raw()["rho"]}


def build_dN_ansatz(rho: Expr | str, t0: float = 0.0, window: tuple[float, float] | None = None, quad_tol: float = 1e-10, use_table: bool = True) -> DNAnsatz:
    rho = parse_expr(rho) if isinstance(rho, str) else sp.sympify(rho)
    extra = rho.free_symbols - {T}
    if extra:
        raise AdmissibilityError(f"rho depends on {sorted(map(str, extra))}")
    if normalize(rho - 1) == 0:
        raise AdmissibilityError("rho identically 1 is excluded")
    if rho.free_symbols == set():
        if normalize(rho) == 0:
            raise AdmissibilityError("rho vanishes")
        c = sp.nsimplify(rho)
        return DNAnsatz(rho, t0, 2 * (1 - c**-3) * T, quad_tol)
    lo, hi = window if window is not None else (t0 - 1.0, t0 + 1.0)
    ts = np.linspace(lo, hi, 2001)
    vals = compile_expr(rho, (T,))(ts)
    if not np.all(np.isfinite(vals)) or np.any(vals == 0) or np.any(np.sign(vals) != np.sign(vals[0])):
        raise AdmissibilityError("rho vanishes or is undefined on the window")
    if np.all(np.abs(vals - 1.0) < 1e-14):
        raise AdmissibilityError("rho identically 1 on the window")
    table = antiderivative_table() if use_table else {}
    return DNAnsatz(rho, t0, table.get(to_text(rho)), quad_tol)


def describe_rows() -> list[tuple[str, str]]:
    out = [(f"table1.{r.name}", f"h = {to_text(r.ansatz)}, omega = {to_text(r.omega)}") for r in rows()]
    out += [(s, "subalgebra of the reduced-equation algebra") for s in subalgebra_names()]
    return out


__all__ = [
    "AdmissibilityError",
    "AnsatzRow",
    "DNAnsatz",
    "ReductionError",
    "ReductionResult",
    "SubalgebraSpec",
    "build_dN_ansatz",
    "invariance_check",
    "row",
    "rows",
    "subalgebra",
    "subalgebra_names",
    "symbolic_reduce",
    "verify_subalgebras",
    "verify_table",
]
