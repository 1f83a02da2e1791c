"""z2-integrals, generalized symmetries, cosymmetries, conserved currents and
conservation-law characteristics of the reduced equation w_12 + w_02 w_03 = 0
and of the intermediate equation q_11 + q_01 q_02 = 0.

Expressions live in the charts of :mod:`dnsym.jetspace`: the integral chart
(z1, z2, jets, zeta[i,k]) or the theta chart (jets, theta[k], zeta[i,k]).
Characteristics of conserved currents are extracted by rewriting the free
divergence in coordinates adapted to the equation (the jets
Lambda[k,m] = D1^k D2^m L replace the principal jets) and integrating the
part linear in Lambda by parts; see :func:`characteristic_of`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from dnsym import jetspace as js
from dnsym.jetspace import ChartedModel, charted, hatted_D, theta, zeta
from dnsym.report import CheckResult
from dnsym.symexpr import (
    Expr,
    ProbeConfig,
    Verdict,
    ZeroResult,
    compile_expr,
    indexed_symbols,
    is_zero,
    jet,
    normalize,
    parse_expr,
    parse_indexed,
    var,
)

__all__ = [
    "ZetaCoord",
    "ThetaCoord",
    "ConservedCurrent",
    "CharOrCosym",
    "TrivialityResult",
    "verify_integral",
    "gen_sym_condition",
    "cosym_condition",
    "verify_gen_sym_char",
    "verify_cosymmetry",
    "verify_conserved_current",
    "euler_operator",
    "characteristic_of",
    "verify_characteristic_pairing",
    "euler_pairing_identity",
    "trivial_current_check",
    "induced_char_map",
    "burgers_R",
    "intermediate_suite",
    "verify_conslaws",
]

Z1, Z2 = var("z1"), var("z2")


class ConsLawError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Coordinates


@dataclass(frozen=True)
class ZetaCoord:
    """zeta^{ik} = D1^k I^i as a chart symbol with its raw-jet form."""

    i: int
    k: int
    model: str = "redEq13"

    @property
    def symbol(self) -> sp.Symbol:
        return zeta(self.i, self.k)

    @property
    def raw(self) -> Expr:
        cm = charted(self.model)
        return js.total_derivative_multi(js.integral_expr(cm, self.i), (self.k, 0), cm.m)


@dataclass(frozen=True)
class ThetaCoord:
    """theta^k = ((v01/v11) D^_2)^k (z2 - v01 z1) for the top jet v of the model."""

    k: int
    model: str = "redEq13"

    @property
    def symbol(self) -> sp.Symbol:
        return theta(self.k)

    @property
    def integral_form(self) -> Expr:
        return js.theta_in_integral_chart(self.k, self.model)


@dataclass(frozen=True)
class ConservedCurrent:
    F1: Expr
    F2: Expr
    tag: str = ""
    model: str = "redEq13"


@dataclass(frozen=True)
class CharOrCosym:
    f: Expr
    role: str  # symmetry | cosymmetry | characteristic
    tag: str = ""
    model: str = "redEq13"


# ---------------------------------------------------------------------------
# Chart helpers


def _is_chart_jet(cm: ChartedModel, k: int, l: int) -> bool:
    if l == cm.top or (k, l) == (0, 0):
        return True
    return cm.dep == "w" and (k, l) in ((1, 0), (0, 1))


def to_chart(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    """Chart form of ``e``; raw jets outside the chart are reduced on shell."""
    cm = charted(m)
    e = parse_expr(e) if isinstance(e, str) else sp.sympify(e)
    jets = indexed_symbols(e, cm.dep)
    if any(not _is_chart_jet(cm, k, l) for k, l in jets.values()):
        return js.raw_to_integral_chart(e, cm)
    return e


def D1(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    return normalize(hatted_D(e, 1, m))


def D2(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    return normalize(hatted_D(e, 2, m))


def _A(e: Expr, cm: ChartedModel) -> Expr:
    """(D^_1 + v D^_2) e with v = w_02 or q_01."""
    return normalize(D1(e, cm) + cm.v(0, cm.top) * D2(e, cm))


def _theta_ops_chart(e: Expr, cm: ChartedModel) -> Expr:
    # D^ on a mix of theta and integral-only jets needs the integral chart
    try:
        js.detect_chart(e, cm)
        return e
    except js.ChartError:
        return js.to_integral_chart(e, cm)


def _prep(e: Expr | str, cm: ChartedModel) -> Expr:
    """Chart form used by the determining conditions: the theta chart when
    the expression fits it (much smaller rational functions), else the
    integral chart; normalized either way."""
    e = to_chart(e, cm)
    try:
        return normalize(js.to_theta_chart(e, cm))
    except js.ChartError:
        return normalize(js.to_integral_chart(e, cm))


def _zero(e: Expr, config: ProbeConfig | None) -> ZeroResult:
    return is_zero(e, config or ProbeConfig())


# ---------------------------------------------------------------------------
# Determining conditions


def verify_integral(e: Expr | str, m: str = "redEq13", config: ProbeConfig | None = None) -> ZeroResult:
    """z2-integral test.  Raw input is differentiated with the free D2 and
    reduced on shell, so the chart's own construction is not assumed."""
    cm = charted(m)
    e = parse_expr(e) if isinstance(e, str) else sp.sympify(e)
    chart_syms = any((p := parse_indexed(s)) is not None and p[0] in ("zeta", "theta") for s in e.free_symbols)
    if chart_syms:
        return _zero(D2(_theta_ops_chart(e, cm), cm), config)
    return _zero(js.on_shell_reduce(js.total_derivative(e, 1, cm.m), cm.m), config)


def gen_sym_condition(f: Expr | str, m: str = "redEq13") -> Expr:
    """D^_2 (D^_1 + v D^_2) D^_2 f for the reduced equation; the intermediate
    equation is self-adjoint and uses D^_2 (D^_1 + v D^_2) f."""
    cm = charted(m)
    f = _prep(f, cm)
    if cm.dep == "q":
        return D2(_A(f, cm), cm)
    return D2(_A(D2(f, cm), cm), cm)


def cosym_condition(f: Expr | str, m: str = "redEq13") -> Expr:
    """-D^_2^2 (D^_1 + v D^_2) f, the formal adjoint of the invariance condition."""
    cm = charted(m)
    f = _prep(f, cm)
    if cm.dep == "q":
        return D2(_A(f, cm), cm)
    return -D2(D2(_A(f, cm), cm), cm)


def verify_gen_sym_char(f: Expr | str, m: str = "redEq13", config: ProbeConfig | None = None) -> ZeroResult:
    return _zero(gen_sym_condition(f, m), config)


def verify_cosymmetry(f: Expr | str, m: str = "redEq13", config: ProbeConfig | None = None) -> ZeroResult:
    return _zero(cosym_condition(f, m), config)


def verify_conserved_current(F1: Expr | str, F2: Expr | str, m: str = "redEq13", config: ProbeConfig | None = None) -> ZeroResult:
    cm = charted(m)
    a, b = _prep(F1, cm), _prep(F2, cm)
    if _chart_of(a, cm) != _chart_of(b, cm):
        a, b = js.to_integral_chart(a, cm), js.to_integral_chart(b, cm)
    return _zero(D1(a, cm) + D2(b, cm), config)


def _chart_of(e: Expr, cm: ChartedModel) -> str:
    return js.detect_chart(e, cm)


# ---------------------------------------------------------------------------
# Euler operator and characteristics


def euler_operator(L: Expr | str, m: str = "intermediate") -> Expr:
    """Sum over jets u_J of (-D)^J dL/du_J with free total derivatives."""
    mod = js.model(m)
    L = parse_expr(L) if isinstance(L, str) else sp.sympify(L)
    out = sp.Integer(0)
    for sym, idx in mod.jets(L).items():
        term = sp.diff(L, sym)
        term = js.total_derivative_multi(term, idx, mod)
        out += (-1) ** sum(idx) * term
    return sp.expand(out)


def _lam(k: int, m: int) -> sp.Symbol:
    return jet("Lambda", k, m)


def _equation_lhs(cm: ChartedModel) -> Expr:
    return cm.v(1, cm.top) + cm.v(0, cm.top) * cm.v(0, cm.top + 1)


@lru_cache(maxsize=None)
def _principal_in_lambda(model_id: str, k: int, m: int) -> Expr:
    """Principal jet v[k, top+1+m] written through Lambda[k', m'] and parametric jets."""
    cm = charted(model_id)
    a = cm.v(0, cm.top)
    target = cm.v(k, cm.top + 1 + m)
    full = sp.expand(js.total_derivative_multi(_equation_lhs(cm), (k, m), cm.m))
    rest = sp.expand(full - a * target)
    if rest.has(a * target):
        raise ConsLawError("principal jet did not separate")
    return (_lam(k, m) - _replace_principal(rest, cm)) / a


def _replace_principal(e: Expr, cm: ChartedModel) -> Expr:
    subs = {}
    for sym, (k, l) in indexed_symbols(e, cm.dep).items():
        if l > cm.top:
            subs[sym] = _principal_in_lambda(cm.model_id, k, l - cm.top - 1)
    return e.xreplace(subs) if subs else e


def _raw(e: Expr, cm: ChartedModel) -> Expr:
    return js.lift(_theta_ops_chart(e, cm), cm)


def divergence_in_lambda(F1: Expr | str, F2: Expr | str, m: str = "redEq13") -> Expr:
    """Free divergence of the raw lift of (F1, F2) in the adapted coordinates."""
    cm = charted(m)
    a, b = _raw(_prep(F1, cm), cm), _raw(_prep(F2, cm), cm)
    div = js.total_derivative(a, 0, cm.m) + js.total_derivative(b, 1, cm.m)
    return _replace_principal(div, cm)


def characteristic_of(F1: Expr | str, F2: Expr | str, m: str = "redEq13") -> Expr:
    """Conservation-law characteristic of (F1, F2) in the integral chart,
    determined up to the trivial (on-shell vanishing) ones."""
    cm = charted(m)
    P = divergence_in_lambda(F1, F2, m)
    lams = sorted(
        (s for s in P.free_symbols if (p := parse_indexed(s)) is not None and p[0] == "Lambda"),
        key=lambda s: parse_indexed(s)[1],
    )
    at_shell = {s: 0 for s in lams}
    out = sp.Integer(0)
    for s in lams:
        k, mm = parse_indexed(s)[1]
        q = js.raw_to_integral_chart(sp.diff(P, s).xreplace(at_shell), cm)
        for _ in range(k):
            q = -hatted_D(q, 1, cm, chart="integral")
        for _ in range(mm):
            q = -hatted_D(q, 2, cm, chart="integral")
        out += q
    return out


def verify_characteristic_pairing(
    lam: Expr | str,
    F: ConservedCurrent | tuple,
    m: str = "redEq13",
    config: ProbeConfig | None = None,
) -> ZeroResult:
    """Extracted characteristic of F minus ``lam`` vanishes on shell."""
    F1, F2 = (F.F1, F.F2) if isinstance(F, ConservedCurrent) else F
    cm = charted(m)
    claimed = js.to_integral_chart(_prep(lam, cm), cm)
    return _zero(characteristic_of(F1, F2, m) - claimed, config)


def euler_pairing_identity(lam: Expr | str, F: ConservedCurrent | tuple, m: str = "redEq13") -> Expr:
    """E(D1 F1 + D2 F2 - lam L) with free total derivatives on raw lifts.

    Zero identically only for matching off-shell representatives; the
    extraction in :func:`verify_characteristic_pairing` has no such caveat.
    """
    F1, F2 = (F.F1, F.F2) if isinstance(F, ConservedCurrent) else F
    cm = charted(m)
    a, b = _raw(_prep(F1, cm), cm), _raw(_prep(F2, cm), cm)
    lam_raw = _raw(_prep(lam, cm), cm)
    div = js.total_derivative(a, 0, cm.m) + js.total_derivative(b, 1, cm.m)
    return normalize(euler_operator(div - lam_raw * _equation_lhs(cm), cm.model_id))


# ---------------------------------------------------------------------------
# Trivial currents


@dataclass(frozen=True)
class TrivialityResult:
    trivial: bool
    characteristic: Expr
    verdict: ZeroResult
    template: dict | None  # recovered c's and slot functions, or None

    def __bool__(self) -> bool:
        return self.trivial


def trivial_template(
    rho_hat: Expr | str,
    alpha_hat: Expr | str,
    c: Sequence[float | Expr],
    m: str = "redEq13",
    form: str = "printed",
) -> tuple[Expr, Expr]:
    """Trivial-current template built from the slot functions and constants.

    ``form="printed"`` multiplies the constant terms by an extra factor v
    (w_02 or q_01); those terms then have characteristic c0 (1 - v) + ... and
    are not trivial.  ``form="corrected"`` drops the factor: the constant
    terms are then exactly the rho-current of -c0 theta0 + c1 v theta0
    - c2 theta0^2 / 2, whose Euler characteristic cancels the alpha part.
    """
    if form not in ("printed", "corrected"):
        raise ValueError(f"unknown template form {form!r}")
    cm = charted(m)
    v0, v1 = cm.v(0, cm.top), cm.v(1, cm.top)
    weight = v1 if form == "printed" else v1 / v0
    rho_hat = _prep(rho_hat, cm)
    alpha_hat = _prep(alpha_hat, cm)
    d2r = D2(rho_hat, cm)
    d1a = D1(alpha_hat, cm)
    c = [sp.sympify(x) for x in c]
    if cm.dep == "w":
        c0, c1, c2 = (list(c) + [0, 0, 0])[:3]
        mix = (-c0 + c1 * v0 - c2 * theta(0) / 2) * weight * theta(0)
        F1 = d2r + mix
        F2 = v0 * d2r + v0 * mix + d1a + c0 * zeta(1, 0) + (c2 * Z1 + c1) * zeta(2, 0)
    else:
        c0 = (list(c) + [0])[0]
        mix = -c0 * weight * theta(0)
        F1 = d2r + mix
        F2 = v0 * d2r + v0 * mix + d1a + c0 * zeta(1, 0)
    return F1, F2


def _template_basis(cm: ChartedModel) -> tuple[list[Expr], list[Expr]]:
    v0 = cm.v(0, cm.top)
    rho_vars = [v0, theta(0), theta(1)]
    alpha_vars = [Z1, zeta(1, 0), zeta(1, 1)] + ([zeta(2, 0)] if 2 in cm.integrals else [])
    rho = [x for x in _monomials(rho_vars, 2)]
    alpha = [x for x in _monomials(alpha_vars, 2)]
    return rho, alpha


def _monomials(xs: list[sp.Symbol], degree: int) -> list[Expr]:
    out = []
    for d in range(1, degree + 1):
        out += sorted(sp.itermonomials(xs, d, d), key=sp.default_sort_key)
    return out


def _match_template(F1: Expr, F2: Expr, cm: ChartedModel, seed: int = 0, form: str = "corrected") -> dict | None:
    """Least-squares match of (F1, F2) against the trivial template over
    polynomial slot bases; None when the residual is not at round-off."""
    rho_b, alpha_b = _template_basis(cm)
    nc = 3 if cm.dep == "w" else 1
    columns: list[tuple[Expr, Expr]] = []
    labels: list[tuple[str, Expr | int]] = []
    for i in range(nc):
        c = [0] * nc
        c[i] = 1
        columns.append(trivial_template(0, 0, c, cm.model_id, form))
        labels.append(("c", i))
    for r in rho_b:
        columns.append(trivial_template(r, 0, [0] * nc, cm.model_id, form))
        labels.append(("rho_hat", r))
    for a in alpha_b:
        columns.append(trivial_template(0, a, [0] * nc, cm.model_id, form))
        labels.append(("alpha_hat", a))
    target = (js.to_integral_chart(F1, cm), js.to_integral_chart(F2, cm))
    cols = [(js.to_integral_chart(a, cm), js.to_integral_chart(b, cm)) for a, b in columns]
    coords = js.integral_chart_coordinates(cm, 4)
    rng = np.random.default_rng(seed)
    n = 3 * len(cols)
    pts = [rng.uniform(0.3, 1.7, n) for _ in coords]

    def ev(e: Expr) -> np.ndarray:
        return np.broadcast_to(np.asarray(compile_expr(e, tuple(coords))(*pts), dtype=float), (n,))

    A = np.vstack([np.concatenate([ev(a), ev(b)]) for a, b in cols]).T
    y = np.concatenate([ev(target[0]), ev(target[1])])
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        return None
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.max(np.abs(A @ sol - y))) / max(1.0, float(np.max(np.abs(y))))
    if resid > 1e-8:
        return None
    rho_hat, alpha_hat, cs = sp.Integer(0), sp.Integer(0), [0.0] * nc
    for (kind, item), x in zip(labels, sol):
        x = sp.nsimplify(round(float(x), 9), rational=True)
        if kind == "c":
            cs[item] = x
        elif kind == "rho_hat":
            rho_hat += x * item
        else:
            alpha_hat += x * item
    return {"c": cs, "rho_hat": rho_hat, "alpha_hat": alpha_hat, "residual": resid}


def trivial_current_check(F: ConservedCurrent | tuple, m: str = "redEq13", config: ProbeConfig | None = None) -> TrivialityResult:
    """Trivial iff the extracted characteristic vanishes on shell; the
    template match is reported alongside as an independent witness."""
    F1, F2 = (F.F1, F.F2) if isinstance(F, ConservedCurrent) else F
    cm = charted(m)
    a, b = _prep(F1, cm), _prep(F2, cm)
    lam = characteristic_of(a, b, m)
    verdict = _zero(lam, config)
    template = _match_template(a, b, cm) if verdict.verdict is not Verdict.NONZERO else None
    return TrivialityResult(verdict.verdict is not Verdict.NONZERO, lam, verdict, template)


# ---------------------------------------------------------------------------
# Induced characteristics of the inviscid Burgers equation

H = jet("h", 0, 0)
H1 = jet("h", 1, 0)


def theta_check(k: int) -> sp.Symbol:
    return jet("thetab", k)


def _thetab_index(s: sp.Symbol) -> int | None:
    p = parse_indexed(s)
    return p[1][0] if p is not None and p[0] == "thetab" else None


def burgers_R(e: Expr) -> Expr:
    """R = -d/dh + thetab[k+1] d/dthetab[k] on functions of h and thetab."""
    e = sp.sympify(e)
    out = -sp.diff(e, H)
    for s in e.free_symbols:
        k = _thetab_index(s)
        if k is not None:
            out += theta_check(k + 1) * sp.diff(e, s)
    return out


def induced_char_map(f: Expr | str, m: str = "redEq13") -> Expr:
    """varrho-check with D^_2^2 f = h_2 varrho-check after w_02 -> h.

    On the Burgers solution manifold h_2 = -h_1 / h, so the factor is
    -h D^_2^2 f / h_1 in the coordinates (h, h_1, thetab[k]).
    """
    cm = charted(m)
    g = normalize(D2(D2(js.to_theta_chart(_prep(f, cm), cm), cm), cm))
    if g == 0:
        return sp.Integer(0)
    allowed = {cm.v(0, cm.top), cm.v(1, cm.top)}
    extra = {s for s in g.free_symbols if s not in allowed and not ((p := parse_indexed(s)) and p[0] == "theta")}
    if extra:
        g = normalize(g)
        extra = {s for s in g.free_symbols if s in extra}
        if extra:
            raise ConsLawError(f"second derivative depends on {sorted(map(str, extra))}; not a Burgers characteristic")
    subs = {cm.v(0, cm.top): H, cm.v(1, cm.top): H1}
    for s in g.free_symbols:
        p = parse_indexed(s)
        if p is not None and p[0] == "theta":
            subs[s] = theta_check(p[1][0])
    return normalize(-g.xreplace(subs) * H / H1)


# ---------------------------------------------------------------------------
# Catalogs

P = parse_expr

RHO_SAMPLES = {
    "redEq13": ("w[0,2]^2*theta[1]", "theta[0]*theta[1] + w[0,2]", "exp(theta[1])*w[0,2]"),
    "intermediate": ("q[0,1]^2*theta[1]", "theta[0]*theta[1] + q[0,1]", "exp(theta[1])*q[0,1]"),
}
INTEGRAL_SAMPLES = {
    "redEq13": ("z1*zeta[1,0]^2", "zeta[2,1] + zeta[1,0]*zeta[2,0]", "sin(z1)*exp(zeta[1,1])"),
    "intermediate": ("z1*zeta[1,0]^2", "zeta[1,2] + zeta[1,0]*zeta[1,1]", "sin(z1)*exp(zeta[1,1])"),
}
# fully opaque slots: the identities are rational in these
RHO_OPAQUE = {"redEq13": "w[0,2]*rho(theta[1])", "intermediate": "q[0,1]*rho(theta[1])"}
INTEGRAL_OPAQUE = {"redEq13": "alpha(zeta[1,0])*zeta[2,0]", "intermediate": "alpha(zeta[1,0])*z1"}


def slot_samples(kind: str, m: str = "redEq13", with_opaque: bool = True) -> list[tuple[str, Expr]]:
    if kind == "rho":
        texts, op = RHO_SAMPLES[m], RHO_OPAQUE[m]
    elif kind == "integral":
        texts, op = INTEGRAL_SAMPLES[m], INTEGRAL_OPAQUE[m]
    else:
        raise KeyError(kind)
    out = [(f"s{i + 1}", P(t)) for i, t in enumerate(texts)]
    if with_opaque:
        out.append(("opaque", P(op)))
    return out


def _theta_syms(e: Expr) -> list[tuple[int, sp.Symbol]]:
    out = []
    for s in e.free_symbols:
        p = parse_indexed(s)
        if p is not None and p[0] == "theta":
            out.append((p[1][0], s))
    return sorted(out)


def R_operator(e: Expr, m: str = "redEq13") -> Expr:
    """R = -d/dv + theta[k+1] d/dtheta[k] on functions of v = w_02 (or q_01) and theta."""
    cm = charted(m)
    out = -sp.diff(e, cm.v(0, cm.top))
    for k, s in _theta_syms(e):
        out += theta(k + 1) * sp.diff(e, s)
    return out


def _zeta_syms(e: Expr, i: int) -> list[tuple[int, sp.Symbol]]:
    out = []
    for s in e.free_symbols:
        p = parse_indexed(s)
        if p is not None and p[0] == "zeta" and p[1][0] == i:
            out.append((p[1][1], s))
    return sorted(out)


def char_of_rho(rho: Expr, m: str = "redEq13", sign: int | None = None) -> Expr:
    """sign * sum_k ((v/v_1) D^_2)^k d rho / d theta[k], the catalog form.

    The sign is -1 for the reduced equation and +1 for the intermediate one.
    Only terms with odd k agree with :func:`char_of_rho_euler`.
    """
    cm = charted(m)
    if sign is None:
        sign = -1 if cm.dep == "w" else 1
    return sign * _rho_series(rho, cm, alternate=False)


def char_of_rho_euler(rho: Expr, m: str = "redEq13") -> Expr:
    """sum_k (-(v/v_1) D^_2)^k d rho / d theta[k]; (v/v_1) D^_2 shifts theta[k] to
    theta[k+1], so this is the Euler operator of rho in the theta variables."""
    return _rho_series(rho, charted(m), alternate=True)


def _rho_series(rho: Expr, cm: ChartedModel, alternate: bool) -> Expr:
    v0, v1 = cm.v(0, cm.top), cm.v(1, cm.top)
    out = sp.Integer(0)
    for k, s in _theta_syms(rho):
        term = sp.diff(rho, s)
        for _ in range(k):
            term = v0 / v1 * D2(term, cm)
        out += (-1) ** k * term if alternate else term
    return out


def char_of_integral(alpha: Expr, m: str = "redEq13") -> Expr:
    """sum_k (-D1)^k alpha_{zeta1k} - (v - z2 D1)(-D1)^k alpha_{zeta2k}."""
    cm = charted(m)
    v0 = cm.v(0, cm.top)

    def minus_d1(e: Expr, k: int) -> Expr:
        for _ in range(k):
            e = -D1(e, cm)
        return e

    out = sp.Integer(0)
    for k, s in _zeta_syms(alpha, 1):
        out += minus_d1(sp.diff(alpha, s), k)
    for k, s in _zeta_syms(alpha, 2):
        g = minus_d1(sp.diff(alpha, s), k)
        out -= v0 * g - Z2 * D1(g, cm)
    return out


def gen_sym_family() -> list[tuple[str, Callable[[Expr | None], Expr], str | None]]:
    """(label, builder, slot kind) for the generalized-symmetry characteristics."""
    w02, w12 = P("w[0,2]"), P("w[1,2]")
    t0, t1, t2 = theta(0), theta(1), theta(2)

    def fixed(text: str):
        return lambda _slot: P(text)

    return [
        ("w10", fixed("w[1,0]"), None),
        ("z1w10+w00", fixed("z1*w[1,0] + w[0,0]"), None),
        ("projective", fixed("z1^2*w[1,0] + z1*z2*w[0,1] - z1*w[0,0] - z2^3/6"), None),
        ("w01", fixed("w[0,1]"), None),
        ("2z1w01-z2^2", fixed("2*z1*w[0,1] - z2^2"), None),
        ("z2w01-3w00", fixed("z2*w[0,1] - 3*w[0,0]"), None),
        ("beta", lambda s: s, "integral"),
        ("z2alpha", lambda s: Z2 * s, "integral"),
        ("rho-hat", lambda s: s - w02 / (w12 * t2) * R_operator(s), "rho"),
        ("theta-cubic", lambda _s: w02**3 * t1**2 / (2 * w12 * t2) + Z1**2 * w02**3 / 6 + Z1 * P("w[1,0]"), None),
        (
            "theta-quartic",
            lambda _s: sp.Rational(2, 3) * w02**4 * t1**2 / (w12 * t2) + Z1**2 * w02**4 / 6 + Z2 * P("w[1,0]") - Z2**2 * zeta(1, 0),
            None,
        ),
        (
            "theta-mixed",
            lambda _s: 2 * w02**3 * t1**2 * t0 / (w12 * t2)
            + sp.Rational(2, 3) * Z1**2 * w02**3 * t0
            + Z1**3 * w02**4 / 6
            + Z2 * P("w[0,0]")
            - Z2**2 * P("w[0,1]")
            - Z1 * Z2 * P("w[1,0]")
            + Z1 * Z2**2 * zeta(1, 0),
            None,
        ),
    ]


def induced_table() -> dict[str, Callable[[Expr | None], Expr]]:
    """Expected varrho-check for each generalized-symmetry family member."""
    R = burgers_R
    h, t0, t1, t2 = H, theta_check(0), theta_check(1), theta_check(2)

    def to_check(e: Expr) -> Expr:
        subs = {P("w[0,2]"): H}
        for k, s in _theta_syms(e):
            subs[s] = theta_check(k)
        return e.xreplace(subs)

    return {
        "w10": lambda _s: -h,
        "z1w10+w00": lambda _s: -h * t1,
        "projective": lambda _s: t0 * t1,
        "w01": lambda _s: sp.Integer(1),
        "2z1w01-z2^2": lambda _s: 2 * t1,
        "z2w01-3w00": lambda _s: t0 + h * t1,
        "beta": lambda _s: sp.Integer(0),
        "z2alpha": lambda _s: sp.Integer(0),
        "rho-hat": lambda s: R(R(R(to_check(s)) / t2)),
        "theta-cubic": lambda _s: -R(R(h**2 * t1**2 / (2 * t2))) - R(h**2 * t1 / 2),
        "theta-quartic": lambda _s: -R(R(h**3 * R(R(t0**2)) / (3 * t2))) - h**2 * t1 + 3 * h * t0,
        "theta-mixed": lambda _s: -R(R(h**2 * R(R(t0**3)) / (3 * t2))) - t0 * R(h * t0),
    }


def _cosym_B() -> Expr:
    return P("z1*(w[1,0] - z2*zeta[1,0]) + z2*w[0,1] - w[0,0] + z1^2*w[0,2]^3/12 - z2^2*w[0,2]/4")


def cosym_family() -> list[tuple[str, Callable[[Expr | None], Expr], str | None]]:
    w02 = P("w[0,2]")
    B = _cosym_B()
    A0 = P("w[0,1] - z1*w[0,2]^2/2")

    def fixed(e: Expr):
        return lambda _slot: e

    return [
        ("rho", lambda s: s, "rho"),
        ("alpha", lambda s: s, "integral"),
        ("gamma", lambda s: w02 * s - Z2 * D1(s), "integral"),
        ("a0", fixed(A0), None),
        ("a0-w02", fixed(A0 * w02 - Z2 * zeta(1, 0)), None),
        ("a0-theta0", fixed(A0 * theta(0) + Z1 * Z2 * zeta(1, 0)), None),
        ("b01", fixed(B), None),
        ("b00", fixed(P("w[1,0] - z2*zeta[1,0] + z1*w[0,2]^3/6")), None),
        ("b01-theta0", fixed(B * theta(0) + Z1**2 * Z2 * zeta(2, 0)), None),
        ("b01-w02", fixed(B * w02 - Z1 * Z2 * zeta(2, 0)), None),
        ("b10", fixed(P("z2*(w[1,0] - z2*zeta[1,0]) + (z2*w[0,1] - w[0,0])*w[0,2] - z2^2*w[0,2]^2/6")), None),
        ("b20", fixed(P("(w[1,0] - z2*zeta[1,0])*w[0,2] + z1*w[0,2]^4/6 - z2*zeta[2,0]")), None),
    ]


def current_family() -> list[tuple[str, Callable[[Expr | None], tuple[Expr, Expr]], str | None, Callable[[Expr | None], Expr]]]:
    """(label, current builder, slot kind, characteristic builder)."""
    w02, w12 = P("w[0,2]"), P("w[1,2]")
    F3 = (
        P("w[0,2]^5/(24*w[1,2]) + w[0,1]*w[0,2]^2/2"),
        P("w[0,2]^6/(24*w[1,2]) - z2*zeta[1,0]^2 + w[0,1]*w[0,2]^3/3 + w[1,0]*zeta[1,0]"),
    )
    F4 = (
        P("-w[0,2]^5/(24*w[1,2])*(z1 + w[0,2]/(3*w[1,2])) - w[0,1]*(z1*w[0,2]^2 + w[0,1])/2"),
        P(
            "-w[0,2]^6/(24*w[1,2])*(z1 + w[0,2]/(3*w[1,2])) + z1*z2*zeta[1,0]^2"
            " - z1*w[0,1]*w[0,2]^3/3 - z1*w[1,0]*zeta[1,0] + w[0,0]*zeta[1,0]"
        ),
    )
    ch3 = P("w[0,2]^4/(3*w[1,2]) - w[0,2]^4*theta[2]/12 + w[1,0] + w[0,1]*w[0,2] - 2*z2*zeta[1,0]")
    ch4 = P(
        "w[0,2]^4*theta[1]*theta[2]/12 - w[0,2]^4*theta[1]/(3*w[1,2]) + w[0,2]^5/(6*w[1,2]^2)"
        " + w[0,0] - z1*(w[1,0] + w[0,1]*w[0,2]) + 2*z1*z2*zeta[1,0]"
    )
    return [
        ("rho", lambda s: (w12 / w02 * s, w12 * s), "rho", lambda s: char_of_rho(s)),
        ("alpha", lambda s: (sp.Integer(0), s), "integral", lambda s: char_of_integral(s)),
        ("explicit-1", lambda _s: F3, None, lambda _s: ch3),
        ("explicit-2", lambda _s: F4, None, lambda _s: ch4),
    ]


def equivalent_currents() -> list[tuple[str, tuple[Expr, Expr], Expr]]:
    """Currents built from functions of z1 alone and their characteristics,
    instantiated at lambda = mu = nu = sin(z1)."""
    w02 = P("w[0,2]")
    s = sp.sin(Z1)
    ds, dds, ddds = sp.diff(s, Z1), sp.diff(s, Z1, 2), sp.diff(s, Z1, 3)
    d_lam = D1(s * w02)
    cur_lam = (w02 * d_lam, w02**2 * d_lam + 2 * dds * P("w[1,0] - z2*zeta[1,0]"))
    inner_mu = Z2 * ds * w02 - s * w02**2
    d_mu = D1(inner_mu)
    cur_mu = (d_mu, w02 * d_mu + ddds * P("w[0,0] - z2*w[0,1]"))
    d_nu = D1(s * w02)
    cur_nu = (d_nu, w02 * d_nu - dds * P("w[0,1]"))
    return [
        ("lambda", cur_lam, -2 * (Z2 * dds * w02 - ds)),
        ("mu", cur_mu, Z2 * dds - w02 * ds),
        ("nu", cur_nu, -ds),
    ]


# ---------------------------------------------------------------------------
# Suites

LOCUS = {
    "integral": "z2-integrals of the reduced equation",
    "theta": "theta coordinates annihilated by D1 + w02 D2",
    "gensym": "generalized symmetries of the reduced equation",
    "cosym": "cosymmetries of the reduced equation",
    "noether": "D2 maps symmetry characteristics to cosymmetries",
    "current": "conserved currents of the reduced equation",
    "pairing": "conservation-law characteristics of the reduced equation",
    "equivalent": "currents parametrized by functions of z1",
    "trivial": "trivial conserved currents of the reduced equation",
    "induced": "Burgers symmetries induced through h = w02",
    "control": "negative controls",
    "intermediate": "symmetry-like objects of the intermediate equation",
}


def _check(check_id: str, locus: str, fn: Callable[[], ZeroResult | bool], expect: bool = True) -> CheckResult:
    t = time.perf_counter()
    try:
        res = fn()
    except Exception as exc:  # reported, not raised
        return CheckResult.failure(check_id, locus, exc, (time.perf_counter() - t) * 1000)
    ms = (time.perf_counter() - t) * 1000
    if isinstance(res, ZeroResult):
        return CheckResult.make(check_id, locus, bool(res) == expect, res, ms)
    return CheckResult.make(check_id, locus, bool(res) == expect, ZeroResult(Verdict.ZERO if res else Verdict.NONZERO), ms)


TRIVIAL_CONSTANTS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))


def _slots(kind: str | None, m: str = "redEq13") -> list[tuple[str, Expr | None]]:
    return [("", None)] if kind is None else slot_samples(kind, m)


def _cid(*parts: str) -> str:
    return ".".join(p for p in parts if p)


def verify_conslaws(config: ProbeConfig | None = None, kmax: int = 4) -> list[CheckResult]:
    cfg = config or ProbeConfig()
    out: list[CheckResult] = []
    for i in (1, 2):
        for k in range(kmax + 1):
            out.append(_check(f"conslaw.integral.zeta{i}{k}", LOCUS["integral"], lambda i=i, k=k: verify_integral(ZetaCoord(i, k).raw, config=cfg)))
    for k in range(kmax + 1):
        out.append(
            _check(
                f"conslaw.theta.{k}",
                LOCUS["theta"],
                lambda k=k: _zero(_A(ThetaCoord(k).integral_form, charted("redEq13")), cfg),
            )
        )
    out.append(_check("conslaw.theta.closed-1", LOCUS["theta"], lambda: _zero(ThetaCoord(1).integral_form - P("w[0,2]/w[1,2] + z1"), cfg)))

    for label, build, kind in gen_sym_family():
        for tag, s in _slots(kind):
            f = build(s)
            out.append(_check(_cid("conslaw.gensym", label, tag), LOCUS["gensym"], lambda f=f: verify_gen_sym_char(f, config=cfg)))
            out.append(_check(_cid("conslaw.noether", label, tag), LOCUS["noether"], lambda f=f: verify_cosymmetry(D2(_prep(f, charted("redEq13"))), config=cfg)))
    for label, build, kind in cosym_family():
        for tag, s in _slots(kind):
            f = build(s)
            out.append(_check(_cid("conslaw.cosym", label, tag), LOCUS["cosym"], lambda f=f: verify_cosymmetry(f, config=cfg)))
    for label, build, kind, char in current_family():
        for tag, s in _slots(kind):
            F1, F2 = build(s)
            lam = char(s)
            out.append(_check(_cid("conslaw.current", label, tag), LOCUS["current"], lambda a=F1, b=F2: verify_conserved_current(a, b, config=cfg)))
            out.append(
                _check(_cid("conslaw.pairing", label, tag), LOCUS["pairing"], lambda a=F1, b=F2, lam=lam: verify_characteristic_pairing(lam, (a, b), config=cfg))
            )
    for tag, r in slot_samples("rho"):
        F = (P("w[1,2]/w[0,2]") * r, P("w[1,2]") * r)
        lam = char_of_rho_euler(r)
        out.append(_check(f"conslaw.pairing-corrected.rho.{tag}", LOCUS["pairing"], lambda F=F, lam=lam: verify_characteristic_pairing(lam, F, config=cfg)))
    for label, F, lam in equivalent_currents():
        out.append(_check(f"conslaw.equivalent.{label}", LOCUS["equivalent"], lambda F=F, lam=lam: verify_characteristic_pairing(lam, F, config=cfg)))
    for form in ("printed", "corrected"):
        for i, (tag_r, r) in enumerate(slot_samples("rho", with_opaque=False)):
            for j, (tag_a, a) in enumerate(slot_samples("integral", with_opaque=False)):
                for c in TRIVIAL_CONSTANTS:
                    F = trivial_template(r, a, c, form=form)
                    cid = f"conslaw.trivial-{form}.{tag_r}-{tag_a}.c{''.join(map(str, c))}"
                    out.append(_check(cid, LOCUS["trivial"], lambda F=F: trivial_current_check(F, config=cfg).verdict))
    table = induced_table()
    for label, build, kind in gen_sym_family():
        for tag, s in _slots(kind):
            if tag == "opaque":
                continue
            f = build(s)
            expected = table[label](s)
            out.append(
                _check(_cid("conslaw.induced", label, tag), LOCUS["induced"], lambda f=f, e=expected: _zero(induced_char_map(f) - e, cfg))
            )
    out += _controls(cfg)
    return out


def _controls(cfg: ProbeConfig) -> list[CheckResult]:
    out = [
        _check("conslaw.control.integral-w02", LOCUS["control"], lambda: verify_integral("w[0,2]", config=cfg), expect=False),
        _check("conslaw.control.gensym-w00", LOCUS["control"], lambda: verify_gen_sym_char("w[0,0]", config=cfg), expect=False),
        _check("conslaw.control.cosym-z2", LOCUS["control"], lambda: verify_cosymmetry("z2", config=cfg), expect=False),
        _check(
            "conslaw.control.current-alpha-shifted",
            LOCUS["control"],
            lambda: verify_conserved_current("w[0,2]", "zeta[1,0]", config=cfg),
            expect=False,
        ),
        _check(
            "conslaw.control.pairing-wrong",
            LOCUS["control"],
            lambda: verify_characteristic_pairing("2", ("0", "zeta[1,0]"), config=cfg),
            expect=False,
        ),
        _check("conslaw.control.nontrivial", LOCUS["control"], lambda: trivial_current_check(("0", "zeta[1,0]"), config=cfg).verdict, expect=False),
    ]
    return out


# ---------------------------------------------------------------------------
# Intermediate equation

CORRECTED_LAGRANGIAN = "-q[1,0]*q[0,1]/2 - q[0,1]^3/6"
PRINTED_LAGRANGIAN = "-q[1,0]*q[0,1]/2 - q[0,1]^2/2"


def intermediate_families() -> dict[str, list[tuple[str, Expr]]]:
    m = "intermediate"
    cm = charted(m)
    q01, q11 = cm.v(0, 1), cm.v(1, 1)
    sym = [(f"rho.{t}", s) for t, s in slot_samples("rho", m)]
    sym += [(f"alpha.{t}", s) for t, s in slot_samples("integral", m)]
    sym.append(("q-z1q01^2/2", P("q[0,0] - z1*q[0,1]^2/2")))
    currents = [(f"rho.{t}", (q11 / q01 * s, q11 * s), char_of_rho(s, m)) for t, s in slot_samples("rho", m)]
    currents += [(f"rho-corrected.{t}", (q11 / q01 * s, q11 * s), char_of_rho_euler(s, m)) for t, s in slot_samples("rho", m)]
    currents += [(f"alpha.{t}", (sp.Integer(0), s), char_of_integral(s, m)) for t, s in slot_samples("integral", m)]
    return {"symmetries": sym, "currents": currents}


def intermediate_suite(config: ProbeConfig | None = None) -> list[CheckResult]:
    from dnsym.liealgebra import catalog

    cfg = config or ProbeConfig()
    loc = LOCUS["intermediate"]
    out: list[CheckResult] = []
    cat = catalog("intermediate")
    for g in cat.generators:
        X = g.field()
        out.append(_check(f"intermediate.symmetry.{g.name}", loc, lambda X=X: js.check_lie_symmetry(X, "intermediate", cfg)[0]))
    out.append(_check("intermediate.integral.I1", loc, lambda: verify_integral("q[1,0] + q[0,1]^2/2", "intermediate", cfg)))
    for k in range(4):
        out.append(
            _check(
                f"intermediate.integral.zeta1{k}",
                loc,
                lambda k=k: verify_integral(ZetaCoord(1, k, "intermediate").raw, "intermediate", cfg),
            )
        )
    fams = intermediate_families()
    for label, f in fams["symmetries"]:
        out.append(_check(f"intermediate.selfadjoint.{label}", loc, lambda f=f: verify_gen_sym_char(f, "intermediate", cfg)))
    for label, (F1, F2), lam in fams["currents"]:
        out.append(_check(f"intermediate.current.{label}", loc, lambda a=F1, b=F2: verify_conserved_current(a, b, "intermediate", cfg)))
        out.append(
            _check(
                f"intermediate.pairing.{label}",
                loc,
                lambda a=F1, b=F2, lam=lam: verify_characteristic_pairing(lam, (a, b), "intermediate", cfg),
            )
        )
    for form in ("printed", "corrected"):
        for tag_r, r in slot_samples("rho", "intermediate", with_opaque=False):
            for c0 in (0, 1):
                F = trivial_template(r, P(INTEGRAL_SAMPLES["intermediate"][0]), [c0], "intermediate", form)
                cid = f"intermediate.trivial-{form}.{tag_r}.c{c0}"
                out.append(_check(cid, loc, lambda F=F: trivial_current_check(F, "intermediate", cfg).verdict))
    eq = P("q[1,1] + q[0,1]*q[0,2]")
    out.append(_check("intermediate.lagrangian.corrected", loc, lambda: _zero(euler_operator(CORRECTED_LAGRANGIAN) - eq, cfg)))
    t = time.perf_counter()
    printed = euler_operator(PRINTED_LAGRANGIAN)
    flagged = normalize(printed - P("q[1,1] + q[0,2]")) == 0 and not is_zero(printed - eq, cfg)
    flag = CheckResult.make(
        "intermediate.lagrangian.printed-flag",
        loc,
        flagged,
        ZeroResult(Verdict.NONZERO),
        (time.perf_counter() - t) * 1000,
        f"printed Lagrangian has Euler expression {printed}, not the equation",
    )
    out.append(flag)
    return out


def describe_catalog() -> list[dict]:
    rows = []
    for label, _b, kind in gen_sym_family():
        rows.append({"family": "generalized-symmetry", "member": label, "slot": kind or ""})
    for label, _b, kind in cosym_family():
        rows.append({"family": "cosymmetry", "member": label, "slot": kind or ""})
    for label, _b, kind, _c in current_family():
        rows.append({"family": "conserved-current", "member": label, "slot": kind or ""})
    rows.append({"family": "trivial-current", "member": "template", "slot": "rho-hat, alpha-hat, c0..c2"})
    return rows
