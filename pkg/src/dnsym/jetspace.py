"""Jet-space calculus for the four equation models.

Jet coordinates are indexed symbols ``w[k,l]`` (k derivatives in z1, l in
z2).  Each model is stored in solved form: one principal derivative and its
right-hand side.  Every jet whose multi-index dominates the principal one is
principal; the rest are parametric.

For the reduced equation two charts on the solution manifold are provided:

* the "integral" chart with coordinates z1, z2, w[0,0], w[1,0], w[0,1],
  w[k,2] and zeta[i,k] (the z1-derivatives of the two basic z2-integrals);
* the "theta" chart with coordinates w[0,0], w[1,0], w[0,1], w[0,2],
  w[1,2], theta[k] and zeta[i,k], in which z1 and z2 are functions.

The intermediate equation has the same pair of charts with q in place of w
and only the first integral family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import sympy as sp

from dnsym.symexpr import (
    Expr,
    ProbeConfig,
    ZeroResult,
    indexed_symbols,
    is_zero,
    jet,
    normalize,
    parse_indexed,
    var,
)
from dnsym.vectorfield import VectorField

Index = tuple[int, ...]


class ChartError(ValueError):
    pass


class OnShellDomainError(ValueError):
    pass


@dataclass(frozen=True)
class EquationModel:
    id: str
    space: str
    independent: tuple[sp.Symbol, ...]
    dependent: str
    expression: Expr
    principal: Index
    rhs: Expr
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def order(self) -> int:
        return max(sum(i) for i in indexed_symbols(self.expression, self.dependent).values())

    def u(self, *index: int) -> sp.Symbol:
        return jet(self.dependent, *index)

    def is_principal(self, index: Index) -> bool:
        return all(a >= b for a, b in zip(index, self.principal))

    def jets(self, e: Expr) -> dict[sp.Symbol, Index]:
        return indexed_symbols(e, self.dependent)


def _models() -> dict[str, EquationModel]:
    z1, z2 = var("z1"), var("z2")
    t, x, y = var("t"), var("x"), var("y")
    w = lambda k, l: jet("w", k, l)  # noqa: E731
    h = lambda k, l: jet("h", k, l)  # noqa: E731
    q = lambda k, l: jet("q", k, l)  # noqa: E731
    u = lambda a, b, c: jet("u", a, b, c)  # noqa: E731
    dn_rest = (
        u(0, 3, 0) * u(0, 1, 1)
        + u(0, 2, 0) * u(0, 2, 1)
        + u(0, 1, 2) * u(0, 0, 2)
        + u(0, 1, 1) * u(0, 0, 3)
    )
    return {
        "dN": EquationModel("dN", "dN", (t, x, y), "u", u(1, 1, 1) - dn_rest, (1, 1, 1), dn_rest),
        "redEq13": EquationModel(
            "redEq13", "a13", (z1, z2), "w", w(1, 2) + w(0, 2) * w(0, 3), (0, 3), -w(1, 2) / w(0, 2)
        ),
        "burgers": EquationModel("burgers", "burgers", (z1, z2), "h", h(1, 0) + h(0, 0) * h(0, 1), (1, 0), -h(0, 0) * h(0, 1)),
        "intermediate": EquationModel(
            "intermediate", "intermediate", (z1, z2), "q", q(1, 1) + q(0, 1) * q(0, 2), (0, 2), -q(1, 1) / q(0, 1)
        ),
    }


MODELS = _models()


def model(model_id: str | EquationModel) -> EquationModel:
    if isinstance(model_id, EquationModel):
        return model_id
    try:
        return MODELS[model_id]
    except KeyError:
        raise KeyError(f"unknown model {model_id!r}; choose from {sorted(MODELS)}") from None


def _direction(m: EquationModel, direction: int | sp.Symbol | str) -> int:
    if isinstance(direction, int):
        return direction
    sym = var(direction) if isinstance(direction, str) else direction
    return m.independent.index(sym)


def _shift(index: Index, i: int, by: int = 1) -> Index:
    return tuple(v + by if j == i else v for j, v in enumerate(index))


def total_derivative(e: Expr, direction: int | sp.Symbol | str, m: str | EquationModel) -> Expr:
    """Free total derivative D_i: explicit partial plus shift of every jet."""
    m = model(m)
    i = _direction(m, direction)
    e = sp.sympify(e)
    out = sp.diff(e, m.independent[i])
    for sym, idx in m.jets(e).items():
        out += m.u(*_shift(idx, i)) * sp.diff(e, sym)
    return out


def total_derivative_multi(e: Expr, index: Index, m: str | EquationModel) -> Expr:
    m = model(m)
    for i, n in enumerate(index):
        for _ in range(n):
            e = total_derivative(e, i, m)
    return e


def principal_replacement(m: EquationModel, index: Index) -> Expr:
    """Expression of a principal jet in parametric jets only."""
    cache = m._cache.setdefault("principal", {})
    if index in cache:
        return cache[index]
    if index == m.principal:
        value = normalize(m.rhs)
    else:
        i = next(j for j, (a, b) in enumerate(zip(index, m.principal)) if a > b)
        prev = principal_replacement(m, _shift(index, i, -1))
        value = on_shell_reduce(total_derivative(prev, i, m), m)
    cache[index] = value
    return value


def on_shell_reduce(e: Expr, m: str | EquationModel) -> Expr:
    """Eliminate principal derivatives and their consequences."""
    m = model(m)
    e = sp.sympify(e)
    while True:
        principal = {s: idx for s, idx in m.jets(e).items() if m.is_principal(idx)}
        if not principal:
            break
        e = e.xreplace({s: principal_replacement(m, idx) for s, idx in principal.items()})
    return normalize(e)


# ---------------------------------------------------------------------------
# Prolongation


def characteristic(vf: VectorField, m: EquationModel) -> Expr:
    n = len(m.independent)
    q = vf.coeffs[n]
    for i in range(n):
        q -= vf.coeffs[i] * m.u(*_shift((0,) * n, i))
    return q


def prolong(vf: VectorField, order: int, m: str | EquationModel, only: Iterable[Index] | None = None) -> dict[Index, Expr]:
    """Jet coefficients of the prolongation, keyed by multi-index.

    eta^J = D_J(Q) + xi^i u_{J+i} with Q = eta - xi^i u_i.
    """
    m = model(m)
    if vf.space != m.space:
        raise ValueError(f"vector field lives on {vf.space}, model {m.id} on {m.space}")
    n = len(m.independent)
    q = characteristic(vf, m)
    wanted = set(only) if only is not None else {
        idx for idx in _indices(n, order)
    }
    memo: dict[Index, Expr] = {(0,) * n: q}

    def dq(idx: Index) -> Expr:
        if idx in memo:
            return memo[idx]
        i = next(j for j, v in enumerate(idx) if v > 0)
        value = sp.expand(total_derivative(dq(_shift(idx, i, -1)), i, m))
        memo[idx] = value
        return value

    out: dict[Index, Expr] = {}
    for idx in sorted(wanted):
        if sum(idx) > order:
            continue
        coeff = dq(idx) + sum(vf.coeffs[i] * m.u(*_shift(idx, i)) for i in range(n))
        out[idx] = normalize(coeff)
    return out


def _indices(n: int, order: int) -> list[Index]:
    if n == 0:
        return [()]
    out = []
    for first in range(order + 1):
        for rest in _indices(n - 1, order - first):
            out.append((first,) + rest)
    return out


def prolonged_action(vf: VectorField, e: Expr, m: str | EquationModel) -> Expr:
    """pr(vf) applied to a differential function e."""
    m = model(m)
    e = sp.sympify(e)
    jets = m.jets(e)
    coeffs = prolong(vf, max([sum(i) for i in jets.values()] + [0]), m, only=jets.values())
    out = sum((vf.coeffs[i] * sp.diff(e, x) for i, x in enumerate(m.independent)), sp.Integer(0))
    for sym, idx in jets.items():
        out += coeffs[idx] * sp.diff(e, sym)
    return out


def check_lie_symmetry(vf: VectorField, m: str | EquationModel, config: ProbeConfig | None = None) -> tuple[ZeroResult, Expr]:
    """Zero-oracle verdict on the on-shell prolonged action, plus the residual."""
    m = model(m)
    residual = on_shell_reduce(prolonged_action(vf, m.expression, m), m)
    return is_zero(residual, config), residual


# ---------------------------------------------------------------------------
# Restricted total derivatives on the solution manifold


def zeta(i: int, k: int) -> sp.Symbol:
    return jet("zeta", i, k)


def theta(k: int) -> sp.Symbol:
    return jet("theta", k)


@dataclass(frozen=True)
class ChartedModel:
    """Chart data for the reduced equation (``w``) or the intermediate one (``q``)."""

    model_id: str
    dep: str
    integrals: tuple[int, ...]  # which zeta families exist

    @property
    def m(self) -> EquationModel:
        return MODELS[self.model_id]

    def v(self, k: int, l: int) -> sp.Symbol:
        return jet(self.dep, k, l)

    # second-derivative level of the model: jets v[k, top] are chart coordinates
    @property
    def top(self) -> int:
        return 2 if self.dep == "w" else 1


REDUCED = ChartedModel("redEq13", "w", (1, 2))
INTERMEDIATE = ChartedModel("intermediate", "q", (1,))
CHARTED = {"redEq13": REDUCED, "intermediate": INTERMEDIATE}


def charted(m: str | ChartedModel) -> ChartedModel:
    return m if isinstance(m, ChartedModel) else CHARTED[m]


def integral_expr(cm: ChartedModel, i: int) -> Expr:
    """Basic z2-integrals in raw jet variables."""
    v = cm.v
    if cm.dep == "w":
        i1 = v(1, 1) + v(0, 2) ** 2 / 2
        if i == 1:
            return i1
        return v(2, 0) - v(0, 2) ** 3 / 3 - var("z2") * total_derivative(i1, 0, cm.m)
    if i != 1:
        raise ValueError("the intermediate equation has a single integral family")
    return v(1, 0) + v(0, 1) ** 2 / 2


def _ratio_derivative(cm: ChartedModel, k: int) -> Expr:
    """D1^k (v[1,top] / v[0,top]) in the integral chart."""
    cache = _RATIO.setdefault(cm, {})
    if k in cache:
        return cache[k]
    if k == 0:
        value = cm.v(1, cm.top) / cm.v(0, cm.top)
    else:
        value = normalize(hatted_D(_ratio_derivative(cm, k - 1), 1, cm, chart="integral"))
    cache[k] = value
    return value


_RATIO: dict = {}


def _coeff_integral_chart(cm: ChartedModel, sym: sp.Symbol, direction: int) -> Expr:
    z1, z2 = var("z1"), var("z2")
    v = cm.v
    if sym == z1:
        return sp.Integer(1 if direction == 1 else 0)
    if sym == z2:
        return sp.Integer(1 if direction == 2 else 0)
    parsed = parse_indexed(sym)
    if parsed is None:
        return sp.Integer(0)  # parameters
    base, idx = parsed
    if base == "zeta":
        i, k = idx
        if i not in cm.integrals:
            raise ChartError(f"{sym} is not a coordinate of the {cm.model_id} chart")
        return zeta(i, k + 1) if direction == 1 else sp.Integer(0)
    if base == "theta":
        raise ChartError("theta coordinates belong to the theta chart")
    if base != cm.dep:
        raise ChartError(f"{sym} is not a coordinate of the {cm.model_id} chart")
    k, l = idx
    if cm.dep == "w":
        if (k, l) == (0, 0):
            return v(1, 0) if direction == 1 else v(0, 1)
        if (k, l) == (1, 0):
            return zeta(2, 0) + v(0, 2) ** 3 / 3 + z2 * zeta(1, 1) if direction == 1 else zeta(1, 0) - v(0, 2) ** 2 / 2
        if (k, l) == (0, 1):
            return zeta(1, 0) - v(0, 2) ** 2 / 2 if direction == 1 else v(0, 2)
        if l == 2:
            return v(k + 1, 2) if direction == 1 else -_ratio_derivative(cm, k)
    else:
        if (k, l) == (0, 0):
            return zeta(1, 0) - v(0, 1) ** 2 / 2 if direction == 1 else v(0, 1)
        if l == 1:
            return v(k + 1, 1) if direction == 1 else -_ratio_derivative(cm, k)
    raise ChartError(f"{sym} is not a coordinate of the {cm.model_id} integral chart")


def z_in_theta_chart(cm: ChartedModel) -> dict[sp.Symbol, Expr]:
    a, b = cm.v(0, cm.top), cm.v(1, cm.top)
    return {
        var("z1"): theta(1) - a / b,
        var("z2"): theta(0) + a * theta(1) - a**2 / b,
    }


def _coeff_theta_chart(cm: ChartedModel, sym: sp.Symbol, direction: int) -> Expr:
    v = cm.v
    a, b = v(0, cm.top), v(1, cm.top)
    parsed = parse_indexed(sym)
    if parsed is None:
        if sym in (var("z1"), var("z2")):
            raise ChartError("z1, z2 must be eliminated before applying the theta chart")
        return sp.Integer(0)
    base, idx = parsed
    if base == "zeta":
        i, k = idx
        if i not in cm.integrals:
            raise ChartError(f"{sym} is not a coordinate of the {cm.model_id} chart")
        return zeta(i, k + 1) if direction == 1 else sp.Integer(0)
    if base == "theta":
        (k,) = idx
        return -b * theta(k + 1) if direction == 1 else b / a * theta(k + 1)
    if base != cm.dep:
        raise ChartError(f"{sym} is not a coordinate of the {cm.model_id} chart")
    k, l = idx
    z2 = z_in_theta_chart(cm)[var("z2")]
    if (k, l) == (0, cm.top):
        return b if direction == 1 else -b / a
    if (k, l) == (1, cm.top):
        if direction == 1:
            return b**2 / a * (b * theta(2) + 2)
        return -((b / a) ** 2) * (b * theta(2) + 1)
    if cm.dep == "w":
        if (k, l) == (0, 0):
            return v(1, 0) if direction == 1 else v(0, 1)
        if (k, l) == (1, 0):
            return zeta(2, 0) + a**3 / 3 + z2 * zeta(1, 1) if direction == 1 else zeta(1, 0) - a**2 / 2
        if (k, l) == (0, 1):
            return zeta(1, 0) - a**2 / 2 if direction == 1 else a
    else:
        if (k, l) == (0, 0):
            return zeta(1, 0) - a**2 / 2 if direction == 1 else a
    raise ChartError(f"{sym} is not a coordinate of the {cm.model_id} theta chart")


def detect_chart(e: Expr, cm: ChartedModel) -> str:
    syms = e.free_symbols
    has_theta = any((p := parse_indexed(s)) is not None and p[0] == "theta" for s in syms)
    if not has_theta:
        return "integral"
    for s in syms:
        p = parse_indexed(s)
        if p is not None and p[0] == cm.dep and p[1][1] == cm.top and p[1][0] >= 2:
            raise ChartError(f"expression mixes theta coordinates with {s}")
        if p is not None and p[0] == cm.dep and p[1][1] > cm.top:
            raise ChartError(f"{s} is principal")
    return "theta"


def hatted_D(e: Expr, direction: int, m: str | ChartedModel = "redEq13", chart: str | None = None) -> Expr:
    """Restricted total derivative D^_1 or D^_2 on the solution manifold.

    ``chart`` is detected from the expression when omitted: expressions with
    theta coordinates use the theta chart (z1 and z2 are then rewritten in
    that chart), everything else the integral chart.
    """
    cm = charted(m)
    e = sp.sympify(e)
    chart = chart or detect_chart(e, cm)
    if chart == "theta":
        e = e.xreplace(z_in_theta_chart(cm))
        coeff: Callable = _coeff_theta_chart
    elif chart == "integral":
        coeff = _coeff_integral_chart
    else:
        raise ValueError(f"unknown chart {chart!r}")
    out = sp.Integer(0)
    for sym in sorted(e.free_symbols, key=lambda s: s.name):
        c = coeff(cm, sym, direction)
        if c != 0:
            out += c * sp.diff(e, sym)
    return out


def theta_in_integral_chart(k: int, m: str | ChartedModel = "redEq13") -> Expr:
    cm = charted(m)
    cache = _THETA.setdefault(cm, {})
    if k in cache:
        return cache[k]
    if k == 0:
        value = var("z2") - cm.v(0, cm.top) * var("z1")
    else:
        prev = theta_in_integral_chart(k - 1, cm)
        value = normalize(cm.v(0, cm.top) / cm.v(1, cm.top) * hatted_D(prev, 2, cm, chart="integral"))
    cache[k] = value
    return value


_THETA: dict = {}


def to_integral_chart(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    cm = charted(m)
    e = sp.sympify(e)
    subs = {}
    for s in e.free_symbols:
        p = parse_indexed(s)
        if p is not None and p[0] == "theta":
            subs[s] = theta_in_integral_chart(p[1][0], cm)
    return e.xreplace(subs) if subs else e


def to_theta_chart(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    cm = charted(m)
    e = sp.sympify(e)
    detect_chart(e + theta(0), cm)
    return e.xreplace(z_in_theta_chart(cm))


def lift(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    """Raw-jet representative of a chart expression."""
    cm = charted(m)
    e = to_integral_chart(e, cm)
    subs = {}
    for s in e.free_symbols:
        p = parse_indexed(s)
        if p is not None and p[0] == "zeta":
            i, k = p[1]
            subs[s] = total_derivative_multi(integral_expr(cm, i), (k, 0), cm.m)
    return e.xreplace(subs) if subs else e


def raw_to_integral_chart(e: Expr, m: str | ChartedModel = "redEq13") -> Expr:
    """On-shell reduction followed by elimination of the jets that are not
    coordinates of the integral chart."""
    cm = charted(m)
    e = on_shell_reduce(e, cm.m)
    subs = {}
    for s, (k, l) in indexed_symbols(e, cm.dep).items():
        if cm.dep == "w":
            if l == 1 and k >= 1:
                subs[s] = _iterate_D1(zeta(1, 0) - cm.v(0, 2) ** 2 / 2, k - 1, cm)
            elif l == 0 and k >= 2:
                subs[s] = _iterate_D1(zeta(2, 0) + cm.v(0, 2) ** 3 / 3 + var("z2") * zeta(1, 1), k - 2, cm)
        elif l == 0 and k >= 1:
            subs[s] = _iterate_D1(zeta(1, 0) - cm.v(0, 1) ** 2 / 2, k - 1, cm)
    return normalize(e.xreplace(subs)) if subs else e


def _iterate_D1(e: Expr, k: int, cm: ChartedModel) -> Expr:
    for _ in range(k):
        e = hatted_D(e, 1, cm, chart="integral")
    return e


def integral_chart_coordinates(cm: ChartedModel, kmax: int = 3) -> list[sp.Symbol]:
    coords = [var("z1"), var("z2"), cm.v(0, 0)]
    if cm.dep == "w":
        coords += [cm.v(1, 0), cm.v(0, 1)]
    coords += [cm.v(k, cm.top) for k in range(kmax + 1)]
    coords += [zeta(i, k) for i in cm.integrals for k in range(kmax + 1)]
    return coords


def theta_chart_coordinates(cm: ChartedModel, kmax: int = 3) -> list[sp.Symbol]:
    coords = [cm.v(0, 0)]
    if cm.dep == "w":
        coords += [cm.v(1, 0), cm.v(0, 1)]
    coords += [cm.v(0, cm.top), cm.v(1, cm.top)]
    coords += [theta(k) for k in range(kmax + 1)]
    coords += [zeta(i, k) for i in cm.integrals for k in range(kmax + 1)]
    return coords
