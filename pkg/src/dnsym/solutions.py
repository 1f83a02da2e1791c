"""Exact solution families of the inviscid Burgers equation h1 + h h2 = 0,
of the reduced equation w_122 + w_22 w_222 = 0 and of the full equation.

Every evaluator is vectorized: arrays in, arrays out, NaN wherever the point
lies on a singular locus or outside a branch domain.  The scalar helpers
``eval_h``/``eval_w`` raise instead.

Family kinds:

* closed       closed-form h and w in (z1, z2)
* lambert      h, w in (z1, z2, zeta) with zeta = W_branch(inner(z1, z2))
* parametric   h, w in (z1, z2, s) with s the unique root of g(s, z1, z2) = 0
               in a configured s-range
* implicit     h only, from an initial datum h0 by characteristics
* transported  image of another family under a reduced-equation transformation
* composite    solution u(t, x, y) of the full equation built from a w-family,
               a transformation tuple and the ansatz in (t, x, y)
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from dnsym.numerics import (
    fd_partial,
    fd_step_for,
    lambert_w_array,
    moc_burgers,
    moc_burgers_array,
    working_dtype,
)
from dnsym.pointgroup import TransformG13, invert
from dnsym.report import CheckResult
from dnsym.reductions import DNAnsatz, build_dN_ansatz
from dnsym.symexpr import (
    Expr,
    ProbeConfig,
    ZeroResult,
    compile_expr,
    is_zero,
    parse_expr,
    to_text,
    var,
)

Z1, Z2, ZETA, S, XI = var("z1"), var("z2"), var("zeta"), var("s"), var("xi")
INV_E = math.exp(-1.0)


class SolutionError(ValueError):
    pass


class SingularPoint(SolutionError):
    pass


class NoRootError(SolutionError):
    pass


class MultipleRootsError(SolutionError):
    pass


class BranchDomainError(SolutionError):
    pass


# status codes of the vectorized evaluators
OK, SINGULAR, NO_ROOT, MULTI_ROOT, BRANCH = 0, 1, 2, 3, 4
_ERRORS = {
    SINGULAR: SingularPoint,
    NO_ROOT: NoRootError,
    MULTI_ROOT: MultipleRootsError,
    BRANCH: BranchDomainError,
}

Window = tuple[tuple[float, float], tuple[float, float]]


@dataclass
class SolutionFamily:
    name: str
    kind: str
    locus: str
    h: Expr | None = None
    w: Expr | None = None
    window: Window = ((1.0, 2.0), (-1.0, 1.0))
    positive: tuple[Expr, ...] = ()
    nonzero: tuple[Expr, ...] = ()
    branch: int | None = None
    inner: Expr | None = None
    constraint: Expr | None = None
    s_range: tuple[float, float] = (-10.0, 10.0)
    s_cells: int = 400
    h0: Expr | None = None
    t0: float = 0.0
    symbolic: bool = False
    parameters: dict = field(default_factory=dict)
    _compiled: dict = field(default_factory=dict, repr=False, compare=False)

    # -- compilation ---------------------------------------------------------

    def _fn(self, key: str, expr: Expr, args: tuple) -> Callable:
        if key not in self._compiled:
            self._compiled[key] = compile_expr(expr, args)
        return self._compiled[key]

    def _aux_symbol(self):
        return {"lambert": ZETA, "parametric": S}.get(self.kind)

    # -- evaluation ----------------------------------------------------------

    def status(self, z1, z2) -> tuple[np.ndarray, np.ndarray | None]:
        """(status codes, auxiliary value zeta or s) at the given points."""
        dt = working_dtype(z1, z2)
        z1 = np.asarray(z1, dtype=dt)
        z2 = np.asarray(z2, dtype=dt)
        z1, z2 = np.broadcast_arrays(z1, z2)
        code = np.zeros(z1.shape, dtype=int)
        with np.errstate(all="ignore"):
            for i, e in enumerate(self.positive):
                v = self._fn(f"pos{i}", e, (Z1, Z2))(z1, z2)
                code = np.where((code == OK) & ~(v > 0), SINGULAR, code)
            for i, e in enumerate(self.nonzero):
                v = self._fn(f"nz{i}", e, (Z1, Z2))(z1, z2)
                code = np.where((code == OK) & ~(np.isfinite(v) & (v != 0)), SINGULAR, code)
        aux = None
        if self.kind == "lambert":
            x = self._fn("inner", self.inner, (Z1, Z2))(z1, z2)
            bad = ~(x > -INV_E)
            if self.branch == -1:
                bad |= ~(x < 0)
            code = np.where((code == OK) & bad, BRANCH, code)
            aux = lambert_w_array(self.branch, np.where(code == OK, x, np.nan))
        elif self.kind == "parametric":
            aux, scode = self._solve_s(z1, z2, code == OK)
            code = np.where(code == OK, scode, code)
        return code, aux

    def _solve_s(self, z1, z2, mask):
        g = self._fn("g", self.constraint, (S, Z1, Z2))
        lo, hi = self.s_range
        grid = np.linspace(lo, hi, self.s_cells + 1)
        flat1, flat2 = z1.reshape(-1), z2.reshape(-1)
        with np.errstate(all="ignore"):
            vals = g(grid[None, :], flat1[:, None], flat2[:, None])
        finite = np.isfinite(vals)
        change = (vals[:, :-1] * vals[:, 1:] < 0) & finite[:, :-1] & finite[:, 1:]
        exact = (vals[:, :-1] == 0) & finite[:, :-1]
        hits = change | exact
        count = hits.sum(axis=1)
        code = np.where(count == 1, OK, np.where(count == 0, NO_ROOT, MULTI_ROOT))
        cell = np.argmax(hits, axis=1)
        dt = working_dtype(flat1, flat2)
        a = grid[cell].astype(dt)
        b = grid[np.minimum(cell + 1, len(grid) - 1)].astype(dt)
        is_exact = exact[np.arange(len(cell)), cell]
        with np.errstate(all="ignore"):
            fa = g(a, flat1, flat2)
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = g(m, flat1, flat2)
                left = fa * fm <= 0
                b = np.where(left, m, b)
                a = np.where(left, a, m)
                fa = np.where(left, fa, fm)
            s = np.where(is_exact, grid[cell], 0.5 * (a + b))
        s = np.where(code == OK, s, np.nan)
        code = np.where(mask.reshape(-1), code, OK)
        return s.reshape(z1.shape), code.reshape(z1.shape)

    def _eval(self, which: str, z1, z2):
        if self.kind == "implicit":
            return self._implicit(z1, z2) if which == "h" else np.full(np.shape(z1), np.nan)
        expr = self.h if which == "h" else self.w
        if expr is None:
            raise SolutionError(f"family {self.name} has no {which}-expression")
        code, aux = self.status(z1, z2)
        dt = working_dtype(z1, z2)
        z1b, z2b = np.broadcast_arrays(np.asarray(z1, dtype=dt), np.asarray(z2, dtype=dt))
        sym = self._aux_symbol()
        with np.errstate(all="ignore"):
            if sym is None:
                val = self._fn(which, expr, (Z1, Z2))(z1b, z2b)
            else:
                val = self._fn(which, expr, (Z1, Z2, sym))(z1b, z2b, aux)
        return np.where(code == OK, np.broadcast_to(val, z1b.shape), np.nan)

    def _implicit(self, z1, z2):
        h0 = self._fn("h0", self.h0, (XI,))
        dh0 = self._fn("dh0", sp.diff(self.h0, XI), (XI,))
        return moc_burgers_array(h0, dh0, z1, z2, t0=self.t0)

    def h_array(self, z1, z2):
        return self._eval("h", z1, z2)

    def w_array(self, z1, z2):
        return self._eval("w", z1, z2)

    @property
    def has_w(self) -> bool:
        return self.w is not None

    def describe(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "locus": self.locus}
        if self.h is not None:
            out["h"] = to_text(self.h)
        if self.w is not None:
            out["w"] = to_text(self.w)
        if self.inner is not None:
            out["inner"] = to_text(self.inner)
            out["branch"] = self.branch
        if self.constraint is not None:
            out["constraint"] = to_text(self.constraint)
            out["s_range"] = list(self.s_range)
        if self.h0 is not None:
            out["h0"] = to_text(self.h0)
            out["t0"] = self.t0
        out.update({k: v for k, v in self.parameters.items()})
        return out


def _check_scalar(f, z1: float, z2: float) -> None:
    if f.kind in ("implicit", "transported"):
        return
    code, _ = f.status(np.array(z1), np.array(z2))
    c = int(code)
    if c != OK:
        raise _ERRORS[c](f"{f.name} is not defined at ({z1}, {z2})")


def eval_h(f, z1: float, z2: float) -> float:
    _check_scalar(f, z1, z2)
    v = float(f.h_array(np.array(float(z1)), np.array(float(z2))))
    if not math.isfinite(v):
        raise SingularPoint(f"{f.name}: h undefined at ({z1}, {z2})")
    return v


def eval_w(f, z1: float, z2: float) -> float:
    _check_scalar(f, z1, z2)
    v = float(f.w_array(np.array(float(z1)), np.array(float(z2))))
    if not math.isfinite(v):
        raise SingularPoint(f"{f.name}: w undefined at ({z1}, {z2})")
    return v


def implicit_burgers_eval(h0: Callable[[float], float], z1: float, z2: float, t0: float = 0.0, dh0=None) -> float:
    """h with h(t0, .) = h0 at (z1, z2) before characteristics cross."""
    return moc_burgers(h0, z1, z2, t0=t0, dh0=dh0)


# ---------------------------------------------------------------------------
# Transported families


class TransportedFamily:
    """Image of a family under a reduced-equation transformation phi."""

    kind = "transported"

    def __init__(self, phi: TransformG13, base):
        self.phi = phi
        self.base = base
        self.name = f"{base.name}~transported"
        self.locus = "image of a solution under a point symmetry"
        x1, x2 = phi.spatial_inverse()
        self._inv = (compile_expr(x1, (Z1, Z2)), compile_expr(x2, (Z1, Z2)))
        W = var("w_base")
        self._wmap = compile_expr(phi.components(Z1, Z2, W)[2], (Z1, Z2, W))
        self._den = compile_expr(phi.denominator(), (Z1,))
        c1, c2, c3, c4, c5, c6 = (float(v) for v in phi.c)
        self._c = (c1, c2, c3, c4, c5, c6)
        self.window = _image_window(self, base.window)

    @property
    def has_w(self) -> bool:
        return self.base.has_w

    def _pre(self, z1, z2):
        dt = working_dtype(z1, z2)
        z1 = np.asarray(z1, dtype=dt)
        z2 = np.asarray(z2, dtype=dt)
        with np.errstate(all="ignore"):
            x1 = self._inv[0](z1, z2)
            x2 = self._inv[1](z1, z2)
            bad = ~np.isfinite(x1) | ~np.isfinite(x2) | (self._den(x1) == 0)
        return np.where(bad, np.nan, x1), np.where(bad, np.nan, x2)

    def w_array(self, z1, z2):
        x1, x2 = self._pre(z1, z2)
        with np.errstate(all="ignore"):
            return self._wmap(x1, x2, self.base.w_array(x1, x2))

    def h_array(self, z1, z2):
        x1, x2 = self._pre(z1, z2)
        c1, c2, c3, c4, c5, c6 = self._c
        d = c1 * c4 - c2 * c3
        with np.errstate(all="ignore"):
            return ((c3 * x1 + c4) * self.base.h_array(x1, x2) - c3 * x2 - c3 * c6 + c4 * c5) / d

    def forward(self, z1, z2):
        c1, c2, c3, c4, c5, c6 = self._c
        z1, z2 = np.asarray(z1), np.asarray(z2)
        with np.errstate(all="ignore"):
            q = c3 * z1 + c4
            return (c1 * z1 + c2) / q, (z2 + c5 * z1 + c6) / q

    def grid_points(self, n: int = 10, margin: float = 0.05):
        """Images of the base family's grid; the bounding window of a
        projective image can contain points outside the image."""
        return self.forward(*grid(self.base.window, n, margin=margin))


def _image_window(t: TransportedFamily, window: Window) -> Window:
    (a, b), (c, d) = window
    g1, g2 = np.meshgrid(np.linspace(a, b, 5), np.linspace(c, d, 5))
    f1, f2 = t.forward(g1, g2)
    return ((float(np.nanmin(f1)), float(np.nanmax(f1))), (float(np.nanmin(f2)), float(np.nanmax(f2))))


def transport(phi: TransformG13, base) -> TransportedFamily:
    return TransportedFamily(phi, base)


def pullback(phi: TransformG13, base) -> TransportedFamily:
    """Family w with phi mapping its graph onto the graph of ``base``."""
    return TransportedFamily(invert(phi), base)


# ---------------------------------------------------------------------------
# Residuals


def grid(window: Window, n1: int = 10, n2: int | None = None, margin: float = 0.0):
    (a, b), (c, d) = window
    n2 = n1 if n2 is None else n2
    da, dc = margin * (b - a), margin * (d - c)
    g1, g2 = np.meshgrid(np.linspace(a + da, b - da, n1), np.linspace(c + dc, d - dc, n2), indexing="ij")
    return g1, g2


def reduced_residual_fd(w: Callable, z1, z2, step: float = 1e-3, extended: bool = True, accuracy: int = 4) -> np.ndarray:
    """|w_122 + w_22 w_222| by central differences of the given accuracy order.

    ``extended`` evaluates the stencils in long double; parametric roots are
    ill-conditioned enough that float64 noise swamps third differences.
    """
    if extended:
        z1, z2 = np.asarray(z1, dtype=np.longdouble), np.asarray(z2, dtype=np.longdouble)
    h3 = fd_step_for(3, step)
    h2 = fd_step_for(2, step)
    w12 = fd_partial(w, (z1, z2), (1, 2), h3, accuracy=accuracy)
    w02 = fd_partial(w, (z1, z2), (0, 2), h2, accuracy=accuracy)
    w03 = fd_partial(w, (z1, z2), (0, 3), h3, accuracy=accuracy)
    return np.abs(w12 + w02 * w03).astype(float)


def burgers_residual_fd(h: Callable, z1, z2, step: float = 1e-3) -> np.ndarray:
    h1 = fd_partial(h, (z1, z2), (1, 0), step)
    h2 = fd_partial(h, (z1, z2), (0, 1), step)
    return np.abs(h1 + h(z1, z2) * h2)


def dn_residual_fd(u: Callable, t, x, y, step: float = 1e-3, extended: bool = True, accuracy: int = 4) -> np.ndarray:
    """|u_txy - (u_xx u_xy)_x - (u_yy u_xy)_y| by central differences."""
    dt = np.longdouble if extended else np.float64
    p = tuple(np.asarray(v, dtype=dt) for v in (t, x, y))
    h3 = fd_step_for(3, step)
    h2 = fd_step_for(2, step)
    d = lambda idx, hh: fd_partial(u, p, idx, hh, accuracy=accuracy)  # noqa: E731
    u_txy = d((1, 1, 1), h3)
    u_xxx, u_yyy = d((0, 3, 0), h3), d((0, 0, 3), h3)
    u_xxy, u_xyy = d((0, 2, 1), h3), d((0, 1, 2), h3)
    u_xx, u_yy, u_xy = d((0, 2, 0), h2), d((0, 0, 2), h2), d((0, 1, 1), h2)
    return np.abs(u_txy - u_xxx * u_xy - u_xx * u_xxy - u_xyy * u_yy - u_xy * u_yyy).astype(float)


def reduced_residual_symbolic(f: SolutionFamily, config: ProbeConfig | None = None) -> ZeroResult:
    if f.kind != "closed" or f.w is None:
        raise SolutionError(f"{f.name} has no closed-form w")
    w = _fix_abs_signs(f.w, f.window)
    expr = sp.diff(w, Z1, Z2, Z2) + sp.diff(w, Z2, 2) * sp.diff(w, Z2, 3)
    return is_zero(expr, config or ProbeConfig(), domain=_window_domain(f.window))


def _fix_abs_signs(e: Expr, window: Window) -> Expr:
    """Replace |g| by +-g where g keeps one sign on the window; the jet
    symbols are not declared real, so sympy cannot differentiate |g|."""
    z1, z2 = grid(window, 7)
    reps = {}
    for node in e.atoms(sp.Abs):
        vals = compile_expr(node.args[0], (Z1, Z2))(z1, z2)
        if np.all(vals > 0):
            reps[node] = node.args[0]
        elif np.all(vals < 0):
            reps[node] = -node.args[0]
    return e.xreplace(reps) if reps else e


def _window_domain(window: Window) -> dict:
    """Probe inside the family window, which is where the radicals are real."""
    (a, b), (c, d) = window
    pad1, pad2 = 0.1 * (b - a), 0.1 * (d - c)
    return {Z1: (a + pad1, b - pad1), Z2: (c + pad2, d - pad2)}


# Sixth-order stencils in long double at this base step keep every catalog
# residual, reduced or full, below 2e-7.
REDUCED_FD_STEP = 5e-4
REDUCED_FD_ACCURACY = 6


def residual(
    f,
    method: str = "fd",
    points=None,
    step: float | None = None,
    config: ProbeConfig | None = None,
    n: int = 10,
) -> float:
    """Maximum residual of the family's equation over a grid (default: the
    family window with a 5 % margin, 10 x 10)."""
    if method == "symbolic":
        res = reduced_residual_symbolic(f, config)
        return 0.0 if res.verdict.holds else max(res.max_probe_error, 1.0)
    if method != "fd":
        raise ValueError(f"unknown residual method {method!r}")
    if isinstance(f, CompositeFamily):
        t, x, y = points if points is not None else f.grid(5)
        r = dn_residual_fd(f.u_array, t, x, y, step or REDUCED_FD_STEP, accuracy=REDUCED_FD_ACCURACY)
    else:
        if points is None:
            points = f.grid_points(n) if isinstance(f, TransportedFamily) else grid(f.window, n, margin=0.05)
        z1, z2 = points
        if f.has_w:
            r = reduced_residual_fd(f.w_array, z1, z2, step or REDUCED_FD_STEP, accuracy=REDUCED_FD_ACCURACY)
        else:
            r = burgers_residual_fd(f.h_array, z1, z2, step or 1e-3)
    if not np.all(np.isfinite(r)):
        raise SingularPoint(f"{f.name}: residual grid touches a singular locus")
    return float(np.max(r))


def w22_consistency(f, points=None, step: float = 1e-3) -> float:
    """max |w_22 - h| over the window."""
    z1, z2 = points if points is not None else grid(f.window, 10, margin=0.05)
    w22 = fd_partial(f.w_array, (z1, z2), (0, 2), fd_step_for(2, step))
    return float(np.max(np.abs(w22 - f.h_array(z1, z2))))


# ---------------------------------------------------------------------------
# Full-equation solutions


COMPOSITE_KINDS = ("general", "constant-first", "constant-second")


def composite_transform(kind: str, c: Sequence[float]) -> TransformG13:
    """Transformation whose pullback of a reduced solution enters the ansatz.

    ``general`` takes (c1, c2, c3, c4, c5) with c1 c4 - c2 c3 = +-1; the two
    constant kinds take (c5,).
    """
    if kind == "general":
        c1, c2, c3, c4, c5 = c
        d = c1 * c4 - c2 * c3
        if abs(abs(d) - 1.0) > 1e-12:
            raise SolutionError("c1 c4 - c2 c3 must be +-1")
        return TransformG13((c1, c2, c3, c4, c5, 0))
    (c5,) = c
    if kind == "constant-first":
        return TransformG13((1, 0, 0, 1, c5, 0))
    if kind == "constant-second":
        return TransformG13((0, 1, 1, 0, c5, 0))
    raise SolutionError(f"unknown kind {kind!r}")


class CompositeFamily:
    """u(t, x, y) = w(z1(t), y/rho - x) - rho_t/(6 rho) y^3 where w is the
    pullback of a reduced-equation family by a transformation tuple."""

    kind = "composite"
    has_w = False

    def __init__(self, name: str, base, kind: str, c: Sequence[float], rho: str, t0: float, window, locus: str = ""):
        self.name = name
        self.base = base
        self.composite_kind = kind
        self.c = tuple(c)
        self.rho_text = rho
        self.t0 = t0
        self.window = window
        self.locus = locus or "exact solutions of the full equation from two-step reductions"
        self._ansatz: DNAnsatz | None = None
        self.phi = composite_transform(kind, c)
        self.reduced = pullback(self.phi, base)
        if kind != "general" and T_SYMBOL in parse_expr(rho).free_symbols:
            raise SolutionError("constant kinds need constant rho")

    @property
    def ansatz(self) -> DNAnsatz:
        if self._ansatz is None:
            self._ansatz = build_dN_ansatz(self.rho_text, self.t0, window=self.window[0])
        return self._ansatz

    def u_array(self, t, x, y):
        return self.ansatz.assemble(self.reduced.w_array)(t, x, y)

    def grid(self, n: int = 5, margin: float = 0.05):
        axes = [np.linspace(lo + margin * (hi - lo), hi - margin * (hi - lo), n) for lo, hi in self.window]
        return np.meshgrid(*axes, indexing="ij")

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": "composite",
            "locus": self.locus,
            "w_family": self.base.name,
            "composite_kind": self.composite_kind,
            "c": list(self.c),
            "rho": self.rho_text,
            "t0": self.t0,
        }


T_SYMBOL = var("t")


def compose_dN_solution(base, kind: str, c: Sequence[float], ansatz: DNAnsatz) -> Callable:
    """Vectorized u(t, x, y) for a reduced family, transformation kind and ansatz."""
    if kind != "general" and not ansatz.is_constant:
        raise SolutionError("constant kinds need constant rho")
    reduced = pullback(composite_transform(kind, c), base)
    return ansatz.assemble(reduced.w_array)


# ---------------------------------------------------------------------------
# Catalog


def _p(text: str) -> Expr:
    return parse_expr(text)


def _lambert(case: str, branch: int, inner: str, h: str, w: str, nonzero: tuple[str, ...], window: Window) -> SolutionFamily:
    tag = "W0" if branch == 0 else "W-1"
    return SolutionFamily(
        f"case-{case}-lambert-{tag}",
        "lambert",
        f"Case {case}, Lambert branch {tag}",
        h=_p(h),
        w=_p(w),
        inner=_p(inner),
        branch=branch,
        nonzero=tuple(_p(e) for e in nonzero),
        window=window,
    )


def _param_16(a: sp.Rational, window: Window, s_range: tuple[float, float]) -> SolutionFamily:
    e = a / (a - 1)
    g = S - sp.Abs(S) ** e - Z2 / Z1**a
    h = Z1 ** (a - 1) * S
    if a == sp.Rational(2, 3):
        w = Z1 * (S**3 / 6 - sp.log(sp.Abs(S)) + sp.Rational(4, 3) * S**-3)
    else:
        k1 = a * (4 * a - 3) / (2 * (3 * a - 2) * (2 * a - 1))
        k2 = a**2 / ((2 * a - 1) * (3 * a - 1))
        w = Z1 ** (3 * a - 1) * (S**3 / 6 - k1 * sp.Abs(S) ** ((3 * a - 2) / (a - 1)) + k2 * S * sp.Abs(S) ** (2 * a / (a - 1)))
    return SolutionFamily(
        f"case-1.6-param-{a}",
        "parametric",
        f"Case 1.6, parametric solution with a = {a}, chart z1 > 0, s > 0",
        h=h,
        w=w,
        constraint=g,
        s_range=s_range,
        positive=(Z1,),
        window=window,
        parameters={"a": str(a), "c0": 1},
    )


def _param_18(a: int, window: Window) -> SolutionFamily:
    a = sp.Integer(a)
    v = S + a
    g = sp.exp(a * sp.atan(v)) / sp.sqrt(v**2 + 1) - sp.exp(-a * sp.atan(Z1)) * Z2 / sp.sqrt(Z1**2 + 1)
    h = Z2 / (Z1**2 + 1) * (S + Z1 + a)
    w = Z2**3 / (6 * (Z1**2 + 1)) * (
        Z1 - (3 * (a**2 + 1) * S**2 + 2 * (a**2 + 1) ** 2 - 4 * a * S**3) / (2 * a * (9 * a**2 + 1)) + (a**2 - 1) / (2 * a)
    )
    return SolutionFamily(
        f"case-1.8-param-{a}",
        "parametric",
        f"Case 1.8, parametric solution with a = {a}, s > 0",
        h=h,
        w=w,
        constraint=g,
        s_range=(1e-9, 10.0),
        window=window,
        parameters={"a": int(a), "c1": 1},
    )


def _closed(name: str, locus: str, h: str, w: str, window: Window, positive=(), nonzero=()) -> SolutionFamily:
    return SolutionFamily(
        name,
        "closed",
        locus,
        h=_p(h),
        w=_p(w),
        window=window,
        positive=tuple(_p(e) for e in positive),
        nonzero=tuple(_p(e) for e in nonzero),
        symbolic=True,
    )


def _build_catalog() -> dict:
    fams: list = [
        _closed("zero", "zero solution", "0", "0", ((-1.0, 1.0), (-1.0, 1.0))),
        _closed("case-1.3-plus", "Case 1.3, + sign", "sqrt(z1^2 - 2*z2) + z1", "(z1^2 - 2*z2)^(5/2)/15 + z1*z2^2/2", ((1.0, 2.0), (-1.0, 0.0)), positive=("z1^2 - 2*z2",)),
        _closed("case-1.3-minus", "Case 1.3, - sign", "-sqrt(z1^2 - 2*z2) + z1", "-(z1^2 - 2*z2)^(5/2)/15 + z1*z2^2/2", ((1.0, 2.0), (-1.0, 0.0)), positive=("z1^2 - 2*z2",)),
        _lambert("1.4", 0, "exp(-z1)*z2", "-z2/zeta", "-z2^3*(18*zeta^2 + 15*zeta + 4)/(108*zeta^3)", ("z2",), ((0.0, 1.0), (0.5, 1.5))),
        _lambert("1.4", -1, "exp(-z1)*z2", "-z2/zeta", "-z2^3*(18*zeta^2 + 15*zeta + 4)/(108*zeta^3)", ("z2",), ((1.0, 2.0), (-0.6, -0.2))),
        _lambert("1.5", 0, "z1*exp(-z2)", "-zeta/z1", "-zeta*(2*zeta^2 + 9*zeta + 12)/(12*z1)", ("z1",), ((0.5, 1.5), (0.0, 1.0))),
        _lambert("1.5", -1, "z1*exp(-z2)", "-zeta/z1", "-zeta*(2*zeta^2 + 9*zeta + 12)/(12*z1)", ("z1",), ((-2.0, -1.5), (2.0, 3.0))),
        _lambert("1.7", 0, "exp(z2/z1)/z1", "z2/z1 - zeta", "z2^3/(6*z1) - z1^2*zeta*(zeta^2/3 + 3*zeta/2 + 2)/2", ("z1",), ((1.0, 2.0), (-1.0, 1.0))),
        _lambert("1.7", -1, "exp(z2/z1)/z1", "z2/z1 - zeta", "z2^3/(6*z1) - z1^2*zeta*(zeta^2/3 + 3*zeta/2 + 2)/2", ("z1",), ((-3.0, -2.0), (1.5, 2.5))),
        _closed(
            "case-1.6-half",
            "Case 1.6, explicit solution with a = 1/2",
            "(z2 + sqrt(z2^2 + z1))/(2*z1)",
            "(z2^3 + (z2^2 + z1)^(3/2))/(12*z1) + z2*ln(abs(z2 + sqrt(z2^2 + z1)))/4 - sqrt(z2^2 + z1)/4",
            ((1.0, 2.0), (1.0, 2.0)),
            positive=("z2^2 + z1",),
            nonzero=("z1", "z2 + sqrt(z2^2 + z1)"),
        ),
        _closed(
            "case-1.6-two",
            "Case 1.6, explicit solution with a = 2",
            "2*z1 - 2*sqrt(z1^2 - z2)",
            "z1*z2^2 - 8*(z1^2 - z2)^(5/2)/15",
            ((1.0, 2.0), (-1.0, 0.5)),
            positive=("z1^2 - z2",),
        ),
        _param_16(sp.Rational(3, 4), ((1.0, 2.0), (-0.5, 0.5)), (1e-3, 10.0)),
        _param_16(sp.Integer(2), ((1.0, 2.0), (-0.5, 0.2)), (0.5, 10.0)),
        _param_16(sp.Rational(2, 3), ((1.0, 2.0), (-0.5, 0.5)), (1e-3, 10.0)),
        _closed(
            "case-1.8-zero",
            "Case 1.8, explicit solution with a = 0",
            "(z1*z2 + sqrt(z1^2 + 1 - z2^2))/(z1^2 + 1)",
            "z1*z2^3/(6*(z1^2 + 1)) + z2*arctan(z2/sqrt(z1^2 + 1 - z2^2))/2 + (2 + z2^2/(z1^2 + 1))*sqrt(z1^2 + 1 - z2^2)/6",
            ((0.0, 1.0), (-0.5, 0.5)),
            positive=("z1^2 + 1 - z2^2",),
        ),
        _param_18(1, ((0.0, 0.5), (0.8, 1.3))),
        _param_18(2, ((0.0, 0.2), (2.6, 3.4))),
        SolutionFamily(
            "implicit-burgers-arctan",
            "implicit",
            "implicit general solution of the inviscid Burgers equation, h(0, z2) = arctan(z2)",
            h0=_p("arctan(xi)"),
            window=((0.0, 1.0), (-1.0, 1.0)),
        ),
        SolutionFamily(
            "implicit-burgers-half-slice",
            "implicit",
            "implicit general solution with the z1 = 1 slice of case-1.6-half",
            h0=_p("(xi + sqrt(xi^2 + 1))/2"),
            t0=1.0,
            window=((0.5, 2.0), (-1.0, 1.0)),
        ),
        SolutionFamily(
            "implicit-burgers-case-1.8-slice",
            "implicit",
            "implicit general solution with the z1 = 0 slice of case-1.8-zero",
            h0=_p("sqrt(1 - xi^2)"),
            window=((0.0, 0.5), (-0.5, 0.5)),
        ),
    ]
    out = {f.name: f for f in fams}
    composites = [
        ("dn-zero-general-quadratic", "zero", "general", (1, 0, 1, 1, 0), "1 + t^2", 0.0, ((0.0, 1.0), (-1.5, -1.0), (0.0, 0.5))),
        ("dn-case-1.4-general-quadratic", "case-1.4-lambert-W0", "general", (1, 0, 1, 1, 0), "1 + t^2", 0.0, ((0.0, 1.0), (-1.5, -1.0), (0.0, 0.5))),
        ("dn-case-1.6-half-general-exp", "case-1.6-half", "general", (1, 0, 0, 1, 0), "exp(t)", 0.0, ((0.4, 0.8), (-0.5, 0.5), (-0.5, 0.5))),
        ("dn-zero-constant-first", "zero", "constant-first", (0,), "2", 0.0, ((0.0, 0.5), (-1.0, -0.5), (0.0, 1.0))),
        ("dn-case-1.4-constant-first", "case-1.4-lambert-W0", "constant-first", (1,), "2", 0.0, ((0.0, 0.5), (-1.0, -0.5), (0.0, 1.0))),
        ("dn-case-1.4-constant-second", "case-1.4-lambert-W0", "constant-second", (1,), "2", 0.0, ((0.5, 1.0), (-1.0, -0.5), (0.0, 1.0))),
    ]
    for name, base, kind, c, rho, t0, window in composites:
        out[name] = CompositeFamily(name, out[base], kind, c, rho, t0, window)
    return out


_CATALOG: dict | None = None

ALIASES = {"case-1.3": "case-1.3-plus"}


def catalog() -> dict:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return _CATALOG


def family(name: str):
    cat = catalog()
    key = ALIASES.get(name, name)
    if key not in cat:
        raise KeyError(f"unknown solution family {name!r}")
    return cat[key]


def family_names() -> list[str]:
    return sorted(catalog())


def reduced_families() -> list[SolutionFamily]:
    return [f for f in catalog().values() if isinstance(f, SolutionFamily)]


def composite_families() -> list[CompositeFamily]:
    return [f for f in catalog().values() if isinstance(f, CompositeFamily)]


# ---------------------------------------------------------------------------
# Export


def _fmt(v: float) -> str:
    return repr(float(v)) if math.isfinite(v) else "singular"


def export_grid(f, window=None, n: int = 10, step: float | None = None, tolerance: float = 1e-6) -> tuple[str, dict]:
    """CSV text and JSON manifest for a family evaluated on an n-point grid
    per axis (edges included)."""
    step = step or REDUCED_FD_STEP
    acc = REDUCED_FD_ACCURACY
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(f, CompositeFamily):
        win = window or f.window
        axes = [np.linspace(lo, hi, n) for lo, hi in win]
        t, x, y = np.meshgrid(*axes, indexing="ij")
        u = f.u_array(t, x, y)
        with np.errstate(all="ignore"):
            r = dn_residual_fd(f.u_array, t, x, y, step, accuracy=acc)
        writer.writerow(["t", "x", "y", "u", "residual"])
        for row in zip(t.ravel(), x.ravel(), y.ravel(), u.ravel(), r.ravel()):
            writer.writerow([_fmt(row[0]), _fmt(row[1]), _fmt(row[2]), _fmt(row[3]), _fmt(row[4])])
        values = r.ravel()
    else:
        win = window or f.window
        z1, z2 = grid(win, n)
        h = f.h_array(z1, z2)
        w = f.w_array(z1, z2) if f.has_w else np.full(z1.shape, np.nan)
        with np.errstate(all="ignore"):
            if f.has_w:
                r = reduced_residual_fd(f.w_array, z1, z2, step, accuracy=acc)
            else:
                r = burgers_residual_fd(f.h_array, z1, z2, step)
        writer.writerow(["z1", "z2", "h", "w", "residual"])
        for a, b, hv, wv, rv in zip(z1.ravel(), z2.ravel(), h.ravel(), w.ravel(), r.ravel()):
            ok = math.isfinite(hv)
            writer.writerow([_fmt(a), _fmt(b), _fmt(hv) if ok else "singular", _fmt(wv) if ok and math.isfinite(wv) else ("" if ok else "singular"), _fmt(rv) if ok else "singular"])
        values = np.where(np.isfinite(h.ravel()), r.ravel(), np.nan)
    finite = values[np.isfinite(values)]
    manifest = {
        "family": f.name,
        "parameters": f.describe(),
        "grid": {"window": [list(map(float, p)) for p in win], "points_per_axis": n},
        "tolerance": tolerance,
        "max_residual": float(np.max(finite)) if finite.size else None,
        "valid_points": int(finite.size),
    }
    return buf.getvalue(), manifest


def manifest_json(manifest: dict) -> str:
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Suite

REDUCED_TOL = 1e-6
COMPOSITE_TOL = 1e-5
IMPLICIT_TOL = 1e-8


def _timed_numeric(check_id: str, locus: str, tol: float, fn: Callable[[], float]) -> CheckResult:
    t = time.perf_counter()
    try:
        err = fn()
    except Exception as exc:  # reported, not raised
        return CheckResult.failure(check_id, locus, exc, (time.perf_counter() - t) * 1000)
    ms = (time.perf_counter() - t) * 1000
    return CheckResult.numeric(check_id, locus, bool(err < tol), err, ms, f"max residual {err:.3e} (tolerance {tol:g})")


IMPLICIT_SLICES = {"case-1.6-half": "implicit-burgers-half-slice", "case-1.8-zero": "implicit-burgers-case-1.8-slice"}


def _implicit_vs_closed(name: str) -> float:
    imp, closed = family(IMPLICIT_SLICES[name]), family(name)
    z1, z2 = grid(imp.window, 10, margin=0.05)
    return float(np.max(np.abs(imp.h_array(z1, z2) - closed.h_array(z1, z2))))


def verify_solutions(config: ProbeConfig | None = None, step: float | None = None, seed: int = 0) -> list[CheckResult]:
    """Residual checks for every catalog family plus the numerical kernels
    they rely on. ``step`` overrides each family's tuned FD step."""
    out: list[CheckResult] = []
    for f in reduced_families():
        if f.symbolic:
            t = time.perf_counter()
            res = reduced_residual_symbolic(f, config)
            out.append(CheckResult.make(f"solutions.symbolic.{f.name}", f.locus, res.verdict.holds, res, (time.perf_counter() - t) * 1000))
        if f.has_w:
            out.append(_timed_numeric(f"solutions.fd.{f.name}", f.locus, REDUCED_TOL, lambda f=f: residual(f, "fd", step=step)))
        else:
            out.append(_timed_numeric(f"solutions.burgers-fd.{f.name}", f.locus, IMPLICIT_TOL, lambda f=f: residual(f, "fd", step=step)))
    for f in composite_families():
        out.append(_timed_numeric(f"solutions.composite.{f.name}", f.locus, COMPOSITE_TOL, lambda f=f: residual(f, "fd", step=step)))
    for name in IMPLICIT_SLICES:
        out.append(
            _timed_numeric(
                f"solutions.implicit-vs-closed.{name}",
                "implicit Burgers solution against the closed form",
                IMPLICIT_TOL,
                lambda name=name: _implicit_vs_closed(name),
            )
        )
    out += verify_numerics(seed=seed)
    return out


def verify_numerics(n: int = 10_000, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []
    domains = {0: (-INV_E, 50.0), -1: (-INV_E, -1e-300)}
    for branch, (lo, hi) in domains.items():
        def run(branch=branch, lo=lo, hi=hi):
            x = rng.uniform(lo, hi, n) if branch == 0 else -np.exp(rng.uniform(np.log(1e-12), np.log(INV_E), n))
            w = lambert_w_array(branch, x)
            return float(np.max(np.abs(w * np.exp(w) - x) / np.maximum(1.0, np.abs(x))))

        out.append(_timed_numeric(f"numerics.lambert.W{branch}.residual", "Lambert W branches", 1e-12, run))
    out.append(
        _timed_numeric(
            "numerics.lambert.W0.at-one",
            "Lambert W branches",
            1e-12,
            lambda: abs(float(lambert_w_array(0, np.array([1.0]))[0]) - 0.5671432904097838),
        )
    )
    return out


__all__ = [
    "BranchDomainError",
    "CompositeFamily",
    "MultipleRootsError",
    "NoRootError",
    "SingularPoint",
    "SolutionError",
    "SolutionFamily",
    "TransportedFamily",
    "catalog",
    "compose_dN_solution",
    "eval_h",
    "eval_w",
    "export_grid",
    "family",
    "family_names",
    "implicit_burgers_eval",
    "pullback",
    "residual",
    "composite_transform",
    "transport",
    "verify_numerics",
    "verify_solutions",
    "w22_consistency",
]
