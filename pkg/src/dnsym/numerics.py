"""Numerical kernels: Lambert W, bracketed roots, adaptive quadrature,
finite-difference stencils and a method-of-characteristics Burgers solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Sequence

import numpy as np

INV_E = math.exp(-1.0)
HALLEY_MAX_STEPS = 50


def working_dtype(*values) -> type:
    """Extended precision if any input already carries it, else float64."""
    if any(np.asarray(v).dtype == np.longdouble for v in values):
        return np.longdouble
    return np.float64


class NumericsError(Exception):
    pass


class DomainViolation(NumericsError):
    pass


class BracketError(NumericsError):
    pass


class ConvergenceError(NumericsError):
    pass


class ShockError(NumericsError):
    pass


# ---------------------------------------------------------------------------
# Lambert W


def _branch_point_seed(x: float, branch: int) -> float:
    p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
    sgn = 1.0 if branch == 0 else -1.0
    q = sgn * p
    return -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q**3


def _seed(branch: int, x: float) -> float:
    if branch == 0:
        if x > 0.0:
            lx = math.log1p(x)
            return lx * (1.0 - math.log1p(lx) / (2.0 + lx))
        if x > -0.25:
            return x * (1.0 - x)
        return _branch_point_seed(x, 0)
    if x < -0.25:
        return _branch_point_seed(x, -1)
    lx = math.log(-x)
    return lx - math.log(-lx)


def lambert_w(branch: int, x: float) -> float:
    """Real Lambert W on branch 0 or -1 by Halley iteration."""
    if branch not in (0, -1):
        raise ValueError("branch must be 0 or -1")
    x = float(x)
    if math.isnan(x) or x < -INV_E * (1.0 + 1e-15):
        raise DomainViolation(f"lambertW{branch} undefined at {x}")
    if branch == -1 and x >= 0.0:
        raise DomainViolation(f"lambertW_1 undefined at {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    if abs(x + INV_E) < 1e-14:
        return _branch_point_seed(max(x, -INV_E), branch)
    w = _seed(branch, x)
    scale = max(1.0, abs(x))
    for _ in range(HALLEY_MAX_STEPS):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w -= step
        if abs(step) <= 4e-16 * (1.0 + abs(w)):
            break
    if abs(w * math.exp(w) - x) > 1e-12 * scale:
        raise ConvergenceError(f"lambertW{branch}({x}) did not converge")
    return w


def lambert_w_array(branch: int, x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`lambert_w`; NaN outside the branch domain.

    Long double input is iterated in long double.
    """
    if branch not in (0, -1):
        raise ValueError("branch must be 0 or -1")
    dt = working_dtype(x)
    x = np.asarray(x, dtype=dt)
    e = np.exp(dt(1.0))
    inv_e = 1.0 / e
    tol = 4.0 * float(np.finfo(dt).eps)
    ok = np.isfinite(x) & (x >= -inv_e * (1.0 + 1e-15))
    if branch == -1:
        ok &= x < 0.0
    xs = np.where(ok, x, dt(-0.1) if branch == -1 else dt(1.0))
    near = np.abs(xs + inv_e) < 1e-14
    p = np.sqrt(np.maximum(0.0, 2.0 * (e * xs + 1.0)))
    q = p if branch == 0 else -p
    bp = -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q**3
    with np.errstate(all="ignore"):
        if branch == 0:
            lx = np.log1p(np.maximum(xs, 0.0))
            pos = lx * (1.0 - np.log1p(lx) / (2.0 + lx))
            w = np.where(xs > 0.0, pos, np.where(xs > -0.25, xs * (1.0 - xs), bp))
        else:
            lx = np.log(-np.minimum(xs, -1e-300))
            w = np.where(xs < -0.25, bp, lx - np.log(-lx))
        for _ in range(HALLEY_MAX_STEPS):
            ew = np.exp(w)
            f = w * ew - xs
            wp1 = w + 1.0
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = np.where((wp1 != 0.0) & (denom != 0.0) & ~near, f / denom, 0.0)
            w = w - step
            if np.all(np.abs(step) <= tol * (1.0 + np.abs(w))):
                break
    w = np.where(near, bp, w)
    w = np.where(xs == 0.0, 0.0, w)
    return np.where(ok, w, np.nan)


# ---------------------------------------------------------------------------
# Root finding


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float


def find_root(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Bisection safeguarded secant (regula falsi steps accepted only when
    they shrink the bracket fast enough)."""
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not (math.isfinite(fa) and math.isfinite(fb)) or fa * fb > 0.0:
        raise BracketError(f"invalid bracket [{a}, {b}]")
    for _ in range(max_iter):
        width = b - a
        x = b - fb * (b - a) / (fb - fa) if fb != fa else 0.5 * (a + b)
        # fall back to bisection when the secant point hugs an endpoint
        if not (a + 0.05 * width < x < b - 0.05 * width):
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0 or abs(fx) <= tol * 1e-3:
            return x
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        if b - a <= tol * max(1.0, abs(x)) * 1e-3:
            break
    x = a if abs(fa) < abs(fb) else b
    if abs(f(x)) > tol and (b - a) > tol:
        raise ConvergenceError("root finding exhausted its iteration budget")
    return x


def scan_brackets(f: Callable[[float], float], lo: float, hi: float, cells: int) -> list[Bracket]:
    """Cells of a uniform partition where ``f`` changes sign."""
    xs = np.linspace(lo, hi, cells + 1)
    vals = []
    for x in xs:
        try:
            v = f(float(x))
        except (ValueError, ZeroDivisionError, OverflowError, NumericsError):
            v = math.nan
        vals.append(v)
    out = []
    for i in range(cells):
        va, vb = vals[i], vals[i + 1]
        if not (math.isfinite(va) and math.isfinite(vb)):
            continue
        if va == 0.0:
            out.append(Bracket(float(xs[i]), float(xs[i])))
        elif va * vb < 0.0:
            out.append(Bracket(float(xs[i]), float(xs[i + 1])))
    return out


# ---------------------------------------------------------------------------
# Quadrature


def integrate_1d(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0
    budget = [200_000]

    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(lo, hi, fa, fm, fb, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        budget[0] -= 2
        if budget[0] < 0:
            raise ConvergenceError("quadrature budget exceeded")
        left = simpson(fa, flm, fm, lo, mid)
        right = simpson(fm, frm, fb, mid, hi)
        delta = left + right - whole
        if depth <= 0:
            raise ConvergenceError("quadrature depth exceeded")
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return rec(lo, mid, fa, flm, fm, left, eps / 2.0, depth - 1) + rec(mid, hi, fm, frm, fb, right, eps / 2.0, depth - 1)

    # a minimum subdivision guards against lucky agreement on the first level
    pieces = 8
    edges = np.linspace(a, b, pieces + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        flo, fhi = f(float(lo)), f(float(hi))
        fmid = f(0.5 * float(lo + hi))
        whole = simpson(flo, fmid, fhi, float(lo), float(hi))
        total += rec(float(lo), float(hi), flo, fmid, fhi, whole, tol / pieces, max_depth)
    return total


# ---------------------------------------------------------------------------
# Finite differences


@lru_cache(maxsize=None)
def central_weights(order: int, accuracy: int = 4) -> tuple[tuple[int, Fraction], ...]:
    """Exact central-difference weights (offset, weight) for a unit step."""
    if order == 0:
        return ((0, Fraction(1)),)
    half = (order + accuracy - 1) // 2
    offsets = list(range(-half, half + 1))
    n = len(offsets)
    # solve sum_j w_j o_j^m = m! delta_{m,order} exactly
    rows = [[Fraction(o) ** m for o in offsets] for m in range(n)]
    rhs = [Fraction(math.factorial(order) if m == order else 0) for m in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col] / rows[col][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
                rhs[r] -= factor * rhs[col]
    weights = [rhs[i] / rows[i][i] for i in range(n)]
    return tuple((o, w) for o, w in zip(offsets, weights) if w != 0)


def _fd_once(u, point: Sequence, multi_index: Sequence[int], step: float, accuracy: int = 4):
    stencils = [central_weights(k, accuracy) for k in multi_index]
    total = 0.0
    for combo in product(*stencils):
        weight = 1.0
        shifted = []
        for (offset, w), x in zip(combo, point):
            weight *= float(w)
            shifted.append(x + offset * step)
        value = np.asarray(u(*shifted))
        total = total + weight * value.astype(working_dtype(value, *point))
    return total / step ** sum(multi_index)


def fd_partial(
    u: Callable,
    point: Sequence,
    multi_index: Sequence[int],
    step: float = 1e-3,
    richardson: bool = False,
    accuracy: int = 4,
):
    """Central-difference partial derivative of even ``accuracy`` order (default 4).

    ``u`` may be vectorized, in which case ``point`` components can be arrays.
    Non-finite stencil values raise :class:`DomainViolation` for scalar input.
    """
    if len(point) != len(multi_index):
        raise ValueError("point and multi-index dimensions differ")
    if accuracy < 2 or accuracy % 2:
        raise ValueError("accuracy must be a positive even integer")
    value = _fd_once(u, point, multi_index, step, accuracy)
    if richardson:
        fine = _fd_once(u, point, multi_index, step / 2.0, accuracy)
        gain = 2.0**accuracy
        value = (gain * fine - value) / (gain - 1.0)
    if np.ndim(value) == 0 and not math.isfinite(float(value)):
        raise DomainViolation("stencil left the evaluator's domain")
    return value


def fd_step_for(order: int, base: float) -> float:
    """Step used for a derivative of total ``order``; balances truncation
    against cancellation for higher orders."""
    return base * (1.0, 1.0, 3.0, 10.0, 15.0)[min(order, 4)]


# ---------------------------------------------------------------------------
# Method of characteristics


def moc_burgers(
    h0: Callable[[float], float],
    z1: float,
    z2: float,
    *,
    lo: float = -10.0,
    hi: float = 10.0,
    cells: int = 400,
    tol: float = 1e-13,
    dh0: Callable[[float], float] | None = None,
    t0: float = 0.0,
) -> float:
    """Solve h1 + h h2 = 0 with h(t0, z2) = h0(z2) before shock formation.

    The foot of the characteristic solves xi + h0(xi) (z1 - t0) = z2.
    """
    dz = z1 - t0

    def g(xi: float) -> float:
        return xi + h0(xi) * dz - z2

    brackets = scan_brackets(g, lo, hi, cells)
    if not brackets:
        raise BracketError(f"no characteristic reaches ({z1}, {z2})")
    if len(brackets) > 1:
        raise ShockError(f"characteristics cross at ({z1}, {z2})")
    b = brackets[0]
    xi = b.lo if b.lo == b.hi else find_root(g, b, tol)
    slope = dh0(xi) if dh0 is not None else (h0(xi + 1e-6) - h0(xi - 1e-6)) / 2e-6
    if 1.0 + slope * dz <= 0.0:
        raise ShockError(f"characteristic fan folds at ({z1}, {z2})")
    return h0(xi)


def moc_burgers_array(
    h0: Callable[[np.ndarray], np.ndarray],
    dh0: Callable[[np.ndarray], np.ndarray],
    z1,
    z2,
    *,
    lo: float = -10.0,
    hi: float = 10.0,
    cells: int = 400,
    t0: float = 0.0,
) -> np.ndarray:
    """Vectorized :func:`moc_burgers`; points with no foot, several feet or a
    folded fan give NaN instead of raising."""
    z1a, z2a = np.broadcast_arrays(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float))
    dz, target = (z1a - t0).reshape(-1), z2a.reshape(-1)
    grid = np.linspace(lo, hi, cells + 1)
    with np.errstate(all="ignore"):
        vals = grid[None, :] + np.asarray(h0(grid), dtype=float)[None, :] * dz[:, None] - target[:, None]
        finite = np.isfinite(vals)
        exact = (vals[:, :-1] == 0) & finite[:, :-1]
        hits = ((vals[:, :-1] * vals[:, 1:] < 0) & finite[:, :-1] & finite[:, 1:]) | exact
        count = hits.sum(axis=1)
        cell = np.argmax(hits, axis=1)
        a, b = grid[cell], grid[np.minimum(cell + 1, cells)]

        def g(xi):
            return xi + h0(xi) * dz - target

        fa = g(a)
        for _ in range(100):
            m = 0.5 * (a + b)
            fm = g(m)
            left = fa * fm <= 0
            b = np.where(left, m, b)
            a = np.where(left, a, m)
            fa = np.where(left, fa, fm)
        xi = np.where(exact[np.arange(len(cell)), cell], grid[cell], 0.5 * (a + b))
        h = np.asarray(h0(xi), dtype=float)
        ok = (count == 1) & (1.0 + np.asarray(dh0(xi), dtype=float) * dz > 0.0)
    return np.where(ok, h, np.nan).reshape(z1a.shape)
