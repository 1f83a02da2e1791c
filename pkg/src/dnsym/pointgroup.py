"""Point-transformation families of the reduced equation, of the full
equation and of the Burgers equation; composition, inversion, pushforward
of vector fields, adjoint-table checks and numeric transport of solutions.

A reduced-equation transformation is stored as (c1..c6, W0, W1):

    z1~ = (c1 z1 + c2)/(c3 z1 + c4)
    z2~ = (z2 + c5 z1 + c6)/(c3 z1 + c4)
    w~  = w/(D (c3 z1 + c4)) - c3 z2^3/(6 D (c3 z1 + c4)^2)
          - (c3 c6 - c4 c5) z2^2/(2 D (c3 z1 + c4)^2) + W1(z1) z2 + W0(z1)

with D = c1 c4 - c2 c3.  The spatial part is the projective action of
[[c1, c2, 0], [c3, c4, 0], [c5, c6, 1]] on (z1, 1, z2), so composition is a
matrix product and the W-terms are recovered by subtraction.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable

import sympy as sp

from dnsym.liealgebra import catalog, in_subspace, generic_element, match_to_basis
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

Z1, Z2, W = var("z1"), var("z2"), jet("w", 0, 0)
H = jet("h", 0, 0)


class TransformError(ValueError):
    pass


class SingularLocus(TransformError):
    pass


# ---------------------------------------------------------------------------
# Reduced-equation pseudogroup


@dataclass(frozen=True)
class TransformG13:
    c: tuple[Expr, Expr, Expr, Expr, Expr, Expr]
    W0: Expr = sp.Integer(0)
    W1: Expr = sp.Integer(0)
    label: str = ""

    def __post_init__(self):
        c = tuple(sp.sympify(v) for v in self.c)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "W0", sp.sympify(self.W0))
        object.__setattr__(self, "W1", sp.sympify(self.W1))
        if normalize(self.delta) == 0:
            raise TransformError("c1*c4 - c2*c3 must be nonzero")

    @property
    def delta(self) -> Expr:
        c1, c2, c3, c4, _, _ = self.c
        return c1 * c4 - c2 * c3

    def matrix(self) -> sp.Matrix:
        c1, c2, c3, c4, c5, c6 = self.c
        return sp.Matrix([[c1, c2, 0], [c3, c4, 0], [c5, c6, 1]])

    def denominator(self, z1: Expr = Z1) -> Expr:
        return self.c[2] * z1 + self.c[3]

    def bare_w(self, z1: Expr = Z1, z2: Expr = Z2, w: Expr = W) -> Expr:
        c1, c2, c3, c4, c5, c6 = self.c
        d = self.delta
        q = c3 * z1 + c4
        return w / (d * q) - c3 * z2**3 / (6 * d * q**2) - (c3 * c6 - c4 * c5) * z2**2 / (2 * d * q**2)

    def components(self, z1: Expr = Z1, z2: Expr = Z2, w: Expr = W) -> tuple[Expr, Expr, Expr]:
        c1, c2, c3, c4, c5, c6 = self.c
        q = c3 * z1 + c4
        wt = self.bare_w(z1, z2, w) + self.W1.subs(Z1, z1) * z2 + self.W0.subs(Z1, z1)
        return ((c1 * z1 + c2) / q, (z2 + c5 * z1 + c6) / q, wt)

    def spatial_inverse(self, z1: Expr = Z1, z2: Expr = Z2) -> tuple[Expr, Expr]:
        c1, c2, c3, c4, c5, c6 = self.c
        x1 = (c4 * z1 - c2) / (-c3 * z1 + c1)
        x2 = z2 * (c3 * x1 + c4) - c5 * x1 - c6
        return normalize(x1), normalize(x2)

    def equals(self, other: "TransformG13", config: ProbeConfig | None = None) -> bool:
        pairs = list(zip(self.c, other.c)) + [(self.W0, other.W0), (self.W1, other.W1)]
        return all(is_zero(a - b, config).verdict.holds for a, b in pairs)

    def to_record(self) -> dict:
        return {
            "family": "G13",
            "c": [to_text(v) for v in self.c],
            "W0": to_text(self.W0),
            "W1": to_text(self.W1),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "TransformG13":
        fam = rec.get("family", "G13")
        if fam == "G13":
            return cls(tuple(parse_expr(v) for v in rec["c"]), parse_expr(rec.get("W0", "0")), parse_expr(rec.get("W1", "0")))
        params = [parse_expr(p) if isinstance(p, str) else sp.sympify(p) for p in rec.get("params", [])]
        return elementary(fam, *params)


def fit_w_terms(c, w_component: Expr) -> tuple[Expr, Expr]:
    """W0, W1 such that ``w_component`` equals the form with constants ``c``."""
    probe = TransformG13(c)
    rest = normalize(w_component - probe.bare_w())
    if normalize(sp.diff(rest, W)) != 0:
        raise TransformError("w-component is not of the pseudogroup form")
    w1 = normalize(sp.diff(rest, Z2))
    w0 = normalize(rest - w1 * Z2)
    if normalize(sp.diff(w1, Z2)) != 0 or normalize(sp.diff(w0, Z2)) != 0:
        raise TransformError("remainder is not affine in z2")
    return w0, w1


def _from_matrix(m: sp.Matrix) -> tuple[Expr, ...]:
    m = m.applyfunc(normalize)
    if normalize(m[2, 2] - 1) != 0 or m[0, 2] != 0 or m[1, 2] != 0:
        raise TransformError("matrix outside the pseudogroup")
    return (m[0, 0], m[0, 1], m[1, 0], m[1, 1], m[2, 0], m[2, 1])


def compose(phi: TransformG13, psi: TransformG13) -> TransformG13:
    """phi after psi."""
    c = _from_matrix(phi.matrix() * psi.matrix())
    z1, z2, w = psi.components()
    wt = phi.components(z1, z2, w)[2]
    w0, w1 = fit_w_terms(c, wt)
    return TransformG13(c, w0, w1)


def invert(phi: TransformG13) -> TransformG13:
    c = _from_matrix(phi.matrix().inv())
    x1, x2 = phi.spatial_inverse()
    c1, c2, c3, c4, c5, c6 = phi.c
    q = c3 * x1 + c4
    rest = phi.bare_w(x1, x2, 0) + phi.W1.subs(Z1, x1) * x2 + phi.W0.subs(Z1, x1)
    w_old = phi.delta * q * (W - rest)
    w0, w1 = fit_w_terms(c, w_old)
    return TransformG13(c, w0, w1)


IDENTITY = TransformG13((1, 0, 0, 1, 0, 0))


def elementary(family: str, *params) -> TransformG13:
    """Elementary one-parameter families; parameters may be symbolic."""
    p = [sp.sympify(v) for v in params]
    one, zero = sp.Integer(1), sp.Integer(0)
    if family == "P1":
        return TransformG13((one, p[0], zero, one, zero, zero), label=family)
    if family == "D1":
        return TransformG13((p[0], zero, zero, one, zero, zero), label=family)
    if family == "K":
        return TransformG13((one, zero, -p[0], one, zero, zero), label=family)
    if family == "D2":
        return TransformG13((1 / p[0], zero, zero, 1 / p[0], zero, zero), label=family)
    if family == "P2":
        return TransformG13((one, zero, zero, one, zero, p[0]), label=family)
    if family == "H":
        c5 = p[0]
        return TransformG13((one, zero, zero, one, c5, zero), c5**3 * Z1**2 / 6, c5**2 * Z1 / 2, label=family)
    if family == "R":
        return TransformG13((one, zero, zero, one, zero, zero), zero, p[0], label=family)
    if family == "Z":
        return TransformG13((one, zero, zero, one, zero, zero), p[0], zero, label=family)
    if family == "Qplus":
        # given by (cos, sin) of the rotation angle
        cs, sn = p
        return TransformG13((cs, sn, -sn, cs, zero, zero), label=family)
    if family == "I":
        return TransformG13((-one, zero, zero, one, zero, zero), label=family)
    if family == "J":
        return TransformG13((-one, zero, zero, -one, zero, zero), label=family)
    raise KeyError(f"unknown elementary family {family!r}")


ELEMENTARY_FAMILIES = ("P1", "D1", "K", "D2", "P2", "H", "R", "Z", "Qplus")


# ---------------------------------------------------------------------------
# Pushforward


def apply_field(X: VectorField, f: Expr) -> Expr:
    return X.apply(f)


def pushforward(phi: TransformG13, X: VectorField) -> VectorField:
    """phi_* X written in the tilde coordinates (reusing the symbols z1, z2, w)."""
    if X.space != "a13":
        raise TransformError("pushforward acts on reduced-equation fields")
    comps = phi.components()
    inv = invert(phi).components()
    subs = {Z1: inv[0], Z2: inv[1], W: inv[2]}
    out = tuple(normalize(X.apply(c).xreplace(subs)) for c in comps)
    return VectorField("a13", out)


# ---------------------------------------------------------------------------
# Adjoint table


@lru_cache(maxsize=None)
def _adjoint_raw() -> dict:
    text = resources.files("dnsym").joinpath("data/adjoint.json").read_text(encoding="utf-8")
    return json.loads(text)


_TAU = sp.Symbol("tau_q", real=True)
_QC = (1 - _TAU**2) / (1 + _TAU**2)
_QS = 2 * _TAU / (1 + _TAU**2)


def family_instance(name: str) -> tuple[TransformG13, dict]:
    """Symbolic instance of an elementary family with its parameter bindings
    for the expected-value expressions of the adjoint table."""
    raw = _adjoint_raw()["families"][name]
    param = raw["parameter"]
    if name == "Qplus":
        return elementary("Qplus", _QC, _QS), {var("c"): _QC, var("s"): _QS}
    if raw.get("functional"):
        return elementary(name, opaque(param)(Z1)), {}
    sym = var(param)
    return elementary(name, sym), {}


def _expected(cat, terms, bindings) -> VectorField:
    total = VectorField.zero("a13")
    opaque_names = {"alpha", "sigma", "W0", "W1"}
    for gname, arg in terms:
        g = cat.gen(gname)
        value = parse_expr(arg, opaque_names=opaque_names).xreplace(bindings)
        total = total + (g.field(value) if g.slot else g.field().scale(value))
    return total


def verify_adjoint_table(config: ProbeConfig | None = None) -> list[CheckResult]:
    """Every listed image plus identity images for unlisted generator/family pairs."""
    cat = catalog("a13")
    raw = _adjoint_raw()
    locus = raw["locus"]
    out = []
    for fam in raw["families"]:
        phi, bindings = family_instance(fam)
        listed = {row["generator"]: row["image"] for row in raw["rows"] if row["family"] == fam}
        for g in cat.generators:
            start = time.perf_counter()
            try:
                X = g.field()
                image = pushforward(phi, X)
                if g.name in listed:
                    expected = _expected(cat, listed[g.name], bindings)
                    tag = ""
                else:
                    expected = X
                    tag = "=identity"
                diff = (image - expected).normalized()
                verdict = diff.is_zero(config)
                ok = verdict.verdict.holds and match_to_basis(image, cat) is not None
                out.append(
                    CheckResult.make(f"adjoint.{fam}.{g.name}{tag}", locus, ok, verdict, (time.perf_counter() - start) * 1000)
                )
            except Exception as exc:  # noqa: BLE001 - reported as an error row
                out.append(CheckResult.failure(f"adjoint.{fam}.{g.name}", locus, exc))
    return out


def verify_megaideal_stability(config: ProbeConfig | None = None, subspaces=("m2", "m3", "m6", "m7")) -> list[CheckResult]:
    cat = catalog("a13")
    locus = "megaideal stability under elementary transformations"
    out = []
    for fam in ELEMENTARY_FAMILIES:
        phi, _ = family_instance(fam)
        for sub in subspaces:
            start = time.perf_counter()
            x = generic_element(cat, sub, "m")
            ok = in_subspace(pushforward(phi, x), cat, sub, config)
            out.append(
                CheckResult.make(
                    f"megaideal.{sub}.{fam}",
                    locus,
                    ok,
                    ZeroResult(Verdict.ZERO if ok else Verdict.NONZERO),
                    (time.perf_counter() - start) * 1000,
                )
            )
    return out


def verify_special_elements(config: ProbeConfig | None = None) -> list[CheckResult]:
    """The rotation by pi is the reflection (z1, -z2, -w); the quarter turn
    factorizes through shifts and the projective family."""
    locus = "one-parameter group generated by P1 + K"
    out = []
    q_pi = elementary("Qplus", -1, 0)
    comps = q_pi.components()
    ok = q_pi.equals(elementary("J"), config) and all(normalize(a - b) == 0 for a, b in zip(comps, (Z1, -Z2, -W)))
    out.append(CheckResult.make("transforms.Qplus(pi)=J", locus, ok, ZeroResult(Verdict.ZERO if ok else Verdict.NONZERO)))
    k_prime = elementary("Qplus", 0, -1)
    chain = compose(elementary("P1", -1), compose(elementary("K", -1), elementary("P1", -1)))
    ok = k_prime.equals(chain, config)
    out.append(CheckResult.make("transforms.Qplus(-pi/2)=P1.K.P1", locus, ok, ZeroResult(Verdict.ZERO if ok else Verdict.NONZERO)))
    return out


# ---------------------------------------------------------------------------
# Burgers group


@dataclass(frozen=True)
class TransformBurgers:
    c: tuple[Expr, Expr, Expr, Expr, Expr, Expr]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(sp.sympify(v) for v in self.c))
        c1, c2, c3, c4, _, _ = self.c
        if normalize(c1 * c4 - c2 * c3) == 0:
            raise TransformError("c1*c4 - c2*c3 must be nonzero")

    def components(self, z1: Expr = Z1, z2: Expr = Z2, h: Expr = H) -> tuple[Expr, Expr, Expr]:
        c1, c2, c3, c4, c5, c6 = self.c
        d = c1 * c4 - c2 * c3
        q = c3 * z1 + c4
        return ((c1 * z1 + c2) / q, (z2 + c5 * z1 + c6) / q, (q * h - c3 * z2 - c3 * c6 + c4 * c5) / d)

    def to_record(self) -> dict:
        return {"family": "Burgers", "c": [to_text(v) for v in self.c]}


def induced_burgers(phi: TransformG13) -> TransformBurgers:
    """Drops W0 and W1, which act trivially on h = w_22."""
    return TransformBurgers(phi.c)


def second_z2_derivative_identity(phi: TransformG13) -> Expr:
    """w~_{z2~ z2~} minus the Burgers h~ formula at h = w_22; zero for every phi."""
    c1, c2, c3, c4, c5, c6 = phi.c
    w_fun = sp.Function("wf")(Z1, Z2)
    wt = phi.components(Z1, Z2, w_fun)[2]
    q = c3 * Z1 + c4
    # z1~ depends on z1 only, so d/dz2~ at fixed z1~ is q * d/dz2
    second = q * sp.diff(q * sp.diff(wt, Z2), Z2)
    h_expr = induced_burgers(phi).components(Z1, Z2, sp.diff(w_fun, Z2, 2))[2]
    return sp.simplify(second - h_expr)


# ---------------------------------------------------------------------------
# Full-equation group


@dataclass(frozen=True)
class TransformG:
    """t~ = T(t), x~ = C T'^(1/3) x + X0, y~ = C T'^(1/3) y + Y0, u~ as in the
    standard form; ``swap`` composes with the exchange x <-> y afterwards."""

    T: Expr
    C: Expr = sp.Integer(1)
    X0: Expr = sp.Integer(0)
    Y0: Expr = sp.Integer(0)
    W0: Expr = sp.Integer(0)
    W1: Expr = sp.Integer(0)
    W2: Expr = sp.Integer(0)
    swap: bool = False

    def __post_init__(self):
        for name in ("T", "C", "X0", "Y0", "W0", "W1", "W2"):
            object.__setattr__(self, name, sp.sympify(getattr(self, name)))
        if normalize(self.C) == 0:
            raise TransformError("C must be nonzero")
        if normalize(sp.diff(self.T, var("t"))) == 0:
            raise TransformError("T' must be nonzero")

    def components(self):
        t, x, y, u = var("t"), var("x"), var("y"), jet("u", 0, 0, 0)
        tp = sp.diff(self.T, t)
        tpp = sp.diff(self.T, t, 2)
        cube = sp.sign(tp) * sp.Abs(tp) ** sp.Rational(1, 3)
        xt = self.C * cube * x + self.X0
        yt = self.C * cube * y + self.Y0
        ut = (
            self.C**3 * u
            - self.C**3 * tpp / (18 * tp) * (x**3 + y**3)
            - self.C**2 / (2 * cube) * (sp.diff(self.X0, t) * x**2 + sp.diff(self.Y0, t) * y**2)
            + self.W1 * x
            + self.W2 * y
            + self.W0
        )
        if self.swap:
            xt, yt = yt, xt
        return self.T, xt, yt, ut


def transport_dn(g: TransformG, u: Callable, t_range: tuple[float, float] = (-10.0, 10.0)) -> Callable:
    """Evaluator of the transformed solution at tilde points (scalar inputs)."""
    from dnsym.numerics import find_root, scan_brackets

    t, x, y, usym = var("t"), var("x"), var("y"), jet("u", 0, 0, 0)
    T, xt, yt, ut = g.components()
    f_T = compile_expr(T, (t,))
    cube = compile_expr(sp.sign(sp.diff(g.T, t)) * sp.Abs(sp.diff(g.T, t)) ** sp.Rational(1, 3), (t,))
    x0 = compile_expr(g.X0, (t,))
    y0 = compile_expr(g.Y0, (t,))
    f_u = compile_expr(ut, (t, x, y, usym))
    C = float(g.C)

    def invert_t(tt: float) -> float:
        fn = lambda s: float(f_T(s)) - tt  # noqa: E731
        brackets = scan_brackets(fn, *t_range, 400)
        if len(brackets) != 1:
            raise TransformError(f"T is not invertible at {tt}")
        b = brackets[0]
        return b.lo if b.lo == b.hi else find_root(fn, b, 1e-14)

    def evaluator(tt, xt_, yt_):
        s = invert_t(float(tt))
        if g.swap:
            xt_, yt_ = yt_, xt_
        k = C * float(cube(s))
        xs = (xt_ - float(x0(s))) / k
        ys = (yt_ - float(y0(s))) / k
        return float(f_u(s, xs, ys, u(s, xs, ys)))

    return evaluator


# ---------------------------------------------------------------------------
# Numeric transport of reduced-equation solutions


def numeric_transform(phi: TransformG13):
    """(forward spatial map, spatial inverse, w-map) as vectorized callables."""
    x1, x2 = phi.spatial_inverse()
    inv1 = compile_expr(x1, (Z1, Z2))
    inv2 = compile_expr(x2, (Z1, Z2))
    wmap = compile_expr(phi.components()[2], (Z1, Z2, W))
    fwd = [compile_expr(c, (Z1, Z2)) for c in phi.components()[:2]]
    den = compile_expr(phi.denominator(), (Z1,))
    return fwd, (inv1, inv2), wmap, den


def transport_solution(phi: TransformG13, family, tol: float = 1e-12):
    """Image of a solution family under phi, evaluated at tilde points."""
    from dnsym.solutions import TransportedFamily

    return TransportedFamily(phi, family)


# ---------------------------------------------------------------------------
# Listing


def describe_families() -> list[tuple[str, str]]:
    raw = _adjoint_raw()
    out = [(f"G13.{name}", raw["families"][name]["title"]) for name in raw["families"]]
    out += [
        ("G13.I", "reflection (z1, z2, w) -> (-z1, z2, -w)"),
        ("G13.J", "rotation by pi: (z1, z2, w) -> (z1, -z2, -w)"),
        ("G.general", "full-equation pseudogroup form with J swap"),
        ("Burgers.induced", "induced Burgers group, W-terms dropped"),
    ]
    return out
