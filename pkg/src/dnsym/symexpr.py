"""Symbolic expression core.

Expressions are plain sympy trees.  This module adds the pieces sympy does
not provide out of the box: indexed jet coordinates such as ``w[1,2]``,
single-argument opaque functions that track their derivative order
(``alpha'(z1)``), a parser and printer for the text grammar below, a
radical-aware normal form and a zero oracle that falls back to random
probing when transcendental or opaque nodes survive normalization.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = number | name [ index ] | name { "'" } "(" expr ")" | "(" expr ")" ;
    index   = "[" int { "," int } "]" ;

Named functions: exp, ln, sqrt, abs, sign, sin, cos, arctan, lambertW0,
lambertW_1.  Any other name applied to an argument must be declared as an
opaque function.
"""

from __future__ import annotations

import enum
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import numpy as np
import sympy as sp
from sympy.printing.str import StrPrinter

Expr = sp.Expr

DEFAULT_OPAQUE = frozenset(
    {
        "alpha", "beta", "gamma", "sigma", "tau", "chi", "rho", "phi", "psi",
        "kappa", "mu", "nu", "lam", "varrho", "W0", "W1", "W2", "X0", "Y0", "T",
    }
)

NAMED_FUNCTIONS = (
    "exp", "ln", "sqrt", "abs", "sign", "sin", "cos", "arctan", "lambertW0", "lambertW_1",
)


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownFunctionError(ParseError):
    pass


class JetIndexError(ParseError):
    pass


class EvaluationError(ExprError):
    pass


class DomainError(EvaluationError):
    pass


class UnboundVariableError(EvaluationError):
    pass


class PoleError(ExprError):
    """Every probe point hit a pole or a domain violation."""


# ---------------------------------------------------------------------------
# Variables


class VarKind(enum.Enum):
    INDEPENDENT = "independent"
    JET = "jet"
    PARAMETER = "parameter"


@dataclass(frozen=True)
class VarId:
    name: str
    kind: VarKind
    base: str | None = None
    index: tuple[int, ...] = ()


_INDEPENDENT = {"z1", "z2", "t", "x", "y", "omega"}
_INDEXED_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(\d+(?:,\d+)*)\]$")


def var(name: str) -> sp.Symbol:
    """Return the canonical real symbol for ``name``."""
    return _symbol(name)


@lru_cache(maxsize=None)
def _symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name, real=True)


def jet(base: str, *index: int) -> sp.Symbol:
    """Indexed coordinate ``base[i,j,...]``; used for jets, zeta and theta."""
    if not index or any(int(i) < 0 for i in index):
        raise ValueError(f"malformed index {index!r} for {base}")
    return _symbol(f"{base}[{','.join(str(int(i)) for i in index)}]")


def parse_indexed(sym: sp.Basic) -> tuple[str, tuple[int, ...]] | None:
    """Split an indexed symbol into (base, index); None for plain symbols."""
    if not isinstance(sym, sp.Symbol):
        return None
    m = _INDEXED_RE.match(sym.name)
    if m is None:
        return None
    return m.group(1), tuple(int(p) for p in m.group(2).split(","))


def var_id(sym: sp.Symbol) -> VarId:
    parsed = parse_indexed(sym)
    if parsed is not None:
        return VarId(sym.name, VarKind.JET, parsed[0], parsed[1])
    if sym.name in _INDEPENDENT:
        return VarId(sym.name, VarKind.INDEPENDENT)
    return VarId(sym.name, VarKind.PARAMETER)


def indexed_symbols(e: sp.Basic, base: str | None = None) -> dict[sp.Symbol, tuple[int, ...]]:
    out: dict[sp.Symbol, tuple[int, ...]] = {}
    for s in e.free_symbols:
        parsed = parse_indexed(s)
        if parsed is not None and (base is None or parsed[0] == base):
            out[s] = parsed[1]
    return out


# ---------------------------------------------------------------------------
# Opaque functions


class OpaqueFunction(sp.Function):
    """Single-argument function of unknown form.

    Subclasses are created by :func:`opaque`; each carries the base name and
    the derivative order so that differentiation produces the next order.
    """

    nargs = 1
    opaque_name: str = ""
    opaque_order: int = 0

    def fdiff(self, argindex: int = 1):
        return opaque(self.opaque_name, self.opaque_order + 1)(self.args[0])

    def _eval_is_real(self):
        return self.args[0].is_real


def opaque(name: str, order: int = 0) -> type[OpaqueFunction]:
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    return _opaque_class(name, int(order))


# positional-only key: opaque("f") and opaque("f", 0) must be the same class
@lru_cache(maxsize=None)
def _opaque_class(name: str, order: int) -> type[OpaqueFunction]:
    return type(name + "'" * order, (OpaqueFunction,), {"opaque_name": name, "opaque_order": order})


def is_opaque(e: sp.Basic) -> bool:
    return isinstance(e, OpaqueFunction)


def opaque_nodes(e: sp.Basic) -> set[OpaqueFunction]:
    return {a for a in e.atoms(sp.Function) if isinstance(a, OpaqueFunction)}


# ---------------------------------------------------------------------------
# Parser


def lambertw(x: Expr, branch: int = 0) -> Expr:
    return sp.LambertW(x) if branch == 0 else sp.LambertW(x, -1)


_BUILTINS: dict[str, Callable[[Expr], Expr]] = {
    "exp": sp.exp,
    "ln": sp.log,
    "sqrt": sp.sqrt,
    "abs": sp.Abs,
    "sign": sp.sign,
    "sin": sp.sin,
    "cos": sp.cos,
    "arctan": sp.atan,
    "lambertW0": lambda a: sp.LambertW(a),
    "lambertW_1": lambda a: sp.LambertW(a, -1),
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],']))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    raw = text.encode("utf-8")
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            off = len(text[:pos].encode("utf-8"))
            while off < len(raw) and raw[off : off + 1].isspace():
                off += 1
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", off)
        kind = m.lastgroup or "op"
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), len(text[:start].encode("utf-8"))))
        pos = m.end()
    toks.append(_Tok("end", "", len(raw)))
    return toks


class _Parser:
    def __init__(self, text: str, opaque_names: frozenset[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.opaque_names = opaque_names

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.take()
        if tok.text != text or tok.kind == "end":
            raise ParseError(f"expected {text!r}", tok.offset)
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected token {tok.text!r}", tok.offset)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.unary()
            e = e * rhs if op == "*" else e / rhs
        return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("-", "+"):
            self.take()
            inner = self.unary()
            return -inner if tok.text == "-" else inner
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            return sp.Pow(base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.take()
        if tok.kind == "num":
            return sp.Rational(Fraction(tok.text)) if any(c in tok.text for c in ".eE") else sp.Integer(tok.text)
        if tok.kind == "op" and tok.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            return self.named(tok)
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.offset)
        raise ParseError(f"unexpected token {tok.text!r}", tok.offset)

    def named(self, tok: _Tok) -> Expr:
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "[":
            return self.indexed(tok)
        primes = 0
        while self.peek().kind == "op" and self.peek().text == "'":
            self.take()
            primes += 1
        if self.peek().kind == "op" and self.peek().text == "(":
            self.take()
            arg = self.expr()
            self.expect(")")
            if tok.text in _BUILTINS and primes == 0:
                return _BUILTINS[tok.text](arg)
            if tok.text in self.opaque_names:
                return opaque(tok.text, primes)(arg)
            raise UnknownFunctionError(f"unknown function {tok.text!r}", tok.offset)
        if primes:
            raise ParseError("prime must be followed by an argument list", self.peek().offset)
        if tok.text == "pi":
            return sp.pi
        return var(tok.text)

    def indexed(self, name_tok: _Tok) -> Expr:
        self.take()  # "["
        parts: list[int] = []
        while True:
            tok = self.take()
            if tok.kind == "end":
                raise JetIndexError("unterminated jet index", tok.offset)
            if tok.kind != "num" or not tok.text.isdigit():
                raise JetIndexError(f"malformed jet index {tok.text!r}", tok.offset)
            parts.append(int(tok.text))
            sep = self.take()
            if sep.kind == "op" and sep.text == "]":
                break
            if sep.kind == "end":
                raise JetIndexError("unterminated jet index", sep.offset)
            if not (sep.kind == "op" and sep.text == ","):
                raise JetIndexError(f"malformed jet index near {sep.text!r}", sep.offset)
        return jet(name_tok.text, *parts)


def parse_expr(text: str, opaque_names: Iterable[str] | None = None) -> Expr:
    """Parse ``text`` in the published grammar.

    >>> to_text(parse_expr("w[1,2] + w[0,2]*w[0,3]"))
    'w[0,2]*w[0,3] + w[1,2]'
    """
    names = DEFAULT_OPAQUE if opaque_names is None else frozenset(opaque_names) | DEFAULT_OPAQUE
    return _Parser(text, names).parse()


# ---------------------------------------------------------------------------
# Printer


class _GrammarPrinter(StrPrinter):
    def _print_Function(self, expr):
        if isinstance(expr, OpaqueFunction):
            return f"{expr.opaque_name}{chr(39) * expr.opaque_order}({self._print(expr.args[0])})"
        return super()._print_Function(expr)

    def _print_log(self, expr):
        return f"ln({self._print(expr.args[0])})"

    def _print_atan(self, expr):
        return f"arctan({self._print(expr.args[0])})"

    def _print_Abs(self, expr):
        return f"abs({self._print(expr.args[0])})"

    def _print_sign(self, expr):
        return f"sign({self._print(expr.args[0])})"

    def _print_LambertW(self, expr):
        branch = expr.args[1] if len(expr.args) > 1 else 0
        name = "lambertW0" if branch == 0 else "lambertW_1"
        return f"{name}({self._print(expr.args[0])})"

    def _print_Exp1(self, expr):
        return "exp(1)"


_PRINTER = _GrammarPrinter({"order": "lex"})


def to_text(e: Expr) -> str:
    """Print ``e`` in the grammar accepted by :func:`parse_expr`."""
    return _PRINTER.doprint(sp.sympify(e)).replace("**", "^")


# ---------------------------------------------------------------------------
# Calculus and normal forms


def diff(e: Expr, v: sp.Symbol | str) -> Expr:
    """Partial derivative; all jet coordinates are independent symbols."""
    if isinstance(v, str):
        v = parse_expr(v)
    return sp.diff(e, v)


def substitute(e: Expr, bindings: Mapping[sp.Basic, Expr]) -> Expr:
    """Simultaneous substitution followed by :func:`normalize`."""
    return normalize(sp.sympify(e).subs(dict(bindings), simultaneous=True))


def normalize(e: Expr) -> Expr:
    """Canonical rational form: expanded numerator over denominator, gcd removed.

    Non-rational nodes (functions, fractional powers) are treated as
    independent generators.  Division by a factor is recorded implicitly:
    ``(z1^2 - z2^2)/(z1 - z2)`` becomes ``z1 + z2`` off the line z1 = z2.
    """
    e = sp.sympify(e)
    if e.is_Number:
        return e
    try:
        return sp.cancel(sp.together(e), expand=True)
    except sp.PolynomialError:
        return sp.expand(e)


def _radical_reduce(e: Expr) -> Expr:
    """Numerator of ``e`` reduced modulo ``S^q - b`` for every radical ``b^(p/q)``."""
    rads: dict[tuple[Expr, int], sp.Dummy] = {}

    def rep(x):
        key = (sp.expand(x.base), int(x.exp.q))
        if key not in rads:
            rads[key] = sp.Dummy("S")
        return rads[key] ** int(x.exp.p)

    e2 = e.replace(lambda x: x.is_Pow and x.exp.is_Rational and not x.exp.is_Integer, rep)
    num, _ = sp.fraction(sp.together(e2))
    num = sp.expand(num)
    for (b, q), s in rads.items():
        if num == 0:
            break
        if num.has(s):
            num = sp.expand(sp.rem(num, s**q - b, s))
    return num


class Verdict(str, enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    PROBABLY_ZERO = "probabilistically-zero"

    @property
    def holds(self) -> bool:
        return self is not Verdict.NONZERO


@dataclass(frozen=True)
class ZeroResult:
    verdict: Verdict
    max_probe_error: float = 0.0
    probes: int = 0

    def __bool__(self) -> bool:
        return self.verdict.holds


@dataclass(frozen=True)
class ProbeConfig:
    points: int = 24
    eps: float = 1e-9
    seed: int = 0
    low: float = 0.3
    high: float = 1.7


def _is_plain_rational(e: Expr) -> bool:
    for node in sp.preorder_traversal(e):
        if isinstance(node, (sp.Function, sp.Derivative, sp.Subs)):
            return False
        if node.is_Pow and not node.exp.is_Integer:
            return False
        if node in (sp.pi, sp.E):
            return False
    return True


def is_zero(
    e: Expr,
    config: ProbeConfig | None = None,
    *,
    domain: Mapping[sp.Symbol, tuple[float, float]] | None = None,
    exact_only: bool = False,
) -> ZeroResult:
    """Zero oracle.

    Exact when the expression is rational (after replacing radicals by
    algebraic symbols).  Otherwise probes at random points with random
    polynomial instantiations of opaque functions.
    """
    config = config or ProbeConfig()
    e = sp.sympify(e)
    if e == 0:
        return ZeroResult(Verdict.ZERO)
    n = normalize(e)
    if n == 0:
        return ZeroResult(Verdict.ZERO)
    if n.has(sp.Pow) and any(p.is_Pow and p.exp.is_Rational and not p.exp.is_Integer for p in n.atoms(sp.Pow)):
        if _radical_reduce(n) == 0:
            return ZeroResult(Verdict.ZERO)
    if _is_plain_rational(n):
        return ZeroResult(Verdict.NONZERO)
    if exact_only:
        return ZeroResult(Verdict.NONZERO)
    return probe_zero(n, config, domain=domain)


def random_polynomial(rng: random.Random, degree: int = 4) -> tuple[float, ...]:
    return tuple(rng.uniform(-2.0, 2.0) for _ in range(degree + 1))


def poly_derivative_value(coeffs: tuple[float, ...], order: int, x: float):
    total = 0.0
    for k, c in enumerate(coeffs):
        if k < order:
            continue
        total = total + c * math.perm(k, order) * x ** (k - order)
    return total


def opaque_instantiation(rng: random.Random, names: Iterable[str]) -> dict[str, tuple[float, ...]]:
    return {name: random_polynomial(rng) for name in sorted(names)}


def probe_zero(
    e: Expr,
    config: ProbeConfig,
    *,
    domain: Mapping[sp.Symbol, tuple[float, float]] | None = None,
) -> ZeroResult:
    rng = random.Random(config.seed)
    symbols = sorted(e.free_symbols, key=lambda s: s.name)
    names = {node.opaque_name for node in opaque_nodes(e)}
    domain = domain or {}
    worst = 0.0
    good = 0
    attempts = 0
    while good < config.points and attempts < config.points * 8:
        attempts += 1
        polys = opaque_instantiation(rng, names)
        point = {}
        for s in symbols:
            lo, hi = domain.get(s, (config.low, config.high))
            point[s] = rng.uniform(lo, hi)
        try:
            value = evaluate(e, point, opaque_polys=polys)
        except (EvaluationError, ZeroDivisionError, OverflowError, ValueError):
            continue
        if not math.isfinite(value):
            continue
        good += 1
        worst = max(worst, abs(value))
    if good == 0:
        raise PoleError("every probe point hit a pole or domain violation")
    verdict = Verdict.PROBABLY_ZERO if worst < config.eps else Verdict.NONZERO
    return ZeroResult(verdict, worst, good)


# ---------------------------------------------------------------------------
# Numeric evaluation


def _lambert(branch: int, x):
    from dnsym import numerics

    if isinstance(x, np.ndarray):
        return numerics.lambert_w_array(branch, x)
    try:
        return numerics.lambert_w(branch, float(x))
    except numerics.NumericsError as exc:
        raise DomainError(str(exc)) from exc


def evaluate(
    e: Expr,
    bindings: Mapping[sp.Symbol | str, float],
    *,
    opaque_polys: Mapping[str, tuple[float, ...]] | None = None,
    opaque_funcs: Mapping[str, Callable[[float, int], float]] | None = None,
) -> float:
    """IEEE double evaluation with domain checks."""
    env = {(var(k) if isinstance(k, str) else k): float(v) for k, v in bindings.items()}
    return float(_Evaluator(env, opaque_polys or {}, opaque_funcs or {}, vector=False).run(sp.sympify(e)))


def compile_expr(e: Expr, args: tuple[sp.Symbol, ...]) -> Callable[..., np.ndarray]:
    """Vectorized evaluator; domain violations produce NaN."""
    e = sp.sympify(e)

    def fn(*values):
        # long double inputs are evaluated in long double
        dt = np.longdouble if any(np.asarray(v).dtype == np.longdouble for v in values) else np.float64
        env = {a: np.asarray(v, dtype=dt) for a, v in zip(args, values)}
        with np.errstate(all="ignore"):
            return np.asarray(_Evaluator(env, {}, {}, vector=True, dtype=dt).run(e), dtype=dt)

    return fn


class _Evaluator:
    def __init__(self, env, polys, funcs, vector: bool, dtype=None):
        self.env = env
        self.dtype = dtype
        self.polys = polys
        self.funcs = funcs
        self.vector = vector
        self.cache: dict[sp.Basic, object] = {}

    def run(self, e):
        hit = self.cache.get(e)
        if hit is not None:
            return hit
        value = self._eval(e)
        self.cache[e] = value
        return value

    def _domain(self, ok, message: str):
        if self.vector:
            return
        if not ok:
            raise DomainError(message)

    def _eval(self, e):
        if e.is_Symbol:
            if e not in self.env:
                raise UnboundVariableError(f"unbound variable {e}")
            return self.env[e]
        if e.is_Integer or e.is_Rational:
            if self.dtype is np.longdouble:
                return np.longdouble(int(e.p)) / np.longdouble(int(e.q))
            return float(e)
        if e.is_Number or e in (sp.pi, sp.E):
            if self.dtype is np.longdouble:
                return np.longdouble(str(sp.N(e, 24)))
            return float(e)
        if e.is_Add:
            total = 0.0
            for a in e.args:
                total = total + self.run(a)
            return total
        if e.is_Mul:
            total = 1.0
            for a in e.args:
                total = total * self.run(a)
            return total
        if e.is_Pow:
            base = self.run(e.base)
            ex = e.exp
            if ex.is_Integer:
                n = int(ex)
                if n < 0:
                    if not self.vector and base == 0:
                        raise ZeroDivisionError("pole")
                    return 1.0 / base ** (-n) if self.vector else 1.0 / (base ** (-n))
                return base**n
            if ex.is_Rational and int(ex.q) % 2 == 1 and not self.vector:
                # odd roots of negative numbers stay real
                mag = abs(base) ** float(ex)
                return math.copysign(mag, base) if int(ex.p) % 2 else mag
            expo = self.run(ex)
            if self.vector:
                return np.power(base, expo)
            self._domain(base > 0 or (base == 0 and expo > 0), f"power of non-positive base {base}")
            return base**expo
        if isinstance(e, OpaqueFunction):
            x = self.run(e.args[0])
            name, order = e.opaque_name, e.opaque_order
            if name in self.funcs:
                return self.funcs[name](x, order)
            if name in self.polys:
                return poly_derivative_value(self.polys[name], order, x)
            raise UnboundVariableError(f"opaque function {name} has no instantiation")
        if isinstance(e, sp.LambertW):
            x = self.run(e.args[0])
            branch = int(e.args[1]) if len(e.args) > 1 else 0
            return _lambert(branch, x)
        if isinstance(e, sp.Function):
            return self._function(e)
        raise EvaluationError(f"cannot evaluate node {type(e).__name__}")

    def _function(self, e):
        x = self.run(e.args[0])
        m = np if self.vector else math
        if isinstance(e, sp.exp):
            return m.exp(x)
        if isinstance(e, sp.log):
            self._domain(x > 0, f"ln of non-positive value {x}")
            return m.log(x)
        if isinstance(e, sp.sin):
            return m.sin(x)
        if isinstance(e, sp.cos):
            return m.cos(x)
        if isinstance(e, sp.atan):
            return np.arctan(x) if self.vector else math.atan(x)
        if isinstance(e, sp.Abs):
            return np.abs(x) if self.vector else abs(x)
        if isinstance(e, sp.sign):
            return np.sign(x) if self.vector else float((x > 0) - (x < 0))
        if isinstance(e, sp.tan):
            return m.tan(x)
        raise EvaluationError(f"unsupported function {type(e).__name__}")
