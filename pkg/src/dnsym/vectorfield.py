"""Point vector fields on the base spaces of the four equation models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import sympy as sp

from dnsym.symexpr import Expr, ZeroResult, ProbeConfig, Verdict, is_zero, jet, normalize, to_text, var

SPACES: dict[str, tuple[sp.Symbol, ...]] = {
    "a13": (var("z1"), var("z2"), jet("w", 0, 0)),
    "burgers": (var("z1"), var("z2"), jet("h", 0, 0)),
    "intermediate": (var("z1"), var("z2"), jet("q", 0, 0)),
    "dN": (var("t"), var("x"), var("y"), jet("u", 0, 0, 0)),
}


class SpaceMismatch(ValueError):
    pass


@dataclass(frozen=True)
class VectorField:
    space: str
    coeffs: tuple[Expr, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.coeffs) != len(SPACES[self.space]):
            raise ValueError(f"{self.space} needs {len(SPACES[self.space])} components")

    @classmethod
    def from_map(cls, space: str, comps: Mapping[sp.Symbol, Expr], name: str = "") -> "VectorField":
        coords = SPACES[space]
        return cls(space, tuple(sp.sympify(comps.get(c, 0)) for c in coords), name)

    @classmethod
    def zero(cls, space: str) -> "VectorField":
        return cls(space, tuple(sp.Integer(0) for _ in SPACES[space]))

    @property
    def coords(self) -> tuple[sp.Symbol, ...]:
        return SPACES[self.space]

    def component(self, coord: sp.Symbol) -> Expr:
        return self.coeffs[self.coords.index(coord)]

    def apply(self, f: Expr) -> Expr:
        """Derivation X(f) = sum of coefficient times partial derivative."""
        f = sp.sympify(f)
        return sp.Add(*[c * sp.diff(f, x) for c, x in zip(self.coeffs, self.coords) if c != 0])

    def _check(self, other: "VectorField") -> None:
        if self.space != other.space:
            raise SpaceMismatch(f"{self.space} vs {other.space}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.space, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.space, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "VectorField":
        return self.scale(-1)

    def scale(self, k: Expr) -> "VectorField":
        return VectorField(self.space, tuple(k * c for c in self.coeffs))

    def __rmul__(self, k) -> "VectorField":
        return self.scale(sp.sympify(k))

    def normalized(self) -> "VectorField":
        return VectorField(self.space, tuple(normalize(c) for c in self.coeffs), self.name)

    def is_zero(self, config: ProbeConfig | None = None) -> ZeroResult:
        worst = ZeroResult(Verdict.ZERO)
        for c in self.coeffs:
            r = is_zero(c, config)
            if not r:
                return r
            if r.verdict is Verdict.PROBABLY_ZERO:
                worst = ZeroResult(Verdict.PROBABLY_ZERO, max(worst.max_probe_error, r.max_probe_error), r.probes)
        return worst

    def text(self) -> str:
        parts = []
        for c, x in zip(self.coeffs, self.coords):
            if c != 0:
                parts.append(f"({to_text(c)})*d/d{x.name}")
        return " + ".join(parts) if parts else "0"


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    """[a, b] = a(b) - b(a) componentwise."""
    a._check(b)
    return VectorField(
        a.space, tuple(normalize(a.apply(cb) - b.apply(ca)) for ca, cb in zip(a.coeffs, b.coeffs))
    )
