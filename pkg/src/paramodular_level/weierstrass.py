"""Weierstrass models: invariants, coordinate changes, minimality."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import factorint

from .padic import _check_prime, valuation


class SingularCurve(ValueError):
    pass


class NonIntegralModel(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @classmethod
    def from_list(cls, coeffs) -> "Curve":
        coeffs = list(coeffs)
        if len(coeffs) != 5:
            raise ValueError(f"expected 5 coefficients, got {len(coeffs)}")
        for c in coeffs:
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"Weierstrass coefficients must be integers, got {c!r}")
        return cls(*coeffs)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


@dataclass(frozen=True)
class Invariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j: Fraction


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def invariants(curve: Curve) -> Invariants:
    b2, b4, b6, b8 = _b_invariants(*curve.ainvs)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc == 0:
        raise SingularCurve(f"{curve} has zero discriminant")
    return Invariants(b2, b4, b6, b8, c4, c6, disc, Fraction(c4**3, disc))


@dataclass(frozen=True)
class Transformation:
    """Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u == 0:
            raise ValueError("u must be nonzero")

    def compose(self, other: "Transformation") -> "Transformation":
        """The transformation equal to applying ``self`` and then ``other``."""
        u, r, s, t = self.u, self.r, self.s, self.t
        return Transformation(
            u * other.u,
            r + u * u * other.r,
            s + u * other.s,
            t + u * u * s * other.r + u**3 * other.t,
        )

    def inverse(self) -> "Transformation":
        u, r, s, t = self.u, self.r, self.s, self.t
        return Transformation(1 / u, -r / u**2, -s / u, (r * s - t) / u**3)

    @property
    def is_identity(self) -> bool:
        return self == IDENTITY

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("u", "r", "s", "t")}


IDENTITY = Transformation()


def transform_coefficients(ainvs, tr: Transformation) -> tuple[Fraction, ...]:
    a1, a2, a3, a4, a6 = (Fraction(a) for a in ainvs)
    u, r, s, t = tr.u, tr.r, tr.s, tr.t
    return (
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u**2,
        (a3 + r * a1 + 2 * t) / u**3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
        (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
    )


def transform(curve: Curve, tr: Transformation) -> Curve:
    new = transform_coefficients(curve.ainvs, tr)
    if any(c.denominator != 1 for c in new):
        raise NonIntegralModel(f"{curve} under {tr} has coefficients {[str(c) for c in new]}")
    return Curve(*(int(c) for c in new))


def _solve_linear(coef: int, rhs: int, modulus: int) -> list[int]:
    """All x in [0, modulus) with coef*x == rhs (mod modulus)."""
    g = gcd(coef, modulus)
    if rhs % g:
        return []
    m = modulus // g
    x0 = (rhs // g) * pow(coef // g, -1, m) % m if m > 1 else 0
    return [x0 + k * m for k in range(g)]


def _descents(curve: Curve, p: int):
    """Yield every (r, s, t) with s mod p, r mod p^2, t mod p^3 giving an
    integral model under u = p.

    The three linear integrality conditions on a1', a2', a3' prune the
    enumeration; a4' and a6' are checked by exact substitution.
    """
    a1, a2, a3, a4, a6 = curve.ainvs
    for s in _solve_linear(2, -a1, p):
        for r in _solve_linear(3, -(a2 - s * a1 - s * s), p * p):
            for t in _solve_linear(2, -(a3 + r * a1), p**3):
                cand = Transformation(p, r, s, t)
                new = transform_coefficients(curve.ainvs, cand)
                if all(c.denominator == 1 for c in new):
                    yield cand


def is_minimal_at(curve: Curve, p: int) -> bool:
    _check_prime(p)
    inv = invariants(curve)
    if valuation(inv.disc, p) < 12 or valuation(inv.c4, p) < 4 or valuation(inv.c6, p) < 6:
        return True
    return next(_descents(curve, p), None) is None


def minimize(curve: Curve) -> tuple[Curve, Transformation]:
    """Globally minimal model and the transformation reaching it."""
    inv = invariants(curve)
    total = IDENTITY
    for p, e in sorted(factorint(abs(inv.disc)).items()):
        if e < 12:
            continue
        while not is_minimal_at(curve, p):
            step = next(_descents(curve, p))
            curve = transform(curve, step)
            total = total.compose(step)
    return curve, total
