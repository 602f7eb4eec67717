"""Valuations, unit parts and square classes over Q and Q_p.

Rationals are plain :class:`fractions.Fraction` values; the valuation of zero
is ``math.inf`` so that lower-bound comparisons such as ``v(c4) >= 2`` hold
for ``c4 = 0`` without special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy import isprime

INF = math.inf


class PadicInputError(ValueError):
    pass


def _check_prime(p):
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise PadicInputError(f"{p!r} is not a prime")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise PadicInputError(f"expected an exact rational, got {type(x).__name__}")


def _int_valuation(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    # peel off large powers first; keeps huge discriminants cheap
    pk, k = p, 1
    while n % pk == 0:
        v += k
        n //= pk
        pk, k = pk * pk, k * 2
    while n % p == 0:
        v += 1
        n //= p
    return v


def valuation(x, p: int):
    """Exact p-adic valuation of a rational; ``INF`` for zero."""
    _check_prime(p)
    x = _as_fraction(x)
    if x == 0:
        return INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def unit_part(x, p: int) -> Fraction:
    """Return ``x * p**(-v_p(x))``."""
    _check_prime(p)
    x = _as_fraction(x)
    if x == 0:
        raise PadicInputError("unit part of zero is undefined")
    v = valuation(x, p)
    return x / Fraction(p) ** v


def legendre(u: int, p: int) -> int:
    """Legendre symbol (u/p) for an odd prime p, by Euler's criterion."""
    _check_prime(p)
    if p == 2:
        raise PadicInputError("Legendre symbol needs an odd prime")
    r = pow(u % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise PadicInputError(f"no nonresidue mod {p}")


def _unit_residue(u: Fraction, p: int, modulus: int) -> int:
    # u is a p-adic unit, so its denominator is invertible mod p^k
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


def square_class(x, p: int) -> tuple[int, int]:
    """Square class of a nonzero rational in Q_p^x / (Q_p^x)^2.

    Returns ``(v_p(x) mod 2, unit_class)``.  For odd p the unit class is 1 or
    the smallest positive nonresidue; for p = 2 it is the unit part mod 8.
    """
    _check_prime(p)
    x = _as_fraction(x)
    if x == 0:
        raise PadicInputError("zero has no square class")
    parity = valuation(x, p) % 2
    u = unit_part(x, p)
    if p == 2:
        return parity, _unit_residue(u, 2, 8)
    if legendre(_unit_residue(u, p, p), p) == 1:
        return parity, 1
    return parity, smallest_nonresidue(p)


def is_square(x, p: int) -> bool:
    """Whether x lies in (Q_p^x)^2 (Hensel criterion)."""
    return square_class(x, p) == (0, 1)


class QuadCharKind(Enum):
    TRIVIAL = "trivial"
    UNRAMIFIED_NONTRIVIAL = "unramified_nontrivial"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class QuadCharClass:
    """The quadratic character x -> (gamma, x)_p, up to what matters here."""

    kind: QuadCharKind
    conductor_exponent: int = 0

    def __post_init__(self):
        ramified = self.kind is QuadCharKind.RAMIFIED
        if ramified != (self.conductor_exponent > 0):
            raise ValueError("conductor exponent is positive exactly for ramified characters")
        if ramified and self.conductor_exponent not in (1, 2, 3):
            raise ValueError(f"bad conductor exponent {self.conductor_exponent}")

    @property
    def is_ramified(self) -> bool:
        return self.kind is QuadCharKind.RAMIFIED

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "conductor_exponent": self.conductor_exponent}


TRIVIAL_CHAR = QuadCharClass(QuadCharKind.TRIVIAL)
UNRAMIFIED_CHAR = QuadCharClass(QuadCharKind.UNRAMIFIED_NONTRIVIAL)


def quad_char_class(gamma, p: int) -> QuadCharClass:
    """Classify the Hilbert-symbol character attached to ``gamma`` at p."""
    parity, unit = square_class(gamma, p)
    if parity == 0 and unit == 1:
        return TRIVIAL_CHAR
    if p != 2:
        if parity == 0:
            return UNRAMIFIED_CHAR
        return QuadCharClass(QuadCharKind.RAMIFIED, 1)
    if parity == 1:
        return QuadCharClass(QuadCharKind.RAMIFIED, 3)
    if unit == 5:
        return UNRAMIFIED_CHAR
    return QuadCharClass(QuadCharKind.RAMIFIED, 2)
