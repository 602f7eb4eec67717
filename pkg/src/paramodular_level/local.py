"""Per-prime reduction types and the attached local GL(2, Q_p) data.

Everything here reads valuations off a model that is minimal at p.  The
p = 3 additive, potentially good case is decided by the condition table
``Q3_TABLE``; every row is evaluated independently so that exclusivity can
be checked rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from .padic import (
    INF,
    QuadCharClass,
    QuadCharKind,
    _check_prime,
    is_square,
    legendre,
    quad_char_class,
    unit_part,
    valuation,
)
from .weierstrass import Curve, Invariants, invariants, is_minimal_at


class ClassificationError(RuntimeError):
    """A combination of invariants that no table covers (a bug or bad input)."""


class NotMinimalError(ValueError):
    pass


class UndefinedGamma(ValueError):
    pass


class ReductionType(Enum):
    GOOD = "good"
    SPLIT_MULTIPLICATIVE = "split_multiplicative"
    NONSPLIT_MULTIPLICATIVE = "nonsplit_multiplicative"
    ADDITIVE_POTENTIALLY_MULTIPLICATIVE = "additive_potentially_multiplicative"
    ADDITIVE_POTENTIALLY_GOOD = "additive_potentially_good"

    @property
    def is_multiplicative(self) -> bool:
        return self in (ReductionType.SPLIT_MULTIPLICATIVE, ReductionType.NONSPLIT_MULTIPLICATIVE)

    @property
    def potentially_good(self) -> bool:
        return self in (ReductionType.GOOD, ReductionType.ADDITIVE_POTENTIALLY_GOOD)


# ---------------------------------------------------------------------------
# local representation data


@dataclass(frozen=True)
class UnramifiedGood:
    conductor_exponent: int = 0

    kind = "unramified_good"

    def conductor_from_characters(self) -> int:
        return 0

    def to_json(self) -> dict:
        return {"kind": self.kind, "conductor_exponent": self.conductor_exponent}


@dataclass(frozen=True)
class TwistedSteinberg:
    char: QuadCharClass
    conductor_exponent: int

    kind = "twisted_steinberg"

    def conductor_from_characters(self) -> int:
        if self.char.is_ramified:
            return 2 * self.char.conductor_exponent
        return 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "conductor_exponent": self.conductor_exponent,
            "character": self.char.to_json(),
        }


@dataclass(frozen=True)
class PrincipalSeries:
    """chi x chi^{-1} with chi of conductor ``a_chi`` and order ``chi_unit_order`` on units."""

    a_chi: int
    chi_unit_order: int
    conductor_exponent: int

    kind = "principal_series"

    def conductor_from_characters(self) -> int:
        return 2 * self.a_chi

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "conductor_exponent": self.conductor_exponent,
            "a_chi": self.a_chi,
            "chi_unit_order": self.chi_unit_order,
        }


@dataclass(frozen=True)
class DihedralSupercuspidal:
    """Induced from a character xi of a quadratic extension F.

    ``xi_at_uniformizer`` is None where only the conductor and the order of
    xi on units are pinned down (ramified F over Q_3).
    """

    field_ramified: bool
    a_xi: int
    xi_unit_order: int
    xi_at_uniformizer: Optional[int]
    conductor_exponent: int

    kind = "dihedral_supercuspidal"

    def conductor_from_characters(self) -> int:
        return 1 + self.a_xi if self.field_ramified else 2 * self.a_xi

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "conductor_exponent": self.conductor_exponent,
            "field_ramified": self.field_ramified,
            "a_xi": self.a_xi,
            "xi_unit_order": self.xi_unit_order,
            "xi_at_uniformizer": self.xi_at_uniformizer,
        }


@dataclass(frozen=True)
class Unsupported:
    """Additive, potentially good reduction at 2: no table covers it."""

    reason: str = "additive potentially good reduction at 2"

    kind = "unsupported"

    def to_json(self) -> dict:
        return {"kind": self.kind, "reason": self.reason}


LocalGL2Data = Union[UnramifiedGood, TwistedSteinberg, PrincipalSeries, DihedralSupercuspidal]


# ---------------------------------------------------------------------------
# reduction type


def reduction_type(inv: Invariants, p: int) -> ReductionType:
    _check_prime(p)
    vd = valuation(inv.disc, p)
    if vd == 0:
        return ReductionType.GOOD
    vc4 = valuation(inv.c4, p)
    if vc4 == 0:
        char = quad_char_class(gamma_invariant(inv), p)
        if char.kind is QuadCharKind.TRIVIAL:
            return ReductionType.SPLIT_MULTIPLICATIVE
        if char.kind is QuadCharKind.UNRAMIFIED_NONTRIVIAL:
            return ReductionType.NONSPLIT_MULTIPLICATIVE
        raise ClassificationError(
            f"ramified gamma character at a multiplicative prime p={p}; model not minimal?"
        )
    if 3 * vc4 < vd:
        return ReductionType.ADDITIVE_POTENTIALLY_MULTIPLICATIVE
    return ReductionType.ADDITIVE_POTENTIALLY_GOOD


def gamma_invariant(inv: Invariants) -> Fraction:
    if inv.c6 == 0:
        raise UndefinedGamma("c6 = 0, gamma invariant undefined")
    return Fraction(-inv.c4, inv.c6)


def j_integral(inv: Invariants, p: int) -> bool:
    return 3 * valuation(inv.c4, p) >= valuation(inv.disc, p)


def classify_pot_mult(inv: Invariants, p: int) -> TwistedSteinberg:
    if j_integral(inv, p):
        raise ClassificationError(f"j is integral at {p}; not potentially multiplicative")
    char = quad_char_class(gamma_invariant(inv), p)
    additive = valuation(inv.c4, p) > 0
    if char.is_ramified != additive:
        raise ClassificationError(
            f"gamma character {char.kind.value} contradicts reduction at p={p}"
        )
    a = 2 * char.conductor_exponent if char.is_ramified else 1
    return TwistedSteinberg(char, a)


def tame_ramification_degree(v_disc: int) -> int:
    return 12 // gcd(v_disc, 12)


def classify_pot_good_large_p(inv: Invariants, p: int):
    if p < 5:
        raise ValueError("classify_pot_good_large_p needs p >= 5")
    _check_prime(p)
    vd = valuation(inv.disc, p)
    if not (vd > 0 and valuation(inv.c4, p) > 0 and j_integral(inv, p)):
        raise ClassificationError(f"not additive potentially good at {p}")
    e = tame_ramification_degree(vd)
    if e not in (2, 3, 4, 6):
        raise ClassificationError(f"e = {e} at p = {p}: model not minimal?")
    if (p - 1) * vd % 12 == 0:
        return PrincipalSeries(a_chi=1, chi_unit_order=e, conductor_exponent=2)
    # trivial central character and chi_{F/K}(p) = -1 force xi(p) = -1
    return DihedralSupercuspidal(
        field_ramified=False, a_xi=1, xi_unit_order=e, xi_at_uniformizer=-1, conductor_exponent=2
    )


# ---------------------------------------------------------------------------
# p = 3


class Q3Condition(Enum):
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    P6 = "P6"
    S3 = "S3"
    S4 = "S4"
    S6 = "S6"
    S6_PRIME = "S6'"
    S6_DOUBLE_PRIME = "S6''"


@dataclass(frozen=True)
class Q3Row:
    condition: Q3Condition
    v_disc: int
    c4: tuple[str, int]  # ("=", n) or (">=", n)
    c6: tuple[str, int]
    congruence: Optional[tuple[int, bool]]  # (3 or 6, must hold)
    reducibility: Optional[str]
    kodaira: str
    v_conductor: int


def _rows(cond, reducibility, v_conductor, *specs):
    return [
        Q3Row(cond, vd, c4, c6, cong, reducibility, kod, v_conductor)
        for vd, c4, c6, cong, kod in specs
    ]


_III_ROWS = (
    (3, (">=", 2), ("=", 3), (3, True), "III"),
    (3, ("=", 2), (">=", 5), None, "III"),
    (9, (">=", 4), ("=", 6), (6, True), "III*"),
    (9, ("=", 4), (">=", 8), None, "III*"),
)
_II_ROWS = ((4, ("=", 2), ("=", 3), None, "II"), (12, ("=", 5), ("=", 8), None, "II*"))
_IV_ROWS = ((6, ("=", 3), ("=", 5), None, "IV"), (10, ("=", 4), ("=", 6), None, "IV*"))

Q3_TABLE: tuple[Q3Row, ...] = tuple(
    _rows(Q3Condition.P2, None, 2,
          (6, ("=", 2), ("=", 3), None, "I0*"),
          (6, ("=", 3), (">=", 6), None, "I0*"))
    + _rows(Q3Condition.P4, "-1 square", 2, *_III_ROWS)
    + _rows(Q3Condition.S4, "-1 nonsquare", 2, *_III_ROWS)
    + _rows(Q3Condition.P3, "disc square", 4, *_II_ROWS)
    + _rows(Q3Condition.S3, "disc nonsquare", 4, *_II_ROWS)
    + _rows(Q3Condition.P6, "disc square", 4, *_IV_ROWS)
    + _rows(Q3Condition.S6, "disc nonsquare", 4, *_IV_ROWS)
    + _rows(Q3Condition.S6_PRIME, "disc nonsquare", 3,
            (3, (">=", 2), ("=", 3), (3, False), "II"),
            (3, ("=", 2), ("=", 4), None, "II"),
            (5, ("=", 2), ("=", 3), None, "IV"),
            (9, (">=", 4), ("=", 6), (6, False), "IV*"),
            (9, ("=", 4), ("=", 7), None, "IV*"),
            (11, ("=", 4), ("=", 6), None, "II*"))
    + _rows(Q3Condition.S6_DOUBLE_PRIME, "disc nonsquare", 5,
            (5, (">=", 3), ("=", 4), None, "II"),
            (7, (">=", 4), ("=", 5), None, "IV"),
            (11, (">=", 5), ("=", 7), None, "IV*"),
            (13, (">=", 6), ("=", 8), None, "II*"))
)


def _bound_holds(v, bound) -> bool:
    op, n = bound
    return v == n if op == "=" else v >= n


def auxiliary_congruence(inv: Invariants, level: int) -> bool:
    """(c6/3^level)^2 + 2 == c4/3^(level/2) mod 9, for level 3 or 6."""
    c6_part, c6_rem = divmod(inv.c6, 3**level)
    c4_part, c4_rem = divmod(inv.c4, 3 ** (level // 2))
    if c6_rem or c4_rem:
        raise ClassificationError(f"congruence at level {level} needs exact division")
    return (c6_part * c6_part + 2 - c4_part) % 9 == 0


def _reducibility_holds(kind: Optional[str], disc: int) -> bool:
    if kind is None:
        return True
    if kind == "-1 square":
        return is_square(-1, 3)
    if kind == "-1 nonsquare":
        return not is_square(-1, 3)
    sq = is_square(disc, 3)
    return sq if kind == "disc square" else not sq


def row_matches(row: Q3Row, inv: Invariants) -> bool:
    if valuation(inv.disc, 3) != row.v_disc:
        return False
    if not (_bound_holds(valuation(inv.c4, 3), row.c4) and _bound_holds(valuation(inv.c6, 3), row.c6)):
        return False
    if row.congruence is not None:
        level, must_hold = row.congruence
        if auxiliary_congruence(inv, level) != must_hold:
            return False
    return _reducibility_holds(row.reducibility, inv.disc)


def q3_matching_rows(inv: Invariants) -> list[Q3Row]:
    return [row for row in Q3_TABLE if row_matches(row, inv)]


_Q3_DATA = {
    Q3Condition.P2: PrincipalSeries(1, 2, 2),
    Q3Condition.P3: PrincipalSeries(2, 3, 4),
    Q3Condition.P6: PrincipalSeries(2, 6, 4),
    Q3Condition.S4: DihedralSupercuspidal(False, 1, 4, -1, 2),
    Q3Condition.S3: DihedralSupercuspidal(False, 2, 3, -1, 4),
    Q3Condition.S6: DihedralSupercuspidal(False, 2, 6, -1, 4),
    Q3Condition.S6_PRIME: DihedralSupercuspidal(True, 2, 6, None, 3),
    Q3Condition.S6_DOUBLE_PRIME: DihedralSupercuspidal(True, 4, 6, None, 5),
}


def classify_q3(inv: Invariants) -> tuple[Q3Condition, Q3Row, LocalGL2Data]:
    vd = valuation(inv.disc, 3)
    if not (vd > 0 and valuation(inv.c4, 3) > 0 and j_integral(inv, 3)):
        raise ClassificationError("not additive potentially good at 3")
    rows = q3_matching_rows(inv)
    if len(rows) != 1:
        names = [r.condition.value for r in rows]
        raise ClassificationError(
            f"expected exactly one condition at 3 for (v(D), v(c4), v(c6)) = "
            f"({vd}, {valuation(inv.c4, 3)}, {valuation(inv.c6, 3)}), got {names}"
        )
    row = rows[0]
    if row.condition is Q3Condition.P4:
        raise ClassificationError("condition P4 cannot occur over Q_3")
    data = _Q3_DATA[row.condition]
    if data.conductor_exponent != row.v_conductor:
        raise ClassificationError(f"table mismatch for {row.condition.value}")
    return row.condition, row, data


def classify_p2(inv: Invariants):
    rt = reduction_type(inv, 2)
    if rt is ReductionType.GOOD:
        return UnramifiedGood()
    if rt is ReductionType.ADDITIVE_POTENTIALLY_GOOD:
        return Unsupported()
    return classify_pot_mult(inv, 2)


# ---------------------------------------------------------------------------
# root number at 3


class _Symbolic:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SYMBOLIC"

    def __reduce__(self):
        return (_Symbolic, ())


SYMBOLIC = _Symbolic()


def local_root_number_3(curve: Curve, supplied=None):
    """w(E/Q_3) when supplied (an int or a mapping keyed by a-invariants), else SYMBOLIC."""
    if supplied is None:
        return SYMBOLIC
    if isinstance(supplied, int):
        value = supplied
    else:
        value = supplied.get(curve.ainvs)
        if value is None:
            return SYMBOLIC
    if value not in (1, -1):
        raise ValueError(f"root number must be +1 or -1, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# one prime, end to end


@dataclass(frozen=True)
class LocalClassification:
    p: int
    reduction: ReductionType
    gl2: object  # LocalGL2Data or Unsupported
    v_disc: int
    v_c4: float
    v_c6: float
    j_integral: bool
    q3_condition: Optional[Q3Condition] = None
    kodaira: Optional[str] = None
    e: Optional[int] = None
    legendre_disc_unit: Optional[int] = None

    @property
    def supported(self) -> bool:
        return not isinstance(self.gl2, Unsupported)


def classify_prime(inv: Invariants, p: int, curve: Optional[Curve] = None) -> LocalClassification:
    """Classify at p; if ``curve`` is given its minimality at p is verified first."""
    if curve is not None and not is_minimal_at(curve, p):
        raise NotMinimalError(f"{curve} is not minimal at {p}")
    rt = reduction_type(inv, p)
    vd, vc4, vc6 = valuation(inv.disc, p), valuation(inv.c4, p), valuation(inv.c6, p)
    common = dict(p=p, reduction=rt, v_disc=vd, v_c4=vc4, v_c6=vc6, j_integral=j_integral(inv, p))
    if rt is ReductionType.GOOD:
        return LocalClassification(gl2=UnramifiedGood(), **common)
    if p == 2:
        return LocalClassification(gl2=classify_p2(inv), **common)
    if not rt.potentially_good:
        return LocalClassification(gl2=classify_pot_mult(inv, p), **common)
    if p == 3:
        cond, row, data = classify_q3(inv)
        leg = legendre(int(unit_part(inv.disc, 3)), 3)
        return LocalClassification(
            gl2=data, q3_condition=cond, kodaira=row.kodaira, legendre_disc_unit=leg, **common
        )
    return LocalClassification(
        gl2=classify_pot_good_large_p(inv, p), e=tame_ramification_degree(vd), **common
    )


def classify_curve_at(curve: Curve, p: int) -> LocalClassification:
    return classify_prime(invariants(curve), p, curve)

