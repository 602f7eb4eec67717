"""The symmetric cube map and the sym^3 lift of the local data.

Two independent routes to the local level exponent k are kept side by side:
``sym3_conductor_general`` evaluates the generic conductor formula on the
character data, while ``sym3_local`` looks k up in the specialised tables
keyed by reduction type, e and the p = 3 condition.  ``assemble_global``
insists that they agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod
from typing import Optional

from .local import (
    SYMBOLIC,
    DihedralSupercuspidal,
    LocalClassification,
    PrincipalSeries,
    Q3Condition,
    ReductionType,
    TwistedSteinberg,
    UnramifiedGood,
    Unsupported,
)


class Sym3TableError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# exact 4x4 linear algebra


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def det2(g) -> Fraction:
    return Fraction(g[0][0]) * g[1][1] - Fraction(g[0][1]) * g[1][0]


def sym3_matrix(g):
    """Image of a 2x2 matrix under the symmetric cube map into GSp(4)."""
    a, b, c, d = (Fraction(x) for x in (g[0][0], g[0][1], g[1][0], g[1][1]))
    return [
        [a**3, a * a * b, a * b * b, -b**3 / 3],
        [3 * a * a * c, 2 * a * b * c + a * a * d, 2 * a * b * d + b * b * c, -b * b * d],
        [3 * a * c * c, 2 * a * c * d + b * c * c, 2 * b * c * d + a * d * d, -b * d * d],
        [-3 * c**3, -3 * c * c * d, -3 * c * d * d, d**3],
    ]


def nullspace(rows, ncols):
    """Basis of the right kernel of a rational matrix (reduced row echelon)."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][free]
        basis.append(vec)
    return basis


_ANTISYM_SLOTS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _antisym(params):
    j = [[Fraction(0)] * 4 for _ in range(4)]
    for (i, k), x in zip(_ANTISYM_SLOTS, params):
        j[i][k] = x
        j[k][i] = -x
    return j


def similitude_defect(g, j):
    """sym3(g)^T J sym3(g) - det(g)^3 J; zero exactly when g preserves J."""
    s = sym3_matrix(g)
    lhs = matmul(matmul(transpose(s), j), s)
    d3 = det2(g) ** 3
    return [[lhs[i][k] - d3 * j[i][k] for k in range(4)] for i in range(4)]


@lru_cache(maxsize=None)
def _similitude_form():
    spanning = [
        [[2, 0], [0, 1]],
        [[1, 0], [0, 3]],
        [[1, 1], [0, 1]],
        [[1, 0], [1, 1]],
        [[0, 1], [-1, 0]],
    ]
    equations = []
    for g in spanning:
        # defect is linear in the six parameters of J; read off its columns
        cols = [similitude_defect(g, _antisym([int(i == k) for i in range(6)])) for k in range(6)]
        for a in range(4):
            for b in range(4):
                equations.append([cols[k][a][b] for k in range(6)])
    basis = nullspace(equations, 6)
    if not basis:
        raise Sym3TableError("no nonzero invariant alternating form for the sym^3 image")
    if len(basis) > 1:
        raise Sym3TableError(f"invariant alternating form is not unique ({len(basis)} dims)")
    vec = basis[0]
    scale = prod({x.denominator for x in vec})
    vec = [x * scale for x in vec]
    g_ = 0
    for x in vec:
        g_ = gcd(g_, int(x))
    j = _antisym([x / g_ for x in vec])
    rng = random.Random(3)
    for _ in range(20):
        g = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)] for _ in range(2)]
        if any(x != 0 for row in similitude_defect(g, j) for x in row):
            raise Sym3TableError("computed form fails the similitude identity")
    return tuple(tuple(row) for row in j)


def sym3_similitude_form():
    """The alternating form J with sym3(g)^T J sym3(g) = det(g)^3 J.

    Solved for once from a spanning set of GL(2), normalised to coprime
    integer entries, and spot-checked on random matrices.  The multiplier
    law is ``det(g) ** 3``.
    """
    return [list(row) for row in _similitude_form()]


# ---------------------------------------------------------------------------
# local sym^3 data


class RepType(Enum):
    I = "I"  # noqa: E741
    IVA = "IVa"
    VIII = "VIII"
    X = "X"
    SUPERCUSPIDAL = "supercuspidal"
    UNRAMIFIED = "unramified"


class SignKind(Enum):
    PLUS = "+1"
    MINUS = "-1"
    LEGENDRE_TIMES_ROOT = "(D'/3)*w"
    MINUS_ROOT = "-w"


@dataclass(frozen=True)
class SignExpr:
    kind: SignKind
    legendre: Optional[int] = None
    root_number: Optional[int] = None

    @property
    def value(self) -> Optional[int]:
        if self.kind is SignKind.PLUS:
            return 1
        if self.kind is SignKind.MINUS:
            return -1
        if self.root_number is None:
            return None
        if self.kind is SignKind.MINUS_ROOT:
            return -self.root_number
        return self.legendre * self.root_number

    def render(self) -> str:
        v = self.value
        if v is not None:
            return "+1" if v == 1 else "-1"
        if self.kind is SignKind.MINUS_ROOT:
            return "-w(E/Q_3)"
        sign = "+" if self.legendre == 1 else "-"
        return f"(D'/3)*w(E/Q_3) = {sign}w(E/Q_3)"


PLUS = SignExpr(SignKind.PLUS)
MINUS = SignExpr(SignKind.MINUS)


class LKind(Enum):
    ONE = "one"
    SPLIT_STEINBERG = "split_steinberg"
    NONSPLIT_STEINBERG = "nonsplit_steinberg"
    ALPHA_I = "alpha_i"
    UNITARY_UNDETERMINED = "unitary_undetermined"
    UNRAMIFIED = "unramified"


@dataclass(frozen=True)
class LFactor:
    kind: LKind
    p: int

    def render(self) -> str:
        p = self.p
        return {
            LKind.ONE: "1",
            LKind.SPLIT_STEINBERG: f"1/(1-{p}^(-3/2-s))",
            LKind.NONSPLIT_STEINBERG: f"1/(1+{p}^(-3/2-s))",
            LKind.ALPHA_I: f"1/(1+{p}^(-2s))",
            LKind.UNITARY_UNDETERMINED: f"1/((1-alpha*{p}^(-s))(1-alpha^(-1)*{p}^(-s))), |alpha|=1",
            LKind.UNRAMIFIED: f"unramified degree-4 factor at {p}",
        }[self.kind]


@dataclass(frozen=True)
class Sym3LocalData:
    p: int
    k: int
    rep_type: RepType
    epsilon: SignExpr
    l_factor: LFactor

    def to_json(self) -> dict:
        return {
            "conductor_exponent_k": self.k,
            "rep_type": self.rep_type.value,
            "epsilon": self.epsilon.render(),
            "l_factor": self.l_factor.render(),
            "l_factor_kind": self.l_factor.kind.value,
        }


def _cube_conductor(conductor: int, unit_order: int) -> int:
    # cube has order m/gcd(m,3) on units; orders here divide 12, so a
    # nontrivial cube has order 2 or 4, prime to every odd p, hence tame
    if 12 % unit_order:
        raise Sym3TableError(f"character order {unit_order} does not divide 12")
    cube_order = unit_order // gcd(unit_order, 3)
    return 0 if cube_order == 1 else 1


def sym3_conductor_general(d) -> int:
    """Conductor exponent of sym^3 of a local representation, generic formula."""
    if isinstance(d, UnramifiedGood):
        return 0
    if isinstance(d, TwistedSteinberg):
        # quadratic character: its cube is itself
        return 4 * d.char.conductor_exponent if d.char.is_ramified else 3
    if isinstance(d, PrincipalSeries):
        return 2 * _cube_conductor(d.a_chi, d.chi_unit_order) + 2 * d.a_chi
    if isinstance(d, DihedralSupercuspidal):
        a3 = _cube_conductor(d.a_xi, d.xi_unit_order)
        if d.field_ramified:
            return a3 + d.a_xi + 2
        return 2 * a3 + 2 * d.a_xi
    raise Sym3TableError(f"no generic conductor for {d!r}")


# (p == 2, a(pi)) -> k, potentially multiplicative reduction
_POT_MULT_K = {(False, 1): 3, (True, 1): 3, (False, 2): 4, (True, 4): 8, (True, 6): 12}

# e -> k for p >= 5, additive potentially good
_LARGE_P_PS_K = {2: 4, 3: 2, 4: 4, 6: 4}
_LARGE_P_SC = {
    3: (2, RepType.X, MINUS, LKind.ALPHA_I),
    4: (4, RepType.VIII, PLUS, LKind.ONE),
    6: (4, RepType.X, PLUS, LKind.ONE),
}

_Q3_K = {
    Q3Condition.P2: 4,
    Q3Condition.P3: 4,
    Q3Condition.P6: 6,
    Q3Condition.S4: 4,
    Q3Condition.S3: 4,
    Q3Condition.S6: 6,
    Q3Condition.S6_PRIME: 5,
    Q3Condition.S6_DOUBLE_PRIME: 7,
}
_Q3_REP = {
    Q3Condition.P2: RepType.I,
    Q3Condition.P3: RepType.I,
    Q3Condition.P6: RepType.I,
    Q3Condition.S4: RepType.VIII,
    Q3Condition.S3: RepType.X,
    Q3Condition.S6: RepType.X,
    Q3Condition.S6_PRIME: RepType.SUPERCUSPIDAL,
    Q3Condition.S6_DOUBLE_PRIME: RepType.SUPERCUSPIDAL,
}


def sym3_local(c: LocalClassification, root_number_3=SYMBOLIC) -> Sym3LocalData:
    """Read k, representation type, epsilon and L-factor off the tables."""
    p, d = c.p, c.gl2
    if isinstance(d, Unsupported):
        raise Sym3TableError(f"no sym^3 data for unsupported prime {p}")
    if isinstance(d, UnramifiedGood):
        return Sym3LocalData(p, 0, RepType.UNRAMIFIED, PLUS, LFactor(LKind.UNRAMIFIED, p))

    if isinstance(d, TwistedSteinberg):
        k = _POT_MULT_K.get((p == 2, d.conductor_exponent))
        if k is None:
            raise Sym3TableError(f"a(pi)={d.conductor_exponent} at p={p} not in the table")
        if c.reduction is ReductionType.SPLIT_MULTIPLICATIVE:
            return Sym3LocalData(p, k, RepType.IVA, MINUS, LFactor(LKind.SPLIT_STEINBERG, p))
        if c.reduction is ReductionType.NONSPLIT_MULTIPLICATIVE:
            return Sym3LocalData(p, k, RepType.IVA, PLUS, LFactor(LKind.NONSPLIT_STEINBERG, p))
        return Sym3LocalData(p, k, RepType.IVA, PLUS, LFactor(LKind.ONE, p))

    if p == 3:
        cond = c.q3_condition
        if cond not in _Q3_K:
            raise Sym3TableError(f"no p=3 row for {cond}")
        if cond is Q3Condition.S6_PRIME:
            rn = None if root_number_3 is SYMBOLIC else root_number_3
            eps = SignExpr(SignKind.LEGENDRE_TIMES_ROOT, c.legendre_disc_unit, rn)
        elif cond is Q3Condition.S6_DOUBLE_PRIME:
            rn = None if root_number_3 is SYMBOLIC else root_number_3
            eps = SignExpr(SignKind.MINUS_ROOT, None, rn)
        elif cond is Q3Condition.S3:
            eps = MINUS
        else:
            eps = PLUS
        lk = {Q3Condition.P3: LKind.UNITARY_UNDETERMINED, Q3Condition.S3: LKind.ALPHA_I}
        return Sym3LocalData(p, _Q3_K[cond], _Q3_REP[cond], eps, LFactor(lk.get(cond, LKind.ONE), p))

    e = c.e
    if isinstance(d, PrincipalSeries):
        if e not in _LARGE_P_PS_K:
            raise Sym3TableError(f"no principal series row for e={e}")
        lk = LKind.UNITARY_UNDETERMINED if e == 3 else LKind.ONE
        return Sym3LocalData(p, _LARGE_P_PS_K[e], RepType.I, PLUS, LFactor(lk, p))
    if isinstance(d, DihedralSupercuspidal):
        if e not in _LARGE_P_SC:
            raise Sym3TableError(f"no supercuspidal row for e={e}")
        k, rep, eps, lk = _LARGE_P_SC[e]
        return Sym3LocalData(p, k, rep, eps, LFactor(lk, p))
    raise Sym3TableError(f"unhandled local data {d!r}")


# ---------------------------------------------------------------------------
# global assembly


CM_J_INVARIANTS = frozenset(
    Fraction(j)
    for j in (
        0,
        1728,
        -3375,
        8000,
        -32768,
        54000,
        287496,
        -884736,
        -12288000,
        16581375,
        -884736000,
        -147197952000,
        -262537412640768000,
    )
)


def is_cm(j) -> bool:
    return Fraction(j) in CM_J_INVARIANTS


GAMMA_FACTOR = "Gamma_C(s+3/2)*Gamma_C(s+1/2)"
NON_CM_WARNING = (
    "curve has complex multiplication; the lift to a paramodular newform is only "
    "asserted for non-CM curves (local data remain valid)"
)


@dataclass(frozen=True)
class PrimeReport:
    local: LocalClassification
    sym3: Optional[Sym3LocalData]

    @property
    def p(self) -> int:
        return self.local.p


@dataclass
class GlobalReport:
    conductor_N: int
    level_M: int
    per_prime: list
    atkin_lehner: list
    cm_flag: bool
    warnings: list = field(default_factory=list)
    gamma_factor_note: str = GAMMA_FACTOR


class UnsupportedPrime(Exception):
    """Raised when some prime has no table entry; carries the partial data."""

    def __init__(self, p: int, partial: list, cm_flag: bool):
        super().__init__(f"additive potentially good reduction at {p} is not covered")
        self.p = p
        self.partial = partial
        self.cm_flag = cm_flag


def closed_form_level(conductor_exponents: dict, v_disc: dict) -> int:
    """N times p^2 for every p | N with v_p(disc) not divisible by 4."""
    n = prod(p**a for p, a in conductor_exponents.items())
    extra = prod(p * p for p, a in conductor_exponents.items() if a > 0 and v_disc[p] % 4)
    return n * extra


def refined_closed_form_level(conductor_exponents: dict, v_disc: dict, j_integral: dict) -> int:
    """As :func:`closed_form_level`, but the p^2 is dropped only where j is
    p-integral and v_p(disc) is divisible by 4."""
    n = prod(p**a for p, a in conductor_exponents.items())
    extra = prod(
        p * p
        for p, a in conductor_exponents.items()
        if a > 0 and not (j_integral[p] and v_disc[p] % 4 == 0)
    )
    return n * extra


def assemble_global(classifications, j, root_number_3=SYMBOLIC) -> GlobalReport:
    """Combine per-prime classifications (every prime dividing the minimal
    discriminant) into N, M, Atkin-Lehner signs and Euler factors."""
    cm = is_cm(j)
    reports = []
    unsupported = None
    for c in sorted(classifications, key=lambda c: c.p):
        if isinstance(c.gl2, Unsupported):
            unsupported = c.p
            reports.append(PrimeReport(c, None))
            continue
        if c.gl2.conductor_exponent != c.gl2.conductor_from_characters():
            raise Sym3TableError(f"a(pi) mismatch at p={c.p}")
        s = sym3_local(c, root_number_3)
        general = sym3_conductor_general(c.gl2)
        if general != s.k:
            raise Sym3TableError(f"k mismatch at p={c.p}: generic {general}, table {s.k}")
        reports.append(PrimeReport(c, s))
    if unsupported is not None:
        raise UnsupportedPrime(unsupported, reports, cm)

    exps = {r.p: r.local.gl2.conductor_exponent for r in reports}
    ks = {r.p: r.sym3.k for r in reports}
    n = prod(p**a for p, a in exps.items())
    m = prod(p**k for p, k in ks.items())

    warnings = []
    if cm:
        warnings.append(NON_CM_WARNING)
    two = next((r for r in reports if r.p == 2), None)
    if two is None or two.local.reduction is ReductionType.GOOD or two.local.reduction.is_multiplicative:
        v_disc = {r.p: r.local.v_disc for r in reports}
        j_int = {r.p: r.local.j_integral for r in reports}
        refined = refined_closed_form_level(exps, v_disc, j_int)
        if refined != m:
            raise Sym3TableError(f"level {m} disagrees with the closed form {refined}")
        literal = closed_form_level(exps, v_disc)
        if literal != m:
            primes = sorted(
                p for p in exps if exps[p] and v_disc[p] % 4 == 0 and not j_int[p]
            )
            warnings.append(
                f"N*prod(p^2 : p|N, v_p(D) != 0 mod 4) = {literal} differs from M = {m}; "
                f"the shortcut omits p^2 at primes {primes} where j is not p-integral "
                f"but v_p(D) = 0 mod 4"
            )
    atkin_lehner = [(r.p, r.sym3.epsilon) for r in reports if exps[r.p] > 0]
    return GlobalReport(n, m, reports, atkin_lehner, cm, warnings)
